#include "nearfield/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "nearfield/rng.hpp"

namespace nearfield {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  throw ConfigError("invalid value '" + std::string(value) + "' for '" + std::string(key) + "': expected " +
                    std::string(expected));
}

double to_double(std::string_view key, std::string_view value) {
  value = trim(value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(out)) bad_value(key, value, "a number");
  return out;
}

template <typename Int>
Int to_integer(std::string_view key, std::string_view value) {
  value = trim(value);
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value, "an integer");
  return out;
}

std::vector<double> to_list(std::string_view key, std::string_view value) {
  std::vector<double> out;
  while (!value.empty()) {
    const auto comma = value.find(',');
    out.push_back(to_double(key, value.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

struct Field {
  std::string_view key;
  std::function<void(ScenarioConfig&, std::string_view)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

#define NF_DOUBLE(name, member)                                                                  \
  Field {                                                                                        \
    name, [](ScenarioConfig& c, std::string_view v) { c.member = to_double(name, v); },          \
        [](const ScenarioConfig& c) { return format_double(c.member); }                         \
  }
#define NF_LIST(name, member)                                                                    \
  Field {                                                                                        \
    name, [](ScenarioConfig& c, std::string_view v) { c.member = to_list(name, v); },            \
        [](const ScenarioConfig& c) { return format_list(c.member); }                           \
  }
#define NF_INT(name, member, type)                                                               \
  Field {                                                                                        \
    name, [](ScenarioConfig& c, std::string_view v) { c.member = to_integer<type>(name, v); },   \
        [](const ScenarioConfig& c) { return std::to_string(c.member); }                        \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"kind",
       [](ScenarioConfig& c, std::string_view v) {
         const auto kind = parse_scenario_kind(trim(v));
         if (!kind) bad_value("kind", v, "static_validation, size_sweep, constant_gap or increasing_gap");
         c.kind = *kind;
       },
       [](const ScenarioConfig& c) { return std::string(to_string(c.kind)); }},
      NF_INT("seed", seed, std::uint64_t),
      {"strategies", [](ScenarioConfig& c, std::string_view v) { c.strategies = parse_strategy_list(v); },
       [](const ScenarioConfig& c) {
         std::string out;
         for (Strategy s : c.strategies) out += (out.empty() ? "" : ",") + std::string(to_string(s));
         return out;
       }},

      NF_INT("sensor.horizontal_samples", sensor.horizontal_samples, int),
      NF_DOUBLE("sensor.horizontal_fov_min", sensor.horizontal_fov_min),
      NF_DOUBLE("sensor.horizontal_fov_max", sensor.horizontal_fov_max),
      NF_INT("sensor.vertical_channels", sensor.vertical_channels, int),
      NF_DOUBLE("sensor.vertical_fov_min", sensor.vertical_fov_min),
      NF_DOUBLE("sensor.vertical_fov_max", sensor.vertical_fov_max),
      NF_DOUBLE("sensor.update_rate", sensor.update_rate),
      NF_DOUBLE("sensor.noise_sigma", sensor.noise_sigma),
      NF_DOUBLE("sensor.max_range", sensor.max_range),
      NF_DOUBLE("sensor.mount_height", sensor.mount_height),

      NF_DOUBLE("corridor.reaction_time", corridor.reaction_time),
      NF_DOUBLE("corridor.safety_margin_time", corridor.safety_margin_time),
      NF_DOUBLE("corridor.friction", corridor.friction),
      NF_DOUBLE("corridor.slope", corridor.slope),
      NF_DOUBLE("corridor.gravity", corridor.gravity),
      NF_DOUBLE("corridor.vehicle_width", corridor.vehicle_width),
      NF_DOUBLE("corridor.chassis_height", corridor.chassis_height),
      NF_DOUBLE("corridor.top_height", corridor.top_height),

      NF_DOUBLE("perception.cluster_tolerance", pipeline.clustering.tolerance),
      NF_INT("perception.min_cluster_points", pipeline.clustering.min_points, std::size_t),
      NF_DOUBLE("perception.max_dimension", pipeline.max_dimension),
      NF_DOUBLE("tracking.max_object_speed", pipeline.max_object_speed),
      NF_INT("tracking.velocity_window", pipeline.velocity_window, std::size_t),
      NF_DOUBLE("monitor.extension_factor", pipeline.motion.extension_factor),
      NF_DOUBLE("monitor.rel_velocity_epsilon", pipeline.motion.rel_velocity_epsilon),
      NF_INT("monitor.warmup_frames", pipeline.warmup_frames, int),
      NF_DOUBLE("monitor.fixed_range", pipeline.fixed_range),

      NF_LIST("static.distances", static_validation.distances),
      NF_DOUBLE("static.width", static_validation.width),
      NF_DOUBLE("static.height", static_validation.height),
      NF_DOUBLE("static.depth", static_validation.depth),

      NF_LIST("sweep.sizes", sweep.sizes),
      NF_LIST("sweep.distances", sweep.distances),
      NF_DOUBLE("sweep.hazard_size", sweep.hazard_size),
      NF_DOUBLE("sweep.base_height", sweep.base_height),
      NF_DOUBLE("sweep.lateral_speed", sweep.lateral_speed),
      NF_DOUBLE("sweep.start_margin", sweep.start_margin),

      NF_LIST("following.constant_speeds_kmh", following.constant_speeds_kmh),
      NF_LIST("following.lead_speeds_kmh", following.lead_speeds_kmh),
      NF_DOUBLE("following.speed_offset_kmh", following.speed_offset_kmh),
      NF_LIST("following.gaps", following.gaps),
      NF_INT("following.trials", following.trials, int),
      NF_DOUBLE("following.duration", following.duration),
      NF_DOUBLE("following.lead_width", following.lead_width),
      NF_DOUBLE("following.lead_height", following.lead_height),
      NF_DOUBLE("following.lead_length", following.lead_length),
      NF_DOUBLE("following.lead_clearance", following.lead_clearance),
  };
  return table;
}

#undef NF_DOUBLE
#undef NF_LIST
#undef NF_INT

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void require_positive(const std::vector<double>& values, const std::string& name) {
  require(!values.empty(), name + " must not be empty");
  for (double v : values) require(v > 0.0, name + " entries must be > 0");
}

}  // namespace

std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::StaticValidation: return "static_validation";
    case ScenarioKind::SizeSweep: return "size_sweep";
    case ScenarioKind::ConstantGap: return "constant_gap";
    case ScenarioKind::IncreasingGap: return "increasing_gap";
  }
  return "unknown";
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view name) {
  for (ScenarioKind k : {ScenarioKind::StaticValidation, ScenarioKind::SizeSweep, ScenarioKind::ConstantGap,
                         ScenarioKind::IncreasingGap}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::vector<Strategy> parse_strategy_list(std::string_view csv) {
  std::vector<Strategy> out;
  while (true) {
    const auto comma = csv.find(',');
    const std::string_view name = trim(csv.substr(0, comma));
    const auto s = parse_strategy(name);
    if (!s) bad_value("strategies", name, "single_point, size_based or motion_aware");
    if (std::find(out.begin(), out.end(), *s) == out.end()) out.push_back(*s);
    if (comma == std::string_view::npos) break;
    csv.remove_prefix(comma + 1);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void ScenarioConfig::validate() const {
  try {
    sensor.validate();
    corridor.validate();
    pipeline.motion.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  require(!strategies.empty(), "strategies must not be empty");
  require(pipeline.clustering.tolerance > 0.0, "perception.cluster_tolerance must be > 0");
  require(pipeline.clustering.min_points >= 1, "perception.min_cluster_points must be >= 1");
  require(pipeline.max_dimension >= 0.0, "perception.max_dimension must be >= 0");
  require(pipeline.max_object_speed > 0.0, "tracking.max_object_speed must be > 0");
  require(pipeline.velocity_window >= 1, "tracking.velocity_window must be >= 1");
  require(pipeline.warmup_frames >= 0, "monitor.warmup_frames must be >= 0");
  require(pipeline.fixed_range > 0.0, "monitor.fixed_range must be > 0");

  require_positive(static_validation.distances, "static.distances");
  require(static_validation.width > 0.0 && static_validation.height > 0.0 && static_validation.depth > 0.0,
          "static cuboid extents must be > 0");

  require_positive(sweep.sizes, "sweep.sizes");
  require_positive(sweep.distances, "sweep.distances");
  require(sweep.hazard_size > 0.0, "sweep.hazard_size must be > 0");
  require(sweep.lateral_speed > 0.0, "sweep.lateral_speed must be > 0");
  require(sweep.start_margin >= 0.0, "sweep.start_margin must be >= 0");
  require(sweep.base_height >= 0.0, "sweep.base_height must be >= 0");

  require_positive(following.constant_speeds_kmh, "following.constant_speeds_kmh");
  require_positive(following.lead_speeds_kmh, "following.lead_speeds_kmh");
  require_positive(following.gaps, "following.gaps");
  require(following.speed_offset_kmh >= 0.0, "following.speed_offset_kmh must be >= 0");
  for (double lead : following.lead_speeds_kmh) {
    require(lead - following.speed_offset_kmh >= 0.0, "following.lead_speeds_kmh must not be below the speed offset");
  }
  require(following.trials >= 1, "following.trials must be >= 1");
  require(following.duration > 0.0, "following.duration must be > 0");
  require(following.lead_width > 0.0 && following.lead_height > 0.0 && following.lead_length > 0.0,
          "lead vehicle extents must be > 0");
  require(following.lead_clearance >= 0.0, "following.lead_clearance must be >= 0");
}

void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  for (const Field& f : fields()) {
    if (f.key == key) {
      f.set(cfg, value);
      return;
    }
  }
  throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

ScenarioConfig parse_config(std::string_view text, ScenarioConfig base, std::string_view origin) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    try {
      if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'");
      apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base), path.string());
}

std::string dump_config(const ScenarioConfig& cfg) {
  std::string out;
  for (const Field& f : fields()) {
    out += std::string(f.key) + " = " + f.get(cfg) + "\n";
  }
  return out;
}

std::uint64_t trial_seed(std::uint64_t master, ScenarioKind kind, int trial_id) {
  return derive_seed(derive_seed(master, static_cast<std::uint64_t>(kind)), static_cast<std::uint64_t>(trial_id));
}

Cuboid validation_cuboid(const ScenarioConfig& cfg, double distance) {
  const StaticParams& p = cfg.static_validation;
  Cuboid c;
  c.width = p.width;
  c.height = p.height;
  c.depth = p.depth;
  c.center = {distance + p.depth / 2.0, 0.0, cfg.sensor.mount_height};
  return c;
}

std::vector<TrialSpec> build_size_sweep(const ScenarioConfig& cfg) {
  cfg.validate();
  const SweepParams& p = cfg.sweep;
  const double halfwidth = cfg.corridor.vehicle_width / 2.0;
  const double step = p.lateral_speed * cfg.sensor.frame_period();

  std::vector<TrialSpec> trials;
  for (double size : p.sizes) {
    for (double d : p.distances) {
      TrialSpec t;
      t.id = static_cast<int>(trials.size());
      t.kind = ScenarioKind::SizeSweep;
      t.hazard = size >= p.hazard_size;
      t.fixed_range = cfg.pipeline.fixed_range;
      t.seed = trial_seed(cfg.seed, t.kind, t.id);

      // Starts fully outside one lateral bound and runs until it is equally far past the other.
      const double start_y = -(halfwidth + size / 2.0 + p.start_margin);
      t.frame_count = static_cast<int>(std::ceil(-2.0 * start_y / step - 1e-9)) + 1;

      Cuboid cube;
      cube.width = cube.height = cube.depth = size;
      cube.center = {d + size / 2.0, start_y, p.base_height + size / 2.0};
      cube.velocity = {0.0, p.lateral_speed, 0.0};
      t.scene.obstacles.push_back(cube);
      t.params = {{"size", size}, {"distance", d}};
      trials.push_back(std::move(t));
    }
  }
  return trials;
}

std::vector<TrialSpec> build_car_following(const ScenarioConfig& cfg, ScenarioKind kind) {
  if (kind != ScenarioKind::ConstantGap && kind != ScenarioKind::IncreasingGap) {
    throw ConfigError("build_car_following: kind must be constant_gap or increasing_gap");
  }
  cfg.validate();
  const FollowingParams& p = cfg.following;

  struct GridPoint {
    double lead_kmh, ego_kmh, gap;
  };
  std::vector<GridPoint> grid;
  if (kind == ScenarioKind::ConstantGap) {
    for (double v : p.constant_speeds_kmh)
      for (double g : p.gaps) grid.push_back({v, v, g});
  } else {
    for (double v : p.lead_speeds_kmh)
      for (double g : p.gaps) grid.push_back({v, v - p.speed_offset_kmh, g});
  }

  const int frames = cfg.pipeline.warmup_frames + static_cast<int>(std::lround(p.duration * cfg.sensor.update_rate));
  const std::size_t count = std::max<std::size_t>(static_cast<std::size_t>(p.trials), grid.size());
  std::vector<TrialSpec> trials;
  for (std::size_t i = 0; i < count; ++i) {
    const GridPoint& g = grid[i % grid.size()];
    TrialSpec t;
    t.id = static_cast<int>(i);
    t.kind = kind;
    t.hazard = false;
    t.padded = i >= grid.size();
    t.frame_count = frames;
    t.ego_speed = kmh_to_mps(g.ego_kmh);
    t.seed = trial_seed(cfg.seed, kind, t.id);

    Cuboid lead;
    lead.width = p.lead_width;
    lead.height = p.lead_height;
    lead.depth = p.lead_length;
    lead.center = {g.gap + p.lead_length / 2.0, 0.0, p.lead_clearance + p.lead_height / 2.0};
    lead.velocity = {kmh_to_mps(g.lead_kmh), 0.0, 0.0};
    t.scene.obstacles.push_back(lead);
    t.scene.ego_velocity = t.ego_speed;
    t.params = {{"lead_speed_kmh", g.lead_kmh}, {"ego_speed_kmh", g.ego_kmh}, {"gap", g.gap}};
    trials.push_back(std::move(t));
  }
  return trials;
}

}  // namespace nearfield
