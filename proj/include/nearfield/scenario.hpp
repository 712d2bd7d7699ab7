#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nearfield/corridor.hpp"
#include "nearfield/lidar_sim.hpp"
#include "nearfield/monitor.hpp"
#include "nearfield/perception.hpp"

namespace nearfield {

enum class ScenarioKind { StaticValidation, SizeSweep, ConstantGap, IncreasingGap };

std::string_view to_string(ScenarioKind k);
std::optional<ScenarioKind> parse_scenario_kind(std::string_view name);

/// Invalid configuration file, key, or value.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineParams {
  ClusterParams clustering;
  double max_dimension = 0.3;       ///< size filter threshold D_max [m]
  double max_object_speed = 16.7;   ///< tracking gate [m/s]
  std::size_t velocity_window = 3;
  MotionAwareSpec motion;
  int warmup_frames = 1;            ///< frames that only feed the tracker before decisions are logged
  double fixed_range = 8.0;         ///< monitoring length for the stationary-ego scenarios [m]
};

struct StaticParams {
  std::vector<double> distances{0.6, 1.2, 1.8, 2.4, 3.0, 3.6, 4.2, 4.8, 5.4, 6.0, 6.6, 7.2, 7.8};
  double width = 0.26;
  double height = 0.36;
  double depth = 0.12;
};

struct SweepParams {
  std::vector<double> sizes{0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50, 0.55, 0.60};
  std::vector<double> distances{1.2, 1.8, 2.4, 3.0, 3.6, 4.2, 4.8, 5.4, 6.0, 6.6, 7.2, 7.8};
  double hazard_size = 0.3;     ///< ground truth: edge >= hazard_size is a hazard
  double base_height = 0.6;     ///< cube bottom face above the ground [m]
  double lateral_speed = 1.0;   ///< [m/s]
  double start_margin = 0.2;    ///< clearance outside the corridor at the first frame [m]
};

struct FollowingParams {
  std::vector<double> constant_speeds_kmh{5, 10, 15, 20, 25, 30};
  std::vector<double> lead_speeds_kmh{10, 15, 20, 25, 30};
  double speed_offset_kmh = 5.0;  ///< ego is this much slower in the increasing-gap runs
  std::vector<double> gaps{2, 4, 6, 8, 10};
  int trials = 30;                ///< the grid is repeated with fresh seeds up to this count
  double duration = 10.0;         ///< [s]
  double lead_width = 1.8;
  double lead_height = 1.4;
  double lead_length = 4.0;
  double lead_clearance = 0.2;    ///< lead vehicle underside above the ground [m]
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::SizeSweep;
  std::uint64_t seed = 42;
  std::vector<Strategy> strategies{Strategy::SinglePoint, Strategy::SizeBased, Strategy::MotionAware};
  SensorConfig sensor;
  CorridorSpec corridor;
  PipelineParams pipeline;
  StaticParams static_validation;
  SweepParams sweep;
  FollowingParams following;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Sets one `key = value` entry, e.g. `sensor.noise_sigma = 0.008`. Throws ConfigError.
void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// Parses a line-oriented `key = value` file (`#` starts a comment) on top of `base`.
ScenarioConfig parse_config(std::string_view text, ScenarioConfig base = {}, std::string_view origin = "<string>");
ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base = {});

/// Every recognised key with its current value, one `key = value` per line.
std::string dump_config(const ScenarioConfig& cfg);

std::vector<Strategy> parse_strategy_list(std::string_view csv);

/// One simulated run with its own seed and ground truth.
struct TrialSpec {
  int id = 0;
  ScenarioKind kind = ScenarioKind::SizeSweep;
  Scene scene;                         ///< state at frame 0
  bool hazard = false;
  int frame_count = 0;                 ///< including warm-up frames
  double ego_speed = 0.0;
  std::optional<double> fixed_range;   ///< overrides the speed-dependent D_Mon
  std::uint64_t seed = 0;
  bool padded = false;                 ///< repeat of an earlier grid point
  std::vector<std::pair<std::string, double>> params;
};

std::uint64_t trial_seed(std::uint64_t master, ScenarioKind kind, int trial_id);

/// The 26 x 36 x 12 cm validation cuboid with its front face at `distance`, centred on
/// the sensor height.
Cuboid validation_cuboid(const ScenarioConfig& cfg, double distance);

/// sizes x distances cubes crossing the corridor laterally, ego stationary.
std::vector<TrialSpec> build_size_sweep(const ScenarioConfig& cfg);

/// Constant-gap or increasing-gap car following; no trial contains a true hazard.
std::vector<TrialSpec> build_car_following(const ScenarioConfig& cfg, ScenarioKind kind);

}  // namespace nearfield
