#include "nearfield/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "nearfield/perception.hpp"
#include "nearfield/tracking.hpp"

namespace nearfield {

namespace {

std::filesystem::path dump_path(const std::filesystem::path& dir, ScenarioKind kind, int trial, std::int64_t frame) {
  char name[96];
  std::snprintf(name, sizeof name, "%s_t%03d_f%04lld.xyz", std::string(to_string(kind)).c_str(), trial,
                static_cast<long long>(frame));
  return dir / name;
}

TrialLog run_one(const TrialSpec& spec, const ScenarioConfig& cfg, const RunOptions& opts) {
  TrialLog log;
  log.trial_id = spec.id;
  log.kind = spec.kind;
  log.ground_truth_hazard = spec.hazard;
  log.padded = spec.padded;
  log.seed = spec.seed;
  log.params = spec.params;
  log.strategies = opts.strategies;

  try {
    for (const Cuboid& c : spec.scene.obstacles) {
      if (!c.valid()) throw std::invalid_argument("invalid scene geometry: obstacle extents must be > 0");
    }
    if (spec.frame_count <= cfg.pipeline.warmup_frames) {
      throw std::invalid_argument("trial has no frames after warm-up");
    }

    SensorConfig sensor = cfg.sensor;
    sensor.rng_seed = spec.seed;
    const double dt = sensor.frame_period();
    const PipelineParams& pp = cfg.pipeline;

    const MonitorZone zone =
        spec.fixed_range ? fixed_zone(*spec.fixed_range, cfg.corridor) : build_zone(spec.ego_speed, cfg.corridor);
    const MonitorZone observed_zone = zone.extended(pp.motion.extension_factor);
    Tracker tracker(GateSpec{pp.max_object_speed, dt, spec.ego_speed}, pp.velocity_window);

    for (std::int64_t f = 0; f < spec.frame_count; ++f) {
      const Scene scene = f == 0 ? spec.scene : advance(spec.scene, static_cast<double>(f) * dt);
      const Frame raw = cast_frame(scene, sensor, f);
      if (opts.dump_dir) write_frame_xyz(raw, dump_path(*opts.dump_dir, spec.kind, spec.id, f));

      const Frame observed = filter_to_corridor(raw, observed_zone);
      const std::vector<Cluster> clusters = euclidean_cluster(observed, pp.clustering);
      const std::vector<Cluster> hazards = size_filter(clusters, pp.max_dimension);
      const std::vector<Track>& tracks = tracker.step(hazards, f);
      if (f < pp.warmup_frames) continue;

      ++log.frame_count;
      for (Strategy s : opts.strategies) {
        switch (s) {
          case Strategy::SinglePoint: log.decisions.push_back(decide_single_point(observed, zone, f)); break;
          case Strategy::SizeBased: log.decisions.push_back(decide_size_based(hazards, zone, f)); break;
          case Strategy::MotionAware:
            log.decisions.push_back(decide_motion_aware(tracks, zone, pp.motion, f));
            break;
        }
      }
    }
  } catch (const std::exception& e) {
    log.error = e.what();
  }
  return log;
}

bool rate_is(const std::optional<double>& rate, double value) { return rate && std::abs(*rate - value) < 1e-12; }
bool rate_at_least(const std::optional<double>& rate, double value) { return rate && *rate >= value - 1e-12; }
bool rate_at_most(const std::optional<double>& rate, double value) { return rate && *rate <= value + 1e-12; }

std::string show(const std::optional<double>& rate) {
  if (!rate) return "undefined";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *rate);
  return buf;
}

const Metrics* find_metrics(std::span<const Metrics> metrics, ScenarioKind k, Strategy s) {
  for (const Metrics& m : metrics) {
    if (m.scenario == k && m.strategy == s) return &m;
  }
  return nullptr;
}

}  // namespace

bool TrialLog::braked(Strategy s) const {
  return std::any_of(decisions.begin(), decisions.end(),
                     [s](const Decision& d) { return d.strategy == s && d.brake; });
}

std::vector<TrialLog> run_trials(std::span<const TrialSpec> trials, const ScenarioConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  if (opts.dump_dir) std::filesystem::create_directories(*opts.dump_dir);
  std::vector<TrialLog> logs(trials.size());
  if (trials.empty()) return logs;

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<unsigned>(opts.threads ? opts.threads : hw, static_cast<unsigned>(trials.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < trials.size(); i = next++) logs[i] = run_one(trials[i], cfg, opts);
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();
  return logs;
}

std::vector<StaticRow> run_static_validation(const ScenarioConfig& cfg,
                                             const std::optional<std::filesystem::path>& dump_dir) {
  cfg.validate();
  if (dump_dir) std::filesystem::create_directories(*dump_dir);
  const MonitorZone roi = fixed_zone(cfg.pipeline.fixed_range, cfg.corridor);

  std::vector<StaticRow> rows;
  const auto& distances = cfg.static_validation.distances;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    const double d = distances[i];
    const Cuboid cuboid = validation_cuboid(cfg, d);
    SensorConfig sensor = cfg.sensor;
    sensor.rng_seed = trial_seed(cfg.seed, ScenarioKind::StaticValidation, static_cast<int>(i));

    Scene scene;
    scene.obstacles.push_back(cuboid);
    const Frame raw = cast_frame(scene, sensor, 0);
    if (dump_dir) write_frame_xyz(raw, dump_path(*dump_dir, ScenarioKind::StaticValidation, static_cast<int>(i), 0));
    const Frame in_roi = filter_to_corridor(raw, roi);
    rows.push_back({d, in_roi.points.size(), expected_hits(cuboid, d, sensor)});
  }
  return rows;
}

Metrics metrics_from_counts(Strategy s, ScenarioKind k, std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn) {
  Metrics m;
  m.strategy = s;
  m.scenario = k;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  m.tn = tn;
  m.trials = tp + fp + fn + tn;
  auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  m.fpr = ratio(fp, fp + tn);
  m.tpr = ratio(tp, tp + fn);
  m.precision = ratio(tp, tp + fp);
  if (m.precision && m.tpr && *m.precision + *m.tpr > 0.0) {
    m.f1 = 2.0 * *m.precision * *m.tpr / (*m.precision + *m.tpr);
  }
  return m;
}

std::vector<Metrics> compute_metrics(std::span<const TrialLog> logs) {
  std::vector<ScenarioKind> scenarios;
  std::vector<Strategy> strategies;
  for (const TrialLog& log : logs) {
    if (std::find(scenarios.begin(), scenarios.end(), log.kind) == scenarios.end()) scenarios.push_back(log.kind);
    for (Strategy s : log.strategies) {
      if (std::find(strategies.begin(), strategies.end(), s) == strategies.end()) strategies.push_back(s);
    }
  }
  std::sort(strategies.begin(), strategies.end());

  std::vector<Metrics> out;
  for (ScenarioKind k : scenarios) {
    for (Strategy s : strategies) {
      std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
      bool seen = false;
      for (const TrialLog& log : logs) {
        if (log.kind != k || log.error) continue;
        if (std::find(log.strategies.begin(), log.strategies.end(), s) == log.strategies.end()) continue;
        seen = true;
        const bool brake = log.braked(s);
        if (log.ground_truth_hazard) {
          brake ? ++tp : ++fn;
        } else {
          brake ? ++fp : ++tn;
        }
      }
      if (seen) out.push_back(metrics_from_counts(s, k, tp, fp, fn, tn));
    }
  }
  return out;
}

std::vector<CheckResult> check_static_validation(std::span<const StaticRow> rows) {
  std::vector<CheckResult> out;
  double sim_sum = 0.0, ref_sum = 0.0;
  bool all_within = rows.size() == kReferenceStaticHits.size();
  std::string detail;
  for (std::size_t i = 0; i < rows.size() && i < kReferenceStaticHits.size(); ++i) {
    const double ref = static_cast<double>(kReferenceStaticHits[i]);
    const double sim = static_cast<double>(rows[i].hits);
    sim_sum += sim;
    ref_sum += ref;
    if (std::abs(sim - ref) > 0.25 * ref) {
      all_within = false;
      char buf[64];
      std::snprintf(buf, sizeof buf, " d=%.1f:%zu/%zu", rows[i].distance, rows[i].hits, kReferenceStaticHits[i]);
      detail += buf;
    }
  }
  out.push_back({"static hits within 25% of reference at every distance", all_within,
                 detail.empty() ? "ok" : "off:" + detail});
  char buf[96];
  std::snprintf(buf, sizeof buf, "simulated %.0f vs reference %.0f", sim_sum, ref_sum);
  out.push_back({"static hit total within 10% of reference", ref_sum > 0 && std::abs(sim_sum - ref_sum) <= 0.10 * ref_sum,
                 buf});
  return out;
}

std::vector<CheckResult> check_size_sweep(std::span<const Metrics> metrics) {
  std::vector<CheckResult> out;
  const Metrics* sb = find_metrics(metrics, ScenarioKind::SizeSweep, Strategy::SizeBased);
  const Metrics* sp = find_metrics(metrics, ScenarioKind::SizeSweep, Strategy::SinglePoint);
  out.push_back({"size-based FPR = 0, TPR = 1, F1 = 1",
                 sb && rate_is(sb->fpr, 0.0) && rate_is(sb->tpr, 1.0) && rate_is(sb->f1, 1.0),
                 sb ? "fpr=" + show(sb->fpr) + " tpr=" + show(sb->tpr) + " f1=" + show(sb->f1) : "missing"});
  out.push_back({"single-point TPR = 1, FPR >= 0.5", sp && rate_is(sp->tpr, 1.0) && rate_at_least(sp->fpr, 0.5),
                 sp ? "fpr=" + show(sp->fpr) + " tpr=" + show(sp->tpr) : "missing"});
  return out;
}

std::vector<CheckResult> check_car_following(std::span<const Metrics> metrics) {
  std::vector<CheckResult> out;
  struct Bound {
    ScenarioKind kind;
    Strategy strategy;
    bool at_least;
    double value;
    const char* name;
  };
  const Bound bounds[] = {
      {ScenarioKind::ConstantGap, Strategy::SizeBased, true, 0.30, "constant-gap size-based FPR >= 0.30"},
      {ScenarioKind::ConstantGap, Strategy::MotionAware, false, 0.05, "constant-gap motion-aware FPR <= 0.05"},
      {ScenarioKind::IncreasingGap, Strategy::SizeBased, true, 0.15, "increasing-gap size-based FPR >= 0.15"},
      {ScenarioKind::IncreasingGap, Strategy::MotionAware, false, 0.0, "increasing-gap motion-aware FPR = 0"},
  };
  for (const Bound& b : bounds) {
    const bool ran = std::any_of(metrics.begin(), metrics.end(), [&](const Metrics& x) { return x.scenario == b.kind; });
    if (!ran) continue;
    const Metrics* m = find_metrics(metrics, b.kind, b.strategy);
    const bool ok = m && (b.at_least ? rate_at_least(m->fpr, b.value) : rate_at_most(m->fpr, b.value));
    out.push_back({b.name, ok, m ? "fpr=" + show(m->fpr) : "missing"});
  }
  return out;
}

}  // namespace nearfield
