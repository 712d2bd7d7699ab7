#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nearfield/monitor.hpp"
#include "nearfield/scenario.hpp"

namespace nearfield {

struct TrialLog {
  int trial_id = 0;
  ScenarioKind kind = ScenarioKind::SizeSweep;
  bool ground_truth_hazard = false;
  bool padded = false;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> params;
  std::vector<Strategy> strategies;
  /// Logged (post warm-up) frames, decisions grouped by frame in `strategies` order.
  std::vector<Decision> decisions;
  std::size_t frame_count = 0;
  std::optional<std::string> error;

  bool braked(Strategy s) const;
};

struct RunOptions {
  std::vector<Strategy> strategies{Strategy::SinglePoint, Strategy::SizeBased, Strategy::MotionAware};
  std::optional<std::filesystem::path> dump_dir;  ///< per-frame point dumps when set
  unsigned threads = 0;                           ///< 0 = hardware concurrency
};

/// Runs sim -> corridor -> cluster -> size filter -> track -> decide for every frame of
/// every trial. Trials run on a worker pool; the result is in trial order and depends
/// only on the trial specs and config.
std::vector<TrialLog> run_trials(std::span<const TrialSpec> trials, const ScenarioConfig& cfg, const RunOptions& opts);

struct StaticRow {
  double distance = 0.0;
  std::size_t hits = 0;    ///< corridor points on the cuboid, noisy simulation
  std::size_t oracle = 0;  ///< expected_hits for the same placement
};

/// Hit counts on the validation cuboid at each configured distance.
std::vector<StaticRow> run_static_validation(const ScenarioConfig& cfg,
                                             const std::optional<std::filesystem::path>& dump_dir = std::nullopt);

struct Metrics {
  Strategy strategy = Strategy::SinglePoint;
  ScenarioKind scenario = ScenarioKind::SizeSweep;
  std::size_t trials = 0;
  std::size_t fp = 0, tp = 0, fn = 0, tn = 0;
  std::optional<double> fpr, tpr, precision, f1;  ///< empty when the denominator is zero
};

/// Rates from raw counts; undefined ratios stay empty.
Metrics metrics_from_counts(Strategy s, ScenarioKind k, std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn);

/// Trial-level accounting: a trial is a positive decision if any logged frame braked.
/// One entry per (scenario, strategy) in first-seen scenario order, strategy order.
/// Trials that ended with an error are excluded.
std::vector<Metrics> compute_metrics(std::span<const TrialLog> logs);

/// Reference hit counts for the static validation cuboid, 0.6 m .. 7.8 m.
inline constexpr std::array<std::size_t, 13> kReferenceStaticHits{2032, 520, 258, 132, 100, 42, 38,
                                                                  34,   30,  26,  22,  22,  18};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<CheckResult> check_static_validation(std::span<const StaticRow> rows);
std::vector<CheckResult> check_size_sweep(std::span<const Metrics> metrics);
/// Bounds for whichever car-following kinds appear in `metrics`.
std::vector<CheckResult> check_car_following(std::span<const Metrics> metrics);

}  // namespace nearfield
