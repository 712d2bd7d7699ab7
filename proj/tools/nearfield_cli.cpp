// nearfield: runs the near-field monitoring experiments and writes machine-readable reports.
//
//   nearfield validate-static [--check]
//   nearfield eval-size  --format json --out size.json
//   nearfield eval-motion --strategies size_based,motion_aware
//   nearfield run --config scenario.cfg
//
// Exit codes: 0 success, 1 configuration or I/O error, 2 acceptance check failed (--check).

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nearfield/harness.hpp"
#include "nearfield/report.hpp"
#include "nearfield/scenario.hpp"

namespace {

using namespace nearfield;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string format = "csv";
  std::string out;
  std::string strategies;
  std::string dump_dir;
  std::string logs_path;
  std::vector<std::string> settings;
  unsigned threads = 0;
  bool check = false;
  bool print_config = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "Scenario config file (key = value lines)");
  cmd->add_option("--seed", o.seed, "Master RNG seed");
  cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", o.out, "Report path (stdout when omitted)");
  cmd->add_option("--strategies", o.strategies, "Comma list of single_point,size_based,motion_aware");
  cmd->add_option("--dump-frames", o.dump_dir, "Directory for per-frame point dumps");
  cmd->add_option("--logs", o.logs_path, "Write per-trial decision logs (JSON lines)");
  cmd->add_option("--set", o.settings, "Override a config key: --set sensor.noise_sigma=0");
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  cmd->add_flag("--check", o.check, "Exit with code 2 if the acceptance thresholds are not met");
  cmd->add_flag("--print-config", o.print_config, "Print the effective configuration to stderr");
}

ScenarioConfig resolve_config(const CommonOptions& o) {
  ScenarioConfig cfg;
  if (!o.config_path.empty()) cfg = load_config(o.config_path, cfg);
  for (const std::string& s : o.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  if (o.seed) cfg.seed = *o.seed;
  if (!o.strategies.empty()) cfg.strategies = parse_strategy_list(o.strategies);
  cfg.validate();
  if (o.print_config) std::cerr << dump_config(cfg);
  return cfg;
}

void write_output(const CommonOptions& o, const std::string& content) {
  if (o.out.empty()) {
    std::cout << content;
  } else {
    write_text_file(o.out, content);
  }
}

int report_checks(const std::vector<CheckResult>& checks) {
  bool ok = true;
  for (const CheckResult& c : checks) {
    std::fprintf(stderr, "[%s] %s (%s)\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    ok = ok && c.passed;
  }
  return ok ? 0 : 2;
}

std::optional<std::filesystem::path> dump_dir(const CommonOptions& o) {
  if (o.dump_dir.empty()) return std::nullopt;
  return std::filesystem::path(o.dump_dir);
}

int evaluate(const CommonOptions& o, const ScenarioConfig& cfg, const std::vector<ScenarioKind>& kinds) {
  std::vector<TrialSpec> trials;
  for (ScenarioKind k : kinds) {
    auto batch = k == ScenarioKind::SizeSweep ? build_size_sweep(cfg) : build_car_following(cfg, k);
    trials.insert(trials.end(), batch.begin(), batch.end());
  }
  const RunOptions run{cfg.strategies, dump_dir(o), o.threads};
  const auto started = std::chrono::steady_clock::now();
  const std::vector<TrialLog> logs = run_trials(trials, cfg, run);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::fprintf(stderr, "%zu trials in %.2f s\n", logs.size(), seconds);
  for (const TrialLog& log : logs) {
    if (log.error) {
      std::fprintf(stderr, "trial %s/%d failed: %s\n", std::string(to_string(log.kind)).c_str(), log.trial_id,
                   log.error->c_str());
    }
  }

  const std::vector<Metrics> metrics = compute_metrics(logs);
  write_output(o, render_report(metrics, logs, *parse_report_format(o.format)));
  if (!o.logs_path.empty()) write_text_file(o.logs_path, render_trial_logs(logs));
  if (!o.check) return 0;

  std::vector<CheckResult> checks;
  for (ScenarioKind k : kinds) {
    if (k == ScenarioKind::SizeSweep) {
      auto c = check_size_sweep(metrics);
      checks.insert(checks.end(), c.begin(), c.end());
    }
  }
  if (std::any_of(kinds.begin(), kinds.end(),
                  [](ScenarioKind k) { return k == ScenarioKind::ConstantGap || k == ScenarioKind::IncreasingGap; })) {
    auto c = check_car_following(metrics);
    checks.insert(checks.end(), c.begin(), c.end());
  }
  return report_checks(checks);
}

int validate_static(const CommonOptions& o, const ScenarioConfig& cfg) {
  const std::vector<StaticRow> rows = run_static_validation(cfg, dump_dir(o));
  write_output(o, render_static_report(rows, *parse_report_format(o.format)));
  return o.check ? report_checks(check_static_validation(rows)) : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Near-field LiDAR collision monitoring: simulation and strategy evaluation"};
  app.require_subcommand(1);

  CommonOptions opts;
  auto* static_cmd = app.add_subcommand("validate-static", "Hit counts on the validation cuboid vs. distance");
  auto* size_cmd = app.add_subcommand("eval-size", "Size sweep: single-point vs. size-based filtering");
  auto* motion_cmd = app.add_subcommand("eval-motion", "Constant-gap and increasing-gap car following");
  auto* run_cmd = app.add_subcommand("run", "Run the scenario named by the config's `kind`");
  for (CLI::App* cmd : {static_cmd, size_cmd, motion_cmd, run_cmd}) add_common(cmd, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const ScenarioConfig cfg = resolve_config(opts);
    if (*static_cmd) return validate_static(opts, cfg);
    if (*size_cmd) return evaluate(opts, cfg, {ScenarioKind::SizeSweep});
    if (*motion_cmd) return evaluate(opts, cfg, {ScenarioKind::ConstantGap, ScenarioKind::IncreasingGap});
    switch (cfg.kind) {
      case ScenarioKind::StaticValidation: return validate_static(opts, cfg);
      case ScenarioKind::SizeSweep: return evaluate(opts, cfg, {ScenarioKind::SizeSweep});
      case ScenarioKind::ConstantGap:
      case ScenarioKind::IncreasingGap: return evaluate(opts, cfg, {cfg.kind});
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
