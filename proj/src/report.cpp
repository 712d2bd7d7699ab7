#include "nearfield/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace nearfield {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string csv_rate(const std::optional<double>& rate) {
  if (!rate) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *rate);
  return buf;
}

// Same 4-digit rounding as the CSV, so both formats carry identical numbers.
ordered_json json_rate(const std::optional<double>& rate) {
  if (!rate) return nullptr;
  return std::stod(csv_rate(rate));
}

ordered_json decision_json(const Decision& d) {
  ordered_json j;
  j["frame"] = d.frame_index;
  j["strategy"] = to_string(d.strategy);
  j["brake"] = d.brake;
  if (d.cause) {
    ordered_json c;
    c["track_id"] = d.cause->track_id ? ordered_json(*d.cause->track_id) : ordered_json(nullptr);
    c["cluster"] = d.cause->cluster_index ? ordered_json(*d.cause->cluster_index) : ordered_json(nullptr);
    c["distance"] = d.cause->distance;
    c["rel_velocity"] = d.cause->rel_velocity ? ordered_json(*d.cause->rel_velocity) : ordered_json(nullptr);
    j["cause"] = std::move(c);
  }
  return j;
}

}  // namespace

std::optional<ReportFormat> parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  return std::nullopt;
}

std::string render_report(std::span<const Metrics> metrics, std::span<const TrialLog> logs, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::string out = "strategy,scenario,trials,fp,tp,fn,tn,fpr,tpr,precision,f1\n";
    for (const Metrics& m : metrics) {
      out += std::string(to_string(m.strategy)) + "," + std::string(to_string(m.scenario)) + "," +
             std::to_string(m.trials) + "," + std::to_string(m.fp) + "," + std::to_string(m.tp) + "," +
             std::to_string(m.fn) + "," + std::to_string(m.tn) + "," + csv_rate(m.fpr) + "," + csv_rate(m.tpr) +
             "," + csv_rate(m.precision) + "," + csv_rate(m.f1) + "\n";
    }
    return out;
  }

  ordered_json scenarios = ordered_json::array();
  for (const Metrics& m : metrics) {
    const std::string name(to_string(m.scenario));
    auto it = std::find_if(scenarios.begin(), scenarios.end(),
                           [&](const ordered_json& s) { return s["scenario"] == name; });
    if (it == scenarios.end()) {
      ordered_json s;
      s["scenario"] = name;
      std::size_t total = 0, padded = 0, errors = 0;
      for (const TrialLog& log : logs) {
        if (log.kind != m.scenario) continue;
        ++total;
        padded += log.padded ? 1 : 0;
        errors += log.error ? 1 : 0;
      }
      s["trials"] = total;
      s["padded_trials"] = padded;
      s["failed_trials"] = errors;
      s["strategies"] = ordered_json::array();
      scenarios.push_back(std::move(s));
      it = scenarios.end() - 1;
    }
    ordered_json row;
    row["strategy"] = to_string(m.strategy);
    row["trials"] = m.trials;
    row["fp"] = m.fp;
    row["tp"] = m.tp;
    row["fn"] = m.fn;
    row["tn"] = m.tn;
    row["fpr"] = json_rate(m.fpr);
    row["tpr"] = json_rate(m.tpr);
    row["precision"] = json_rate(m.precision);
    row["f1"] = json_rate(m.f1);
    (*it)["strategies"].push_back(std::move(row));
  }
  ordered_json root;
  root["scenarios"] = std::move(scenarios);
  return root.dump(2) + "\n";
}

void emit_report(std::span<const Metrics> metrics, std::span<const TrialLog> logs, ReportFormat format,
                 const std::filesystem::path& path) {
  write_text_file(path, render_report(metrics, logs, format));
}

std::string render_static_report(std::span<const StaticRow> rows, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::string out = "distance,hits,oracle_hits,reference_hits\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      char buf[96];
      const std::string ref = i < kReferenceStaticHits.size() ? std::to_string(kReferenceStaticHits[i]) : "NA";
      std::snprintf(buf, sizeof buf, "%.2f,%zu,%zu,", rows[i].distance, rows[i].hits, rows[i].oracle);
      out += buf + ref + "\n";
    }
    return out;
  }
  ordered_json arr = ordered_json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ordered_json r;
    r["distance"] = rows[i].distance;
    r["hits"] = rows[i].hits;
    r["oracle_hits"] = rows[i].oracle;
    r["reference_hits"] = i < kReferenceStaticHits.size() ? ordered_json(kReferenceStaticHits[i]) : ordered_json(nullptr);
    arr.push_back(std::move(r));
  }
  ordered_json root;
  root["static_validation"] = std::move(arr);
  return root.dump(2) + "\n";
}

std::string render_trial_logs(std::span<const TrialLog> logs) {
  std::string out;
  for (const TrialLog& log : logs) {
    ordered_json j;
    j["scenario"] = to_string(log.kind);
    j["trial"] = log.trial_id;
    j["seed"] = log.seed;
    j["ground_truth_hazard"] = log.ground_truth_hazard;
    j["padded"] = log.padded;
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : log.params) params[k] = v;
    j["params"] = std::move(params);
    j["frames"] = log.frame_count;
    j["error"] = log.error ? ordered_json(*log.error) : ordered_json(nullptr);
    ordered_json decisions = ordered_json::array();
    for (const Decision& d : log.decisions) decisions.push_back(decision_json(d));
    j["decisions"] = std::move(decisions);
    out += j.dump() + "\n";
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace nearfield
