#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "nearfield/harness.hpp"

namespace nearfield {

enum class ReportFormat { Csv, Json };

std::optional<ReportFormat> parse_report_format(std::string_view name);

/// CSV: header `strategy,scenario,trials,fp,tp,fn,tn,fpr,tpr,precision,f1`, one row per
/// metrics entry, rates with 4 fraction digits, `NA` for undefined rates.
/// JSON: the same fields grouped per scenario with scenario metadata, fixed key order.
std::string render_report(std::span<const Metrics> metrics, std::span<const TrialLog> logs, ReportFormat format);

/// Writes render_report(...) to `path`; I/O failures throw std::runtime_error naming the path.
void emit_report(std::span<const Metrics> metrics, std::span<const TrialLog> logs, ReportFormat format,
                 const std::filesystem::path& path);

std::string render_static_report(std::span<const StaticRow> rows, ReportFormat format);

/// One JSON object per trial and line.
std::string render_trial_logs(std::span<const TrialLog> logs);

void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace nearfield
