#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qid/convergence.hpp"
#include "qid/fourier.hpp"

namespace qid {

/// Write "n,statistic" rows (UTF-8, '\n', '.' decimals, %.17g values).
void write_scalar_trace_csv(const std::filesystem::path& path,
                            const std::vector<long long>& indices,
                            const std::vector<double>& trace);

/// Write "n,t,re,im" rows for one or more indexed transform traces.
void write_transform_csv(const std::filesystem::path& path,
                         const std::vector<std::pair<long long, TransformSamples>>& traces);

/// Human-readable verdict report.
std::string render_report(const std::string& title, const ConvergenceReport& report);

/// Sanitized CSV file name for a test name.
std::string trace_file_name(const std::string& test_name);

/// Write report.txt, one CSV per trace, and meta.json into out_dir.
void write_run_artifacts(const std::filesystem::path& out_dir, const std::string& title,
                         const ConvergenceReport& report,
                         const std::map<std::string, std::string>& meta);

std::string format_double(double v);

}  // namespace qid
