#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fedcache/round_outcome.hpp"
#include "fedcache/sweep.hpp"

namespace fedcache {

enum class ReportFormat { Csv, Json };

ReportFormat parse_format(std::string_view s);  // throws std::invalid_argument

// Shortest decimal representation that round-trips the exact double, so
// reports are byte-stable and re-reading reproduces the table bit for bit.
std::string format_double(double v);

// Sweep report. CSV columns, in order:
//   policy,tau,capacity,seed,rounds,comm_bytes,cache_hits,peak_mem_bytes,
//   final_accuracy,reduction_vs_baseline
// Rows are emitted sorted by (policy, tau, capacity, seed); the JSON form
// mirrors the same records as an array of flat objects.
std::string report_to_csv(std::vector<SweepRow> rows);
std::string report_to_json(std::vector<SweepRow> rows);
std::vector<SweepRow> report_from_csv(const std::string& text);
std::vector<SweepRow> report_from_json(const std::string& text);

void write_report(const std::vector<SweepRow>& rows, ReportFormat format,
                  const std::filesystem::path& path);

// Reads a report back, sniffing JSON ('[' first) vs CSV.
std::vector<SweepRow> read_report(const std::filesystem::path& path);

// Per-round log of a single run. Id sets are semicolon-joined.
std::string round_log_to_csv(const std::vector<RoundOutcome>& rounds);
std::string round_log_to_json(const std::vector<RoundOutcome>& rounds);

// Throws std::runtime_error naming path and cause on I/O failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace fedcache
