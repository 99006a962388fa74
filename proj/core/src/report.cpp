#include "fedcache/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

namespace fedcache {

ReportFormat parse_format(std::string_view s) {
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  throw std::invalid_argument("unknown format '" + std::string(s) +
                              "' (expected csv|json)");
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(std::string_view s, const char* what) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument(std::string("bad ") + what + " value '" +
                                std::string(s) + "'");
  }
  return v;
}

template <typename T>
T parse_int(std::string_view s, const char* what) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument(std::string("bad ") + what + " value '" +
                                std::string(s) + "'");
  }
  return v;
}

constexpr const char* kHeader =
    "policy,tau,capacity,seed,rounds,comm_bytes,cache_hits,peak_mem_bytes,"
    "final_accuracy,reduction_vs_baseline";

void sort_rows(std::vector<SweepRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::make_tuple(static_cast<int>(a.policy), a.tau, a.capacity, a.seed) <
           std::make_tuple(static_cast<int>(b.policy), b.tau, b.capacity, b.seed);
  });
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string join_ids(const std::vector<int>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(ids[i]);
  }
  return out;
}

}  // namespace

std::string report_to_csv(std::vector<SweepRow> rows) {
  sort_rows(rows);
  std::string out = kHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += to_string(r.policy);
    out += ',';
    out += format_double(r.tau);
    out += ',';
    out += std::to_string(r.capacity);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += std::to_string(r.rounds);
    out += ',';
    out += std::to_string(r.comm_bytes);
    out += ',';
    out += std::to_string(r.cache_hits);
    out += ',';
    out += std::to_string(r.peak_mem_bytes);
    out += ',';
    out += format_double(r.final_accuracy);
    out += ',';
    out += format_double(r.reduction_vs_baseline);
    out += '\n';
  }
  return out;
}

std::vector<SweepRow> report_from_csv(const std::string& text) {
  std::vector<SweepRow> rows;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("report_from_csv: empty input");
  }
  if (line != kHeader) {
    throw std::invalid_argument("report_from_csv: unexpected header '" + line + "'");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 10) {
      throw std::invalid_argument("report_from_csv: expected 10 columns, got " +
                                  std::to_string(f.size()));
    }
    SweepRow r;
    r.policy = parse_policy(f[0]);
    r.tau = parse_double(f[1], "tau");
    r.capacity = parse_int<int>(f[2], "capacity");
    r.seed = parse_int<std::uint64_t>(f[3], "seed");
    r.rounds = parse_int<int>(f[4], "rounds");
    r.comm_bytes = parse_int<std::uint64_t>(f[5], "comm_bytes");
    r.cache_hits = parse_int<std::uint64_t>(f[6], "cache_hits");
    r.peak_mem_bytes = parse_int<std::uint64_t>(f[7], "peak_mem_bytes");
    r.final_accuracy = parse_double(f[8], "final_accuracy");
    r.reduction_vs_baseline = parse_double(f[9], "reduction_vs_baseline");
    rows.push_back(r);
  }
  return rows;
}

std::string report_to_json(std::vector<SweepRow> rows) {
  sort_rows(rows);
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"policy", std::string(to_string(r.policy))},
                   {"tau", r.tau},
                   {"capacity", r.capacity},
                   {"seed", r.seed},
                   {"rounds", r.rounds},
                   {"comm_bytes", r.comm_bytes},
                   {"cache_hits", r.cache_hits},
                   {"peak_mem_bytes", r.peak_mem_bytes},
                   {"final_accuracy", r.final_accuracy},
                   {"reduction_vs_baseline", r.reduction_vs_baseline}});
  }
  return arr.dump(2) + "\n";
}

std::vector<SweepRow> report_from_json(const std::string& text) {
  const auto arr = nlohmann::json::parse(text);
  if (!arr.is_array()) {
    throw std::invalid_argument("report_from_json: expected a JSON array");
  }
  std::vector<SweepRow> rows;
  for (const auto& o : arr) {
    SweepRow r;
    r.policy = parse_policy(o.at("policy").get<std::string>());
    r.tau = o.at("tau").get<double>();
    r.capacity = o.at("capacity").get<int>();
    r.seed = o.at("seed").get<std::uint64_t>();
    r.rounds = o.at("rounds").get<int>();
    r.comm_bytes = o.at("comm_bytes").get<std::uint64_t>();
    r.cache_hits = o.at("cache_hits").get<std::uint64_t>();
    r.peak_mem_bytes = o.at("peak_mem_bytes").get<std::uint64_t>();
    r.final_accuracy = o.at("final_accuracy").get<double>();
    r.reduction_vs_baseline = o.at("reduction_vs_baseline").get<double>();
    rows.push_back(r);
  }
  return rows;
}

void write_report(const std::vector<SweepRow>& rows, ReportFormat format,
                  const std::filesystem::path& path) {
  write_text_file(path, format == ReportFormat::Csv ? report_to_csv(rows)
                                                    : report_to_json(rows));
}

std::vector<SweepRow> read_report(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    return report_from_json(text);
  }
  return report_from_csv(text);
}

std::string round_log_to_csv(const std::vector<RoundOutcome>& rounds) {
  std::string out =
      "round,transmitted_ids,cache_hit_ids,skipped_ids,bytes_sent,"
      "cache_mem_bytes,eval_accuracy,eval_loss\n";
  for (const auto& r : rounds) {
    out += std::to_string(r.round);
    out += ',';
    out += join_ids(r.transmitted_ids);
    out += ',';
    out += join_ids(r.cache_hit_ids);
    out += ',';
    out += join_ids(r.skipped_ids);
    out += ',';
    out += std::to_string(r.bytes_sent);
    out += ',';
    out += std::to_string(r.cache_mem_bytes);
    out += ',';
    out += format_double(r.eval_accuracy);
    out += ',';
    out += format_double(r.eval_loss);
    out += '\n';
  }
  return out;
}

std::string round_log_to_json(const std::vector<RoundOutcome>& rounds) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rounds) {
    arr.push_back({{"round", r.round},
                   {"transmitted_ids", r.transmitted_ids},
                   {"cache_hit_ids", r.cache_hit_ids},
                   {"skipped_ids", r.skipped_ids},
                   {"bytes_sent", r.bytes_sent},
                   {"cache_mem_bytes", r.cache_mem_bytes},
                   {"eval_accuracy", r.eval_accuracy},
                   {"eval_loss", r.eval_loss}});
  }
  return arr.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  out << text;
  out.flush();
  if (!out) {
    throw std::runtime_error("write failed for '" + path.string() + "'");
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw std::runtime_error("read failed for '" + path.string() + "'");
  }
  return buf.str();
}

}  // namespace fedcache
