#pragma once

// Report plumbing: the reproducibility header stamped onto every output
// (version, config hash, seed, timestamp), deterministic double formatting,
// and JSON encoders for the library's value types. Reports are byte-stable
// across runs of the same binary and config; the timestamp is confined to
// its own key / comment line so consumers can diff around it.

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "criteria.hpp"
#include "measure.hpp"
#include "numeric.hpp"
#include "sampling.hpp"
#include "spectrum.hpp"

namespace convlab {

inline constexpr const char* kVersion = "0.1.0";

inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

inline std::string config_hash(const json& doc) { return hex64(fnv1a64(doc.dump())); }

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Shortest round-trip decimal form; identical bytes for identical values.
// Negative zero is folded into "0" so sign noise from trig never leaks
// into reports.
inline std::string format_double(double v) {
  if (v == 0.0) v = 0.0;
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct ReportHeader {
  std::string version = kVersion;
  std::string hash;
  std::uint64_t seed = 0;
  std::string timestamp;

  json to_json() const {
    return json{{"version", version},
                {"config_hash", hash},
                {"seed", seed},
                {"timestamp", timestamp}};
  }

  // CSV form: hash/seed/version on one comment line, timestamp on its own.
  std::string to_csv_comment() const {
    return "# version=" + version + " config_hash=" + hash + " seed=" + std::to_string(seed) +
           "\n# timestamp=" + timestamp + "\n";
  }
};

inline ReportHeader make_header(const json& config_doc, std::uint64_t seed) {
  ReportHeader h;
  h.hash = config_hash(config_doc);
  h.seed = seed;
  h.timestamp = utc_timestamp();
  return h;
}

// --- JSON encoders ---------------------------------------------------------

inline json rational_json(const Rational& q) {
  return json::array({numerator(q).str(), denominator(q).str()});
}

inline json big_json(const BigInt& n) { return json(n.str()); }

inline json condition_report_json(const ConditionReport& rep) {
  json j{{"condition", rep.condition},
         {"verdict", to_string(rep.verdict)},
         {"depth", rep.depth},
         {"witness", rep.witness}};
  if (!rep.partial_sums.empty()) {
    json arr = json::array();
    for (const auto& s : rep.partial_sums) arr.push_back(rational_json(s));
    j["partial_sums"] = arr;
  }
  if (!rep.exact_ratios.empty()) {
    json arr = json::array();
    for (const auto& r : rep.exact_ratios) arr.push_back(rational_json(r));
    j["exact_ratios"] = arr;
  }
  if (!rep.ratios.empty()) {
    json arr = json::array();
    for (double r : rep.ratios) arr.push_back(r);
    j["ratios"] = arr;
  }
  if (rep.gcd_value) j["gcd"] = big_json(*rep.gcd_value);
  if (!rep.unit_gcd_prefix.empty()) j["unit_gcd_prefix"] = rep.unit_gcd_prefix;
  return j;
}

inline json orthogonality_report_json(const OrthogonalityReport& rep) {
  json viol = json::array();
  for (const auto& v : rep.violations)
    viol.push_back(json{{"lambda", rational_json(v.lambda)},
                        {"lambda_prime", rational_json(v.lambda_prime)},
                        {"ft_abs", v.ft_abs}});
  return json{{"all_orthogonal", rep.all_orthogonal},
              {"structurally_certified", rep.structurally_certified},
              {"max_violation", rep.max_violation},
              {"pairs_checked", rep.pairs_checked},
              {"violations", viol}};
}

// --- file output ------------------------------------------------------------

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

inline void write_json_report(const std::filesystem::path& path, const ReportHeader& header,
                              json body) {
  body["header"] = header.to_json();
  write_text_file(path, body.dump(2) + "\n");
}

inline std::string csv_with_header(const ReportHeader& header, const std::string& csv_body) {
  return header.to_csv_comment() + csv_body;
}

}  // namespace convlab
