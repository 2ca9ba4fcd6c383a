#pragma once

// Subcommand orchestration shared by the CLI binary and the test suite:
// each subcommand reads the config, runs the corresponding library routines,
// and writes deterministic reports (JSON / CSV) into the output directory.

#include <complex>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "convlab.hpp"
#include "report.hpp"

namespace convlab {

enum ExitCode : int {
  kOk = 0,
  kConditionFailed = 1,  // conditions --strict with a failing verdict
  kUsage = 2,            // schema violation / invalid input
  kOverflow = 3,         // atom cap exceeded
};

struct RunOptions {
  std::string subcommand;
  std::string config_path;
  std::optional<std::string> output_dir;
  std::optional<long> level;
  std::optional<long> depth;
  std::optional<double> xi;
  std::optional<long> k_max;
  std::optional<long> n;
  std::optional<long> horizon;
  std::vector<int> target;
  std::optional<std::string> target_s;      // solve-dimension: rational target
  std::optional<std::string> prob_override; // dimension: comma list of rationals
  std::optional<long> empirical_depth;
  bool strict = false;
  bool q_csv = false;
};

namespace rundetail {

inline std::filesystem::path out_dir(const Config& cfg, const RunOptions& opt) {
  return std::filesystem::path(opt.output_dir ? *opt.output_dir : cfg.output_dir);
}

// Pairs with a certified L for every pair the spectrum routines will touch;
// missing ones are filled by the exhaustive search.
inline PairSystem system_with_spectra(const Config& cfg) {
  std::vector<AdmissiblePair> pairs;
  pairs.reserve(cfg.pairs.size());
  for (const auto& p : cfg.pairs) {
    if (p.L) {
      pairs.push_back(p);
      continue;
    }
    auto found = find_spectrum_set(p, 1e-12);
    if (!found)
      throw std::invalid_argument("no spectrum set exists for pair with N = " + p.N.str());
    pairs.emplace_back(p.N, p.B, std::move(found));
  }
  if (!cfg.model) throw SchemaError("model: required for spectrum construction");
  return PairSystem(std::move(pairs), *cfg.model, cfg.exponents);
}

inline std::vector<Rational> parse_rational_list(const std::string& text,
                                                 const std::string& field) {
  std::vector<Rational> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    if (item.empty()) throw SchemaError(field + ": empty entry in rational list");
    try {
      out.push_back(rational_from_string(item));
    } catch (const std::exception&) {
      throw SchemaError(field + ": not a rational: " + item);
    }
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  if (out.empty()) throw SchemaError(field + ": empty rational list");
  return out;
}

inline std::string complex_csv(const std::complex<double>& z) {
  return format_double(z.real()) + "," + format_double(z.imag()) + "," +
         format_double(std::abs(z));
}

}  // namespace rundetail

inline int run_check_admissible(const Config& cfg, const RunOptions& opt,
                                const ReportHeader& header, std::ostream& log) {
  if (cfg.pairs.empty()) throw SchemaError("pairs: check-admissible needs a nonempty pair list");
  json results = json::array();
  bool all_ok = true;
  for (const auto& p : cfg.pairs) {
    json entry;
    entry["N"] = big_json(p.N);
    json b = json::array();
    for (const auto& d : p.B) b.push_back(big_json(d));
    entry["B"] = b;
    if (p.L) {
      const auto rep = verify_hadamard(p, *p.L, cfg.tolerances.mask);
      json l = json::array();
      for (const auto& d : *p.L) l.push_back(big_json(d));
      entry["L_given"] = l;
      entry["admissible"] = rep.unitary;
      entry["max_violation"] = rep.max_violation;
      all_ok = all_ok && rep.unitary;
    } else {
      const auto found = find_spectrum_set(p, cfg.tolerances.mask);
      if (found) {
        const auto rep = verify_hadamard(p, *found, cfg.tolerances.mask);
        json l = json::array();
        for (const auto& d : *found) l.push_back(big_json(d));
        entry["L_found"] = l;
        entry["admissible"] = true;
        entry["max_violation"] = rep.max_violation;
      } else {
        entry["L_found"] = nullptr;
        entry["admissible"] = false;
        entry["max_violation"] = nullptr;
        all_ok = false;
      }
    }
    results.push_back(entry);
  }
  const auto path = rundetail::out_dir(cfg, opt) / "check_admissible.json";
  write_json_report(path, header, json{{"results", results}, {"all_admissible", all_ok}});
  log << "wrote " << path.string() << "\n";
  return kOk;
}

inline int run_truncate(const Config& cfg, const RunOptions& opt, const ReportHeader& header,
                        std::ostream& log) {
  const long level = opt.level ? *opt.level : cfg.depth_caps.truncate_level;
  const auto mu = truncate(cfg.system(), level, cfg.depth_caps.atom_cap);
  const auto path = rundetail::out_dir(cfg, opt) / "truncate.csv";
  write_text_file(path, csv_with_header(header, to_csv(mu)));
  log << "wrote " << path.string() << " (" << mu.size() << " atoms at level " << level << ")\n";
  return kOk;
}

inline int run_ft_grid(const Config& cfg, const RunOptions& opt, const ReportHeader& header,
                       std::ostream& log) {
  const long level = opt.level ? *opt.level : cfg.depth_caps.truncate_level;
  const auto sys = cfg.system();
  std::string body = "xi,re,im,abs\n";
  const double lo = cfg.grid.range_min, hi = cfg.grid.range_max;
  const auto n = cfg.grid.points;
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
    body += format_double(xi) + "," + rundetail::complex_csv(ft_truncated(sys, level, xi)) + "\n";
  }
  const auto path = rundetail::out_dir(cfg, opt) / "ft_grid.csv";
  write_text_file(path, csv_with_header(header, body));
  log << "wrote " << path.string() << "\n";
  return kOk;
}

inline int run_spectrum_verify(const Config& cfg, const RunOptions& opt,
                               const ReportHeader& header, std::ostream& log) {
  const long level = opt.level ? *opt.level : cfg.depth_caps.truncate_level;
  const auto sys = rundetail::system_with_spectra(cfg);
  const auto spec = tower_spectrum(sys, level);
  const auto orth = orthogonality_check(sys, spec, level, cfg.tolerances.mask);
  const auto pq = parseval_Q(sys, spec, level, unit_grid(cfg.grid.points),
                             cfg.tolerances.parseval);

  json body{{"level", level},
            {"size", spec.size()},
            {"orthogonality", orthogonality_report_json(orth)},
            {"parseval",
             json{{"q_min", pq.q_min},
                  {"q_max", pq.q_max},
                  {"grid_points", cfg.grid.points},
                  {"complete", pq.complete}}},
            {"spectral", orth.all_orthogonal && pq.complete}};
  if (spec.size() <= 1024) {
    json elems = json::array();
    for (const auto& e : spec.elements) elems.push_back(rational_json(e));
    body["elements"] = elems;
  }
  const auto dir = rundetail::out_dir(cfg, opt);
  write_json_report(dir / "spectrum_verify.json", header, std::move(body));
  log << "wrote " << (dir / "spectrum_verify.json").string() << "\n";
  if (opt.q_csv) {
    std::string csv = "xi,q\n";
    for (const auto& row : pq.rows)
      csv += format_double(row.xi) + "," + format_double(row.q) + "\n";
    write_text_file(dir / "parseval_q.csv", csv_with_header(header, csv));
    log << "wrote " << (dir / "parseval_q.csv").string() << "\n";
  }
  return kOk;
}

inline int run_conditions(const Config& cfg, const RunOptions& opt, const ReportHeader& header,
                          std::ostream& log) {
  const long depth = opt.depth ? *opt.depth : cfg.depth_caps.condition_depth;
  const auto fam = cfg.family();

  std::vector<ConditionReport> reports;
  // Existence is realized along the model when one is given for a listed
  // family; structured families are realized in their own index order.
  if (cfg.model && (cfg.family_kind == "list" || cfg.family_kind == "periodic"))
    reports.push_back(existence_series(cfg.system(), depth));
  else
    reports.push_back(existence_series(fam, cfg.exponents, depth));
  reports.push_back(rbc_sum(fam, depth));
  reports.push_back(growth_sup(fam, depth));
  reports.push_back(uniform_bound(fam, depth));
  reports.push_back(gcd_analysis(fam, depth));
  reports.push_back(support_radius_series(fam, cfg.exponents, depth));

  bool any_fails = false;
  json arr = json::array();
  for (const auto& r : reports) {
    arr.push_back(condition_report_json(r));
    any_fails = any_fails || r.verdict == Verdict::fails;
    log << r.condition << ": " << to_string(r.verdict) << "\n";
  }
  const auto path = rundetail::out_dir(cfg, opt) / "conditions.json";
  write_json_report(path, header, json{{"depth", depth}, {"reports", arr},
                                       {"any_fails", any_fails}});
  log << "wrote " << path.string() << "\n";
  return (opt.strict && any_fails) ? kConditionFailed : kOk;
}

inline int run_sample(const Config& cfg, const RunOptions& opt, const ReportHeader& header,
                      std::ostream& log) {
  if (!cfg.model) throw SchemaError("model: sample needs a sequence model");
  const long n = opt.n ? *opt.n : cfg.depth_caps.sample_n;
  const auto rep = birkhoff_frequencies(*cfg.model, n);
  std::string body = "symbol,count,frequency_numerator,frequency_denominator\n";
  for (std::size_t i = 0; i < rep.counts.size(); ++i)
    body += std::to_string(i + 1) + "," + std::to_string(rep.counts[i]) + "," +
            numerator(rep.freq[i]).str() + "," + denominator(rep.freq[i]).str() + "\n";
  const auto path = rundetail::out_dir(cfg, opt) / "sample.csv";
  write_text_file(path, csv_with_header(header, body));
  log << "wrote " << path.string() << " (n = " << n << ")\n";
  return kOk;
}

inline int run_recurrence(const Config& cfg, const RunOptions& opt, const ReportHeader& header,
                          std::ostream& log) {
  if (!cfg.model) throw SchemaError("model: recurrence needs a sequence model");
  if (opt.target.empty()) throw SchemaError("--target: recurrence needs a target word");
  const long horizon = opt.horizon ? *opt.horizon : cfg.depth_caps.recurrence_horizon;
  const auto rep = recurrence_times(*cfg.model, opt.target, horizon);
  std::string body = "j,k_j\n";
  for (std::size_t j = 0; j < rep.times.size(); ++j)
    body += std::to_string(j + 1) + "," + std::to_string(rep.times[j]) + "\n";
  body += "# depth_reached=" + std::to_string(rep.times.size()) +
          " exhausted=" + (rep.exhausted ? std::string("true") : std::string("false")) +
          " horizon=" + std::to_string(rep.horizon) + "\n";
  const auto path = rundetail::out_dir(cfg, opt) / "recurrence.csv";
  write_text_file(path, csv_with_header(header, body));
  log << "wrote " << path.string() << "\n";
  return kOk;
}

inline int run_dimension(const Config& cfg, const RunOptions& opt, const ReportHeader& header,
                         std::ostream& log) {
  if (cfg.pairs.empty()) throw SchemaError("pairs: dimension needs a nonempty pair list");
  std::optional<ProbabilityVector> p;
  if (opt.prob_override) {
    try {
      p.emplace(rundetail::parse_rational_list(*opt.prob_override, "--p"));
    } catch (const std::invalid_argument& e) {
      throw SchemaError(std::string("--p: ") + e.what());
    }
  } else if (cfg.model && cfg.model->kind == SequenceModel::Kind::iid_bernoulli) {
    p = *cfg.model->prob;
  } else {
    throw SchemaError("dimension: needs --p or an iid-bernoulli model with prob");
  }
  if (p->size() != cfg.pairs.size())
    throw SchemaError("dimension: probability vector length must match pair count");

  const auto dim = dim_formula(cfg.pairs, *p);
  json body{{"value", dim.value}, {"exact", dim.exact.has_value()}};
  if (dim.exact) body["value_rational"] = rational_json(*dim.exact);
  json pj = json::array();
  for (const auto& q : p->entries) pj.push_back(rational_json(q));
  body["p"] = pj;

  if (opt.empirical_depth) {
    const auto ratios = empirical_dimension(cfg.system(), *opt.empirical_depth);
    body["empirical"] = json{{"depth", *opt.empirical_depth},
                             {"final_ratio", ratios.back()},
                             {"gap", std::abs(ratios.back() - dim.value)}};
  }
  const auto path = rundetail::out_dir(cfg, opt) / "dimension.json";
  write_json_report(path, header, std::move(body));
  log << "wrote " << path.string() << "\n";
  return kOk;
}

inline int run_solve_dimension(const Config& cfg, const RunOptions& opt,
                               const ReportHeader& header, std::ostream& log) {
  if (cfg.pairs.empty()) throw SchemaError("pairs: solve-dimension needs a nonempty pair list");
  if (!opt.target_s) throw SchemaError("--target: solve-dimension needs a rational target");
  Rational s;
  try {
    s = rational_from_string(*opt.target_s);
  } catch (const std::exception&) {
    throw SchemaError("--target: not a rational: " + *opt.target_s);
  }
  const auto sol = solve_dimension(cfg.pairs, s);
  json pj = json::array();
  for (const auto& q : sol.p.entries) pj.push_back(rational_json(q));
  json body{{"target", rational_json(s)},
            {"p", pj},
            {"exact", sol.achieved.exact.has_value()},
            {"achieved", sol.achieved.value}};
  if (sol.achieved.exact) body["achieved_rational"] = rational_json(*sol.achieved.exact);
  const auto path = rundetail::out_dir(cfg, opt) / "solve_dimension.json";
  write_json_report(path, header, std::move(body));
  log << "wrote " << path.string() << "\n";
  return kOk;
}

inline int run_tail_diagnostic(const Config& cfg, const RunOptions& opt,
                               const ReportHeader& header, std::ostream& log) {
  const double xi = opt.xi ? *opt.xi : 1.0;
  const long k_max = opt.k_max ? *opt.k_max : cfg.depth_caps.tail_k_max;
  const long m = opt.depth ? *opt.depth : cfg.depth_caps.tail_depth;
  const auto rows = tail_delta0_diagnostic(cfg.system(), xi, k_max, m);
  std::string body = "k,re,im,abs,dist_to_one\n";
  for (const auto& r : rows)
    body += std::to_string(r.k) + "," + rundetail::complex_csv(r.value) + "," +
            format_double(r.dist_to_one) + "\n";
  const auto path = rundetail::out_dir(cfg, opt) / "tail_diagnostic.csv";
  write_text_file(path, csv_with_header(header, body));
  log << "wrote " << path.string() << "\n";
  return kOk;
}

// Dispatch. Returns a process exit code; all failures are reported on `err`.
inline int run(const RunOptions& opt, std::ostream& log, std::ostream& err) {
  try {
    const Config cfg = load_config(opt.config_path);
    const ReportHeader header = make_header(cfg.raw, cfg.seed);
    if (opt.subcommand == "check-admissible") return run_check_admissible(cfg, opt, header, log);
    if (opt.subcommand == "truncate") return run_truncate(cfg, opt, header, log);
    if (opt.subcommand == "ft-grid") return run_ft_grid(cfg, opt, header, log);
    if (opt.subcommand == "spectrum-verify") return run_spectrum_verify(cfg, opt, header, log);
    if (opt.subcommand == "conditions") return run_conditions(cfg, opt, header, log);
    if (opt.subcommand == "sample") return run_sample(cfg, opt, header, log);
    if (opt.subcommand == "recurrence") return run_recurrence(cfg, opt, header, log);
    if (opt.subcommand == "dimension") return run_dimension(cfg, opt, header, log);
    if (opt.subcommand == "solve-dimension") return run_solve_dimension(cfg, opt, header, log);
    if (opt.subcommand == "tail-diagnostic") return run_tail_diagnostic(cfg, opt, header, log);
    err << "unknown subcommand: " << opt.subcommand << "\n";
    return kUsage;
  } catch (const AtomCapExceeded& e) {
    err << "overflow: " << e.what() << "\n";
    return kOverflow;
  } catch (const SchemaError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace convlab
