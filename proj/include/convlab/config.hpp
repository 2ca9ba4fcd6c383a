#pragma once

// Experiment configuration: one JSON document describes the pair system,
// symbol model, exponents, grids, tolerances, and depth caps that every
// subcommand shares. Schema violations throw SchemaError with a message
// naming the offending field.

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "criteria.hpp"
#include "sequence.hpp"
#include "transform.hpp"

namespace convlab {

struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

using json = nlohmann::json;

namespace cfgdetail {

inline BigInt big_from_json(const json& v, const std::string& field) {
  if (v.is_number_integer()) return BigInt(v.get<long long>());
  if (v.is_string()) {
    try {
      return BigInt(v.get<std::string>());
    } catch (const std::exception&) {
      throw SchemaError(field + ": not an integer: " + v.dump());
    }
  }
  throw SchemaError(field + ": expected integer or integer string, got " + v.dump());
}

inline Rational rational_from_json(const json& v, const std::string& field) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_string()) {
    try {
      return rational_from_string(v.get<std::string>());
    } catch (const std::exception&) {
      throw SchemaError(field + ": not a rational: " + v.dump());
    }
  }
  if (v.is_array() && v.size() == 2)
    return Rational(big_from_json(v[0], field + "[0]"), big_from_json(v[1], field + "[1]"));
  throw SchemaError(field + ": expected rational as \"p/q\", integer, or [num, den]");
}

template <typename T>
inline T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const std::exception&) {
    throw SchemaError(key + ": wrong type: " + j.at(key).dump());
  }
}

}  // namespace cfgdetail

struct Tolerances {
  double mask = 1e-12;      // unitarity / orthogonality
  double parseval = 1e-9;   // completeness
};

struct DepthCaps {
  long truncate_level = 6;
  std::size_t atom_cap = kDefaultAtomCap;
  long condition_depth = kDefaultConditionDepth;
  long tail_depth = 20;   // m: levels per tail truncation
  long tail_k_max = 12;
  long sample_n = 100000;
  long recurrence_horizon = 10000;
};

struct GridSpec {
  std::size_t points = 1024;
  double range_min = 0.0;
  double range_max = 1.0;
};

struct Config {
  std::vector<AdmissiblePair> pairs;
  std::string family_kind = "periodic";  // periodic | list | double-exponential | power-digits
  BigInt power_N = 0, power_m = 0;       // power-digits parameters
  std::optional<SequenceModel> model;
  ExponentSequence exponents = ExponentSequence::constant_one();
  GridSpec grid;
  Tolerances tolerances;
  DepthCaps depth_caps;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  json raw;  // canonical parsed document, for hashing

  PairFamily family() const {
    if (family_kind == "double-exponential") return PairFamily::double_exponential();
    if (family_kind == "power-digits") return PairFamily::power_digits(power_N, power_m);
    if (pairs.empty()) throw SchemaError("pairs: family evaluation needs a nonempty pair list");
    if (family_kind == "list") return PairFamily::finite_list(pairs);
    return PairFamily::periodic(pairs);
  }

  PairSystem system() const {
    if (pairs.empty()) throw SchemaError("pairs: this subcommand needs a nonempty pair list");
    if (!model) throw SchemaError("model: this subcommand needs a sequence model");
    return PairSystem(pairs, *model, exponents);
  }
};

inline SequenceModel parse_model(const json& j) {
  const auto kind = cfgdetail::get_or<std::string>(j, "kind", "");
  if (kind == "explicit-prefix" || kind == "periodic-word") {
    if (!j.contains("word") || !j.at("word").is_array() || j.at("word").empty())
      throw SchemaError("model.word: required nonempty symbol array");
    std::vector<int> word;
    for (const auto& s : j.at("word")) {
      if (!s.is_number_integer() || s.get<long long>() < 1)
        throw SchemaError("model.word: symbols are positive integers");
      word.push_back(static_cast<int>(s.get<long long>()));
    }
    return kind == "explicit-prefix" ? SequenceModel::explicit_prefix(std::move(word))
                                     : SequenceModel::periodic_word(std::move(word));
  }
  if (kind == "iid-bernoulli") {
    if (!j.contains("prob") || !j.at("prob").is_array() || j.at("prob").empty())
      throw SchemaError("model.prob: required nonempty rational array");
    std::vector<Rational> entries;
    for (std::size_t i = 0; i < j.at("prob").size(); ++i)
      entries.push_back(
          cfgdetail::rational_from_json(j.at("prob")[i], "model.prob[" + std::to_string(i) + "]"));
    if (!j.contains("seed")) throw SchemaError("model.seed: required for iid-bernoulli");
    const auto seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("M") &&
        j.at("M").get<std::size_t>() != entries.size())
      throw SchemaError("model.M: must equal the probability vector length");
    try {
      return SequenceModel::iid_bernoulli(ProbabilityVector(std::move(entries)), seed);
    } catch (const std::invalid_argument& e) {
      throw SchemaError(std::string("model.prob: ") + e.what());
    }
  }
  throw SchemaError("model.kind: expected explicit-prefix | periodic-word | iid-bernoulli");
}

inline ExponentSequence parse_exponents(const json& j) {
  const auto kind = cfgdetail::get_or<std::string>(j, "kind", "");
  try {
    if (kind == "constant-one") return ExponentSequence::constant_one();
    if (kind == "explicit-list") {
      if (!j.contains("values") || !j.at("values").is_array())
        throw SchemaError("exponents.values: required array");
      std::vector<long> v;
      for (const auto& n : j.at("values")) v.push_back(n.get<long>());
      return ExponentSequence::explicit_list(std::move(v));
    }
    if (kind == "affine-rule")
      return ExponentSequence::affine(cfgdetail::get_or<long>(j, "a", 0),
                                      cfgdetail::get_or<long>(j, "c", 1));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("exponents: ") + e.what());
  }
  throw SchemaError("exponents.kind: expected constant-one | explicit-list | affine-rule");
}

inline Config parse_config(const json& doc) {
  if (!doc.is_object()) throw SchemaError("config: top level must be an object");
  Config cfg;
  cfg.raw = doc;

  if (doc.contains("pairs")) {
    if (!doc.at("pairs").is_array()) throw SchemaError("pairs: expected array");
    for (std::size_t i = 0; i < doc.at("pairs").size(); ++i) {
      const auto& pj = doc.at("pairs")[i];
      const std::string at = "pairs[" + std::to_string(i) + "]";
      if (!pj.is_object() || !pj.contains("N") || !pj.contains("B"))
        throw SchemaError(at + ": expected {N, B, L?}");
      const BigInt N = cfgdetail::big_from_json(pj.at("N"), at + ".N");
      std::vector<BigInt> B;
      for (const auto& b : pj.at("B")) B.push_back(cfgdetail::big_from_json(b, at + ".B"));
      std::optional<std::vector<BigInt>> L;
      if (pj.contains("L") && !pj.at("L").is_null()) {
        L.emplace();
        for (const auto& l : pj.at("L")) L->push_back(cfgdetail::big_from_json(l, at + ".L"));
      }
      try {
        cfg.pairs.emplace_back(N, std::move(B), std::move(L));
      } catch (const std::invalid_argument& e) {
        throw SchemaError(at + ": " + e.what());
      }
    }
  }

  if (doc.contains("family")) {
    const auto& f = doc.at("family");
    if (f.is_string()) {
      cfg.family_kind = f.get<std::string>();
      if (cfg.family_kind != "periodic" && cfg.family_kind != "list" &&
          cfg.family_kind != "double-exponential")
        throw SchemaError("family: expected periodic | list | double-exponential | "
                          "{kind: power-digits, N, m}");
    } else if (f.is_object() && cfgdetail::get_or<std::string>(f, "kind", "") == "power-digits") {
      cfg.family_kind = "power-digits";
      cfg.power_N = cfgdetail::big_from_json(f.at("N"), "family.N");
      cfg.power_m = cfgdetail::big_from_json(f.at("m"), "family.m");
    } else {
      throw SchemaError("family: expected periodic | list | double-exponential | "
                        "{kind: power-digits, N, m}");
    }
  }

  if (doc.contains("model")) cfg.model = parse_model(doc.at("model"));
  if (doc.contains("exponents")) cfg.exponents = parse_exponents(doc.at("exponents"));

  if (doc.contains("grid")) {
    const auto& g = doc.at("grid");
    cfg.grid.points = cfgdetail::get_or<std::size_t>(g, "points", cfg.grid.points);
    if (cfg.grid.points == 0) throw SchemaError("grid.points: must be positive");
    if (g.contains("range")) {
      if (!g.at("range").is_array() || g.at("range").size() != 2)
        throw SchemaError("grid.range: expected [min, max]");
      cfg.grid.range_min = g.at("range")[0].get<double>();
      cfg.grid.range_max = g.at("range")[1].get<double>();
      if (!(cfg.grid.range_min < cfg.grid.range_max))
        throw SchemaError("grid.range: min must be below max");
    }
  }

  if (doc.contains("tolerances")) {
    const auto& t = doc.at("tolerances");
    cfg.tolerances.mask = cfgdetail::get_or<double>(t, "mask", cfg.tolerances.mask);
    cfg.tolerances.parseval = cfgdetail::get_or<double>(t, "parseval", cfg.tolerances.parseval);
    if (cfg.tolerances.mask <= 0 || cfg.tolerances.parseval <= 0)
      throw SchemaError("tolerances: must be positive");
  }

  if (doc.contains("depth_caps")) {
    const auto& d = doc.at("depth_caps");
    auto positive = [&](const char* key, long v) {
      if (v < 1) throw SchemaError(std::string("depth_caps.") + key + ": must be >= 1");
      return v;
    };
    cfg.depth_caps.truncate_level =
        positive("truncate_level",
                 cfgdetail::get_or<long>(d, "truncate_level", cfg.depth_caps.truncate_level));
    cfg.depth_caps.atom_cap =
        static_cast<std::size_t>(positive("atom_cap", cfgdetail::get_or<long>(
            d, "atom_cap", static_cast<long>(cfg.depth_caps.atom_cap))));
    cfg.depth_caps.condition_depth =
        positive("condition_depth",
                 cfgdetail::get_or<long>(d, "condition_depth", cfg.depth_caps.condition_depth));
    cfg.depth_caps.tail_depth =
        positive("tail_depth", cfgdetail::get_or<long>(d, "tail_depth", cfg.depth_caps.tail_depth));
    cfg.depth_caps.tail_k_max =
        positive("tail_k_max", cfgdetail::get_or<long>(d, "tail_k_max", cfg.depth_caps.tail_k_max));
    cfg.depth_caps.sample_n =
        positive("sample_n", cfgdetail::get_or<long>(d, "sample_n", cfg.depth_caps.sample_n));
    cfg.depth_caps.recurrence_horizon = positive(
        "recurrence_horizon",
        cfgdetail::get_or<long>(d, "recurrence_horizon", cfg.depth_caps.recurrence_horizon));
  }

  cfg.output_dir = cfgdetail::get_or<std::string>(doc, "output_dir", cfg.output_dir);
  cfg.seed = cfgdetail::get_or<std::uint64_t>(doc, "seed", cfg.seed);
  return cfg;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("config: cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw SchemaError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace convlab
