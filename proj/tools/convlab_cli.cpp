// convlab: laboratory for truncations of infinite convolution measures.
//
// Every subcommand reads one JSON config describing the pair system (scales,
// digit sets, optional spectrum sets), the symbol model, the exponent
// sequence, grids, tolerances, and depth caps, then writes deterministic
// reports into the output directory. Exit codes: 0 success, 1 a condition
// failed under conditions --strict, 2 invalid config or usage, 3 atom cap
// exceeded.

#include <CLI11.hpp>

#include <convlab/runner.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"laboratory for truncations of infinite convolution measures"};
  app.require_subcommand(1);

  convlab::RunOptions opt;
  std::string target_word;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", opt.config_path, "JSON config file")->required();
    sub->add_option("-o,--output-dir", [&](const std::vector<std::string>& v) {
      opt.output_dir = v.back();
      return true;
    }, "override the config's output directory");
  };

  auto* check = app.add_subcommand("check-admissible",
                                   "verify or search spectrum sets for each pair");
  add_common(check);

  auto* trunc = app.add_subcommand("truncate", "emit the level-k truncation as exact CSV atoms");
  add_common(trunc);
  trunc->add_option("-k,--level", [&](const std::vector<std::string>& v) {
    opt.level = std::stol(v.back());
    return true;
  }, "truncation level");

  auto* ftg = app.add_subcommand("ft-grid", "Fourier transform of the truncation on a grid");
  add_common(ftg);
  ftg->add_option("-k,--level", [&](const std::vector<std::string>& v) {
    opt.level = std::stol(v.back());
    return true;
  }, "truncation level");

  auto* sv = app.add_subcommand("spectrum-verify",
                                "build the tower spectrum, check orthogonality and completeness");
  add_common(sv);
  sv->add_option("-k,--level", [&](const std::vector<std::string>& v) {
    opt.level = std::stol(v.back());
    return true;
  }, "truncation level");
  sv->add_flag("--q-csv", opt.q_csv, "also write the completeness functional per grid point");

  auto* cond = app.add_subcommand("conditions", "evaluate the convergence/spectrality conditions");
  add_common(cond);
  cond->add_option("-K,--depth", [&](const std::vector<std::string>& v) {
    opt.depth = std::stol(v.back());
    return true;
  }, "condition depth");
  cond->add_flag("--strict", opt.strict, "exit 1 if any condition fails");

  auto* samp = app.add_subcommand("sample", "empirical symbol frequencies of the model");
  add_common(samp);
  samp->add_option("-n", [&](const std::vector<std::string>& v) {
    opt.n = std::stol(v.back());
    return true;
  }, "number of symbols");

  auto* rec = app.add_subcommand("recurrence", "greedy recurrence times into target cylinders");
  add_common(rec);
  rec->add_option("--target", target_word, "target word, comma-separated symbols")->required();
  rec->add_option("--horizon", [&](const std::vector<std::string>& v) {
    opt.horizon = std::stol(v.back());
    return true;
  }, "largest symbol index consulted");

  auto* dim = app.add_subcommand("dimension", "frequency-weighted dimension formula");
  add_common(dim);
  dim->add_option("--p", [&](const std::vector<std::string>& v) {
    opt.prob_override = v.back();
    return true;
  }, "probability vector, comma-separated rationals");
  dim->add_option("--empirical-depth", [&](const std::vector<std::string>& v) {
    opt.empirical_depth = std::stol(v.back());
    return true;
  }, "also run the empirical running ratio to this depth");

  auto* sd = app.add_subcommand("solve-dimension", "choose p so the formula hits a target value");
  add_common(sd);
  sd->add_option("--target", [&](const std::vector<std::string>& v) {
    opt.target_s = v.back();
    return true;
  }, "target value as a rational p/q")->required();

  auto* tail = app.add_subcommand("tail-diagnostic",
                                  "Fourier transform of tail truncations as the cut level grows");
  add_common(tail);
  tail->add_option("--xi", [&](const std::vector<std::string>& v) {
    opt.xi = std::stod(v.back());
    return true;
  }, "evaluation point");
  tail->add_option("--k-max", [&](const std::vector<std::string>& v) {
    opt.k_max = std::stol(v.back());
    return true;
  }, "largest cut level");
  tail->add_option("-m,--depth", [&](const std::vector<std::string>& v) {
    opt.depth = std::stol(v.back());
    return true;
  }, "levels per tail truncation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : convlab::kUsage;  // help exits 0; parse errors are usage errors
  }

  opt.subcommand = app.get_subcommands().front()->get_name();
  if (!target_word.empty()) {
    std::size_t pos = 0;
    try {
      while (pos <= target_word.size()) {
        auto comma = target_word.find(',', pos);
        if (comma == std::string::npos) comma = target_word.size();
        opt.target.push_back(std::stoi(target_word.substr(pos, comma - pos)));
        pos = comma + 1;
        if (comma == target_word.size()) break;
      }
    } catch (const std::exception&) {
      std::cerr << "--target: expected comma-separated positive integers\n";
      return convlab::kUsage;
    }
  }

  return convlab::run(opt, std::cout, std::cerr);
}
