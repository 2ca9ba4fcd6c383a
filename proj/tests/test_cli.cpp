#include <catch2/catch_amalgamated.hpp>

#include <convlab/runner.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace convlab;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  const auto dir = fs::temp_directory_path() / ("convlab_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& text) {
  const auto p = dir / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

// file contents with every line mentioning "timestamp" removed
std::string strip_timestamps(const std::string& text) {
  std::stringstream in(text), out;
  std::string line;
  while (std::getline(in, line))
    if (line.find("timestamp") == std::string::npos) out << line << "\n";
  return out.str();
}

int run_quiet(const RunOptions& opt) {
  std::ostringstream log, err;
  const int rc = run(opt, log, err);
  INFO("log: " << log.str() << "\nerr: " << err.str());
  return rc;
}

std::string configs_dir() {
  const char* d = std::getenv("CONVLAB_CONFIGS");
  REQUIRE(d != nullptr);
  return d;
}

std::string cli_path() {
  const char* c = std::getenv("CONVLAB_CLI");
  REQUIRE(c != nullptr);
  return c;
}

int spawn(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("check-admissible fills in missing frequency sets", "[cli]") {
  const auto dir = fresh_dir("admissible");
  const auto cfg = write_config(dir, "cfg.json", R"({
    "pairs": [{"N": 4, "B": [0, 2]}, {"N": 4, "B": [0, 2], "L": [0, 1]}],
    "output_dir": "unused"
  })");
  RunOptions opt;
  opt.subcommand = "check-admissible";
  opt.config_path = cfg.string();
  opt.output_dir = (dir / "out").string();
  REQUIRE(run_quiet(opt) == kOk);

  const auto doc = read_json(dir / "out" / "check_admissible.json");
  CHECK(doc["all_admissible"] == true);
  REQUIRE(doc["results"].size() == 2);
  CHECK(doc["results"][0]["L_found"] == json::array({"0", "1"}));
  CHECK(doc["results"][1]["L_given"] == json::array({"0", "1"}));
  CHECK(doc["results"][1]["admissible"] == true);
  CHECK(doc.contains("header"));
  CHECK(doc["header"].contains("config_hash"));
}

TEST_CASE("spectrum-verify reports a spectral truncation", "[cli]") {
  const auto dir = fresh_dir("specverify");
  RunOptions opt;
  opt.subcommand = "spectrum-verify";
  opt.config_path = (fs::path(configs_dir()) / "quarter_cantor.json").string();
  opt.output_dir = dir.string();
  opt.level = 3;
  REQUIRE(run_quiet(opt) == kOk);

  const auto doc = read_json(dir / "spectrum_verify.json");
  CHECK(doc["level"] == 3);
  CHECK(doc["size"] == 8);
  CHECK(doc["spectral"] == true);
  CHECK(doc["orthogonality"]["all_orthogonal"] == true);
  CHECK(doc["orthogonality"]["structurally_certified"] == true);
  CHECK(doc["parseval"]["complete"] == true);
  const double qmin = doc["parseval"]["q_min"];
  const double qmax = doc["parseval"]["q_max"];
  CHECK(qmin > 1.0 - 1e-9);
  CHECK(qmax < 1.0 + 1e-9);
  // elements are listed for small spectra: 0,1,4,5,16,17,20,21
  REQUIRE(doc.contains("elements"));
  CHECK(doc["elements"].size() == 8);
  CHECK(doc["elements"][4] == json::array({"16", "1"}));
}

TEST_CASE("spectrum-verify emits the Q grid on request", "[cli]") {
  const auto dir = fresh_dir("qcsv");
  RunOptions opt;
  opt.subcommand = "spectrum-verify";
  opt.config_path = (fs::path(configs_dir()) / "binary_tower.json").string();
  opt.output_dir = dir.string();
  opt.level = 2;
  opt.q_csv = true;
  REQUIRE(run_quiet(opt) == kOk);
  const auto text = slurp(dir / "parseval_q.csv");
  CHECK(text.find("xi,q") != std::string::npos);
  // 512 grid rows plus header comments and the column line
  std::size_t rows = 0;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty() && line[0] != '#' && line.find("xi,q") == std::string::npos) ++rows;
  CHECK(rows == 512);
}

TEST_CASE("conditions exit code honours --strict", "[cli]") {
  const auto dir = fresh_dir("conditions");
  RunOptions opt;
  opt.subcommand = "conditions";
  opt.config_path = (fs::path(configs_dir()) / "double_exponential.json").string();
  opt.output_dir = dir.string();
  REQUIRE(run_quiet(opt) == kOk);  // failing verdicts alone do not fail the run

  const auto doc = read_json(dir / "conditions.json");
  CHECK(doc["any_fails"] == true);
  REQUIRE(doc["reports"].size() == 6);
  CHECK(doc["reports"][3]["condition"] == "uniform-bound");
  CHECK(doc["reports"][3]["verdict"] == "fails");
  CHECK(doc["reports"][1]["verdict"] == "holds");

  opt.strict = true;
  CHECK(run_quiet(opt) == kConditionFailed);
}

TEST_CASE("conditions on a spectral periodic system all hold", "[cli]") {
  const auto dir = fresh_dir("conditions_ok");
  RunOptions opt;
  opt.subcommand = "conditions";
  opt.config_path = (fs::path(configs_dir()) / "quarter_cantor.json").string();
  opt.output_dir = dir.string();
  opt.strict = true;
  REQUIRE(run_quiet(opt) == kOk);
  const auto doc = read_json(dir / "conditions.json");
  CHECK(doc["any_fails"] == false);
}

TEST_CASE("schema violations exit with the usage code", "[cli]") {
  const auto dir = fresh_dir("schema");
  const auto bad = write_config(dir, "bad.json", R"({"pairs": "nope"})");
  RunOptions opt;
  opt.subcommand = "truncate";
  opt.config_path = bad.string();
  opt.output_dir = (dir / "out").string();
  CHECK(run_quiet(opt) == kUsage);

  opt.config_path = (dir / "missing.json").string();
  CHECK(run_quiet(opt) == kUsage);

  // malformed pair: digit sets must contain 0
  const auto nozero = write_config(dir, "nozero.json", R"({"pairs": [{"N": 4, "B": [1, 2]}]})");
  opt.config_path = nozero.string();
  CHECK(run_quiet(opt) == kUsage);
}

TEST_CASE("atom cap overflow exits with the overflow code", "[cli]") {
  const auto dir = fresh_dir("overflow");
  const auto cfg = write_config(dir, "cfg.json", R"({
    "pairs": [{"N": 2, "B": [0, 1], "L": [0, 1]}],
    "model": {"kind": "periodic-word", "word": [1]},
    "depth_caps": {"atom_cap": 8, "truncate_level": 5}
  })");
  RunOptions opt;
  opt.subcommand = "truncate";
  opt.config_path = cfg.string();
  opt.output_dir = (dir / "out").string();
  CHECK(run_quiet(opt) == kOverflow);

  opt.level = 3;  // 8 atoms fit exactly
  CHECK(run_quiet(opt) == kOk);
}

TEST_CASE("truncate writes exact atoms", "[cli]") {
  const auto dir = fresh_dir("truncate");
  RunOptions opt;
  opt.subcommand = "truncate";
  opt.config_path = (fs::path(configs_dir()) / "binary_tower.json").string();
  opt.output_dir = dir.string();
  opt.level = 3;
  REQUIRE(run_quiet(opt) == kOk);
  const auto mu = measure_from_csv(slurp(dir / "truncate.csv"));
  REQUIRE(mu.size() == 8);
  CHECK(mu.atoms()[3] == Rational(3, 8));
  CHECK(mu.weights()[3] == Rational(1, 8));
}

TEST_CASE("ft-grid writes one row per grid point", "[cli]") {
  const auto dir = fresh_dir("ftgrid");
  RunOptions opt;
  opt.subcommand = "ft-grid";
  opt.config_path = (fs::path(configs_dir()) / "binary_tower.json").string();
  opt.output_dir = dir.string();
  opt.level = 3;
  REQUIRE(run_quiet(opt) == kOk);
  const auto text = slurp(dir / "ft_grid.csv");
  std::size_t rows = 0;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty() && line[0] != '#' && line.find("xi,") != 0) ++rows;
  CHECK(rows == 512);
  // the first row is xi = 0 where the transform is exactly 1
  CHECK(text.find("0,1,0,1\n") != std::string::npos);
}

TEST_CASE("sample reports exact frequencies", "[cli]") {
  const auto dir = fresh_dir("sample");
  RunOptions opt;
  opt.subcommand = "sample";
  opt.config_path = (fs::path(configs_dir()) / "ivp_mixture.json").string();
  opt.output_dir = dir.string();
  opt.n = 1000;
  REQUIRE(run_quiet(opt) == kOk);
  const auto text = slurp(dir / "sample.csv");
  long total = 0;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#' || line.find("symbol,") == 0) continue;
    // symbol,count,num,den
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    total += std::stol(line.substr(c1 + 1, c2 - c1 - 1));
  }
  CHECK(total == 1000);
}

TEST_CASE("recurrence writes the greedy return times", "[cli]") {
  const auto dir = fresh_dir("recurrence");
  RunOptions opt;
  opt.subcommand = "recurrence";
  opt.config_path = (fs::path(configs_dir()) / "binary_tower.json").string();
  opt.output_dir = dir.string();
  opt.target = {1, 1};
  opt.horizon = 50;
  REQUIRE(run_quiet(opt) == kOk);
  const auto text = slurp(dir / "recurrence.csv");
  // constant word 1,1,1,...: k_1 = 0, k_2 = 1
  CHECK(text.find("1,0\n") != std::string::npos);
  CHECK(text.find("2,1\n") != std::string::npos);
  CHECK(text.find("depth_reached=2") != std::string::npos);
  CHECK(text.find("exhausted=false") != std::string::npos);

  opt.target = {};
  CHECK(run_quiet(opt) == kUsage);  // target is required
}

TEST_CASE("dimension uses the model law or an override", "[cli]") {
  const auto dir = fresh_dir("dimension");
  RunOptions opt;
  opt.subcommand = "dimension";
  opt.config_path = (fs::path(configs_dir()) / "ivp_mixture.json").string();
  opt.output_dir = dir.string();
  REQUIRE(run_quiet(opt) == kOk);  // p comes from the iid model
  auto doc = read_json(dir / "dimension.json");
  CHECK(doc["exact"] == true);
  CHECK(doc["value_rational"] == json::array({"3", "4"}));

  opt.prob_override = "1/2,1/2";
  REQUIRE(run_quiet(opt) == kOk);
  doc = read_json(dir / "dimension.json");
  CHECK(doc["value_rational"] == json::array({"2", "3"}));

  opt.prob_override = "1/2,coffee";
  CHECK(run_quiet(opt) == kUsage);

  opt.prob_override.reset();
  opt.empirical_depth = 2000;
  REQUIRE(run_quiet(opt) == kOk);
  doc = read_json(dir / "dimension.json");
  REQUIRE(doc.contains("empirical"));
  CHECK(doc["empirical"]["depth"] == 2000);
  CHECK(double(doc["empirical"]["gap"]) < 0.05);
}

TEST_CASE("solve-dimension round trips the target", "[cli]") {
  const auto dir = fresh_dir("solve");
  RunOptions opt;
  opt.subcommand = "solve-dimension";
  opt.config_path = (fs::path(configs_dir()) / "ivp_mixture.json").string();
  opt.output_dir = dir.string();
  opt.target_s = "3/4";
  REQUIRE(run_quiet(opt) == kOk);
  const auto doc = read_json(dir / "solve_dimension.json");
  CHECK(doc["exact"] == true);
  CHECK(doc["achieved_rational"] == json::array({"3", "4"}));
  CHECK(doc["p"] == json::array({json::array({"1", "3"}), json::array({"2", "3"})}));

  opt.target_s = "1/10";  // below the attainable range
  CHECK(run_quiet(opt) == kUsage);
  opt.target_s = "elephant";
  CHECK(run_quiet(opt) == kUsage);
}

TEST_CASE("tail-diagnostic writes one row per k", "[cli]") {
  const auto dir = fresh_dir("tail");
  RunOptions opt;
  opt.subcommand = "tail-diagnostic";
  opt.config_path = (fs::path(configs_dir()) / "tail_affine.json").string();
  opt.output_dir = dir.string();
  opt.k_max = 4;
  opt.depth = 10;
  REQUIRE(run_quiet(opt) == kOk);
  const auto text = slurp(dir / "tail_diagnostic.csv");
  std::size_t rows = 0;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty() && line[0] != '#' && line.find("k,") != 0) ++rows;
  CHECK(rows == 4);
}

TEST_CASE("identical config and seed give identical reports", "[cli]") {
  const auto dir1 = fresh_dir("det1");
  const auto dir2 = fresh_dir("det2");
  RunOptions opt;
  opt.subcommand = "spectrum-verify";
  opt.config_path = (fs::path(configs_dir()) / "quarter_cantor.json").string();
  opt.level = 4;
  opt.output_dir = dir1.string();
  REQUIRE(run_quiet(opt) == kOk);
  opt.output_dir = dir2.string();
  REQUIRE(run_quiet(opt) == kOk);
  CHECK(strip_timestamps(slurp(dir1 / "spectrum_verify.json")) ==
        strip_timestamps(slurp(dir2 / "spectrum_verify.json")));
  // the stripped text is nonempty and actually differs before stripping only
  // in the timestamp line
  CHECK(strip_timestamps(slurp(dir1 / "spectrum_verify.json")).size() > 100);
}

TEST_CASE("the installed binary behaves like the in-process runner", "[cli]") {
  const auto dir = fresh_dir("binary");
  const auto cfg = (fs::path(configs_dir()) / "quarter_cantor.json").string();
  CHECK(spawn("spectrum-verify " + cfg + " -k 2 -o " + (dir / "a").string()) == 0);
  CHECK(spawn("conditions " + cfg + " -o " + (dir / "b").string()) == 0);
  CHECK(spawn("nonsense-subcommand " + cfg) == 2);
  CHECK(spawn("solve-dimension " + cfg + " -o " + (dir / "c").string()) == 2);  // missing --target
  CHECK(spawn("truncate " + (dir / "missing.json").string()) == 2);
  CHECK(spawn("--help") == 0);
}
