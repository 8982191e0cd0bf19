#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "wickprop/chaos.hpp"
#include "wickprop/commands.hpp"
#include "wickprop/config.hpp"
#include "wickprop/diagnostics.hpp"
#include "wickprop/errors.hpp"
#include "wickprop/io.hpp"
#include "wickprop/multiindex.hpp"
#include "wickprop/pde.hpp"
#include "wickprop/propagator.hpp"
#include "wickprop/util.hpp"

using namespace wickprop;
namespace fs = std::filesystem;

namespace {

std::string fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("wickprop_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

// canonical small run; @OUT@ is substituted with the output directory
const char* kBaseConfig = R"({
  "equation": "fujita_gelfand",
  "domain": {"x_min": -10, "x_max": 10, "n_x": 101, "bc": "dirichlet"},
  "time": {"T": 0.5, "dt": 0.002, "save_every": 100},
  "truncation": {"K": 2, "N": 2},
  "initial": {"preset": "paper_31", "alpha_value": 1.0},
  "norms": {"pairs": [[2, 0], [32, 3]], "spatial": "sup"},
  "output": {"directory": "@OUT@"},
  "seed": 7
})";

std::string with_out(const std::string& text, const std::string& dir) {
  std::string out = text;
  auto at = out.find("@OUT@");
  REQUIRE(at != std::string::npos);
  out.replace(at, 5, dir);
  return out;
}

int run_binary(const std::string& args) {
  std::string cmd = std::string(WICKPROP_BIN) + " " + args;
  int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WEXITSTATUS(rc);
}

std::vector<std::string> bundle_files() {
  return {"coefficients.csv", "moments.csv", "norms.json",
          "sup_table.csv",    "metadata.json", "manifest.json"};
}

}  // namespace

TEST_CASE("minimal config parses with documented defaults") {
  RunConfig cfg = parse_config_text(R"({
    "equation": "fisher_kpp",
    "domain": {"x_min": 0, "x_max": 1, "n_x": 11, "bc": "periodic"},
    "time": {"T": 0.1, "dt": 0.01},
    "truncation": {"K": 1, "N": 1},
    "initial": {"preset": "constant"}
  })");
  CHECK(cfg.equation == "fisher_kpp");
  CHECK(cfg.nu == 1.0);
  CHECK(cfg.c == 0.0);
  CHECK(cfg.save_every == 0);
  CHECK(cfg.forcing == "zero");
  CHECK(cfg.norms.size() == 2);
  CHECK(cfg.norms[0].r == 2.0);
  CHECK(cfg.norms[1].r == 32.0);
  CHECK(cfg.spatial == "sup");
  CHECK(cfg.output_dir == "out");
  CHECK(cfg.seed == 0);
  CHECK(cfg.init_value == 0.0);
  CHECK(cfg.init_alpha_value == 0.0);

  RunConfig fg = parse_config_text(with_out(kBaseConfig, "x"));
  CHECK(fg.phi_a == 2.0);
  CHECK(fg.phi_b == -2.0);
  CHECK(fg.init_alpha_value == 1.0);
}

TEST_CASE("invalid configs are rejected with ConfigError") {
  auto bad = [](const std::string& text) {
    CHECK_THROWS_AS(parse_config_text(text), ConfigError);
  };
  bad("not json at all");
  bad("[1,2,3]");
  // unknown keys at several levels
  bad(R"({"equation":"fisher_kpp","bogus":1,
       "domain":{"x_min":0,"x_max":1,"n_x":11,"bc":"periodic"},
       "time":{"T":0.1,"dt":0.01},"truncation":{"K":1,"N":1},
       "initial":{"preset":"constant"}})");
  bad(R"({"equation":"fisher_kpp",
       "domain":{"x_min":0,"x_max":1,"n_x":11,"bc":"periodic","typo":2},
       "time":{"T":0.1,"dt":0.01},"truncation":{"K":1,"N":1},
       "initial":{"preset":"constant"}})");
  // unknown presets
  bad(R"({"equation":"heat_death",
       "domain":{"x_min":0,"x_max":1,"n_x":11,"bc":"periodic"},
       "time":{"T":0.1,"dt":0.01},"truncation":{"K":1,"N":1},
       "initial":{"preset":"constant"}})");
  bad(R"({"equation":"fisher_kpp",
       "domain":{"x_min":0,"x_max":1,"n_x":11,"bc":"slippery"},
       "time":{"T":0.1,"dt":0.01},"truncation":{"K":1,"N":1},
       "initial":{"preset":"constant"}})");
  bad(R"({"equation":"fisher_kpp",
       "domain":{"x_min":0,"x_max":1,"n_x":11,"bc":"periodic"},
       "time":{"T":0.1,"dt":0.01},"truncation":{"K":1,"N":1},
       "initial":{"preset":"cold_start"}})");
  // time block violations: dt > T, non-integer step count, zero dt
  bad(R"({"equation":"fisher_kpp",
       "domain":{"x_min":0,"x_max":1,"n_x":11,"bc":"periodic"},
       "time":{"T":0.1,"dt":0.2},"truncation":{"K":1,"N":1},
       "initial":{"preset":"constant"}})");
  bad(R"({"equation":"fisher_kpp",
       "domain":{"x_min":0,"x_max":1,"n_x":11,"bc":"periodic"},
       "time":{"T":0.1,"dt":0.03},"truncation":{"K":1,"N":1},
       "initial":{"preset":"constant"}})");
  bad(R"({"equation":"fisher_kpp",
       "domain":{"x_min":0,"x_max":1,"n_x":11,"bc":"periodic"},
       "time":{"T":0.1,"dt":0},"truncation":{"K":1,"N":1},
       "initial":{"preset":"constant"}})");
  // custom without a series; phi params on a preset that takes none
  bad(R"({"equation":"custom",
       "domain":{"x_min":0,"x_max":1,"n_x":11,"bc":"periodic"},
       "time":{"T":0.1,"dt":0.01},"truncation":{"K":1,"N":1},
       "initial":{"preset":"constant"}})");
  bad(R"({"equation":"fisher_kpp","phi":{"a":1},
       "domain":{"x_min":0,"x_max":1,"n_x":11,"bc":"periodic"},
       "time":{"T":0.1,"dt":0.01},"truncation":{"K":1,"N":1},
       "initial":{"preset":"constant"}})");
  // norm pair below the r floor
  bad(R"({"equation":"fisher_kpp",
       "domain":{"x_min":0,"x_max":1,"n_x":11,"bc":"periodic"},
       "time":{"T":0.1,"dt":0.01},"truncation":{"K":1,"N":1},
       "initial":{"preset":"constant"},
       "norms":{"pairs":[[1.5,0]]}})");
  // white noise forcing needs first-order indices
  bad(R"({"equation":"fisher_kpp",
       "domain":{"x_min":0,"x_max":1,"n_x":11,"bc":"periodic"},
       "time":{"T":0.1,"dt":0.01},"truncation":{"K":2,"N":0},
       "initial":{"preset":"constant"},
       "forcing":{"preset":"white_noise_modes"}})");
  // domain shape
  bad(R"({"equation":"fisher_kpp",
       "domain":{"x_min":1,"x_max":0,"n_x":11,"bc":"periodic"},
       "time":{"T":0.1,"dt":0.01},"truncation":{"K":1,"N":1},
       "initial":{"preset":"constant"}})");
  bad(R"({"equation":"fisher_kpp",
       "domain":{"x_min":0,"x_max":1,"n_x":2,"bc":"periodic"},
       "time":{"T":0.1,"dt":0.01},"truncation":{"K":1,"N":1},
       "initial":{"preset":"constant"}})");
}

TEST_CASE("config echo is a fixed point of parse") {
  const char* samples[] = {
      R"({"equation":"custom","phi":{"series":[0,1,0,-0.25]},
       "domain":{"x_min":-2,"x_max":2,"n_x":21,"bc":"neumann"},
       "time":{"T":0.2,"dt":0.01,"save_every":5},"truncation":{"K":2,"N":3},
       "initial":{"preset":"gaussian_bump","amplitude":0.3,"center":0.5,"width":0.7},
       "forcing":{"preset":"deterministic","amplitude":0.1,"omega":2,"wavenumber":1},
       "norms":{"pairs":[[2,0],[4,1.5]],"spatial":"l2"},
       "output":{"directory":"tmp_echo"},"seed":11})",
      R"({"equation":"newell_whitehead_segel","phi":{"a":0.9,"b":1.1,"n":4},
       "domain":{"x_min":0,"x_max":6.28,"n_x":33,"bc":"periodic"},
       "time":{"T":0.1,"dt":0.005},"truncation":{"K":3,"N":2},
       "initial":{"preset":"constant","value":0.2,"alpha_value":0.05},
       "forcing":{"preset":"white_noise_modes","amplitude":0.2}})",
  };
  for (const char* text : samples) {
    RunConfig cfg = parse_config_text(text);
    std::string echo = config_json_text(cfg);
    RunConfig again = parse_config_text(echo);
    CHECK(config_json_text(again) == echo);
  }
}

TEST_CASE("build_problem realizes presets faithfully") {
  RunConfig cfg = parse_config_text(with_out(kBaseConfig, "unused"));
  BuiltProblem bp = build_problem(cfg);
  CHECK(bp.has_closed_form);
  const Grid1D& grid = bp.problem.grid;
  auto row0 = bp.problem.initial.coeff(0);
  for (std::size_t i = 0; i < grid.size(); i += 17)
    CHECK(row0[i] == -2.0 * std::log1p(std::exp(-grid.node(i))));
  for (std::size_t a = 1; a < bp.problem.iset->size(); ++a)
    for (double v : bp.problem.initial.coeff(a)) CHECK(v == 1.0);
  CHECK_FALSE(bp.problem.forcing);
  // the dirichlet data follows the closed form
  CHECK(bp.problem.dirichlet(0.3, Side::left) ==
        doctest::Approx(fujita_gelfand_exact(0.3, -10.0)).epsilon(1e-15));

  // losing any canonical ingredient drops the closed-form flag
  RunConfig off = cfg;
  off.nu = 0.5;
  CHECK_FALSE(build_problem(off).has_closed_form);
  off = cfg;
  off.phi_b = -1.0;
  CHECK_FALSE(build_problem(off).has_closed_form);
  off = cfg;
  off.forcing = "deterministic";
  CHECK_FALSE(build_problem(off).has_closed_form);
}

TEST_CASE("forcing presets fill every row they own") {
  RunConfig cfg = parse_config_text(R"({
    "equation":"fisher_kpp",
    "domain":{"x_min":0,"x_max":1,"n_x":11,"bc":"periodic"},
    "time":{"T":0.1,"dt":0.01},"truncation":{"K":2,"N":1},
    "initial":{"preset":"constant","value":0.1},
    "forcing":{"preset":"white_noise_modes","amplitude":0.5}})");
  BuiltProblem bp = build_problem(cfg);
  REQUIRE(static_cast<bool>(bp.problem.forcing));
  ChaosField f(bp.problem.iset, bp.problem.grid.size());
  for (double& v : f.flat()) v = 99.0;  // stale values must be overwritten
  bp.problem.forcing(0.3, f);
  auto iset = bp.problem.iset;
  std::size_t e1 = iset->position(MultiIndex{1, 0});
  std::size_t e2 = iset->position(MultiIndex{0, 1});
  for (double v : f.coeff(0)) CHECK(v == 0.0);
  for (double v : f.coeff(e1)) CHECK(v == 0.5 * hermite_function(1, 0.3));
  for (double v : f.coeff(e2)) CHECK(v == 0.5 * hermite_function(2, 0.3));

  RunConfig det = parse_config_text(R"({
    "equation":"fisher_kpp",
    "domain":{"x_min":0,"x_max":1,"n_x":11,"bc":"periodic"},
    "time":{"T":0.1,"dt":0.01},"truncation":{"K":2,"N":1},
    "initial":{"preset":"constant","value":0.1},
    "forcing":{"preset":"deterministic","amplitude":2,"omega":3,"wavenumber":0}})");
  BuiltProblem bd = build_problem(det);
  ChaosField g(bd.problem.iset, bd.problem.grid.size());
  for (double& v : g.flat()) v = 99.0;
  bd.problem.forcing(0.25, g);
  for (double v : g.coeff(0)) CHECK(v == 2.0 * std::sin(3.0 * 0.25));
  for (std::size_t a = 1; a < bd.problem.iset->size(); ++a)
    for (double v : g.coeff(a)) CHECK(v == 0.0);
}

TEST_CASE("solve writes a complete bundle with true hashes") {
  std::string dir = fresh_dir("solve");
  std::string cfg_path = dir + "/config.json";
  write_text_file(cfg_path, with_out(kBaseConfig, dir + "/run"));
  CHECK(cmd_solve(cfg_path, "") == 0);

  for (const std::string& f : bundle_files())
    CHECK(fs::exists(dir + "/run/" + f));

  auto manifest = nlohmann::json::parse(read_text_file(dir + "/run/manifest.json"));
  REQUIRE(manifest["files"].size() == 5);
  for (const auto& entry : manifest["files"]) {
    std::string text = read_text_file(dir + "/run/" + entry["file"].get<std::string>());
    CHECK(entry["fnv1a64"].get<std::string>() == fnv_hex(text));
  }

  auto meta = nlohmann::json::parse(read_text_file(dir + "/run/metadata.json"));
  CHECK(meta["blown_up"].get<bool>() == false);
  CHECK(meta["certificate"]["found"].get<bool>() == true);
  CHECK(meta["closed_form_max_error"].get<double>() <= 1e-3);
  CHECK(meta["steps_done"].get<long long>() == 250);
}

TEST_CASE("identical configs rerun to identical bytes") {
  std::string dir = fresh_dir("rerun");
  std::string cfg_path = dir + "/config.json";
  write_text_file(cfg_path, with_out(kBaseConfig, dir + "/run"));
  REQUIRE(cmd_solve(cfg_path, "") == 0);
  std::vector<std::string> before;
  for (const std::string& f : bundle_files())
    before.push_back(read_text_file(dir + "/run/" + f));
  REQUIRE(cmd_solve(cfg_path, "") == 0);
  for (std::size_t i = 0; i < bundle_files().size(); ++i)
    CHECK(before[i] == read_text_file(dir + "/run/" + bundle_files()[i]));
}

TEST_CASE("the embedded resolved config reproduces the manifest") {
  std::string dir = fresh_dir("roundtrip");
  std::string cfg_path = dir + "/config.json";
  write_text_file(cfg_path, with_out(kBaseConfig, dir + "/run"));
  REQUIRE(cmd_solve(cfg_path, "") == 0);
  std::string manifest_before = read_text_file(dir + "/run/manifest.json");

  auto meta = nlohmann::json::parse(read_text_file(dir + "/run/metadata.json"));
  write_text_file(dir + "/resolved.json", meta["resolved_config"].dump(2) + "\n");
  REQUIRE(cmd_solve(dir + "/resolved.json", "") == 0);
  CHECK(read_text_file(dir + "/run/manifest.json") == manifest_before);
}

TEST_CASE("a bundle loads back to the exact in-memory solution") {
  std::string dir = fresh_dir("load");
  std::string cfg_path = dir + "/config.json";
  write_text_file(cfg_path, with_out(kBaseConfig, dir + "/run"));
  REQUIRE(cmd_solve(cfg_path, "") == 0);

  RunConfig cfg = parse_config_text(with_out(kBaseConfig, dir + "/run"));
  BuiltProblem bp = build_problem(cfg);
  SolutionBundle direct = solve(bp.problem, cfg.save_every);

  LoadedBundle loaded = load_bundle(dir + "/run");
  REQUIRE(loaded.times.size() == direct.times.size());
  REQUIRE(loaded.snapshots.size() == direct.snapshots.size());
  for (std::size_t s = 0; s < loaded.snapshots.size(); ++s) {
    CHECK(loaded.times[s] == direct.times[s]);
    auto a = loaded.snapshots[s].flat();
    auto b = direct.snapshots[s].flat();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  }
  REQUIRE(loaded.sup_values.size() == direct.sup_table.size());
  for (std::size_t i = 0; i < loaded.sup_values.size(); ++i)
    CHECK(loaded.sup_values[i] == direct.sup_table[i]);
}

TEST_CASE("missing or corrupt bundles raise ConfigError") {
  CHECK_THROWS_AS(load_bundle("/nonexistent/bundle"), ConfigError);

  std::string dir = fresh_dir("corrupt");
  std::string cfg_path = dir + "/config.json";
  write_text_file(cfg_path, with_out(kBaseConfig, dir + "/run"));
  REQUIRE(cmd_solve(cfg_path, "") == 0);

  std::string coeff = read_text_file(dir + "/run/coefficients.csv");
  // drop the last data line
  std::string truncated = coeff.substr(0, coeff.find_last_of('\n', coeff.size() - 2) + 1);
  write_text_file(dir + "/run/coefficients.csv", truncated);
  CHECK_THROWS_AS(load_bundle(dir + "/run"), ConfigError);
  // garble the first data row, keeping the header intact
  std::size_t row1 = coeff.find('\n') + 1;
  write_text_file(dir + "/run/coefficients.csv",
                  coeff.substr(0, row1) + "garbage" + coeff.substr(row1 + 7));
  CHECK_THROWS_AS(load_bundle(dir + "/run"), ConfigError);
  write_text_file(dir + "/run/coefficients.csv", coeff);
  fs::remove(dir + "/run/sup_table.csv");
  CHECK_THROWS_AS(load_bundle(dir + "/run"), ConfigError);
}

TEST_CASE("norms subcommand reproduces the solve-time report") {
  std::string dir = fresh_dir("norms");
  std::string cfg_path = dir + "/config.json";
  write_text_file(cfg_path, with_out(kBaseConfig, dir + "/run"));
  REQUIRE(run_binary("solve --config " + cfg_path) == 0);
  REQUIRE(run_binary("norms --bundle " + dir + "/run --pairs 2:0,32:3 > " + dir +
                     "/norms_out.json") == 0);

  auto original = nlohmann::json::parse(read_text_file(dir + "/run/norms.json"));
  auto recomputed = nlohmann::json::parse(read_text_file(dir + "/norms_out.json"));
  CHECK(original == recomputed);

  // nesting across the recomputed pairs: r=32 never exceeds r=2 at fixed p
  REQUIRE(run_binary("norms --bundle " + dir + "/run --pairs 2:1,32:1 > " + dir +
                     "/nest.json") == 0);
  auto nest = nlohmann::json::parse(read_text_file(dir + "/nest.json"));
  double at2 = nest["pairs"][0]["final_snapshot"]["log_square"].get<double>();
  double at32 = nest["pairs"][1]["final_snapshot"]["log_square"].get<double>();
  CHECK(at32 <= at2 + 1e-12);

  CHECK(cmd_norms(dir + "/run", "nonsense") == 1);
  CHECK(cmd_norms(dir + "/run", "1:0") == 1);
  CHECK(cmd_norms("/nonexistent/bundle", "2:0") == 1);
}

TEST_CASE("sample subcommand: deterministic, seed-sensitive, bundle-preserving") {
  std::string dir = fresh_dir("sample");
  std::string cfg_path = dir + "/config.json";
  write_text_file(cfg_path, with_out(kBaseConfig, dir + "/run"));
  REQUIRE(cmd_solve(cfg_path, "") == 0);
  std::vector<std::string> bundle_before;
  for (const std::string& f : bundle_files())
    bundle_before.push_back(read_text_file(dir + "/run/" + f));

  REQUIRE(cmd_sample(dir + "/run", 5, 9) == 0);
  std::string first = read_text_file(dir + "/run/samples.csv");
  REQUIRE(cmd_sample(dir + "/run", 5, 9) == 0);
  CHECK(read_text_file(dir + "/run/samples.csv") == first);
  REQUIRE(cmd_sample(dir + "/run", 5, 10) == 0);
  CHECK(read_text_file(dir + "/run/samples.csv") != first);

  for (std::size_t i = 0; i < bundle_files().size(); ++i)
    CHECK(bundle_before[i] == read_text_file(dir + "/run/" + bundle_files()[i]));

  // column cap: 40 samples keep 32 columns plus mean and variance
  REQUIRE(cmd_sample(dir + "/run", 40, 3) == 0);
  std::string text = read_text_file(dir + "/run/samples.csv");
  std::string header = text.substr(0, text.find('\n'));
  std::size_t commas = 0;
  for (char ch : header) commas += ch == ',';
  CHECK(commas == 1 + 32 + 2);
  CHECK(header.find("sample_32") != std::string::npos);
  CHECK(header.find("sample_33") == std::string::npos);

  CHECK(cmd_sample(dir + "/run", 0, 1) == 1);
  CHECK(cmd_sample("/nonexistent/bundle", 3, 1) == 1);
}

TEST_CASE("monte carlo sampling tracks the moment columns") {
  std::string dir = fresh_dir("mc");
  std::string cfg_path = dir + "/config.json";
  write_text_file(cfg_path, with_out(kBaseConfig, dir + "/run"));
  REQUIRE(cmd_solve(cfg_path, "") == 0);
  LoadedBundle b = load_bundle(dir + "/run");
  REQUIRE(cmd_sample(dir + "/run", 4000, 123) == 0);

  // final-time rows of samples.csv vs exact moments of the final snapshot
  MomentField exact = moments(b.snapshots.back());
  std::string text = read_text_file(dir + "/run/samples.csv");
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else
      cur.push_back(ch);
  }
  std::size_t nx = b.grid.size();
  std::size_t first_final = lines.size() - nx;
  for (std::size_t i = 0; i < nx; i += 9) {
    const std::string& line = lines[first_final + i];
    std::vector<double> vals;
    std::string tok;
    for (char ch : line + ",") {
      if (ch == ',') {
        vals.push_back(std::stod(tok));
        tok.clear();
      } else
        tok.push_back(ch);
    }
    double mean = vals[vals.size() - 2];
    double var = vals[vals.size() - 1];
    double se_mean = std::sqrt(exact.variance[i] / 4000.0);
    CHECK(std::abs(mean - exact.mean[i]) <= 4.0 * se_mean + 1e-12);
    CHECK(var == doctest::Approx(exact.variance[i]).epsilon(0.25));
  }
}

TEST_CASE("verify subcommand exit codes") {
  CHECK(cmd_verify("quick") == 0);
  CHECK(cmd_verify("sideways") == 1);
}

TEST_CASE("binary: zero phi with constant data keeps every snapshot equal") {
  std::string dir = fresh_dir("still");
  write_text_file(dir + "/config.json", R"({
    "equation":"custom","phi":{"series":[0]},
    "domain":{"x_min":0,"x_max":1,"n_x":17,"bc":"periodic"},
    "time":{"T":0.2,"dt":0.01,"save_every":5},
    "truncation":{"K":2,"N":2},
    "initial":{"preset":"constant","value":0.7,"alpha_value":0.2},
    "output":{"directory":")" + dir + R"(/run"}})");
  REQUIRE(run_binary("solve --config " + dir + "/config.json") == 0);
  LoadedBundle b = load_bundle(dir + "/run");
  REQUIRE(b.snapshots.size() >= 3);
  auto ref = b.snapshots.front().flat();
  for (const ChaosField& f : b.snapshots)
    for (std::size_t i = 0; i < ref.size(); ++i)
      CHECK(f.flat()[i] == doctest::Approx(ref[i]).epsilon(1e-14));
}

TEST_CASE("binary: blow-up exits 2 and flags the partial bundle") {
  std::string dir = fresh_dir("blow");
  write_text_file(dir + "/config.json", R"({
    "equation":"custom","phi":{"series":[0,0,1]},
    "operator":{"nu":0.05},
    "domain":{"x_min":-5,"x_max":5,"n_x":41,"bc":"neumann"},
    "time":{"T":4,"dt":0.01,"save_every":20},
    "truncation":{"K":1,"N":1},
    "initial":{"preset":"constant","value":3.0,"alpha_value":0.1},
    "output":{"directory":")" + dir + R"(/run"}})");
  CHECK(run_binary("solve --config " + dir + "/config.json 2> /dev/null") == 2);
  auto meta = nlohmann::json::parse(read_text_file(dir + "/run/metadata.json"));
  CHECK(meta["blown_up"].get<bool>() == true);
  CHECK(meta["steps_done"].get<long long>() < meta["steps_total"].get<long long>());
  CHECK(meta["blow_up_time"].get<double>() > 0.0);
}

TEST_CASE("binary: config errors exit 1, usage errors exit 1, help exits 0") {
  std::string dir = fresh_dir("exitcodes");
  write_text_file(dir + "/bad.json", R"({"equation":"fisher_kpp"})");
  CHECK(run_binary("solve --config " + dir + "/bad.json 2> /dev/null") == 1);
  CHECK(run_binary("solve --config " + dir + "/missing.json 2> /dev/null") == 1);
  CHECK(run_binary("frobnicate 2> /dev/null") == 1);
  CHECK(run_binary("solve 2> /dev/null") == 1);
  CHECK(run_binary("--help > /dev/null") == 0);
  CHECK(run_binary("verify --level quick > /dev/null") == 0);
}
