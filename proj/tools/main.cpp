#include <cstdint>
#include <string>

#include "CLI11.hpp"
#include "wickprop/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"wickprop: truncated chaos-expansion solver for stochastic "
               "reaction-diffusion equations"};
  app.require_subcommand(1);

  std::string config_path, out_override;
  CLI::App* solve = app.add_subcommand("solve", "run a config and write the bundle");
  solve->add_option("--config", config_path, "JSON run configuration")->required();
  solve->add_option("--out", out_override, "override the output directory");

  std::string level = "quick";
  CLI::App* verify = app.add_subcommand("verify", "run the self-check suites");
  verify->add_option("--level", level, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}));

  std::string norms_dir, pairs;
  CLI::App* norms = app.add_subcommand("norms", "recompute weighted norms of a bundle");
  norms->add_option("--bundle", norms_dir, "solve output directory")->required();
  norms->add_option("--pairs", pairs, "list r:p[,r:p...]")->required();

  std::string sample_dir;
  int n_samples = 1;
  std::uint64_t seed = 0;
  CLI::App* sample = app.add_subcommand("sample", "draw pathwise realizations");
  sample->add_option("--bundle", sample_dir, "solve output directory")->required();
  sample->add_option("--n", n_samples, "number of samples")->required();
  sample->add_option("--seed", seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (solve->parsed()) return wickprop::cmd_solve(config_path, out_override);
  if (verify->parsed()) return wickprop::cmd_verify(level);
  if (norms->parsed()) return wickprop::cmd_norms(norms_dir, pairs);
  return wickprop::cmd_sample(sample_dir, n_samples, seed);
}
