#include "wickprop/commands.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <vector>

#include "wickprop/config.hpp"
#include "wickprop/errors.hpp"
#include "wickprop/io.hpp"
#include "wickprop/verify.hpp"

namespace wickprop {

namespace {

ChaosField sup_field(std::shared_ptr<const IndexSet> iset,
                     std::span<const double> sup_values) {
  ChaosField f(iset, 1);
  for (std::size_t a = 0; a < iset->size(); ++a) f.coeff(a)[0] = sup_values[a];
  return f;
}

std::vector<NormReportEntry> norm_entries(const std::vector<NormPair>& pairs,
                                          const ChaosField& last,
                                          const ChaosField& sups, SpatialNorm sn,
                                          double dx) {
  std::vector<NormReportEntry> entries;
  for (const NormPair& np : pairs)
    entries.push_back({np, tail_by_grade(last, np.r, np.p, sn, dx),
                       tail_by_grade(sups, np.r, np.p, SpatialNorm::sup, 1.0)});
  return entries;
}

std::vector<NormPair> parse_pairs_spec(const std::string& spec) {
  std::vector<NormPair> pairs;
  std::string cur;
  auto flush = [&] {
    auto colon = cur.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == cur.size())
      throw ConfigError("bad norm pair '" + cur + "', expected r:p");
    NormPair np;
    try {
      np.r = std::stod(cur.substr(0, colon));
      np.p = std::stod(cur.substr(colon + 1));
    } catch (const std::exception&) {
      throw ConfigError("bad norm pair '" + cur + "', expected r:p");
    }
    if (np.r < 2.0) throw ConfigError("norm pair r must be >= 2");
    if (np.p < 0.0) throw ConfigError("norm pair p must be >= 0");
    pairs.push_back(np);
    cur.clear();
  };
  for (char ch : spec) {
    if (ch == ',')
      flush();
    else
      cur.push_back(ch);
  }
  flush();
  return pairs;
}

}  // namespace

int cmd_solve(const std::string& config_path, const std::string& out_override) {
  RunConfig cfg;
  SolutionBundle bundle;
  BuiltProblem built;
  try {
    cfg = parse_config_file(config_path);
    if (!out_override.empty()) cfg.output_dir = out_override;
    built = build_problem(cfg);

    if (std::isfinite(built.problem.phi.radius())) {
      double m = 0.0;
      for (double v : built.problem.initial.coeff(0)) m = std::max(m, std::abs(v));
      if (m >= 0.9 * built.problem.phi.radius())
        std::cerr << "warning: |u_0| reaches " << m << ", close to the series radius "
                  << built.problem.phi.radius() << " of " << built.problem.phi.name()
                  << "\n";
    }

    bundle = solve(built.problem, cfg.save_every);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    const IndexSet& iset = *built.problem.iset;
    const Grid1D& grid = built.problem.grid;
    const ChaosField& last = bundle.snapshots.back();
    ChaosField sups = sup_field(built.problem.iset, bundle.sup_table);
    SpatialNorm sn = parse_spatial_norm(cfg.spatial);
    std::vector<NormReportEntry> entries =
        norm_entries(cfg.norms, last, sups, sn, grid.spacing());
    GrowthCertificate cert = growth_certificate(iset, bundle.sup_table);

    double cf_err = 0.0;
    bool have_cf = built.has_closed_form;
    if (have_cf) {
      std::size_t nx = grid.size();
      for (std::size_t s = 0; s < bundle.snapshots.size(); ++s) {
        auto u0 = bundle.snapshots[s].coeff(0);
        for (std::size_t i = 1; i + 1 < nx; ++i)
          cf_err = std::max(cf_err, std::abs(u0[i] - fujita_gelfand_exact(
                                                         bundle.times[s], grid.node(i))));
      }
    }

    const std::string dir = cfg.output_dir;
    struct Artifact {
      std::string file;
      std::string role;
      std::string text;
    };
    std::vector<Artifact> artifacts;
    artifacts.push_back({"coefficients.csv", "coefficients",
                         coefficients_csv(bundle, iset, grid)});
    artifacts.push_back({"moments.csv", "moments", moments_csv(bundle, grid)});
    artifacts.push_back(
        {"norms.json", "norms", norms_json_text(entries, cfg.spatial)});
    artifacts.push_back({"sup_table.csv", "sup_table",
                         sup_table_csv(iset, bundle.sup_table, cert.log_bound)});
    artifacts.push_back({"metadata.json", "metadata",
                         metadata_json_text(cfg, bundle, cert,
                                            have_cf ? &cf_err : nullptr)});
    std::vector<ManifestEntry> manifest;
    for (const Artifact& a : artifacts) {
      write_text_file(dir + "/" + a.file, a.text);
      manifest.push_back({a.file, a.role, fnv_hex(a.text)});
    }
    write_text_file(dir + "/manifest.json", manifest_json_text(manifest));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (bundle.blown_up) {
    std::cerr << "blow-up detected at t = " << bundle.blow_up_time
              << "; partial outputs written to " << cfg.output_dir << "\n";
    return 2;
  }
  return 0;
}

int cmd_verify(const std::string& level) {
  bool full;
  if (level == "quick")
    full = false;
  else if (level == "full")
    full = true;
  else {
    std::cerr << "error: verify level must be quick or full\n";
    return 1;
  }
  std::vector<VerifyRow> rows = run_verification(full);
  std::size_t width = 0;
  for (const VerifyRow& r : rows) width = std::max(width, r.name.size());
  for (const VerifyRow& r : rows)
    std::printf("%s  %-*s  %s\n", r.pass ? "PASS" : "FAIL", static_cast<int>(width),
                r.name.c_str(), r.detail.c_str());
  if (!all_passed(rows)) {
    std::cerr << "verification failed\n";
    return 3;
  }
  return 0;
}

int cmd_norms(const std::string& bundle_dir, const std::string& pairs_spec) {
  try {
    std::vector<NormPair> pairs = parse_pairs_spec(pairs_spec);
    LoadedBundle b = load_bundle(bundle_dir);
    ChaosField sups = sup_field(b.iset, b.sup_values);
    SpatialNorm sn = parse_spatial_norm(b.config.spatial);
    std::vector<NormReportEntry> entries =
        norm_entries(pairs, b.snapshots.back(), sups, sn, b.grid.spacing());
    std::cout << norms_json_text(entries, b.config.spatial);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_sample(const std::string& bundle_dir, int n_samples, std::uint64_t seed) {
  try {
    if (n_samples < 1) throw ConfigError("--n must be >= 1");
    LoadedBundle b = load_bundle(bundle_dir);
    std::string text = samples_csv(b, n_samples, seed);
    write_text_file(bundle_dir + "/samples.csv", text);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace wickprop
