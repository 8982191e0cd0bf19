#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "wickprop/config.hpp"

namespace wickprop {

std::string read_text_file(const std::string& path);  // throws ConfigError
// Creates parent directories as needed; throws std::runtime_error on failure.
void write_text_file(const std::string& path, const std::string& text);
std::string fnv_hex(const std::string& text);  // 16 hex digits

// One row per (snapshot, grid node): t, x, then a(<tuple>) per ordinal.
// Column labels contain commas and are double-quoted.
std::string coefficients_csv(const SolutionBundle& b, const IndexSet& iset,
                             const Grid1D& grid);
// t, x, mean, variance per snapshot and node.
std::string moments_csv(const SolutionBundle& b, const Grid1D& grid);
// alpha, L_alpha, log_bound (log_bound at the certificate's reported pair).
std::string sup_table_csv(const IndexSet& iset, std::span<const double> sup_values,
                          std::span<const double> log_bound);

// Weighted-norm report for one (r, p) pair: the final snapshot and the
// one-point field of running sups L_alpha.
struct NormReportEntry {
  NormPair pair;
  GradeProfile final_snapshot;
  GradeProfile time_sup;
};
std::string norms_json_text(const std::vector<NormReportEntry>& entries,
                            const std::string& spatial);

// Deterministic run record: the resolved config (re-parseable), step counts,
// blow-up flag, snapshot times, digest, certificate, and the closed-form
// comparison error when the run matches the anchor (pass nullptr otherwise).
std::string metadata_json_text(const RunConfig& cfg, const SolutionBundle& b,
                               const GrowthCertificate& cert,
                               const double* closed_form_error);

struct ManifestEntry {
  std::string file;
  std::string role;
  std::string hash;
};
std::string manifest_json_text(const std::vector<ManifestEntry>& entries);

// A solve output directory read back: metadata.json for the resolved config
// and snapshot times, coefficients.csv for the fields, sup_table.csv for
// the running sups. Missing or corrupt files raise ConfigError.
struct LoadedBundle {
  RunConfig config;
  std::shared_ptr<const IndexSet> iset;
  Grid1D grid;
  std::vector<double> times;
  std::vector<ChaosField> snapshots;
  std::vector<double> sup_values;
};
LoadedBundle load_bundle(const std::string& dir);

// Pathwise draws: one gaussian vector per sample, evaluated on every saved
// snapshot. Columns: t, x, the first min(n, 32) samples, then the empirical
// mean and variance over all n samples. Evaluation is batched and the
// accumulation order is fixed, so the bytes depend only on the bundle,
// n_samples, and seed.
std::string samples_csv(const LoadedBundle& bundle, int n_samples, std::uint64_t seed);

}  // namespace wickprop
