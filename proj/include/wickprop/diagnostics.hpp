#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "wickprop/chaos.hpp"

namespace wickprop {

enum class SpatialNorm { sup, l2 };

std::string spatial_norm_name(SpatialNorm sn);
SpatialNorm parse_spatial_norm(const std::string& name);  // throws ConfigError

// Weighted squared norm of the coefficient family, returned in log scale:
//   ln sum_alpha alpha! |u_alpha|^2 (r^{|alpha|^3}!)^{-1} (2N)^{-p alpha}.
// |u_alpha| is the grid max by default; the l2 option uses sqrt(dx sum u^2).
// Accumulated by log-sum-exp. A zero field gives -inf. Requires r >= 2 and
// p >= 0 (ConfigError otherwise).
double fs_norm(const ChaosField& field, double r, double p,
               SpatialNorm spatial = SpatialNorm::sup, double dx = 1.0);

// The same sum split by grade g = |alpha|. contributions[g] is the linear
// value of grade g; partial_sums is its running total, so the entries are
// non-decreasing and the last one equals exp(log_square). shares[g] is the
// grade's fraction of the total, formed as a log-scale difference, so it
// stays meaningful when the linear values underflow.
struct GradeProfile {
  double log_square = 0.0;
  std::vector<double> contributions;
  std::vector<double> partial_sums;
  std::vector<double> shares;
};
GradeProfile tail_by_grade(const ChaosField& field, double r, double p,
                           SpatialNorm spatial = SpatialNorm::sup, double dx = 1.0);

// mean = u_0 and variance = sum_{alpha > 0} alpha! u_alpha^2, pointwise.
// Variance is clamped at 0 against rounding.
struct MomentField {
  std::vector<double> mean;
  std::vector<double> variance;
};
MomentField moments(const ChaosField& field);

// Probabilists' Hermite polynomial h_n via
// h_{n+1}(x) = x h_n(x) - n h_{n-1}(x), h_0 = 1, h_1 = x. Requires n <= 60.
double hermite_poly(int n, double x);

// k-th Hermite function (k >= 1), unit L2 norm over the real line:
//   xi_1(t) = pi^{-1/4} e^{-t^2 / 2},
//   xi_k(t) = sqrt(2/(k-1)) t xi_{k-1}(t) - sqrt((k-2)/(k-1)) xi_{k-2}(t).
// Requires k <= 60.
double hermite_function(int k, double t);

// Pathwise evaluation sum_alpha u_alpha prod_n h_{alpha_n}(g_n) on the grid.
// gaussians must hold one value per mode (ShapeError otherwise).
std::vector<double> sample_realization(const ChaosField& field,
                                       std::span<const double> gaussians);

// Standard normal stream: mt19937_64 plus Box-Muller with the spare value
// cached. The exact draw sequence is part of the reproducibility contract.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : gen_(seed) {}
  double next();

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// First pair on the grid {2..32} x {0..4}, scanned in lexicographic order,
// with  sup_values[i] <= alpha! (2N)^{p0 alpha} (r0^{|alpha|^3})!  for every
// ordinal with |alpha| >= 1. The zero index is exempt: it is the
// deterministic part, not a series-growth term. log_bound holds the
// right-hand side in log scale at the reported pair; when nothing
// certifies, found is false and the bounds are reported at (32, 4).
struct GrowthCertificate {
  bool found = false;
  int r0 = 2;
  int p0 = 0;
  std::vector<double> log_bound;
};
GrowthCertificate growth_certificate(const IndexSet& iset,
                                     std::span<const double> sup_values);

}  // namespace wickprop
