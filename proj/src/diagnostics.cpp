#include "wickprop/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wickprop/errors.hpp"

namespace wickprop {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double spatial_value(std::span<const double> row, SpatialNorm spatial, double dx) {
  if (spatial == SpatialNorm::sup) {
    double m = 0.0;
    for (double v : row) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  for (double v : row) s += v * v;
  return std::sqrt(dx * s);
}

double log_sum_exp(std::span<const double> terms) {
  double m = kNegInf;
  for (double t : terms) m = std::max(m, t);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

// exact alpha! for the small component values an index set admits
double factorial_exact(const MultiIndex& a) {
  double f = 1.0;
  for (std::size_t n = 0; n < a.modes(); ++n)
    for (std::uint32_t k = 2; k <= a[n]; ++k) f *= static_cast<double>(k);
  return f;
}

}  // namespace

std::string spatial_norm_name(SpatialNorm sn) {
  return sn == SpatialNorm::sup ? "sup" : "l2";
}

SpatialNorm parse_spatial_norm(const std::string& name) {
  if (name == "sup") return SpatialNorm::sup;
  if (name == "l2") return SpatialNorm::l2;
  throw ConfigError("unknown spatial norm '" + name + "', expected sup or l2");
}

GradeProfile tail_by_grade(const ChaosField& field, double r, double p,
                           SpatialNorm spatial, double dx) {
  if (!(r >= 2.0)) throw ConfigError("norm parameter r must be >= 2");
  if (!(p >= 0.0)) throw ConfigError("norm parameter p must be >= 0");
  const IndexSet& iset = field.index_set();

  std::vector<double> terms(iset.size(), kNegInf);
  for (std::size_t i = 0; i < iset.size(); ++i) {
    const MultiIndex& a = iset.at(i);
    double s = spatial_value(field.coeff(i), spatial, dx);
    if (s <= 0.0) continue;
    LogWeight w = log_superfactorial_weight(a, r);
    if (!w.finite()) continue;
    terms[i] = log_factorial(a) - w.log_value - log_two_n_pow(a, p) + 2.0 * std::log(s);
  }

  GradeProfile out;
  int grades = iset.max_order() + 1;
  out.contributions.assign(grades, 0.0);
  out.partial_sums.assign(grades, 0.0);
  out.shares.assign(grades, 0.0);
  std::vector<double> grade_log(grades, kNegInf);
  for (int g = 0; g < grades; ++g) {
    std::span<const double> slice(terms.data() + iset.grade_begin(g),
                                  iset.grade_end(g) - iset.grade_begin(g));
    grade_log[g] = log_sum_exp(slice);
    out.contributions[g] = std::isfinite(grade_log[g]) ? std::exp(grade_log[g]) : 0.0;
    out.partial_sums[g] = out.contributions[g] + (g > 0 ? out.partial_sums[g - 1] : 0.0);
  }
  out.log_square = log_sum_exp(grade_log);
  if (std::isfinite(out.log_square))
    for (int g = 0; g < grades; ++g)
      if (std::isfinite(grade_log[g]))
        out.shares[g] = std::exp(grade_log[g] - out.log_square);
  return out;
}

double fs_norm(const ChaosField& field, double r, double p, SpatialNorm spatial,
               double dx) {
  return tail_by_grade(field, r, p, spatial, dx).log_square;
}

MomentField moments(const ChaosField& field) {
  const IndexSet& iset = field.index_set();
  std::span<const double> mean = field.coeff(0);
  MomentField out;
  out.mean.assign(mean.begin(), mean.end());
  out.variance.assign(field.nx(), 0.0);
  for (std::size_t i = 1; i < iset.size(); ++i) {
    double f = factorial_exact(iset.at(i));
    std::span<const double> row = field.coeff(i);
    for (std::size_t x = 0; x < row.size(); ++x) out.variance[x] += f * row[x] * row[x];
  }
  for (double& v : out.variance) v = std::max(v, 0.0);
  return out;
}

double hermite_poly(int n, double x) {
  if (n < 0 || n > 60) throw ConfigError("hermite_poly order must be in [0, 60]");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < n; ++k) {
    double next = x * cur - static_cast<double>(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_function(int k, double t) {
  if (k < 1 || k > 60) throw ConfigError("hermite_function order must be in [1, 60]");
  double prev = 0.0;
  double cur = 0.7511255444649425 * std::exp(-0.5 * t * t);  // pi^{-1/4}
  for (int j = 2; j <= k; ++j) {
    double next = std::sqrt(2.0 / (j - 1)) * t * cur -
                  std::sqrt((j - 2.0) / (j - 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> sample_realization(const ChaosField& field,
                                       std::span<const double> gaussians) {
  const IndexSet& iset = field.index_set();
  if (gaussians.size() != static_cast<std::size_t>(iset.modes()))
    throw ShapeError("sample_realization needs one gaussian per mode");

  // table[n][j] = h_j(g_n)
  std::size_t rows = gaussians.size();
  std::size_t cols = static_cast<std::size_t>(iset.max_order()) + 1;
  std::vector<double> table(rows * cols);
  for (std::size_t n = 0; n < rows; ++n) {
    double* h = table.data() + n * cols;
    h[0] = 1.0;
    if (cols > 1) h[1] = gaussians[n];
    for (std::size_t j = 2; j < cols; ++j)
      h[j] = gaussians[n] * h[j - 1] - static_cast<double>(j - 1) * h[j - 2];
  }

  std::vector<double> out(field.nx(), 0.0);
  for (std::size_t i = 0; i < iset.size(); ++i) {
    const MultiIndex& a = iset.at(i);
    double w = 1.0;
    for (std::size_t n = 0; n < a.modes(); ++n)
      if (a[n] != 0) w *= table[n * cols + a[n]];
    if (w == 0.0) continue;
    std::span<const double> row = field.coeff(i);
    for (std::size_t x = 0; x < row.size(); ++x) out[x] += w * row[x];
  }
  return out;
}

double GaussianSampler::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1p-53;  // (0, 1]
  double u2 = static_cast<double>(gen_() >> 11) * 0x1p-53;          // [0, 1)
  double rad = std::sqrt(-2.0 * std::log(u1));
  double ang = 6.283185307179586476925286766559 * u2;
  spare_ = rad * std::sin(ang);
  has_spare_ = true;
  return rad * std::cos(ang);
}

GrowthCertificate growth_certificate(const IndexSet& iset,
                                     std::span<const double> sup_values) {
  if (sup_values.size() != iset.size())
    throw ShapeError("growth_certificate needs one sup value per ordinal");

  std::size_t n = iset.size();
  std::vector<double> log_l(n), lfact(n), twon(n);
  for (std::size_t i = 0; i < n; ++i) {
    log_l[i] = sup_values[i] > 0.0 ? std::log(sup_values[i]) : kNegInf;
    lfact[i] = log_factorial(iset.at(i));
    twon[i] = log_two_n_pow(iset.at(i), 1.0);
  }

  GrowthCertificate cert;
  cert.log_bound.assign(n, 0.0);
  auto fill = [&](int r0, int p0) {
    bool ok = true;
    std::vector<double> sf(iset.max_order() + 1);
    for (int g = 0; g <= iset.max_order(); ++g)
      sf[g] = log_superfactorial_weight(g, static_cast<double>(r0)).log_value;
    for (std::size_t i = 0; i < n; ++i) {
      cert.log_bound[i] = lfact[i] + p0 * twon[i] + sf[iset.grade_of(i)];
      if (iset.grade_of(i) >= 1 && !(log_l[i] <= cert.log_bound[i])) ok = false;
    }
    return ok;
  };

  for (int r0 = 2; r0 <= 32; ++r0)
    for (int p0 = 0; p0 <= 4; ++p0)
      if (fill(r0, p0)) {
        cert.found = true;
        cert.r0 = r0;
        cert.p0 = p0;
        return cert;
      }
  cert.found = false;
  cert.r0 = 32;
  cert.p0 = 4;
  fill(32, 4);
  return cert;
}

}  // namespace wickprop
