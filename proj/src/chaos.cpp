#include "wickprop/chaos.hpp"

#include <algorithm>
#include <cmath>

#include "wickprop/errors.hpp"
#include "wickprop/util.hpp"

namespace wickprop {

ChaosField::ChaosField(std::shared_ptr<const IndexSet> iset, std::size_t nx)
    : iset_(std::move(iset)), nx_(nx) {
  if (!iset_) throw ShapeError("chaos field needs an index set");
  if (nx_ == 0) throw ShapeError("chaos field needs a nonempty grid");
  data_.assign(iset_->size() * nx_, 0.0);
}

ChaosField unit_field(std::shared_ptr<const IndexSet> iset, std::size_t nx) {
  ChaosField f(std::move(iset), nx);
  std::fill(f.coeff(0).begin(), f.coeff(0).end(), 1.0);
  return f;
}

void wick_product_rows(const ChaosField& f, const ChaosField& g, ChaosField& out,
                       std::size_t row_begin, std::size_t row_end) {
  if (!f.compatible(g) || !f.compatible(out))
    throw ShapeError("wick product operands must share index set and grid");
  const IndexSet& iset = f.index_set();
  if (row_end > iset.size() || row_begin > row_end)
    throw ShapeError("wick product row range out of bounds");
  const std::size_t nx = f.nx();
  iset.product_pairs(0);  // build the pair table before going parallel
  parallel_for(row_end - row_begin, [&](std::size_t w) {
    const std::size_t gi = row_begin + w;
    std::span<double> og = out.coeff(gi);
    std::fill(og.begin(), og.end(), 0.0);
    for (auto [i, j] : iset.product_pairs(gi)) {
      std::span<const double> fi = f.coeff(i);
      std::span<const double> gj = g.coeff(j);
      if (i == j) {
        for (std::size_t x = 0; x < nx; ++x) og[x] += fi[x] * gj[x];
      } else {
        std::span<const double> fj = f.coeff(j);
        std::span<const double> gi_ = g.coeff(i);
        for (std::size_t x = 0; x < nx; ++x)
          og[x] += fi[x] * gj[x] + fj[x] * gi_[x];
      }
    }
  });
}

ChaosField wick_product(const ChaosField& f, const ChaosField& g) {
  if (!f.compatible(g))
    throw ShapeError("wick product operands must share index set and grid");
  ChaosField out(f.index_set_ptr(), f.nx());
  wick_product_rows(f, g, out, 0, f.index_set().size());
  return out;
}

ChaosField wick_power(const ChaosField& f, int n) {
  if (n < 0) throw ShapeError("wick power needs n >= 0");
  if (n == 0) return unit_field(f.index_set_ptr(), f.nx());
  ChaosField acc = f;
  for (int i = 1; i < n; ++i) acc = wick_product(acc, f);
  return acc;
}

ChaosField deflated(const ChaosField& f) {
  ChaosField out = f;
  std::fill(out.coeff(0).begin(), out.coeff(0).end(), 0.0);
  return out;
}

ChaosField wick_analytic(const AnalyticFunction& phi, const ChaosField& u) {
  const IndexSet& iset = u.index_set();
  const std::size_t nx = u.nx();
  ChaosField out(u.index_set_ptr(), nx);
  std::span<const double> u0 = u.coeff(0);

  std::span<double> out0 = out.coeff(0);
  for (std::size_t x = 0; x < nx; ++x) out0[x] = phi.derivative(0, u0[x]);

  std::vector<double> d1(nx);
  for (std::size_t x = 0; x < nx; ++x) d1[x] = phi.derivative(1, u0[x]);
  parallel_for(iset.size() - 1, [&](std::size_t w) {
    const std::size_t a = w + 1;
    std::span<const double> ua = u.coeff(a);
    std::span<double> oa = out.coeff(a);
    for (std::size_t x = 0; x < nx; ++x) oa[x] = d1[x] * ua[x];
  });

  const int max_grade = iset.max_order();
  if (max_grade < 2) return out;
  ChaosField tilde = deflated(u);
  ChaosField power = tilde;
  std::vector<double> ck(nx);
  for (int k = 2; k <= max_grade; ++k) {
    power = wick_product(power, tilde);
    const double inv_kfact = std::exp(-std::lgamma(k + 1.0));
    for (std::size_t x = 0; x < nx; ++x)
      ck[x] = phi.derivative(k, u0[x]) * inv_kfact;
    const std::size_t lo = iset.grade_begin(k);
    const std::size_t hi = iset.size();
    parallel_for(hi - lo, [&](std::size_t w) {
      const std::size_t a = lo + w;
      std::span<const double> pa = power.coeff(a);
      std::span<double> oa = out.coeff(a);
      for (std::size_t x = 0; x < nx; ++x) oa[x] += ck[x] * pa[x];
    });
  }
  return out;
}

std::vector<double> wick_remainder(const AnalyticFunction& phi, const ChaosField& u,
                                   const MultiIndex& alpha) {
  const IndexSet& iset = u.index_set();
  const std::size_t nx = u.nx();
  std::vector<double> r(nx, 0.0);
  const int grade = alpha.order();
  if (grade < 2) return r;
  const std::size_t a = iset.position(alpha);
  std::span<const double> u0 = u.coeff(0);
  ChaosField tilde = deflated(u);
  ChaosField power = tilde;
  for (int k = 2; k <= grade; ++k) {
    power = wick_product(power, tilde);
    const double inv_kfact = std::exp(-std::lgamma(k + 1.0));
    std::span<const double> pa = power.coeff(a);
    for (std::size_t x = 0; x < nx; ++x)
      r[x] += phi.derivative(k, u0[x]) * inv_kfact * pa[x];
  }
  return r;
}

DirectExpansion wick_analytic_direct(const AnalyticFunction& phi, const ChaosField& u,
                                     int n_max) {
  if (!phi.has_taylor())
    throw ShapeError("direct expansion needs a series family: " + phi.name());
  if (n_max < 0) throw ShapeError("direct expansion needs n_max >= 0");
  const std::size_t nx = u.nx();
  DirectExpansion res{unit_field(u.index_set_ptr(), nx), 0.0};
  {
    const double a0 = phi.taylor(0);
    for (double& v : res.field.flat()) v *= a0;
  }
  ChaosField power = unit_field(u.index_set_ptr(), nx);
  for (int n = 1; n <= n_max; ++n) {
    power = wick_product(power, u);
    const double an = phi.taylor(n);
    if (an == 0.0) continue;
    std::span<const double> src = power.flat();
    std::span<double> dst = res.field.flat();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] += an * src[i];
  }

  double m = 0.0;
  for (double v : u.coeff(0)) m = std::max(m, std::abs(v));
  if (m >= phi.radius()) {
    res.tail_bound = std::numeric_limits<double>::infinity();
    return res;
  }
  const double log_m = std::log(m);  // -inf when m == 0
  double tail = 0.0;
  int quiet = 0;
  for (int n = n_max + 1; n <= n_max + 4096 && quiet < 64; ++n) {
    const double an = std::abs(phi.taylor(n));
    const double term =
        an == 0.0 ? 0.0 : std::exp(std::log(an) + static_cast<double>(n) * log_m);
    tail += term;
    if (term < 1e-300 * (1.0 + tail)) ++quiet; else quiet = 0;
  }
  res.tail_bound = tail;
  return res;
}

}  // namespace wickprop
