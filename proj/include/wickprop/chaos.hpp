#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "wickprop/analytic.hpp"
#include "wickprop/multiindex.hpp"

namespace wickprop {

// Coefficient family {u_alpha} over an index set; each coefficient is a grid
// function with nx values, stored as one contiguous row per ordinal.
class ChaosField {
 public:
  // Empty placeholder; any real use requires the index-set constructor.
  ChaosField() = default;
  ChaosField(std::shared_ptr<const IndexSet> iset, std::size_t nx);

  const IndexSet& index_set() const { return *iset_; }
  const std::shared_ptr<const IndexSet>& index_set_ptr() const { return iset_; }
  std::size_t nx() const { return nx_; }

  std::span<double> coeff(std::size_t ordinal) {
    return {data_.data() + ordinal * nx_, nx_};
  }
  std::span<const double> coeff(std::size_t ordinal) const {
    return {data_.data() + ordinal * nx_, nx_};
  }
  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }

  // same index set object and grid size
  bool compatible(const ChaosField& o) const {
    return iset_.get() == o.iset_.get() && nx_ == o.nx_;
  }

 private:
  std::shared_ptr<const IndexSet> iset_;
  std::size_t nx_ = 0;
  std::vector<double> data_;
};

// The field equal to 1 at the zero index (the constant 1 on the grid).
ChaosField unit_field(std::shared_ptr<const IndexSet> iset, std::size_t nx);

// (f ◊ g)_gamma = sum_{beta <= gamma} f_beta g_{gamma - beta}, pointwise on
// the grid. Each unordered factor pair contributes f_i g_j + f_j g_i in a
// fixed order, so the result is bitwise symmetric in f and g.
ChaosField wick_product(const ChaosField& f, const ChaosField& g);

// Writes only rows [row_begin, row_end) of f ◊ g into out; other rows of
// out are left untouched.
void wick_product_rows(const ChaosField& f, const ChaosField& g, ChaosField& out,
                       std::size_t row_begin, std::size_t row_end);

// n-fold Wick power; n = 0 gives unit_field.
ChaosField wick_power(const ChaosField& f, int n);

// Copy of f with the zero-index row cleared.
ChaosField deflated(const ChaosField& f);

// Coefficient family of Phi^◊(u) through the derivative split: the zero row
// carries Phi(u_0); every other row carries Phi'(u_0) u_alpha plus the
// higher-derivative remainder of its grade.
ChaosField wick_analytic(const AnalyticFunction& phi, const ChaosField& u);

// The remainder row for one alpha:
//   sum_{k=2..|alpha|} Phi^(k)(u_0)/k! * (deflated(u)^{◊k})_alpha,
// identically zero for |alpha| <= 1.
std::vector<double> wick_remainder(const AnalyticFunction& phi, const ChaosField& u,
                                   const MultiIndex& alpha);

// Truncated series sum_{n=0..n_max} a_n u^{◊n} together with a bound on the
// dropped scalar tail sum_{n>n_max} |a_n| (max|u_0|)^n (+inf when max|u_0|
// reaches the series radius).
struct DirectExpansion {
  ChaosField field;
  double tail_bound = 0.0;
};
DirectExpansion wick_analytic_direct(const AnalyticFunction& phi, const ChaosField& u,
                                     int n_max);

}  // namespace wickprop
