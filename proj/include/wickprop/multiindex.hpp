#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace wickprop {

// Multi-index alpha = (alpha_1, ..., alpha_K) over Gaussian modes 1..K.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t modes) : c_(modes, 0) {}
  MultiIndex(std::initializer_list<std::uint32_t> comps) : c_(comps) {}
  // epsilon at position `mode` (0-based), i.e. the unit index of mode+1.
  static MultiIndex unit(std::size_t modes, std::size_t mode);

  std::size_t modes() const { return c_.size(); }
  std::uint32_t operator[](std::size_t i) const { return c_[i]; }
  std::uint32_t& operator[](std::size_t i) { return c_[i]; }

  int order() const;  // |alpha|
  bool is_zero() const;

  MultiIndex plus(const MultiIndex& b) const;
  // this - b when b <= this componentwise, nullopt otherwise.
  std::optional<MultiIndex> minus(const MultiIndex& b) const;
  bool leq(const MultiIndex& b) const;  // componentwise <=

  std::string label() const;  // "(0,2,1)"

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

  struct Hash {
    std::size_t operator()(const MultiIndex& a) const;
  };

 private:
  std::vector<std::uint32_t> c_;
};

// ln(alpha!) = sum_n ln(alpha_n!)
double log_factorial(const MultiIndex& a);

// ln((2N)^{p*alpha}) = p * sum_n alpha_n * ln(2n), modes numbered from 1.
double log_two_n_pow(const MultiIndex& a, double p);

// A weight held in log scale. +inf marks growth past double range; a -inf
// exponent means the weighted term is exactly 0.
struct LogWeight {
  double log_value = 0.0;
  bool finite() const;
  double exp_value() const;
};

// ln((r^{|alpha|^3})!). Exact lgamma while r^{|alpha|^3} <= 1e15, Stirling
// with the 1/(12x) correction above, +inf once r^{|alpha|^3} itself
// overflows double.
LogWeight log_superfactorial_weight(int order, double r);
LogWeight log_superfactorial_weight(const MultiIndex& a, double r);

// All alpha with the given mode count and |alpha| <= max_order, in graded
// order: grades ascending, descending lexicographic inside a grade.
// Cardinality C(modes + max_order, max_order); capped at 1e7.
class IndexSet {
 public:
  static constexpr std::uint64_t kMaxCardinality = 10'000'000;

  IndexSet(int modes, int max_order);  // throws CapacityError, ConfigError
  IndexSet(const IndexSet&) = delete;
  IndexSet& operator=(const IndexSet&) = delete;

  int modes() const { return modes_; }
  int max_order() const { return max_order_; }
  std::size_t size() const { return indices_.size(); }
  const MultiIndex& at(std::size_t ordinal) const { return indices_[ordinal]; }

  std::size_t position(const MultiIndex& a) const;  // throws ShapeError
  std::optional<std::size_t> find(const MultiIndex& a) const;

  // Ordinal range [grade_begin(g), grade_end(g)) of indices with |alpha| == g.
  std::size_t grade_begin(int g) const;
  std::size_t grade_end(int g) const;
  int grade_of(std::size_t ordinal) const { return indices_[ordinal].order(); }

  // Unordered factor pairs of at(ordinal): all (i, j) with i <= j and
  // at(i) + at(j) == at(ordinal). Built once on first use; the per-pair
  // order is fixed, which step-by-step accumulation relies on.
  std::span<const std::pair<std::uint32_t, std::uint32_t>> product_pairs(
      std::size_t ordinal) const;

 private:
  void build_pairs() const;

  int modes_ = 0;
  int max_order_ = 0;
  std::vector<MultiIndex> indices_;
  std::unordered_map<MultiIndex, std::size_t, MultiIndex::Hash> pos_;
  std::vector<std::size_t> grade_off_;

  mutable std::once_flag pairs_once_;
  mutable std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> pairs_;
};

// Ordered k-tuples (beta_1, ..., beta_k) of nonzero multi-indices with
// beta_1 + ... + beta_k == alpha, emitted in a fixed deterministic order.
void for_each_decomposition(
    const MultiIndex& alpha, int k,
    const std::function<void(std::span<const MultiIndex>)>& fn);

// N(alpha, k): number of tuples for_each_decomposition emits.
std::uint64_t count_decompositions(const MultiIndex& alpha, int k);

// beta with 0 < beta < alpha (componentwise <=, beta != 0, beta != alpha).
std::vector<MultiIndex> strict_sub_indices(const MultiIndex& alpha);

}  // namespace wickprop
