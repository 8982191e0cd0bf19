#include "wickprop/multiindex.hpp"

#include <cmath>
#include <limits>

#include "wickprop/errors.hpp"

namespace wickprop {

MultiIndex MultiIndex::unit(std::size_t modes, std::size_t mode) {
  MultiIndex a(modes);
  a.c_.at(mode) = 1;
  return a;
}

int MultiIndex::order() const {
  int s = 0;
  for (auto v : c_) s += static_cast<int>(v);
  return s;
}

bool MultiIndex::is_zero() const {
  for (auto v : c_)
    if (v != 0) return false;
  return true;
}

MultiIndex MultiIndex::plus(const MultiIndex& b) const {
  if (modes() != b.modes()) throw ShapeError("multi-index mode count mismatch");
  MultiIndex out(modes());
  for (std::size_t i = 0; i < c_.size(); ++i) out.c_[i] = c_[i] + b.c_[i];
  return out;
}

std::optional<MultiIndex> MultiIndex::minus(const MultiIndex& b) const {
  if (modes() != b.modes()) throw ShapeError("multi-index mode count mismatch");
  MultiIndex out(modes());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (b.c_[i] > c_[i]) return std::nullopt;
    out.c_[i] = c_[i] - b.c_[i];
  }
  return out;
}

bool MultiIndex::leq(const MultiIndex& b) const {
  if (modes() != b.modes()) throw ShapeError("multi-index mode count mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i] > b.c_[i]) return false;
  return true;
}

std::string MultiIndex::label() const {
  std::string s = "(";
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(c_[i]);
  }
  s += ')';
  return s;
}

std::size_t MultiIndex::Hash::operator()(const MultiIndex& a) const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < a.modes(); ++i) {
    std::uint32_t v = a[i];
    for (int b = 0; b < 4; ++b) {
      h ^= (v >> (8 * b)) & 0xffu;
      h *= 0x100000001b3ull;
    }
  }
  return static_cast<std::size_t>(h);
}

double log_factorial(const MultiIndex& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.modes(); ++i)
    s += std::lgamma(static_cast<double>(a[i]) + 1.0);
  return s;
}

double log_two_n_pow(const MultiIndex& a, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.modes(); ++i)
    if (a[i] != 0)
      s += static_cast<double>(a[i]) * std::log(2.0 * static_cast<double>(i + 1));
  return p * s;
}

bool LogWeight::finite() const { return std::isfinite(log_value); }

double LogWeight::exp_value() const { return std::exp(log_value); }

LogWeight log_superfactorial_weight(int order, double r) {
  if (order < 0) throw ShapeError("negative multi-index order");
  if (!(r > 0.0)) throw ConfigError("superfactorial base must be positive");
  const double n3 = static_cast<double>(order) * order * order;
  const double log_x = n3 * std::log(r);
  // x = r^{|alpha|^3}
  if (log_x > 709.0) return LogWeight{std::numeric_limits<double>::infinity()};
  const double x = std::exp(log_x);
  if (x <= 1e15) return LogWeight{std::lgamma(x + 1.0)};
  const double stirling =
      x * std::log(x) - x + 0.5 * std::log(2.0 * M_PI * x) + 1.0 / (12.0 * x);
  return LogWeight{stirling};
}

LogWeight log_superfactorial_weight(const MultiIndex& a, double r) {
  return log_superfactorial_weight(a.order(), r);
}

namespace {

std::uint64_t graded_cardinality(int modes, int max_order) {
  // C(modes + max_order, max_order), aborting early past the cap.
  std::uint64_t card = 1;
  for (int i = 1; i <= max_order; ++i) {
    card = card * (static_cast<std::uint64_t>(modes) + static_cast<std::uint64_t>(i)) /
           static_cast<std::uint64_t>(i);
    if (card > IndexSet::kMaxCardinality) return card;
  }
  return card;
}

void emit_grade(int modes, int grade, std::size_t pos, MultiIndex& cur,
                std::vector<MultiIndex>& out) {
  if (pos + 1 == static_cast<std::size_t>(modes)) {
    cur[pos] = static_cast<std::uint32_t>(grade);
    out.push_back(cur);
    return;
  }
  for (int v = grade; v >= 0; --v) {
    cur[pos] = static_cast<std::uint32_t>(v);
    emit_grade(modes, grade - v, pos + 1, cur, out);
  }
}

}  // namespace

IndexSet::IndexSet(int modes, int max_order) : modes_(modes), max_order_(max_order) {
  if (modes < 1) throw ConfigError("index set needs at least one mode");
  if (max_order < 0) throw ConfigError("index set max order must be >= 0");
  const std::uint64_t card = graded_cardinality(modes, max_order);
  if (card > kMaxCardinality)
    throw CapacityError("index set cardinality " + std::to_string(card) +
                        " exceeds cap " + std::to_string(kMaxCardinality));
  indices_.reserve(card);
  grade_off_.assign(static_cast<std::size_t>(max_order) + 2, 0);
  MultiIndex cur(static_cast<std::size_t>(modes));
  for (int g = 0; g <= max_order; ++g) {
    grade_off_[static_cast<std::size_t>(g)] = indices_.size();
    emit_grade(modes, g, 0, cur, indices_);
  }
  grade_off_[static_cast<std::size_t>(max_order) + 1] = indices_.size();
  pos_.reserve(indices_.size());
  for (std::size_t i = 0; i < indices_.size(); ++i) pos_.emplace(indices_[i], i);
}

std::size_t IndexSet::position(const MultiIndex& a) const {
  auto it = pos_.find(a);
  if (it == pos_.end())
    throw ShapeError("multi-index " + a.label() + " not in index set");
  return it->second;
}

std::optional<std::size_t> IndexSet::find(const MultiIndex& a) const {
  if (static_cast<int>(a.modes()) != modes_) return std::nullopt;
  auto it = pos_.find(a);
  if (it == pos_.end()) return std::nullopt;
  return it->second;
}

std::size_t IndexSet::grade_begin(int g) const {
  if (g < 0 || g > max_order_) throw ShapeError("grade out of range");
  return grade_off_[static_cast<std::size_t>(g)];
}

std::size_t IndexSet::grade_end(int g) const {
  if (g < 0 || g > max_order_) throw ShapeError("grade out of range");
  return grade_off_[static_cast<std::size_t>(g) + 1];
}

void IndexSet::build_pairs() const {
  pairs_.resize(indices_.size());
  for (std::size_t gi = 0; gi < indices_.size(); ++gi) {
    const MultiIndex& gamma = indices_[gi];
    // Odometer over beta <= gamma; keep each unordered pair once.
    MultiIndex beta(static_cast<std::size_t>(modes_));
    bool done = false;
    while (!done) {
      const std::size_t bi = position(beta);
      const std::size_t ci = position(*gamma.minus(beta));
      if (bi <= ci)
        pairs_[gi].emplace_back(static_cast<std::uint32_t>(bi),
                                static_cast<std::uint32_t>(ci));
      done = true;
      for (std::size_t k = 0; k < beta.modes(); ++k) {
        if (beta[k] < gamma[k]) {
          ++beta[k];
          for (std::size_t j = 0; j < k; ++j) beta[j] = 0;
          done = false;
          break;
        }
      }
    }
  }
}

std::span<const std::pair<std::uint32_t, std::uint32_t>> IndexSet::product_pairs(
    std::size_t ordinal) const {
  std::call_once(pairs_once_, [this] { build_pairs(); });
  return pairs_[ordinal];
}

namespace {

void decomp_rec(const MultiIndex& rest, int k, std::vector<MultiIndex>& parts,
                const std::function<void(std::span<const MultiIndex>)>& fn) {
  if (k == 1) {
    if (!rest.is_zero()) {
      parts.push_back(rest);
      fn(parts);
      parts.pop_back();
    }
    return;
  }
  // Nonzero beta <= rest leaving at least k-1 units for the remaining slots.
  const int budget = rest.order() - (k - 1);
  if (budget < 1) return;
  MultiIndex beta(rest.modes());
  while (true) {
    bool bumped = false;
    for (std::size_t j = 0; j < beta.modes(); ++j) {
      if (beta[j] < rest[j]) {
        ++beta[j];
        for (std::size_t i = 0; i < j; ++i) beta[i] = 0;
        bumped = true;
        break;
      }
    }
    if (!bumped) break;
    if (beta.order() > budget) continue;
    parts.push_back(beta);
    decomp_rec(*rest.minus(beta), k - 1, parts, fn);
    parts.pop_back();
  }
}

}  // namespace

void for_each_decomposition(
    const MultiIndex& alpha, int k,
    const std::function<void(std::span<const MultiIndex>)>& fn) {
  if (k < 1) return;
  std::vector<MultiIndex> parts;
  parts.reserve(static_cast<std::size_t>(k));
  decomp_rec(alpha, k, parts, fn);
}

std::uint64_t count_decompositions(const MultiIndex& alpha, int k) {
  std::uint64_t n = 0;
  for_each_decomposition(alpha, k, [&n](std::span<const MultiIndex>) { ++n; });
  return n;
}

std::vector<MultiIndex> strict_sub_indices(const MultiIndex& alpha) {
  std::vector<MultiIndex> out;
  MultiIndex beta(alpha.modes());
  while (true) {
    bool bumped = false;
    for (std::size_t j = 0; j < beta.modes(); ++j) {
      if (beta[j] < alpha[j]) {
        ++beta[j];
        for (std::size_t i = 0; i < j; ++i) beta[i] = 0;
        bumped = true;
        break;
      }
    }
    if (!bumped) break;
    if (beta == alpha) continue;
    out.push_back(beta);
  }
  return out;
}

}  // namespace wickprop
