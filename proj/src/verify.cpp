#include "wickprop/verify.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>

#include "wickprop/chaos.hpp"
#include "wickprop/diagnostics.hpp"
#include "wickprop/propagator.hpp"

namespace wickprop {

namespace {

// local uniform [-1, 1) stream, fixed seed, bit-stable
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() {
    return static_cast<double>(gen_() >> 11) * (2.0 / 9007199254740992.0) - 1.0;
  }

 private:
  std::mt19937_64 gen_;
};

ChaosField random_field(std::shared_ptr<const IndexSet> iset, std::size_t nx, Rng& rng,
                        double scale) {
  ChaosField f(iset, nx);
  for (double& v : f.flat()) v = scale * rng.uniform();
  return f;
}

double max_abs_diff(const ChaosField& a, const ChaosField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.flat().size(); ++i)
    m = std::max(m, std::abs(a.flat()[i] - b.flat()[i]));
  return m;
}

std::string dev_note(double dev, double tol) {
  std::ostringstream os;
  os << "max deviation " << dev << " (tolerance " << tol << ")";
  return os.str();
}

// literal recursive count of ordered nonzero decompositions, written apart
// from the library's enumerator on purpose
std::uint64_t literal_count(const MultiIndex& remaining, int slots) {
  if (slots == 1) return remaining.is_zero() ? 0 : 1;
  std::uint64_t total = 0;
  MultiIndex part(remaining.modes());
  // odometer over the box [0, remaining]
  while (true) {
    if (!part.is_zero()) {
      auto rest = remaining.minus(part);
      if (rest) total += literal_count(*rest, slots - 1);
    }
    std::size_t pos = 0;
    while (pos < part.modes()) {
      if (part[pos] < remaining[pos]) {
        ++part[pos];
        break;
      }
      part[pos] = 0;
      ++pos;
    }
    if (pos == part.modes()) break;
  }
  return total;
}

VerifyRow check_commutativity(std::shared_ptr<const IndexSet> iset, int seeds) {
  VerifyRow row{"wick_commutativity", false, ""};
  for (int s = 1; s <= seeds; ++s) {
    Rng rng(static_cast<std::uint64_t>(s));
    ChaosField f = random_field(iset, 3, rng, 1.0);
    ChaosField g = random_field(iset, 3, rng, 1.0);
    ChaosField fg = wick_product(f, g);
    ChaosField gf = wick_product(g, f);
    for (std::size_t i = 0; i < fg.flat().size(); ++i)
      if (fg.flat()[i] != gf.flat()[i]) {
        row.detail = "f*g and g*f differ in bits";
        return row;
      }
  }
  row.pass = true;
  row.detail = "bitwise equal across seeds";
  return row;
}

VerifyRow check_convolution_reference(std::shared_ptr<const IndexSet> iset, int seeds) {
  VerifyRow row{"wick_convolution_reference", false, ""};
  const double tol = 1e-13;
  double worst = 0.0;
  for (int s = 1; s <= seeds; ++s) {
    Rng rng(100 + static_cast<std::uint64_t>(s));
    ChaosField f = random_field(iset, 3, rng, 1.0);
    ChaosField g = random_field(iset, 3, rng, 1.0);
    ChaosField fg = wick_product(f, g);
    ChaosField ref(iset, 3);
    for (std::size_t gi = 0; gi < iset->size(); ++gi) {
      auto out = ref.coeff(gi);
      for (std::size_t bi = 0; bi < iset->size(); ++bi) {
        auto rest = iset->at(gi).minus(iset->at(bi));
        if (!rest) continue;
        std::size_t ri = iset->position(*rest);
        auto fb = f.coeff(bi);
        auto gr = g.coeff(ri);
        for (std::size_t x = 0; x < out.size(); ++x) out[x] += fb[x] * gr[x];
      }
    }
    worst = std::max(worst, max_abs_diff(fg, ref));
  }
  row.pass = worst <= tol;
  row.detail = dev_note(worst, tol);
  return row;
}

VerifyRow check_associativity(std::shared_ptr<const IndexSet> iset, int seeds) {
  VerifyRow row{"wick_associativity", false, ""};
  const double tol = 1e-12;
  double worst = 0.0;
  for (int s = 1; s <= seeds; ++s) {
    Rng rng(200 + static_cast<std::uint64_t>(s));
    ChaosField f = random_field(iset, 3, rng, 1.0);
    ChaosField g = random_field(iset, 3, rng, 1.0);
    ChaosField h = random_field(iset, 3, rng, 1.0);
    worst = std::max(worst, max_abs_diff(wick_product(wick_product(f, g), h),
                                         wick_product(f, wick_product(g, h))));
  }
  row.pass = worst <= tol;
  row.detail = dev_note(worst, tol);
  return row;
}

VerifyRow check_distributivity(std::shared_ptr<const IndexSet> iset, int seeds) {
  VerifyRow row{"wick_distributivity", false, ""};
  const double tol = 1e-13;
  double worst = 0.0;
  for (int s = 1; s <= seeds; ++s) {
    Rng rng(300 + static_cast<std::uint64_t>(s));
    ChaosField f = random_field(iset, 3, rng, 1.0);
    ChaosField g = random_field(iset, 3, rng, 1.0);
    ChaosField h = random_field(iset, 3, rng, 1.0);
    ChaosField gh(iset, 3);
    for (std::size_t i = 0; i < gh.flat().size(); ++i)
      gh.flat()[i] = g.flat()[i] + h.flat()[i];
    ChaosField lhs = wick_product(f, gh);
    ChaosField fg = wick_product(f, g);
    ChaosField fh = wick_product(f, h);
    double m = 0.0;
    for (std::size_t i = 0; i < lhs.flat().size(); ++i)
      m = std::max(m, std::abs(lhs.flat()[i] - fg.flat()[i] - fh.flat()[i]));
    worst = std::max(worst, m);
  }
  row.pass = worst <= tol;
  row.detail = dev_note(worst, tol);
  return row;
}

VerifyRow check_expectation(std::shared_ptr<const IndexSet> iset, int seeds) {
  VerifyRow row{"expectation_factorization", false, ""};
  for (int s = 1; s <= seeds; ++s) {
    Rng rng(400 + static_cast<std::uint64_t>(s));
    ChaosField f = random_field(iset, 3, rng, 1.0);
    ChaosField g = random_field(iset, 3, rng, 1.0);
    ChaosField fg = wick_product(f, g);
    auto f0 = f.coeff(0);
    auto g0 = g.coeff(0);
    auto p0 = fg.coeff(0);
    for (std::size_t x = 0; x < p0.size(); ++x)
      if (p0[x] != f0[x] * g0[x]) {
        row.detail = "zero coefficient is not the plain product";
        return row;
      }
  }
  row.pass = true;
  row.detail = "exact across seeds";
  return row;
}

VerifyRow check_decomposition_counts(const IndexSet& iset) {
  VerifyRow row{"decomposition_count_reference", false, ""};
  for (std::size_t i = 0; i < iset.size(); ++i) {
    const MultiIndex& a = iset.at(i);
    for (int k = 2; k <= a.order(); ++k)
      if (count_decompositions(a, k) != literal_count(a, k)) {
        row.detail = "mismatch at alpha=" + a.label() + " k=" + std::to_string(k);
        return row;
      }
  }
  row.pass = true;
  row.detail = "library count equals the literal recursion everywhere";
  return row;
}

VerifyRow check_combinatorial_bound(const IndexSet& iset) {
  VerifyRow row{"combinatorial_bound", false, ""};
  for (std::size_t i = 0; i < iset.size(); ++i) {
    const MultiIndex& a = iset.at(i);
    for (int k = 2; k <= a.order(); ++k) {
      long double bound = std::pow(2.0L, static_cast<long double>(k) * a.order());
      if (static_cast<long double>(count_decompositions(a, k)) > bound) {
        row.detail = "bound violated at alpha=" + a.label() + " k=" + std::to_string(k);
        return row;
      }
    }
  }
  row.pass = true;
  row.detail = "N(alpha,k) <= 2^(k|alpha|) everywhere";
  return row;
}

VerifyRow check_split_vs_direct(std::shared_ptr<const IndexSet> iset, int seeds) {
  VerifyRow row{"series_split_vs_direct", false, ""};
  const double tol = 1e-9;
  const AnalyticFunction phis[] = {analytic::exp_family(2.0, -2.0),
                                   analytic::polynomial({0.0, 1.0, 0.0, -1.0}),
                                   analytic::cos_cosh_mean()};
  double worst = 0.0;
  for (const AnalyticFunction& phi : phis)
    for (int s = 1; s <= seeds; ++s) {
      Rng rng(500 + static_cast<std::uint64_t>(s));
      ChaosField u = random_field(iset, 3, rng, 0.4);
      ChaosField split = wick_analytic(phi, u);
      DirectExpansion direct = wick_analytic_direct(phi, u, 40);
      double dev = max_abs_diff(split, direct.field);
      if (!(dev <= tol + direct.tail_bound)) {
        row.detail = "deviation " + std::to_string(dev) + " for " + phi.name();
        return row;
      }
      worst = std::max(worst, dev);
    }
  row.pass = true;
  row.detail = dev_note(worst, tol);
  return row;
}

VerifyRow check_linear_crosscheck(std::shared_ptr<const IndexSet> iset) {
  VerifyRow row{"linear_crosscheck", false, ""};
  const BoundaryKind kinds[] = {BoundaryKind::periodic, BoundaryKind::dirichlet,
                                BoundaryKind::neumann};
  for (BoundaryKind bc : kinds) {
    ProblemSpec p;
    p.iset = iset;
    p.grid = Grid1D{-1.0, 1.0, 13, bc};
    p.op = LinearOperatorSpec{0.4, -0.2};
    p.phi = analytic::polynomial({0.0, 0.8});
    p.horizon = 0.1;
    p.dt = 0.01;
    std::size_t nx = p.grid.size();
    p.initial = ChaosField(iset, nx);
    for (std::size_t a = 0; a < iset->size(); ++a)
      for (std::size_t i = 0; i < nx; ++i)
        p.initial.coeff(a)[i] =
            std::sin(0.5 * static_cast<double>(a) + static_cast<double>(i));
    p.forcing = [](double t, ChaosField& f) {
      for (std::size_t a = 0; a < f.index_set().size(); ++a) {
        double v = 0.3 * std::cos(t + static_cast<double>(a));
        for (double& x : f.coeff(a)) x = v;
      }
    };
    if (bc == BoundaryKind::dirichlet)
      p.dirichlet = [](double t, Side side) {
        return side == Side::left ? 0.2 * std::sin(t) : -0.1;
      };
    double dev = linear_crosscheck(p);
    if (dev != 0.0) {
      row.detail = "deviation " + std::to_string(dev) + " for one boundary kind";
      return row;
    }
  }
  row.pass = true;
  row.detail = "deviation exactly 0 for all boundary kinds";
  return row;
}

VerifyRow check_norm_nesting(std::shared_ptr<const IndexSet> iset, int seeds) {
  VerifyRow row{"norm_nesting", false, ""};
  const double slack = 1e-12;
  for (int s = 1; s <= seeds; ++s) {
    Rng rng(600 + static_cast<std::uint64_t>(s));
    ChaosField f = random_field(iset, 4, rng, 1.0);
    const double ps[] = {0.0, 0.5, 1.5, 3.0};
    for (std::size_t i = 1; i < 4; ++i)
      if (fs_norm(f, 2.0, ps[i]) > fs_norm(f, 2.0, ps[i - 1]) + slack) {
        row.detail = "norm grew with p";
        return row;
      }
    const double rs[] = {2.0, 4.0, 16.0, 32.0};
    for (std::size_t i = 1; i < 4; ++i)
      if (fs_norm(f, rs[i], 1.0) > fs_norm(f, rs[i - 1], 1.0) + slack) {
        row.detail = "norm grew with r";
        return row;
      }
  }
  row.pass = true;
  row.detail = "non-increasing along p and r chains";
  return row;
}

}  // namespace

std::vector<VerifyRow> run_verification(bool full) {
  const int modes = full ? 4 : 3;
  const int order = full ? 5 : 3;
  const int seeds = full ? 20 : 12;
  auto iset = std::make_shared<IndexSet>(modes, order);

  std::vector<VerifyRow> rows;
  rows.push_back(check_commutativity(iset, seeds));
  rows.push_back(check_convolution_reference(iset, seeds));
  rows.push_back(check_associativity(iset, seeds));
  rows.push_back(check_distributivity(iset, seeds));
  rows.push_back(check_expectation(iset, seeds));
  rows.push_back(check_decomposition_counts(*iset));
  rows.push_back(check_combinatorial_bound(*iset));
  rows.push_back(check_split_vs_direct(iset, full ? 8 : 5));
  rows.push_back(check_linear_crosscheck(iset));
  rows.push_back(check_norm_nesting(iset, seeds));
  return rows;
}

bool all_passed(const std::vector<VerifyRow>& rows) {
  for (const VerifyRow& r : rows)
    if (!r.pass) return false;
  return true;
}

}  // namespace wickprop
