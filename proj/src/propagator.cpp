#include "wickprop/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include "wickprop/errors.hpp"
#include "wickprop/util.hpp"

namespace wickprop {

namespace {

bool row_in_range(std::span<const double> row) {
  for (double v : row)
    if (std::isnan(v) || std::abs(v) > 1e12) return false;
  return true;
}

std::string fingerprint(const ProblemSpec& p, long long steps) {
  std::string s;
  s += p.phi.name();
  for (double v : {p.grid.x_min, p.grid.x_max, p.op.diffusion, p.op.reaction_const,
                   p.horizon, p.dt})
    s += "|" + format_double(v);
  s += "|" + std::to_string(p.grid.n_points) + "|" +
       std::to_string(static_cast<int>(p.grid.bc)) + "|" +
       std::to_string(p.iset->modes()) + "|" + std::to_string(p.iset->max_order()) +
       "|" + std::to_string(steps);
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fnv1a64(s)));
  return std::string(hex);
}

}  // namespace

void ProblemSpec::validate() const {
  if (!iset) throw ConfigError("problem needs an index set");
  grid.validate();
  if (!phi.valid()) throw ConfigError("problem needs a reaction function");
  if (initial.index_set_ptr().get() != iset.get() || initial.nx() != grid.size())
    throw ShapeError("initial data does not match index set and grid");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw ConfigError("horizon must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (dt > horizon * (1.0 + 1e-12)) throw ConfigError("dt exceeds the horizon");
  if (op.diffusion < 0.0) throw ConfigError("diffusion must be >= 0");
  if (grid.bc == BoundaryKind::dirichlet && !dirichlet)
    throw ConfigError("dirichlet grid needs endpoint data");
}

std::vector<std::size_t> dependency_order(const IndexSet& iset) {
  std::vector<std::size_t> order(iset.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  return order;
}

SolutionBundle solve(const ProblemSpec& p, int save_every) {
  p.validate();
  const IndexSet& iset = *p.iset;
  const std::size_t n_coeff = iset.size();
  const std::size_t nx = p.grid.size();
  const int top_grade = iset.max_order();

  SolutionBundle out;
  out.steps_total = std::max<long long>(1, std::llround(p.horizon / p.dt));
  const double dt = p.horizon / static_cast<double>(out.steps_total);
  out.dt_effective = dt;
  out.digest = fingerprint(p, out.steps_total);
  const long long cadence =
      save_every < 1 ? out.steps_total : static_cast<long long>(save_every);

  // frozen endpoint values for higher coefficients on dirichlet grids
  std::vector<std::pair<double, double>> edges(n_coeff, {0.0, 0.0});
  if (p.grid.bc == BoundaryKind::dirichlet)
    for (std::size_t a = 0; a < n_coeff; ++a)
      edges[a] = {p.initial.coeff(a).front(), p.initial.coeff(a).back()};

  ChaosField cur = p.initial;
  ChaosField next = cur;
  ChaosField mid = cur;    // row 0 and completed grades hold step midpoints
  ChaosField tilde = cur;  // deflated copy of mid, kept in lockstep
  std::fill(tilde.coeff(0).begin(), tilde.coeff(0).end(), 0.0);
  ChaosField fmid(p.iset, nx);
  std::vector<ChaosField> powers;  // powers[k] = tilde^{◊k}, k >= 2 used
  for (int k = 0; k <= top_grade; ++k) powers.emplace_back(p.iset, nx);
  std::vector<std::vector<double>> cgrids(
      static_cast<std::size_t>(top_grade) + 1, std::vector<double>(nx, 0.0));
  std::vector<double> u0mid(nx), diagphi(nx);

  out.sup_table.assign(n_coeff, 0.0);
  auto absorb_sup = [&](const ChaosField& f) {
    for (std::size_t a = 0; a < n_coeff; ++a) {
      double m = out.sup_table[a];
      for (double v : f.coeff(a)) m = std::max(m, std::abs(v));
      out.sup_table[a] = m;
    }
  };
  absorb_sup(cur);
  out.times.push_back(0.0);
  out.snapshots.push_back(cur);

  std::function<void(double, std::span<double>)> f0;
  if (p.forcing)
    f0 = [&](double at, std::span<double> buf) {
      p.forcing(at, fmid);
      std::span<const double> row = fmid.coeff(0);
      std::copy(row.begin(), row.end(), buf.begin());
    };

  for (long long s = 0; s < out.steps_total; ++s) {
    const double t = dt * static_cast<double>(s);
    const double t_next = dt * static_cast<double>(s + 1);
    const double t_mid = t + 0.5 * dt;
    try {
      std::vector<double> new0 =
          advance_nonlinear(cur.coeff(0), t, dt, p.op, p.phi, f0, p.grid, p.dirichlet);
      std::span<const double> old0 = cur.coeff(0);
      for (std::size_t i = 0; i < nx; ++i) {
        u0mid[i] = 0.5 * (old0[i] + new0[i]);
        diagphi[i] = p.phi.derivative(1, u0mid[i]);
      }
      std::copy(new0.begin(), new0.end(), next.coeff(0).begin());
      std::copy(u0mid.begin(), u0mid.end(), mid.coeff(0).begin());

      if (p.forcing) p.forcing(t_mid, fmid);
      for (int k = 2; k <= top_grade; ++k) {
        const double inv_kfact = std::exp(-std::lgamma(k + 1.0));
        for (std::size_t i = 0; i < nx; ++i)
          cgrids[static_cast<std::size_t>(k)][i] =
              p.phi.derivative(k, u0mid[i]) * inv_kfact;
      }

      for (int grade = 1; grade <= top_grade; ++grade) {
        const std::size_t lo = iset.grade_begin(grade);
        const std::size_t hi = iset.grade_end(grade);
        if (grade >= 2) {
          wick_product_rows(tilde, tilde, powers[2], lo, hi);
          for (int k = 3; k <= grade; ++k)
            wick_product_rows(powers[static_cast<std::size_t>(k) - 1], tilde,
                              powers[static_cast<std::size_t>(k)], lo, hi);
        }
        parallel_for(hi - lo, [&](std::size_t w) {
          const std::size_t a = lo + w;
          std::vector<double> src(nx, 0.0);
          if (p.forcing) {
            std::span<const double> fa = fmid.coeff(a);
            std::copy(fa.begin(), fa.end(), src.begin());
          }
          for (int k = 2; k <= grade; ++k) {
            std::span<const double> pk = powers[static_cast<std::size_t>(k)].coeff(a);
            std::span<const double> ck = cgrids[static_cast<std::size_t>(k)];
            for (std::size_t i = 0; i < nx; ++i) src[i] += ck[i] * pk[i];
          }
          BoundaryValues bd;
          if (p.grid.bc == BoundaryKind::dirichlet) {
            const auto [el, er] = edges[a];
            bd = [el, er](double, Side side) { return side == Side::left ? el : er; };
          }
          std::vector<double> stepped =
              imex_step(cur.coeff(a), t, dt, p.op, diagphi, src, p.grid, bd);
          std::span<double> na = next.coeff(a);
          std::span<double> ma = mid.coeff(a);
          std::span<double> ta = tilde.coeff(a);
          std::span<const double> ca = cur.coeff(a);
          for (std::size_t i = 0; i < nx; ++i) {
            na[i] = stepped[i];
            ma[i] = 0.5 * (ca[i] + stepped[i]);
            ta[i] = ma[i];
          }
        });
      }

      bool ok = true;
      for (std::size_t a = 0; a < n_coeff && ok; ++a) ok = row_in_range(next.coeff(a));
      if (!ok) {
        out.blown_up = true;
        out.blow_up_time = t_next;
        break;
      }
    } catch (const BlowUpError& e) {
      out.blown_up = true;
      out.blow_up_time = e.t;
      break;
    }

    std::swap(cur, next);
    out.steps_done = s + 1;
    absorb_sup(cur);
    if ((s + 1) % cadence == 0 || s + 1 == out.steps_total) {
      out.times.push_back(t_next);
      out.snapshots.push_back(cur);
    }
  }
  return out;
}

double linear_crosscheck(const ProblemSpec& p) {
  SolutionBundle full = solve(p, 1);
  const IndexSet& iset = *p.iset;
  const std::size_t nx = p.grid.size();
  const long long steps = full.steps_done;
  const double dt = full.dt_effective;

  std::function<void(double, std::span<double>)> f0;
  ChaosField fbuf(p.iset, nx);
  if (p.forcing)
    f0 = [&](double at, std::span<double> buf) {
      p.forcing(at, fbuf);
      std::span<const double> row = fbuf.coeff(0);
      std::copy(row.begin(), row.end(), buf.begin());
    };

  // zero-coefficient trajectory, one equation on its own
  std::vector<std::vector<double>> u0;
  u0.reserve(static_cast<std::size_t>(steps) + 1);
  u0.emplace_back(p.initial.coeff(0).begin(), p.initial.coeff(0).end());
  for (long long s = 0; s < steps; ++s)
    u0.push_back(advance_nonlinear(u0.back(), dt * static_cast<double>(s), dt, p.op,
                                   p.phi, f0, p.grid, p.dirichlet));

  double dev = 0.0;
  auto track = [&](std::span<const double> a, std::span<const double> b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      dev = std::max(dev, std::abs(a[i] - b[i]));
  };
  for (long long s = 0; s <= steps; ++s)
    track(u0[static_cast<std::size_t>(s)],
          full.snapshots[static_cast<std::size_t>(s)].coeff(0));

  std::vector<double> diagphi(nx), src(nx);
  for (std::size_t a = 1; a < iset.size(); ++a) {
    std::vector<double> v(p.initial.coeff(a).begin(), p.initial.coeff(a).end());
    BoundaryValues bd;
    if (p.grid.bc == BoundaryKind::dirichlet) {
      const double el = v.front(), er = v.back();
      bd = [el, er](double, Side side) { return side == Side::left ? el : er; };
    }
    for (long long s = 0; s < steps; ++s) {
      const double t = dt * static_cast<double>(s);
      const auto& prev = u0[static_cast<std::size_t>(s)];
      const auto& curr = u0[static_cast<std::size_t>(s) + 1];
      for (std::size_t i = 0; i < nx; ++i)
        diagphi[i] = p.phi.derivative(1, 0.5 * (prev[i] + curr[i]));
      if (p.forcing) {
        p.forcing(t + 0.5 * dt, fbuf);
        std::span<const double> fa = fbuf.coeff(a);
        std::copy(fa.begin(), fa.end(), src.begin());
      } else {
        std::fill(src.begin(), src.end(), 0.0);
      }
      v = imex_step(v, t, dt, p.op, diagphi, src, p.grid, bd);
      track(v, full.snapshots[static_cast<std::size_t>(s) + 1].coeff(a));
    }
  }
  return dev;
}

}  // namespace wickprop
