#include "wickprop/pde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wickprop/errors.hpp"

namespace wickprop {

void Grid1D::validate() const {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || x_max <= x_min)
    throw ConfigError("grid needs finite x_min < x_max");
  const int min_points = bc == BoundaryKind::periodic ? 4 : 3;
  if (n_points < min_points)
    throw ConfigError("grid needs at least " + std::to_string(min_points) +
                      " points for this boundary kind");
}

std::vector<double> laplacian(std::span<const double> u, const Grid1D& grid) {
  const std::size_t n = grid.size();
  if (u.size() != n) throw ShapeError("laplacian input does not match grid size");
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i)
    out[i] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * inv_h2;
  switch (grid.bc) {
    case BoundaryKind::periodic:
      out[0] = (u[n - 1] - 2.0 * u[0] + u[1]) * inv_h2;
      out[n - 1] = (u[n - 2] - 2.0 * u[n - 1] + u[0]) * inv_h2;
      break;
    case BoundaryKind::neumann:
      out[0] = (2.0 * u[1] - 2.0 * u[0]) * inv_h2;
      out[n - 1] = (2.0 * u[n - 2] - 2.0 * u[n - 1]) * inv_h2;
      break;
    case BoundaryKind::dirichlet:
      break;  // prescribed endpoints stay zero
  }
  return out;
}

namespace {

double band_scale(std::span<const double> lower, std::span<const double> diag,
                  std::span<const double> upper) {
  double s = 0.0;
  for (double v : lower) s = std::max(s, std::abs(v));
  for (double v : diag) s = std::max(s, std::abs(v));
  for (double v : upper) s = std::max(s, std::abs(v));
  return s;
}

// Thomas elimination; pivots checked against scale.
std::vector<double> thomas(std::span<const double> lower, std::span<const double> diag,
                           std::span<const double> upper, std::span<const double> rhs,
                           double scale) {
  const std::size_t n = diag.size();
  std::vector<double> c(n, 0.0), x(n, 0.0);
  double piv = diag[0];
  if (std::abs(piv) <= 1e-14 * scale) throw SolverError("tridiagonal pivot underflow");
  c[0] = upper[0] / piv;
  x[0] = rhs[0] / piv;
  for (std::size_t i = 1; i < n; ++i) {
    piv = diag[i] - lower[i] * c[i - 1];
    if (std::abs(piv) <= 1e-14 * scale)
      throw SolverError("tridiagonal pivot underflow at row " + std::to_string(i));
    c[i] = upper[i] / piv;
    x[i] = (rhs[i] - lower[i] * x[i - 1]) / piv;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

}  // namespace

std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs, bool cyclic) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n)
    throw ShapeError("tridiagonal band sizes disagree");
  if (n == 0) return {};
  const double scale = std::max(band_scale(lower, diag, upper),
                                std::numeric_limits<double>::min());
  if (!cyclic) {
    if (n == 1) {
      if (std::abs(diag[0]) <= 1e-14 * scale)
        throw SolverError("tridiagonal pivot underflow");
      return {rhs[0] / diag[0]};
    }
    return thomas(lower, diag, upper, rhs, scale);
  }
  if (n < 3) throw ShapeError("cyclic solve needs at least 3 unknowns");

  // Sherman-Morrison: peel the two corner entries off as a rank-one update.
  const double corner_top = lower[0];     // M[0][n-1]
  const double corner_bot = upper[n - 1];  // M[n-1][0]
  const double gamma = -diag[0];
  if (std::abs(gamma) <= 1e-14 * scale)
    throw SolverError("cyclic pivot underflow at corner row");
  std::vector<double> d(diag.begin(), diag.end());
  d[0] -= gamma;
  d[n - 1] -= corner_top * corner_bot / gamma;
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = corner_bot;
  std::vector<double> y = thomas(lower, d, upper, rhs, scale);
  std::vector<double> z = thomas(lower, d, upper, u, scale);
  const double vy = y[0] + corner_top / gamma * y[n - 1];
  const double vz = 1.0 + z[0] + corner_top / gamma * z[n - 1];
  if (std::abs(vz) <= 1e-14) throw SolverError("cyclic correction underflow");
  const double factor = vy / vz;
  for (std::size_t i = 0; i < n; ++i) y[i] -= factor * z[i];
  return y;
}

std::vector<double> imex_step(std::span<const double> state, double t, double dt,
                              const LinearOperatorSpec& op,
                              std::span<const double> diag_field,
                              std::span<const double> source, const Grid1D& grid,
                              const BoundaryValues& dirichlet) {
  grid.validate();
  const std::size_t n = grid.size();
  if (state.size() != n || diag_field.size() != n || source.size() != n)
    throw ShapeError("imex step operand sizes do not match grid");
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw ConfigError("imex step needs dt >= 0");
  if (op.diffusion < 0.0) throw ConfigError("diffusion must be >= 0");
  if (grid.bc == BoundaryKind::dirichlet && !dirichlet)
    throw ConfigError("dirichlet grid needs boundary data");
  if (dt == 0.0) return std::vector<double>(state.begin(), state.end());

  const double h = grid.spacing();
  const double a = op.diffusion * dt / (2.0 * h * h);
  auto m = [&](std::size_t i) { return 0.5 * dt * (op.reaction_const + diag_field[i]); };

  if (grid.bc == BoundaryKind::periodic) {
    std::vector<double> lo(n, -a), di(n), up(n, -a), rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t im = (i == 0) ? n - 1 : i - 1;
      const std::size_t ip = (i + 1 == n) ? 0 : i + 1;
      di[i] = 1.0 + 2.0 * a - m(i);
      rhs[i] = state[i] + a * (state[im] - 2.0 * state[i] + state[ip]) +
               m(i) * state[i] + dt * source[i];
    }
    return solve_tridiagonal(lo, di, up, rhs, true);
  }

  if (grid.bc == BoundaryKind::neumann) {
    std::vector<double> lo(n, -a), di(n), up(n, -a), rhs(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      di[i] = 1.0 + 2.0 * a - m(i);
      rhs[i] = state[i] + a * (state[i - 1] - 2.0 * state[i] + state[i + 1]) +
               m(i) * state[i] + dt * source[i];
    }
    di[0] = 1.0 + 2.0 * a - m(0);
    up[0] = -2.0 * a;
    lo[0] = 0.0;
    rhs[0] = state[0] + a * (2.0 * state[1] - 2.0 * state[0]) + m(0) * state[0] +
             dt * source[0];
    di[n - 1] = 1.0 + 2.0 * a - m(n - 1);
    lo[n - 1] = -2.0 * a;
    up[n - 1] = 0.0;
    rhs[n - 1] = state[n - 1] + a * (2.0 * state[n - 2] - 2.0 * state[n - 1]) +
                 m(n - 1) * state[n - 1] + dt * source[n - 1];
    return solve_tridiagonal(lo, di, up, rhs, false);
  }

  // dirichlet: interior unknowns 1..n-2, endpoints prescribed at t + dt
  const std::size_t mi = n - 2;
  std::vector<double> lo(mi, -a), di(mi), up(mi, -a), rhs(mi);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    di[i - 1] = 1.0 + 2.0 * a - m(i);
    rhs[i - 1] = state[i] + a * (state[i - 1] - 2.0 * state[i] + state[i + 1]) +
                 m(i) * state[i] + dt * source[i];
  }
  const double gl = dirichlet(t + dt, Side::left);
  const double gr = dirichlet(t + dt, Side::right);
  rhs[0] += a * gl;
  rhs[mi - 1] += a * gr;
  lo[0] = 0.0;
  up[mi - 1] = 0.0;
  std::vector<double> inner = solve_tridiagonal(lo, di, up, rhs, false);
  std::vector<double> out(n);
  out[0] = gl;
  std::copy(inner.begin(), inner.end(), out.begin() + 1);
  out[n - 1] = gr;
  return out;
}

std::vector<double> advance_nonlinear(
    std::span<const double> state, double t, double dt, const LinearOperatorSpec& op,
    const AnalyticFunction& phi,
    const std::function<void(double, std::span<double>)>& forcing, const Grid1D& grid,
    const BoundaryValues& dirichlet) {
  grid.validate();
  const std::size_t n = grid.size();
  if (state.size() != n) throw ShapeError("state size does not match grid");
  if (!phi.valid()) throw ConfigError("missing reaction function");

  std::vector<double> fbuf(n, 0.0);
  auto eval_rhs = [&](std::span<const double> u, double at, std::vector<double>& out) {
    if (forcing) forcing(at, fbuf);
    for (std::size_t i = 0; i < n; ++i)
      out[i] = phi.derivative(0, u[i]) + (forcing ? fbuf[i] : 0.0);
  };

  const std::vector<double> zero_diag(n, 0.0);
  std::vector<double> src_old(n), src_new(n), src_mid(n);
  eval_rhs(state, t, src_old);
  std::vector<double> pred = imex_step(state, t, dt, op, zero_diag, src_old, grid, dirichlet);
  eval_rhs(pred, t + dt, src_new);
  for (std::size_t i = 0; i < n; ++i) src_mid[i] = 0.5 * (src_old[i] + src_new[i]);
  std::vector<double> next = imex_step(state, t, dt, op, zero_diag, src_mid, grid, dirichlet);

  for (double v : next) {
    if (std::isnan(v) || std::abs(v) > 1e12)
      throw BlowUpError(t + dt, "time stepping left the stable range at t = " +
                                    std::to_string(t + dt));
  }
  return next;
}

}  // namespace wickprop
