#pragma once

#include <functional>
#include <span>
#include <vector>

#include "wickprop/analytic.hpp"

namespace wickprop {

enum class BoundaryKind { periodic, dirichlet, neumann };

// Uniform 1D grid on [x_min, x_max]. Periodic grids drop the duplicate right
// endpoint, so size() counts distinct unknowns.
struct Grid1D {
  double x_min = 0.0;
  double x_max = 1.0;
  int n_points = 3;  // nodes including both endpoints
  BoundaryKind bc = BoundaryKind::periodic;

  double spacing() const { return (x_max - x_min) / (n_points - 1); }
  std::size_t size() const {
    return bc == BoundaryKind::periodic ? static_cast<std::size_t>(n_points - 1)
                                        : static_cast<std::size_t>(n_points);
  }
  double node(std::size_t i) const { return x_min + spacing() * static_cast<double>(i); }
  void validate() const;  // throws ConfigError
};

// nu u_xx + c u
struct LinearOperatorSpec {
  double diffusion = 1.0;
  double reaction_const = 0.0;
};

enum class Side { left, right };

// Time-dependent Dirichlet endpoint data; unused for other boundary kinds.
using BoundaryValues = std::function<double(double t, Side side)>;

// Central second difference closed per the grid's boundary kind. Dirichlet
// rows at the prescribed endpoints are returned as zero: those nodes do not
// evolve.
std::vector<double> laplacian(std::span<const double> u, const Grid1D& grid);

// Solves M x = rhs for tridiagonal M with bands (lower, diag, upper); row i
// reads lower[i] x_{i-1} + diag[i] x_i + upper[i] x_{i+1}. With cyclic set,
// lower[0] is M[0][n-1] and upper[n-1] is M[n-1][0]. Near-zero pivots raise
// SolverError. For diagonally dominant M the residual satisfies
// max|M x - rhs| <= 1e-10 max|rhs|.
std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs, bool cyclic);

// One Crank-Nicolson step of u_t = nu u_xx + c u + d(x) u + source(x) with
// the whole linear part implicit: (I - dt/2 L) u_new = (I + dt/2 L) u_old
// + dt source. d and source are frozen over the step; callers supply
// midpoint values for second order. dt = 0 copies the state. Dirichlet
// endpoints of the result are set to data(t + dt).
std::vector<double> imex_step(std::span<const double> state, double t, double dt,
                              const LinearOperatorSpec& op,
                              std::span<const double> diag_field,
                              std::span<const double> source, const Grid1D& grid,
                              const BoundaryValues& dirichlet = {});

// One step of u_t = nu u_xx + c u + phi(u) + f0(t, x): Crank-Nicolson on the
// linear part, Heun (trapezoidal with a stabilized predictor) on phi and f0.
// forcing, when non-null, fills its buffer with f0(t, .). Values past 1e12
// in magnitude or NaN raise BlowUpError.
std::vector<double> advance_nonlinear(
    std::span<const double> state, double t, double dt, const LinearOperatorSpec& op,
    const AnalyticFunction& phi,
    const std::function<void(double, std::span<double>)>& forcing, const Grid1D& grid,
    const BoundaryValues& dirichlet = {});

}  // namespace wickprop
