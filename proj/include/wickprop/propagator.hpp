#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wickprop/chaos.hpp"
#include "wickprop/pde.hpp"

namespace wickprop {

// Everything needed to integrate the coefficient system
//   d/dt u_0     = nu u_0'' + c u_0 + phi(u_0) + f_0,
//   d/dt u_alpha = nu u_alpha'' + c u_alpha + phi'(u_0) u_alpha
//                  + remainder_alpha + f_alpha     (|alpha| >= 1).
struct ProblemSpec {
  std::shared_ptr<const IndexSet> iset;
  Grid1D grid;
  LinearOperatorSpec op;
  AnalyticFunction phi;
  ChaosField initial;
  // Fills the coefficient family of f at time t; a null handle means f == 0
  // and is skipped without evaluation.
  std::function<void(double, ChaosField&)> forcing;
  // Endpoint data for the zero coefficient on dirichlet grids. Higher
  // coefficients keep their initial endpoint values.
  BoundaryValues dirichlet;
  double horizon = 1.0;
  double dt = 1e-3;

  void validate() const;  // throws ConfigError / ShapeError
};

struct SolutionBundle {
  std::vector<double> times;          // snapshot times, starting at 0
  std::vector<ChaosField> snapshots;  // aligned with times
  // running max over all completed steps of max_x |u_alpha(t, x)|, by ordinal
  std::vector<double> sup_table;
  double dt_effective = 0.0;
  long long steps_done = 0;
  long long steps_total = 0;
  bool blown_up = false;
  double blow_up_time = 0.0;
  std::string digest;  // parameter fingerprint, hex
};

// Ordinals in an order where every coefficient appears after everything it
// depends on; with graded enumeration this is the identity.
std::vector<std::size_t> dependency_order(const IndexSet& iset);

// Integrates the whole system with one graded sweep per step. Snapshots are
// kept at t = 0, after every save_every-th step, and at the final step;
// save_every < 1 keeps only the first and last. A blow-up stops the sweep
// and returns the completed prefix with blown_up set.
SolutionBundle solve(const ProblemSpec& problem, int save_every);

// Max deviation over steps, coefficients, and grid nodes between solve()
// and an independent one-equation-at-a-time integration of the same
// problem. For phi of degree <= 1 the remainder vanishes identically and
// both routes perform the same arithmetic, so the deviation is exactly 0.
double linear_crosscheck(const ProblemSpec& problem);

}  // namespace wickprop
