#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wickprop/diagnostics.hpp"
#include "wickprop/propagator.hpp"

namespace wickprop {

struct NormPair {
  double r = 2.0;
  double p = 0.0;
};

// A fully resolved run description. Parsing fills every optional with its
// default, so an echoed config re-parses to the same value.
struct RunConfig {
  // equation: fujita_gelfand, fisher_kpp, allen_cahn, newell_whitehead_segel,
  // log1p_heat, cos_cosh_heat, custom
  std::string equation = "fujita_gelfand";
  std::vector<double> phi_series;  // custom only: taylor coefficients of phi
  double phi_a = 2.0;              // fujita_gelfand a + b e^x, nws a u - b u^n
  double phi_b = -2.0;
  int phi_power = 3;  // newell_whitehead_segel exponent

  double nu = 1.0;  // diffusion
  double c = 0.0;   // constant reaction term of the linear part

  double x_min = -10.0;
  double x_max = 10.0;
  int n_x = 201;
  std::string bc = "dirichlet";  // periodic, dirichlet, neumann

  double horizon = 1.0;  // T
  double dt = 1e-3;
  int save_every = 0;  // < 1 keeps only the first and last snapshot

  int modes = 2;      // K
  int max_order = 2;  // N

  // initial: paper_31, gaussian_bump, constant
  std::string initial = "paper_31";
  double init_alpha_value = 1.0;  // rows with |alpha| >= 1
  double init_amplitude = 1.0;    // gaussian_bump
  double init_center = 0.0;
  double init_width = 1.0;
  double init_value = 0.0;  // constant

  // forcing: zero, deterministic, white_noise_modes
  std::string forcing = "zero";
  double force_amplitude = 1.0;
  double force_omega = 1.0;       // deterministic: A sin(omega t) cos(k x)
  double force_wavenumber = 0.0;  // deterministic spatial wavenumber

  std::vector<NormPair> norms{{2.0, 0.0}, {32.0, 3.0}};
  std::string spatial = "sup";  // spatial norm inside the weighted norms

  std::string output_dir = "out";
  std::uint64_t seed = 0;
};

// Strict parse: unknown keys, missing sections, wrong types, and
// out-of-range values all raise ConfigError. The horizon must be an
// integer number of steps within 1e-6 relative.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Canonical JSON echo of a resolved config; parse_config_text inverts it.
std::string config_json_text(const RunConfig& cfg);

struct BuiltProblem {
  ProblemSpec problem;
  // the run matches the closed-form anchor: canonical fujita_gelfand
  // coefficients, paper_31 initial data, zero forcing
  bool has_closed_form = false;
};
BuiltProblem build_problem(const RunConfig& cfg);

// u_0(t, x) of the closed-form anchor: -2 ln(1 + e^{-x-t}).
double fujita_gelfand_exact(double t, double x);

}  // namespace wickprop
