#include "wickprop/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "wickprop/errors.hpp"

namespace wickprop {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

const std::set<std::string> kEquations = {
    "fujita_gelfand", "fisher_kpp",   "allen_cahn", "newell_whitehead_segel",
    "log1p_heat",     "cos_cosh_heat", "custom"};
const std::set<std::string> kInitials = {"paper_31", "gaussian_bump", "constant"};
const std::set<std::string> kForcings = {"zero", "deterministic", "white_noise_modes"};
const std::set<std::string> kBoundaries = {"periodic", "dirichlet", "neumann"};

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.contains(it.key())) fail("unknown key '" + it.key() + "' in " + where);
}

const json* find(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double need_number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where + " must be a number");
  return j.get<double>();
}

double number_or(const json& obj, const std::string& key, const std::string& where,
                 double fallback) {
  const json* j = find(obj, key);
  return j ? need_number(*j, where + "." + key) : fallback;
}

int integer_or(const json& obj, const std::string& key, const std::string& where,
               int fallback) {
  const json* j = find(obj, key);
  if (!j) return fallback;
  if (!j->is_number_integer()) fail(where + "." + key + " must be an integer");
  return j->get<int>();
}

std::string string_or(const json& obj, const std::string& key, const std::string& where,
                      const std::string& fallback) {
  const json* j = find(obj, key);
  if (!j) return fallback;
  if (!j->is_string()) fail(where + "." + key + " must be a string");
  return j->get<std::string>();
}

const json& need_object(const json& root, const std::string& key) {
  const json* j = find(root, key);
  if (!j) fail("missing section '" + key + "'");
  if (!j->is_object()) fail("section '" + key + "' must be an object");
  return *j;
}

void parse_phi(const json& root, RunConfig& cfg) {
  const json* phi = find(root, "phi");
  if (cfg.equation == "custom") {
    if (!phi || !phi->is_object()) fail("equation 'custom' needs a phi object");
    reject_unknown(*phi, "phi", {"series"});
    const json* series = find(*phi, "series");
    if (!series || !series->is_array() || series->empty())
      fail("phi.series must be a non-empty array of coefficients");
    if (series->size() > 21) fail("phi.series is capped at degree 20");
    cfg.phi_series.clear();
    for (const auto& v : *series) cfg.phi_series.push_back(need_number(v, "phi.series"));
    return;
  }
  if (cfg.equation == "fujita_gelfand") {
    if (phi) {
      reject_unknown(*phi, "phi", {"a", "b"});
      cfg.phi_a = number_or(*phi, "a", "phi", 2.0);
      cfg.phi_b = number_or(*phi, "b", "phi", -2.0);
    } else {
      cfg.phi_a = 2.0;
      cfg.phi_b = -2.0;
    }
    return;
  }
  if (cfg.equation == "newell_whitehead_segel") {
    cfg.phi_a = 1.0;
    cfg.phi_b = 1.0;
    cfg.phi_power = 3;
    if (phi) {
      reject_unknown(*phi, "phi", {"a", "b", "n"});
      cfg.phi_a = number_or(*phi, "a", "phi", 1.0);
      cfg.phi_b = number_or(*phi, "b", "phi", 1.0);
      cfg.phi_power = integer_or(*phi, "n", "phi", 3);
    }
    if (cfg.phi_power < 2 || cfg.phi_power > 12)
      fail("phi.n must lie in [2, 12]");
    return;
  }
  if (phi && !(phi->is_object() && phi->empty()))
    fail("equation '" + cfg.equation + "' takes no phi parameters");
}

AnalyticFunction build_phi(const RunConfig& cfg) {
  if (cfg.equation == "fujita_gelfand") return analytic::exp_family(cfg.phi_a, cfg.phi_b);
  if (cfg.equation == "fisher_kpp") return analytic::polynomial({0.0, 1.0, -1.0});
  if (cfg.equation == "allen_cahn") return analytic::polynomial({0.0, 1.0, 0.0, -1.0});
  if (cfg.equation == "newell_whitehead_segel") {
    std::vector<double> coeffs(static_cast<std::size_t>(cfg.phi_power) + 1, 0.0);
    coeffs[1] = cfg.phi_a;
    coeffs[static_cast<std::size_t>(cfg.phi_power)] -= cfg.phi_b;
    return analytic::polynomial(std::move(coeffs));
  }
  if (cfg.equation == "log1p_heat") return analytic::log1p_function();
  if (cfg.equation == "cos_cosh_heat") return analytic::cos_cosh_mean();
  return analytic::polynomial(cfg.phi_series);
}

}  // namespace

double fujita_gelfand_exact(double t, double x) {
  return -2.0 * std::log1p(std::exp(-x - t));
}

RunConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("not valid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("top level must be an object");
  reject_unknown(root, "the top level",
                 {"equation", "phi", "operator", "domain", "time", "truncation",
                  "initial", "forcing", "norms", "output", "seed"});

  RunConfig cfg;
  cfg.equation = string_or(root, "equation", "", "");
  if (!kEquations.contains(cfg.equation)) fail("unknown equation '" + cfg.equation + "'");
  parse_phi(root, cfg);

  if (const json* op = find(root, "operator")) {
    if (!op->is_object()) fail("section 'operator' must be an object");
    reject_unknown(*op, "operator", {"nu", "c"});
    cfg.nu = number_or(*op, "nu", "operator", 1.0);
    cfg.c = number_or(*op, "c", "operator", 0.0);
  }
  if (cfg.nu <= 0.0) fail("operator.nu must be positive");

  {
    const json& dom = need_object(root, "domain");
    reject_unknown(dom, "domain", {"x_min", "x_max", "n_x", "bc"});
    cfg.x_min = number_or(dom, "x_min", "domain", cfg.x_min);
    cfg.x_max = number_or(dom, "x_max", "domain", cfg.x_max);
    cfg.n_x = integer_or(dom, "n_x", "domain", cfg.n_x);
    cfg.bc = string_or(dom, "bc", "domain", cfg.bc);
    if (!(cfg.x_max > cfg.x_min)) fail("domain needs x_max > x_min");
    if (cfg.n_x < 3) fail("domain.n_x must be at least 3");
    if (!kBoundaries.contains(cfg.bc)) fail("unknown domain.bc '" + cfg.bc + "'");
  }

  {
    const json& tm = need_object(root, "time");
    reject_unknown(tm, "time", {"T", "dt", "save_every"});
    cfg.horizon = number_or(tm, "T", "time", cfg.horizon);
    cfg.dt = number_or(tm, "dt", "time", cfg.dt);
    cfg.save_every = integer_or(tm, "save_every", "time", 0);
    if (!(cfg.horizon > 0.0)) fail("time.T must be positive");
    if (!(cfg.dt > 0.0)) fail("time.dt must be positive");
    if (cfg.dt > cfg.horizon) fail("time.dt exceeds the horizon T");
    double steps = cfg.horizon / cfg.dt;
    if (std::abs(steps - std::llround(steps)) > 1e-6 * steps)
      fail("time.T must be an integer number of dt steps");
    if (cfg.save_every < 0) fail("time.save_every must be >= 0");
  }

  {
    const json& tr = need_object(root, "truncation");
    reject_unknown(tr, "truncation", {"K", "N"});
    cfg.modes = integer_or(tr, "K", "truncation", cfg.modes);
    cfg.max_order = integer_or(tr, "N", "truncation", cfg.max_order);
    if (cfg.modes < 1) fail("truncation.K must be >= 1");
    if (cfg.max_order < 0) fail("truncation.N must be >= 0");
  }

  {
    const json& in = need_object(root, "initial");
    cfg.initial = string_or(in, "preset", "initial", "");
    if (!kInitials.contains(cfg.initial)) fail("unknown initial preset '" + cfg.initial + "'");
    if (cfg.initial == "paper_31") {
      reject_unknown(in, "initial", {"preset", "alpha_value"});
      cfg.init_alpha_value = number_or(in, "alpha_value", "initial", 1.0);
    } else if (cfg.initial == "gaussian_bump") {
      reject_unknown(in, "initial", {"preset", "amplitude", "center", "width", "alpha_value"});
      cfg.init_amplitude = number_or(in, "amplitude", "initial", 1.0);
      cfg.init_center = number_or(in, "center", "initial", 0.0);
      cfg.init_width = number_or(in, "width", "initial", 1.0);
      cfg.init_alpha_value = number_or(in, "alpha_value", "initial", 0.0);
      if (!(cfg.init_width > 0.0)) fail("initial.width must be positive");
    } else {
      reject_unknown(in, "initial", {"preset", "value", "alpha_value"});
      cfg.init_value = number_or(in, "value", "initial", 0.0);
      cfg.init_alpha_value = number_or(in, "alpha_value", "initial", 0.0);
    }
  }

  if (const json* fo = find(root, "forcing")) {
    if (!fo->is_object()) fail("section 'forcing' must be an object");
    cfg.forcing = string_or(*fo, "preset", "forcing", "zero");
    if (!kForcings.contains(cfg.forcing)) fail("unknown forcing preset '" + cfg.forcing + "'");
    if (cfg.forcing == "deterministic") {
      reject_unknown(*fo, "forcing", {"preset", "amplitude", "omega", "wavenumber"});
      cfg.force_amplitude = number_or(*fo, "amplitude", "forcing", 1.0);
      cfg.force_omega = number_or(*fo, "omega", "forcing", 1.0);
      cfg.force_wavenumber = number_or(*fo, "wavenumber", "forcing", 0.0);
    } else if (cfg.forcing == "white_noise_modes") {
      reject_unknown(*fo, "forcing", {"preset", "amplitude"});
      cfg.force_amplitude = number_or(*fo, "amplitude", "forcing", 1.0);
      if (cfg.max_order < 1)
        fail("forcing 'white_noise_modes' needs truncation.N >= 1");
    } else {
      reject_unknown(*fo, "forcing", {"preset"});
    }
  }

  if (const json* no = find(root, "norms")) {
    if (!no->is_object()) fail("section 'norms' must be an object");
    reject_unknown(*no, "norms", {"pairs", "spatial"});
    cfg.spatial = string_or(*no, "spatial", "norms", "sup");
    parse_spatial_norm(cfg.spatial);
    if (const json* pairs = find(*no, "pairs")) {
      if (!pairs->is_array() || pairs->empty()) fail("norms.pairs must be a non-empty array");
      cfg.norms.clear();
      for (const auto& pr : *pairs) {
        if (!pr.is_array() || pr.size() != 2) fail("each norms.pairs entry must be [r, p]");
        NormPair np{need_number(pr[0], "norms.pairs r"), need_number(pr[1], "norms.pairs p")};
        if (np.r < 2.0) fail("norms.pairs r must be >= 2");
        if (np.p < 0.0) fail("norms.pairs p must be >= 0");
        cfg.norms.push_back(np);
      }
    }
  }

  if (const json* out = find(root, "output")) {
    if (!out->is_object()) fail("section 'output' must be an object");
    reject_unknown(*out, "output", {"directory"});
    cfg.output_dir = string_or(*out, "directory", "output", "out");
    if (cfg.output_dir.empty()) fail("output.directory must not be empty");
  }

  if (const json* seed = find(root, "seed")) {
    if (!seed->is_number_integer() || seed->get<long long>() < 0)
      fail("seed must be a non-negative integer");
    cfg.seed = seed->get<std::uint64_t>();
  }

  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string config_json_text(const RunConfig& cfg) {
  ordered root;
  root["equation"] = cfg.equation;
  if (cfg.equation == "custom") {
    root["phi"] = ordered{{"series", cfg.phi_series}};
  } else if (cfg.equation == "fujita_gelfand") {
    root["phi"] = ordered{{"a", cfg.phi_a}, {"b", cfg.phi_b}};
  } else if (cfg.equation == "newell_whitehead_segel") {
    root["phi"] = ordered{{"a", cfg.phi_a}, {"b", cfg.phi_b}, {"n", cfg.phi_power}};
  }
  root["operator"] = ordered{{"nu", cfg.nu}, {"c", cfg.c}};
  root["domain"] = ordered{
      {"x_min", cfg.x_min}, {"x_max", cfg.x_max}, {"n_x", cfg.n_x}, {"bc", cfg.bc}};
  root["time"] =
      ordered{{"T", cfg.horizon}, {"dt", cfg.dt}, {"save_every", cfg.save_every}};
  root["truncation"] = ordered{{"K", cfg.modes}, {"N", cfg.max_order}};
  ordered init{{"preset", cfg.initial}};
  if (cfg.initial == "paper_31") {
    init["alpha_value"] = cfg.init_alpha_value;
  } else if (cfg.initial == "gaussian_bump") {
    init["amplitude"] = cfg.init_amplitude;
    init["center"] = cfg.init_center;
    init["width"] = cfg.init_width;
    init["alpha_value"] = cfg.init_alpha_value;
  } else {
    init["value"] = cfg.init_value;
    init["alpha_value"] = cfg.init_alpha_value;
  }
  root["initial"] = init;
  ordered forcing{{"preset", cfg.forcing}};
  if (cfg.forcing == "deterministic") {
    forcing["amplitude"] = cfg.force_amplitude;
    forcing["omega"] = cfg.force_omega;
    forcing["wavenumber"] = cfg.force_wavenumber;
  } else if (cfg.forcing == "white_noise_modes") {
    forcing["amplitude"] = cfg.force_amplitude;
  }
  root["forcing"] = forcing;
  ordered pairs = ordered::array();
  for (const NormPair& np : cfg.norms) pairs.push_back({np.r, np.p});
  root["norms"] = ordered{{"pairs", pairs}, {"spatial", cfg.spatial}};
  root["output"] = ordered{{"directory", cfg.output_dir}};
  root["seed"] = cfg.seed;
  return root.dump(2) + "\n";
}

BuiltProblem build_problem(const RunConfig& cfg) {
  BuiltProblem out;
  ProblemSpec& p = out.problem;
  p.iset = std::make_shared<IndexSet>(cfg.modes, cfg.max_order);
  p.grid.x_min = cfg.x_min;
  p.grid.x_max = cfg.x_max;
  p.grid.n_points = cfg.n_x;
  p.grid.bc = cfg.bc == "periodic"    ? BoundaryKind::periodic
              : cfg.bc == "dirichlet" ? BoundaryKind::dirichlet
                                      : BoundaryKind::neumann;
  p.op.diffusion = cfg.nu;
  p.op.reaction_const = cfg.c;
  p.phi = build_phi(cfg);
  p.horizon = cfg.horizon;
  p.dt = cfg.dt;

  std::size_t nx = p.grid.size();
  p.initial = ChaosField(p.iset, nx);
  auto zero_row = p.initial.coeff(0);
  if (cfg.initial == "paper_31") {
    for (std::size_t i = 0; i < nx; ++i)
      zero_row[i] = -2.0 * std::log1p(std::exp(-p.grid.node(i)));
  } else if (cfg.initial == "gaussian_bump") {
    for (std::size_t i = 0; i < nx; ++i) {
      double d = (p.grid.node(i) - cfg.init_center) / cfg.init_width;
      zero_row[i] = cfg.init_amplitude * std::exp(-0.5 * d * d);
    }
  } else {
    for (std::size_t i = 0; i < nx; ++i) zero_row[i] = cfg.init_value;
  }
  for (std::size_t a = 1; a < p.iset->size(); ++a)
    for (double& v : p.initial.coeff(a)) v = cfg.init_alpha_value;

  out.has_closed_form = cfg.equation == "fujita_gelfand" && cfg.initial == "paper_31" &&
                        cfg.forcing == "zero" && cfg.phi_a == 2.0 && cfg.phi_b == -2.0 &&
                        cfg.nu == 1.0 && cfg.c == 0.0;

  if (p.grid.bc == BoundaryKind::dirichlet) {
    if (out.has_closed_form) {
      double xl = cfg.x_min, xr = cfg.x_max;
      p.dirichlet = [xl, xr](double t, Side side) {
        return fujita_gelfand_exact(t, side == Side::left ? xl : xr);
      };
    } else {
      double gl = zero_row[0], gr = zero_row[nx - 1];
      p.dirichlet = [gl, gr](double, Side side) {
        return side == Side::left ? gl : gr;
      };
    }
  }

  if (cfg.forcing == "deterministic") {
    double amp = cfg.force_amplitude, om = cfg.force_omega, wn = cfg.force_wavenumber;
    Grid1D grid = p.grid;
    p.forcing = [amp, om, wn, grid](double t, ChaosField& f) {
      std::fill(f.flat().begin(), f.flat().end(), 0.0);
      auto row = f.coeff(0);
      double s = amp * std::sin(om * t);
      for (std::size_t i = 0; i < row.size(); ++i)
        row[i] = s * std::cos(wn * grid.node(i));
    };
  } else if (cfg.forcing == "white_noise_modes") {
    // f(t) = amplitude sum_k xi_k(t) H_{e_k}, constant in x
    double amp = cfg.force_amplitude;
    std::vector<std::size_t> unit_rows;
    for (int k = 0; k < cfg.modes; ++k)
      unit_rows.push_back(
          p.iset->position(MultiIndex::unit(static_cast<std::size_t>(cfg.modes),
                                            static_cast<std::size_t>(k))));
    p.forcing = [amp, unit_rows](double t, ChaosField& f) {
      std::fill(f.flat().begin(), f.flat().end(), 0.0);
      for (std::size_t k = 0; k < unit_rows.size(); ++k) {
        double v = amp * hermite_function(static_cast<int>(k) + 1, t);
        for (double& x : f.coeff(unit_rows[k])) x = v;
      }
    };
  }

  p.validate();
  return out;
}

}  // namespace wickprop
