#include "wickprop/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "wickprop/errors.hpp"
#include "wickprop/util.hpp"

namespace wickprop {

namespace {

using ordered = nlohmann::ordered_json;

[[noreturn]] void corrupt(const std::string& what) {
  throw ConfigError("bundle: " + what);
}

// JSON value for a double; non-finite values become strings since JSON has
// no literal for them.
ordered json_num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

ordered json_num_array(std::span<const double> vs) {
  ordered arr = ordered::array();
  for (double v : vs) arr.push_back(json_num(v));
  return arr;
}

ordered profile_json(const GradeProfile& prof) {
  ordered j;
  j["log_square"] = json_num(prof.log_square);
  j["contributions"] = json_num_array(prof.contributions);
  j["partial_sums"] = json_num_array(prof.partial_sums);
  j["shares"] = json_num_array(prof.shares);
  return j;
}

// Splits one CSV line; double quotes fence fields that contain commas.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    corrupt("bad number '" + s + "' in " + where);
  return v;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::string text = read_text_file(path);
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("short write to '" + path + "'");
}

std::string fnv_hex(const std::string& text) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(text)));
  return buf;
}

std::string coefficients_csv(const SolutionBundle& b, const IndexSet& iset,
                             const Grid1D& grid) {
  std::string out = "t,x";
  for (std::size_t a = 0; a < iset.size(); ++a) {
    out += ",\"a";
    out += iset.at(a).label();
    out += '"';
  }
  out += '\n';
  std::size_t nx = grid.size();
  for (std::size_t s = 0; s < b.snapshots.size(); ++s) {
    std::string t = format_double(b.times[s]);
    const ChaosField& f = b.snapshots[s];
    for (std::size_t i = 0; i < nx; ++i) {
      out += t;
      out += ',';
      out += format_double(grid.node(i));
      for (std::size_t a = 0; a < iset.size(); ++a) {
        out += ',';
        out += format_double(f.coeff(a)[i]);
      }
      out += '\n';
    }
  }
  return out;
}

std::string moments_csv(const SolutionBundle& b, const Grid1D& grid) {
  std::string out = "t,x,mean,variance\n";
  std::size_t nx = grid.size();
  for (std::size_t s = 0; s < b.snapshots.size(); ++s) {
    std::string t = format_double(b.times[s]);
    MomentField m = moments(b.snapshots[s]);
    for (std::size_t i = 0; i < nx; ++i) {
      out += t;
      out += ',';
      out += format_double(grid.node(i));
      out += ',';
      out += format_double(m.mean[i]);
      out += ',';
      out += format_double(m.variance[i]);
      out += '\n';
    }
  }
  return out;
}

std::string sup_table_csv(const IndexSet& iset, std::span<const double> sup_values,
                          std::span<const double> log_bound) {
  std::string out = "alpha,L_alpha,log_bound\n";
  for (std::size_t a = 0; a < iset.size(); ++a) {
    out += '"';
    out += iset.at(a).label();
    out += "\",";
    out += format_double(sup_values[a]);
    out += ',';
    out += format_double(log_bound[a]);
    out += '\n';
  }
  return out;
}

std::string norms_json_text(const std::vector<NormReportEntry>& entries,
                            const std::string& spatial) {
  ordered root;
  root["spatial"] = spatial;
  ordered pairs = ordered::array();
  for (const NormReportEntry& e : entries) {
    ordered j;
    j["r"] = e.pair.r;
    j["p"] = e.pair.p;
    j["final_snapshot"] = profile_json(e.final_snapshot);
    j["time_sup"] = profile_json(e.time_sup);
    pairs.push_back(j);
  }
  root["pairs"] = pairs;
  return root.dump(2) + "\n";
}

std::string metadata_json_text(const RunConfig& cfg, const SolutionBundle& b,
                               const GrowthCertificate& cert,
                               const double* closed_form_error) {
  ordered root;
  root["resolved_config"] = ordered::parse(config_json_text(cfg));
  root["dt_effective"] = b.dt_effective;
  root["steps_total"] = b.steps_total;
  root["steps_done"] = b.steps_done;
  root["blown_up"] = b.blown_up;
  root["blow_up_time"] = b.blow_up_time;
  root["digest"] = b.digest;
  root["snapshot_times"] = json_num_array(b.times);
  root["certificate"] =
      ordered{{"found", cert.found}, {"r0", cert.r0}, {"p0", cert.p0}};
  if (closed_form_error) root["closed_form_max_error"] = json_num(*closed_form_error);
  return root.dump(2) + "\n";
}

std::string manifest_json_text(const std::vector<ManifestEntry>& entries) {
  ordered files = ordered::array();
  for (const ManifestEntry& e : entries)
    files.push_back(ordered{{"file", e.file}, {"role", e.role}, {"fnv1a64", e.hash}});
  ordered root;
  root["files"] = files;
  return root.dump(2) + "\n";
}

LoadedBundle load_bundle(const std::string& dir) {
  LoadedBundle out;
  ordered meta;
  try {
    meta = ordered::parse(read_text_file(dir + "/metadata.json"));
  } catch (const nlohmann::json::exception& e) {
    corrupt(std::string("metadata.json is not valid JSON: ") + e.what());
  }
  if (!meta.is_object() || !meta.contains("resolved_config") ||
      !meta.contains("snapshot_times"))
    corrupt("metadata.json lacks resolved_config or snapshot_times");
  out.config = parse_config_text(meta["resolved_config"].dump());
  for (const auto& t : meta["snapshot_times"]) {
    if (!t.is_number()) corrupt("snapshot_times must be numbers");
    out.times.push_back(t.get<double>());
  }
  if (out.times.empty()) corrupt("no snapshots recorded");

  out.iset = std::make_shared<IndexSet>(out.config.modes, out.config.max_order);
  out.grid.x_min = out.config.x_min;
  out.grid.x_max = out.config.x_max;
  out.grid.n_points = out.config.n_x;
  out.grid.bc = out.config.bc == "periodic"    ? BoundaryKind::periodic
                : out.config.bc == "dirichlet" ? BoundaryKind::dirichlet
                                               : BoundaryKind::neumann;
  std::size_t nx = out.grid.size();

  std::vector<std::string> lines = read_lines(dir + "/coefficients.csv");
  if (lines.empty()) corrupt("coefficients.csv is empty");
  std::vector<std::string> header = split_csv(lines[0]);
  if (header.size() != out.iset->size() + 2 || header[0] != "t" || header[1] != "x")
    corrupt("coefficients.csv header does not match the configured truncation");
  // map each labeled column to its ordinal; tolerate any column order
  std::vector<std::size_t> col_ordinal(header.size() - 2);
  for (std::size_t cidx = 2; cidx < header.size(); ++cidx) {
    const std::string& h = header[cidx];
    if (h.size() < 3 || h[0] != 'a' || h[1] != '(' || h.back() != ')')
      corrupt("bad coefficient column '" + h + "'");
    MultiIndex a(static_cast<std::size_t>(out.iset->modes()));
    std::size_t mode = 0;
    std::string num;
    for (std::size_t ci = 2; ci <= h.size() - 1; ++ci) {
      char ch = h[ci];
      if (ch == ',' || ch == ')') {
        if (mode >= a.modes() || num.empty()) corrupt("bad coefficient column '" + h + "'");
        a[mode++] = static_cast<std::uint32_t>(parse_double(num, "column label"));
        num.clear();
      } else {
        num.push_back(ch);
      }
    }
    if (mode != a.modes()) corrupt("bad coefficient column '" + h + "'");
    auto pos = out.iset->find(a);
    if (!pos) corrupt("column '" + h + "' is outside the configured index set");
    col_ordinal[cidx - 2] = *pos;
  }
  if (lines.size() - 1 != out.times.size() * nx)
    corrupt("coefficients.csv row count does not match snapshots * grid");
  for (std::size_t s = 0; s < out.times.size(); ++s)
    out.snapshots.emplace_back(out.iset, nx);
  for (std::size_t row = 1; row < lines.size(); ++row) {
    std::vector<std::string> f = split_csv(lines[row]);
    if (f.size() != header.size()) corrupt("short row in coefficients.csv");
    std::size_t s = (row - 1) / nx;
    std::size_t i = (row - 1) % nx;
    double t = parse_double(f[0], "coefficients.csv t");
    if (std::abs(t - out.times[s]) > 1e-12 * std::max(1.0, std::abs(out.times[s])))
      corrupt("coefficients.csv times disagree with metadata");
    for (std::size_t cidx = 2; cidx < f.size(); ++cidx)
      out.snapshots[s].coeff(col_ordinal[cidx - 2])[i] =
          parse_double(f[cidx], "coefficients.csv");
  }

  std::vector<std::string> sup_lines = read_lines(dir + "/sup_table.csv");
  if (sup_lines.size() != out.iset->size() + 1)
    corrupt("sup_table.csv row count does not match the index set");
  out.sup_values.assign(out.iset->size(), 0.0);
  for (std::size_t row = 1; row < sup_lines.size(); ++row) {
    std::vector<std::string> f = split_csv(sup_lines[row]);
    if (f.size() != 3) corrupt("short row in sup_table.csv");
    MultiIndex a(static_cast<std::size_t>(out.iset->modes()));
    std::size_t mode = 0;
    std::string num;
    for (char ch : f[0]) {
      if (ch == '(') continue;
      if (ch == ',' || ch == ')') {
        if (mode >= a.modes() || num.empty()) corrupt("bad alpha label '" + f[0] + "'");
        a[mode++] = static_cast<std::uint32_t>(parse_double(num, "alpha label"));
        num.clear();
      } else {
        num.push_back(ch);
      }
    }
    auto pos = out.iset->find(a);
    if (!pos) corrupt("sup_table alpha '" + f[0] + "' is outside the index set");
    out.sup_values[*pos] = parse_double(f[1], "sup_table.csv");
  }
  return out;
}

std::string samples_csv(const LoadedBundle& bundle, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw ConfigError("n_samples must be >= 1");
  std::size_t modes = static_cast<std::size_t>(bundle.iset->modes());
  std::size_t nt = bundle.times.size();
  std::size_t nx = bundle.grid.size();
  std::size_t kept = std::min<std::size_t>(static_cast<std::size_t>(n_samples), 32);

  std::vector<double> kept_vals(kept * nt * nx, 0.0);
  std::vector<double> mean(nt * nx, 0.0), m2(nt * nx, 0.0);

  const std::size_t batch = 128;
  std::vector<double> draws(batch * modes);
  std::vector<double> evals(batch * nt * nx);
  GaussianSampler gauss(seed);

  long long done = 0;
  while (done < n_samples) {
    std::size_t cur = std::min<std::size_t>(batch, static_cast<std::size_t>(n_samples - done));
    // the draw sequence is fixed before the parallel evaluation
    for (std::size_t s = 0; s < cur; ++s)
      for (std::size_t k = 0; k < modes; ++k) draws[s * modes + k] = gauss.next();
    parallel_for(cur, [&](std::size_t s) {
      std::span<const double> g(draws.data() + s * modes, modes);
      for (std::size_t t = 0; t < nt; ++t) {
        std::vector<double> v = sample_realization(bundle.snapshots[t], g);
        std::copy(v.begin(), v.end(), evals.begin() + (s * nt + t) * nx);
      }
    });
    // serial accumulation in sample order keeps the bytes thread-count free
    for (std::size_t s = 0; s < cur; ++s) {
      long long ordinal = done + static_cast<long long>(s);
      for (std::size_t cell = 0; cell < nt * nx; ++cell) {
        double v = evals[s * nt * nx + cell];
        double delta = v - mean[cell];
        mean[cell] += delta / static_cast<double>(ordinal + 1);
        m2[cell] += delta * (v - mean[cell]);
      }
      if (static_cast<std::size_t>(ordinal) < kept)
        std::copy(evals.begin() + s * nt * nx, evals.begin() + (s + 1) * nt * nx,
                  kept_vals.begin() + static_cast<std::size_t>(ordinal) * nt * nx);
    }
    done += static_cast<long long>(cur);
  }

  std::string out = "t,x";
  for (std::size_t s = 0; s < kept; ++s) out += ",sample_" + std::to_string(s + 1);
  out += ",mean,variance\n";
  for (std::size_t t = 0; t < nt; ++t) {
    std::string ts = format_double(bundle.times[t]);
    for (std::size_t i = 0; i < nx; ++i) {
      out += ts;
      out += ',';
      out += format_double(bundle.grid.node(i));
      for (std::size_t s = 0; s < kept; ++s) {
        out += ',';
        out += format_double(kept_vals[s * nt * nx + t * nx + i]);
      }
      std::size_t cell = t * nx + i;
      double var = n_samples > 1 ? m2[cell] / static_cast<double>(n_samples - 1) : 0.0;
      out += ',';
      out += format_double(mean[cell]);
      out += ',';
      out += format_double(var);
      out += '\n';
    }
  }
  return out;
}

}  // namespace wickprop
