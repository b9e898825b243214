#include "dgeo/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dgeo/errors.hpp"

namespace dgeo::io {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// nlohmann reports a byte offset; convert it to line and column.
std::string locate(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + "." + key + ": missing field");
  return *it;
}

// null stands for an infinite end
double bound(const json& j, double infinite, const std::string& where) {
  if (j.is_null()) return infinite;
  if (!j.is_number()) throw ParseError(where + ": expected a number or null");
  return j.get<double>();
}

json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

template <class F>
auto guarded(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw ParseError(where + ": " + e.what());
  }
}

}  // namespace

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": malformed JSON at " + locate(text, e.byte > 0 ? e.byte - 1 : 0));
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::string& path) { return parse_json(read_file(path), path); }

double get_number(const json& j, const std::string& key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_number()) throw ParseError(where + "." + key + ": expected a number");
  return v.get<double>();
}

double get_number_or(const json& j, const std::string& key, double fallback, const std::string& where) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
  return get_number(j, key, where);
}

VectorXd vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of numbers");
  VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError(where + "[" + std::to_string(i) + "]: expected a number");
    v[i] = j[i].get<double>();
  }
  return v;
}

MatrixXd matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + ": expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  MatrixXd m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string at = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols) throw ParseError(at + ": rows must have equal length");
    m.row(r) = vector_from_json(j[r], at).transpose();
  }
  return m;
}

json to_json(const VectorXd& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(number(v[i]));
  return out;
}

json to_json(const MatrixXd& m) {
  json out = json::array();
  for (int r = 0; r < m.rows(); ++r) out.push_back(to_json(VectorXd(m.row(r).transpose())));
  return out;
}

GaugeSpec gauge_from_json(const json& j, const std::string& where) {
  const json& kind = field(j, "kind", where);
  if (!kind.is_string()) throw ParseError(where + ".kind: expected a string");
  GaugeSpec g;
  g.kind = guarded(where + ".kind", [&] { return gauge_kind_from_string(kind.get<std::string>()); });
  if (g.kind == GaugeKind::custom) throw ParseError(where + ".kind: custom gauges cannot be read from JSON");
  if (g.kind == GaugeKind::power || g.kind == GaugeKind::escort) g.param = get_number(j, "q", where);
  if (g.kind == GaugeKind::scaled_log) g.param = get_number(j, "lambda", where);
  g.I.lo = j.contains("lo") ? bound(j.at("lo"), -kInf, where + ".lo") : 0.0;
  g.I.hi = j.contains("hi") ? bound(j.at("hi"), kInf, where + ".hi") : kInf;
  return g;
}

json to_json(const GaugeSpec& g) {
  json out;
  out["kind"] = to_string(g.kind);
  if (g.kind == GaugeKind::power || g.kind == GaugeKind::escort) out["q"] = g.param;
  if (g.kind == GaugeKind::scaled_log) out["lambda"] = g.param;
  out["lo"] = std::isfinite(g.I.lo) ? json(g.I.lo) : json(nullptr);
  out["hi"] = std::isfinite(g.I.hi) ? json(g.I.hi) : json(nullptr);
  return out;
}

DiscreteFamily family_from_json(const json& j) {
  const VectorXd weights = vector_from_json(field(j, "weights", "spec"), "spec.weights");
  const GaugeSpec gs = gauge_from_json(field(j, "gauge", "spec"), "spec.gauge");
  const GaugeTriple g = guarded("spec.gauge", [&] { return builtin_gauge(gs); });
  const MatrixXd T = matrix_from_json(field(j, "T", "spec"), "spec.T");
  const VectorXd c = j.contains("c") ? vector_from_json(j.at("c"), "spec.c") : VectorXd::Zero(weights.size());
  DiscreteFamily fam = make_family(weights, g, T, c);
  if (j.contains("theta_box")) {
    const json& box = j.at("theta_box");
    if (!box.is_array() || box.size() != static_cast<std::size_t>(T.rows()))
      throw ParseError("spec.theta_box: expected one [lo, hi] pair per row of T");
    for (std::size_t i = 0; i < box.size(); ++i) {
      const std::string at = "spec.theta_box[" + std::to_string(i) + "]";
      if (!box[i].is_array() || box[i].size() != 2) throw ParseError(at + ": expected [lo, hi]");
      fam.theta_box(i, 0) = bound(box[i][0], -kInf, at);
      fam.theta_box(i, 1) = bound(box[i][1], kInf, at);
    }
    validate(fam);
  }
  return fam;
}

QGaussParams qgauss_from_json(const json& j) {
  QGaussParams p;
  p.q = get_number(j, "q", "params");
  p.v = vector_from_json(field(j, "v", "params"), "params.v");
  const int d = p.d();
  p.S = j.contains("S") ? matrix_from_json(j.at("S"), "params.S") : MatrixXd::Identity(d, d);
  if (j.contains("variant")) {
    if (!j.at("variant").is_string()) throw ParseError("params.variant: expected a string");
    p.variant = guarded("params.variant", [&] { return variant_from_string(j.at("variant").get<std::string>()); });
  }
  return p;
}

json to_json(const QGaussParams& p) {
  json out;
  out["q"] = p.q;
  out["d"] = p.d();
  out["v"] = to_json(p.v);
  out["S"] = to_json(p.S);
  out["variant"] = to_string(p.variant);
  return out;
}

SimConfig sim_config_from_json(const json& j) {
  SimConfig c;
  const std::string w = "config";
  c.q = get_number(j, "q", w);
  c.d = static_cast<int>(get_number_or(j, "d", 1, w));
  c.v = j.contains("v") ? vector_from_json(j.at("v"), w + ".v") : VectorXd::Zero(c.d);
  if (j.contains("variant")) {
    if (!j.at("variant").is_string()) throw ParseError(w + ".variant: expected a string");
    c.variant = guarded(w + ".variant", [&] { return variant_from_string(j.at("variant").get<std::string>()); });
  }
  if (j.contains("S") && !j.at("S").is_null()) c.S = matrix_from_json(j.at("S"), w + ".S");
  c.k_max = static_cast<long>(get_number_or(j, "k_max", static_cast<double>(c.k_max), w));
  c.reps = static_cast<int>(get_number_or(j, "reps", c.reps, w));
  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_unsigned() && !s.is_number_integer()) throw ParseError(w + ".seed: expected an unsigned integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (j.contains("eps_grid")) {
    const VectorXd e = vector_from_json(j.at("eps_grid"), w + ".eps_grid");
    c.eps_grid.assign(e.data(), e.data() + e.size());
  }
  c.workers = static_cast<int>(get_number_or(j, "workers", c.workers, w));
  return c;
}

json to_json(const SimConfig& c) {
  json out;
  out["q"] = c.q;
  out["d"] = c.d;
  out["v"] = to_json(c.v);
  out["variant"] = to_string(c.variant);
  out["S"] = c.S.size() == 0 ? json(nullptr) : to_json(c.S);
  out["k_max"] = c.k_max;
  out["reps"] = c.reps;
  out["seed"] = c.seed;
  out["eps_grid"] = c.eps_grid;
  out["workers"] = c.workers;
  return out;
}

json to_json(const Normalized& n) {
  json out;
  out["psi"] = n.psi;
  out["p"] = to_json(n.p);
  return out;
}

json to_json(const GeometryReport& r) {
  json out;
  out["status"] = r.status == CheckStatus::ok ? "ok" : "not_applicable";
  if (!r.message.empty()) out["message"] = r.message;
  out["theta"] = to_json(r.theta);
  out["g"] = to_json(r.g);
  json ch = json::array();
  for (const auto& m : r.christoffel_raw) ch.push_back(to_json(m));
  out["christoffel_raw"] = ch;
  out["potential"] = number(r.potential);
  out["hess_potential"] = to_json(r.hess_potential);
  out["max_defect"] = number(r.max_defect);
  out["max_connection"] = number(r.max_connection);
  out["tau_mass_spread"] = number(r.tau_mass_spread);
  return out;
}

json to_json(const Projection& p) {
  json out;
  out["theta"] = to_json(p.theta);
  out["p"] = to_json(p.p);
  out["psi"] = p.psi;
  out["residual"] = p.residual;
  out["tau_residual"] = p.tau_residual;
  out["iterations"] = p.iterations;
  out["restarts"] = p.restarts;
  return out;
}

json to_json(const EntropyMax& e) {
  json out;
  out["holds"] = e.holds;
  out["equality"] = e.equality;
  out["entropy_rho"] = e.entropy_rho;
  out["entropy_star"] = e.entropy_star;
  out["projection"] = to_json(e.projection);
  return out;
}

json to_json(const MarginalReport& r) {
  json out;
  out["max_defect"] = r.max_defect;
  json pts = json::array();
  for (const auto& x : r.points) pts.push_back(to_json(x));
  out["points"] = pts;
  out["defects"] = r.defects;
  return out;
}

json to_json(const Moments& m) {
  json out;
  out["mean"] = m.mean;
  out["second"] = m.second;
  out["fourth"] = m.fourth;
  out["cross"] = m.cross;
  out["pair_mean"] = m.pair_mean;
  out["pair_var"] = m.pair_var;
  out["pair_cross"] = m.pair_cross;
  out["dof"] = number(m.dof);
  out["scale2"] = m.scale2;
  return out;
}

json to_json(const MleResult& r) {
  json out;
  out["family"] = r.family == MleFamily::full ? "full" : "identity_mean_only";
  out["q_prime"] = r.q_prime;
  if (r.family == MleFamily::full) {
    out["V"] = to_json(r.V);
    out["S"] = to_json(r.S);
    out["theta"] = to_json(r.theta);
  } else {
    out["v"] = to_json(r.v);
  }
  out["objective"] = r.objective;
  out["grad_norm"] = r.grad_norm;
  out["defect"] = r.defect;
  out["chi_mass_reference"] = r.chi_mass_reference;
  out["iterations"] = r.iterations;
  return out;
}

json to_json(const ChebyshevBounds& b) {
  json out;
  out["bound_F"] = b.bound_F;
  out["bound_FF"] = b.bound_FF;
  return out;
}

json to_json(const Summability& s) {
  json out;
  out["eps"] = s.eps;
  out["relative_change"] = s.relative_change;
  out["summable"] = s.summable;
  json rows = json::array();
  for (const auto& r : s.rows) rows.push_back({{"k", r.k}, {"term", r.term}, {"partial", r.partial}, {"scaled", r.scaled}});
  out["rows"] = rows;
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string matrix_csv(const MatrixXd& m, const std::string& header) {
  std::string out = header + "\n";
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += format_double(m(r, c));
    }
    out += '\n';
  }
  return out;
}

MatrixXd read_csv_matrix(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    bool header = false;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size() && cell.find_first_not_of(" \r", used) != std::string::npos) header = true;
      } catch (const std::exception&) {
        header = true;
      }
    }
    if (header) {
      if (rows.empty()) continue;
      throw ParseError("csv line " + std::to_string(lineno) + ": expected numbers");
    }
    if (!rows.empty() && row.size() != rows[0].size())
      throw ParseError("csv line " + std::to_string(lineno) + ": row length differs from the first row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("csv: no data rows");
  MatrixXd m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  return m;
}

std::string averages_csv(const SimReport& r) {
  std::string out = "k,rep,seed,stat,average,deviation\n";
  for (std::size_t c = 0; c < r.checkpoints.size(); ++c)
    for (std::size_t rep = 0; rep < r.averages.size(); ++rep)
      for (std::size_t s = 0; s < r.stats.size(); ++s) {
        out += std::to_string(r.checkpoints[c]) + ',' + std::to_string(rep) + ',' + std::to_string(r.seeds[rep]) +
               ',' + r.stats[s].name + ',' + format_double(r.averages[rep](c, s)) + ',' +
               format_double(r.deviation(static_cast<int>(rep), static_cast<int>(c), static_cast<int>(s))) + '\n';
      }
  return out;
}

std::string bounds_csv(const std::vector<BoundCell>& cells) {
  std::string out = "stat,k,eps,exceed,reps,freq,wilson_lo,wilson_hi,bound,guaranteed,pass\n";
  for (const auto& c : cells) {
    out += c.stat + ',' + std::to_string(c.k) + ',' + format_double(c.eps) + ',' + std::to_string(c.exceed) + ',' +
           std::to_string(c.reps) + ',' + format_double(c.freq) + ',' + format_double(c.ci.lo) + ',' +
           format_double(c.ci.hi) + ',' + format_double(c.bound) + ',' + (c.guaranteed ? "true" : "false") + ',' +
           (c.pass ? "PASS" : "FAIL") + '\n';
  }
  return out;
}

std::string summability_csv(const Summability& s) {
  std::string out = "k,term,partial,scaled\n";
  for (const auto& r : s.rows)
    out += std::to_string(r.k) + ',' + format_double(r.term) + ',' + format_double(r.partial) + ',' +
           format_double(r.scaled) + '\n';
  return out;
}

}  // namespace dgeo::io
