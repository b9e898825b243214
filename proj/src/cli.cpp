#include "dgeo/cli.hpp"

#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "dgeo/discrete_family.hpp"
#include "dgeo/errors.hpp"
#include "dgeo/gauge.hpp"
#include "dgeo/io.hpp"
#include "dgeo/lln.hpp"
#include "dgeo/qgauss.hpp"
#include "dgeo/report.hpp"

namespace dgeo::cli {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using io::json;

namespace {

struct Options {
  // common
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int workers = 1;
  std::optional<double> tol;
  std::string format = "auto";

  // gauge
  std::string gauge;
  std::string fn = "ell";
  double x = 1.0;
  double s = 1.0;
  double a1 = 0, a2 = 0, a3 = 0, lambda = 1;
  int samples = 20;

  // discrete
  std::string spec;
  std::string theta, theta2, rho;

  // qgauss
  std::string params;
  double q = 1.0;
  int d = 1;
  std::string v, S, point;
  std::string variant = "full";
  int k = 1, kprime = 1, n = 1000, i = 1, j = 1;
  std::string data;
  std::string family = "full";

  // lln
  std::string config;
  long k_max = 1000;
  long sum_k_max = 100000;
  int reps = 100;
  std::string eps = "0.25,0.5,1.0";
  std::string kind_for = "discrete";
};

// Result of one verb: a JSON summary, an optional CSV table and provenance.
struct Outcome {
  json summary;
  std::string table;
  std::string stem;
  json config = json::object();
  std::optional<std::uint64_t> seed;
  int code = kOk;
};

std::shared_ptr<spdlog::logger> logger() {
  static std::shared_ptr<spdlog::logger> log = [] {
    auto l = spdlog::stderr_logger_mt("dgeo");
    l->set_pattern("[%l] %v");
    return l;
  }();
  const char* env = std::getenv("DGEO_LOG");
  log->set_level(spdlog::level::from_str(env ? env : "error"));
  return log;
}

// Inline JSON when the text starts with '{' or '[', a file path otherwise.
json json_arg(const std::string& text, const std::string& what) {
  if (text.empty()) throw io::ParseError(what + ": missing");
  const auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '['))
    return io::parse_json(text, what);
  return io::read_json_file(text);
}

// "[1, 2]" or "1,2"
VectorXd vector_arg(const std::string& text, const std::string& what) {
  if (text.find('[') != std::string::npos) return io::vector_from_json(io::parse_json(text, what), what);
  std::vector<double> xs;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      xs.push_back(std::stod(cell, &used));
      if (cell.find_first_not_of(' ', used) != std::string::npos) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw io::ParseError(what + ": '" + cell + "' is not a number");
    }
  }
  return Eigen::Map<VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

GaugeTriple gauge_arg(const Options& o) { return builtin_gauge(io::gauge_from_json(json_arg(o.gauge, "--gauge"))); }

QGaussParams qgauss_arg(const Options& o) {
  if (!o.params.empty()) {
    QGaussParams p = io::qgauss_from_json(json_arg(o.params, "--params"));
    validate(p);
    return p;
  }
  const VectorXd v = o.v.empty() ? VectorXd::Zero(o.d) : vector_arg(o.v, "--v");
  if (v.size() != o.d) throw DomainError("--v must have d entries");
  const MatrixXd S = o.S.empty() ? MatrixXd::Identity(o.d, o.d) : io::matrix_from_json(json_arg(o.S, "--S"), "--S");
  return make_params(o.q, v, S, variant_from_string(o.variant));
}

SimConfig sim_arg(const Options& o) {
  SimConfig c;
  if (!o.config.empty()) {
    json j = json_arg(o.config, "--config");
    // a manifest carries the configuration under "config"
    if (j.contains("files") && j.contains("config")) j = j.at("config");
    c = io::sim_config_from_json(j);
  } else {
    c.q = o.q;
    c.d = o.d;
    c.v = o.v.empty() ? VectorXd::Zero(o.d) : vector_arg(o.v, "--v");
    c.variant = o.variant == "full" ? Variant::identity : variant_from_string(o.variant);
    if (!o.S.empty()) c.S = io::matrix_from_json(json_arg(o.S, "--S"), "--S");
    c.k_max = o.k_max;
    c.reps = o.reps;
    const VectorXd e = vector_arg(o.eps, "--eps");
    c.eps_grid.assign(e.data(), e.data() + e.size());
  }
  if (o.seed) c.seed = *o.seed;
  if (o.workers != 1) c.workers = o.workers;
  return c;
}

double tol_or(const Options& o, double fallback) { return o.tol ? *o.tol : fallback; }

// ---- gauge ----

Outcome gauge_eval(const Options& o) {
  const GaugeTriple g = gauge_arg(o);
  const DerivedFunctions f = derived(g);
  double value = 0.0;
  if (o.fn == "h") value = g.h(o.x);
  else if (o.fn == "tau") value = g.tau(o.x);
  else if (o.fn == "ell") value = f.ell(o.x);
  else if (o.fn == "m") value = f.m(o.x);
  else if (o.fn == "gamma") value = f.gamma(o.x);
  else if (o.fn == "chi") value = f.chi(o.x);
  else if (o.fn == "s") value = f.s(o.x);
  else if (o.fn == "s_star") value = f.s_star(o.x);
  else if (o.fn == "exp") value = exp_htau(g, o.x);
  else if (o.fn == "d") value = d_htau(g, o.x, o.s);
  else throw DomainError("unknown function '" + o.fn + "'");
  return {value, "", "gauge_eval"};
}

Outcome gauge_conjugate(const Options& o) { return {legendre_conjugate(gauge_arg(o), o.x), "", "gauge_conjugate"}; }

Outcome gauge_equiv(const Options& o) {
  const EquivalenceTransform T{o.a1, o.a2, o.a3, o.lambda};
  const std::uint64_t seed = o.seed.value_or(0);
  const EquivalenceReport r = equivalence_check(gauge_arg(o), T, o.samples, seed);
  Outcome out;
  out.stem = "gauge_equiv_check";
  out.seed = seed;
  const double tol = tol_or(o, 1e-12);
  out.summary = {{"d_defect", r.d_defect}, {"fingerprint_defect", r.fingerprint_defect},
                 {"samples", r.samples},   {"pass", r.d_defect <= tol && r.fingerprint_defect <= 1e-8}};
  out.code = out.summary["pass"].get<bool>() ? kOk : kInvalid;
  return out;
}

// ---- discrete ----

DiscreteFamily family_arg(const Options& o) { return io::family_from_json(json_arg(o.spec, "--spec")); }

VectorXd theta_arg(const std::string& text, const DiscreteFamily& fam, const std::string& what) {
  if (text.empty()) return VectorXd::Zero(fam.dim());
  return vector_arg(text, what);
}

Outcome discrete_normalize(const Options& o) {
  const DiscreteFamily fam = family_arg(o);
  return {io::to_json(normalize(fam, theta_arg(o.theta, fam, "--theta"))), "", "discrete_normalize"};
}

Outcome discrete_divergence(const Options& o) {
  const DiscreteFamily fam = family_arg(o);
  const Normalized a = normalize(fam, theta_arg(o.theta, fam, "--theta"));
  const Normalized b = normalize(fam, theta_arg(o.theta2, fam, "--theta2"));
  return {json{{"divergence", divergence(fam, a.p, b.p)}}, "", "discrete_divergence"};
}

Outcome discrete_geometry(const Options& o) {
  const DiscreteFamily fam = family_arg(o);
  const VectorXd th = theta_arg(o.theta, fam, "--theta");
  json j;
  j["theta"] = io::to_json(th);
  j["psi"] = normalize(fam, th).psi;
  j["psi_gradient"] = io::to_json(psi_gradient(fam, th));
  j["psi_hessian"] = io::to_json(psi_hessian(fam, th));
  j["g"] = io::to_json(metric(fam, th));
  json ch = json::array();
  for (const auto& m : connection_raw(fam, th)) ch.push_back(io::to_json(m));
  j["christoffel_raw"] = ch;
  j["potential"] = hessian_potential(fam, th);
  return {j, "", "discrete_geometry"};
}

Outcome discrete_hessian(const Options& o) {
  const DiscreteFamily fam = family_arg(o);
  const GeometryReport r = hessian_check(fam, theta_arg(o.theta, fam, "--theta"));
  Outcome out{io::to_json(r), "", "discrete_hessian_check"};
  if (r.status == CheckStatus::not_applicable || r.max_defect > tol_or(o, 1e-5)) out.code = kInvalid;
  return out;
}

Outcome discrete_canonical(const Options& o) {
  const DiscreteFamily fam = family_arg(o);
  const double defect = canonical_divergence_check(fam, theta_arg(o.theta, fam, "--theta"),
                                                   theta_arg(o.theta2, fam, "--theta2"));
  Outcome out{json{{"defect", defect}}, "", "discrete_canonical_check"};
  if (defect > tol_or(o, 1e-7)) out.code = kInvalid;
  return out;
}

Outcome discrete_conformal(const Options& o) {
  const DiscreteFamily fam = family_arg(o);
  const double defect =
      conformal_check(fam, theta_arg(o.theta, fam, "--theta"), theta_arg(o.theta2, fam, "--theta2"));
  Outcome out{json{{"defect", defect}}, "", "discrete_conformal_check"};
  if (defect > tol_or(o, 1e-7)) out.code = kInvalid;
  return out;
}

Outcome discrete_project(const Options& o) {
  const DiscreteFamily fam = family_arg(o);
  const std::uint64_t seed = o.seed.value_or(0);
  Outcome out{io::to_json(pythagorean_project(fam, vector_arg(o.rho, "--rho"), seed)), "", "discrete_project"};
  out.seed = seed;
  return out;
}

Outcome discrete_entropy(const Options& o) {
  const DiscreteFamily fam = family_arg(o);
  const EntropyMax e = entropy_max_check(fam, vector_arg(o.rho, "--rho"));
  Outcome out{io::to_json(e), "", "discrete_entropy_max"};
  if (!e.holds) out.code = kInvalid;
  return out;
}

// ---- qgauss ----

Outcome qgauss_density(const Options& o) {
  const QGaussParams p = qgauss_arg(o);
  Outcome out{density(p, vector_arg(o.point, "--x")), "", "qgauss_density"};
  out.config = io::to_json(p);
  return out;
}

Outcome qgauss_lambda(const Options& o) {
  const QGaussParams p = qgauss_arg(o);
  Outcome out{lambda_q(p.q, p.S), "", "qgauss_lambda"};
  out.config = io::to_json(p);
  return out;
}

Outcome qgauss_marginal(const Options& o) {
  const QGaussParams p = qgauss_arg(o);
  const MarginalReport r = marginal_check(p, o.k, o.kprime);
  Outcome out{io::to_json(r), "", "qgauss_marginal_check"};
  out.config = io::to_json(p);
  out.config["k"] = o.k;
  out.config["kprime"] = o.kprime;
  if (r.max_defect > tol_or(o, 1e-6)) out.code = kInvalid;
  return out;
}

Outcome qgauss_sample(const Options& o) {
  const QGaussParams p = qgauss_arg(o);
  const RepetitionLaw law = repetition(p, o.k);
  const std::uint64_t seed = o.seed.value_or(0);
  const MatrixXd X = sample_joint(law, o.n, seed);
  Outcome out;
  out.stem = "qgauss_sample";
  out.table = io::matrix_csv(X, sample_header(law));
  out.summary = {{"n", o.n}, {"k", o.k}, {"dof", law.dof()}, {"seed", seed}};
  out.config = io::to_json(p);
  out.config["k"] = o.k;
  out.config["n"] = o.n;
  out.seed = seed;
  return out;
}

Outcome qgauss_mle(const Options& o) {
  const QGaussParams p = qgauss_arg(o);
  const MatrixXd data = io::read_csv_matrix(io::read_file(o.data));
  Outcome out{io::to_json(mle(p.q, p.d(), o.k, data, mle_family_from_string(o.family))), "", "qgauss_mle"};
  out.config = {{"q", p.q}, {"d", p.d()}, {"k", o.k}, {"family", o.family}, {"data", o.data}};
  return out;
}

Outcome qgauss_moments(const Options& o) {
  const QGaussParams p = qgauss_arg(o);
  Outcome out{io::to_json(moments(p, o.i - 1, o.j - 1)), "", "qgauss_moments"};
  out.config = io::to_json(p);
  return out;
}

// ---- lln ----

Outcome lln_run(const Options& o) {
  const SimConfig c = sim_arg(o);
  logger()->info("lln run: q={} d={} k_max={} reps={} seed={}", c.q, c.d, c.k_max, c.reps, c.seed);
  const SimReport r = run_lln(c);
  Outcome out;
  out.stem = "lln_run";
  out.table = io::averages_csv(r);
  json stats = json::array();
  for (std::size_t s = 0; s < r.stats.size(); ++s) {
    const auto med = median_deviation(r, static_cast<int>(s));
    stats.push_back({{"name", r.stats[s].name},
                     {"target", r.stats[s].target},
                     {"guaranteed", r.stats[s].guaranteed},
                     {"median_abs_deviation", med},
                     {"median_nonincreasing", nonincreasing(med)}});
  }
  out.summary = {{"checkpoints", r.checkpoints}, {"stats", stats}, {"seeds", r.seeds}};
  out.config = io::to_json(c);
  out.seed = c.seed;
  return out;
}

Outcome lln_bounds(const Options& o) {
  const SimConfig c = sim_arg(o);
  const VectorXd e = vector_arg(o.eps, "--eps");
  json rows = json::array();
  for (double eps : e) {
    json row = io::to_json(chebyshev_bounds(c, o.k, eps, o.i - 1, o.j - 1));
    row["k"] = o.k;
    row["eps"] = eps;
    rows.push_back(row);
  }
  Outcome out{rows, "", "lln_bounds"};
  out.config = io::to_json(c);
  return out;
}

Outcome lln_verify(const Options& o) {
  const SimConfig c = sim_arg(o);
  const auto cells = verify_bounds(c);
  Outcome out;
  out.stem = "lln_verify";
  out.table = io::bounds_csv(cells);
  bool all = true;
  for (const auto& cell : cells) all = all && (cell.pass || !cell.guaranteed);
  out.summary = {{"cells", cells.size()}, {"all_pass", all}};
  out.config = io::to_json(c);
  out.seed = c.seed;
  out.code = all ? kOk : kInvalid;
  return out;
}

Outcome lln_summability(const Options& o) {
  const SimConfig c = sim_arg(o);
  const VectorXd e = vector_arg(o.eps, "--eps");
  if (e.size() != 1) throw DomainError("summability takes a single --eps");
  const Summability s = borel_cantelli_summability(c, e[0], o.sum_k_max);
  Outcome out{io::to_json(s), io::summability_csv(s), "lln_summability"};
  out.config = io::to_json(c);
  out.code = s.summable ? kOk : kInvalid;
  return out;
}

// ---- validate ----

Outcome validate_spec(const Options& o) {
  std::vector<std::string> problems;
  auto attempt = [&](const std::function<void()>& f) {
    try {
      f();
    } catch (const std::exception& e) {
      problems.emplace_back(e.what());
    }
  };
  std::optional<json> j;
  attempt([&] { j = json_arg(o.spec, "--spec"); });
  if (j && o.kind_for == "discrete") {
    attempt([&] {
      const GaugeSpec gs = io::gauge_from_json(j->at("gauge"), "spec.gauge");
      check_gauge(builtin_gauge(gs));
    });
    attempt([&] { io::family_from_json(*j); });
  } else if (j && o.kind_for == "qgauss") {
    attempt([&] {
      json p = *j;
      // a gauge descriptor supplies q
      if (!p.contains("q") && p.contains("gauge")) p["q"] = p["gauge"].value("q", 1.0);
      if (!p.contains("v")) p["v"] = json::array({0.0});
      validate(io::qgauss_from_json(p));
    });
  } else if (j && o.kind_for == "lln") {
    attempt([&] { validate(io::sim_config_from_json(*j)); });
  } else if (j) {
    problems.push_back("--for must be discrete, qgauss or lln");
  }
  json out = {{"status", problems.empty() ? "PASS" : "FAIL"}, {"violations", problems}};
  return {out, "", "validate", json::object(), std::nullopt, problems.empty() ? kOk : kInvalid};
}

int emit(const Outcome& r, const Options& o, std::ostream& out) {
  if (!o.out_dir.empty()) {
    report::Bundle b;
    b.config = r.config;
    b.seed = r.seed;
    b.add(r.stem + ".json", io::dump(r.summary));
    if (!r.table.empty()) b.add(r.stem + ".csv", r.table);
    report::write_bundle(b, o.out_dir);
    out << io::dump(report::manifest(b));
    return r.code;
  }
  const bool csv = o.format == "csv" || (o.format == "auto" && !r.table.empty());
  if (csv && !r.table.empty())
    out << r.table;
  else if (r.stem == "validate") {
    out << r.summary["status"].get<std::string>() << "\n";
    for (const auto& v : r.summary["violations"]) out << "- " << v.get<std::string>() << "\n";
  }
  else
    out << io::dump(r.summary);
  return r.code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deformed exponential families, q-Gaussian repetitions and LLN experiments", "dgeo"};
  app.require_subcommand(1);
  app.set_version_flag("--version", DGEO_VERSION);
  Options o;
  std::function<Outcome(const Options&)> action;

  auto common = [&](CLI::App* c) {
    c->add_option("--out", o.out_dir, "write artifacts and a manifest into DIR");
    c->add_option("--seed", o.seed, "64-bit seed");
    c->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
    c->add_option("--tol", o.tol, "pass tolerance");
    c->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"auto", "json", "csv"}));
  };
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                  std::function<Outcome(const Options&)> f) {
    CLI::App* c = parent->add_subcommand(name, help);
    common(c);
    c->callback([&action, f] { action = f; });
    return c;
  };
  auto qparams = [&](CLI::App* c) {
    c->add_option("--params", o.params, "q-Gaussian parameters as JSON or a file");
    c->add_option("--q", o.q);
    c->add_option("--d", o.d);
    c->add_option("--v", o.v, "location, e.g. 0,1");
    c->add_option("--S", o.S, "shape matrix as JSON");
    c->add_option("--variant", o.variant)->check(CLI::IsMember({"full", "identity", "trace_d"}));
  };
  auto lparams = [&](CLI::App* c, long* kmax) {
    c->add_option("--config", o.config, "SimConfig JSON, a file, or a manifest");
    c->add_option("--q", o.q);
    c->add_option("--d", o.d);
    c->add_option("--v", o.v);
    c->add_option("--S", o.S);
    c->add_option("--variant", o.variant)->check(CLI::IsMember({"full", "identity", "trace_d"}));
    c->add_option("--kmax", *kmax);
    c->add_option("--reps", o.reps);
    c->add_option("--eps", o.eps, "comma separated");
  };

  CLI::App* gauge = app.add_subcommand("gauge", "gauge triples")->require_subcommand(1);
  CLI::App* c = leaf(gauge, "eval", "evaluate a derived function", gauge_eval);
  c->add_option("--gauge", o.gauge)->required();
  c->add_option("--fn", o.fn)->check(CLI::IsMember({"h", "tau", "ell", "m", "gamma", "chi", "s", "s_star", "exp", "d"}));
  c->add_option("--x", o.x);
  c->add_option("--s", o.s, "second argument of d");
  c = leaf(gauge, "conjugate", "Legendre conjugate of h at --x", gauge_conjugate);
  c->add_option("--gauge", o.gauge)->required();
  c->add_option("--x", o.x);
  c = leaf(gauge, "equiv-check", "divergence invariance under an equivalence transform", gauge_equiv);
  c->add_option("--gauge", o.gauge)->required();
  c->add_option("--a1", o.a1);
  c->add_option("--a2", o.a2);
  c->add_option("--a3", o.a3);
  c->add_option("--lambda", o.lambda);
  c->add_option("--samples", o.samples);

  CLI::App* disc = app.add_subcommand("discrete", "discrete deformed exponential families")->require_subcommand(1);
  const std::vector<std::tuple<std::string, std::string, std::function<Outcome(const Options&)>>> dverbs{
      {"normalize", "psi and p at theta", discrete_normalize},
      {"divergence", "D(p_theta, p_theta2)", discrete_divergence},
      {"geometry", "metric, connection and potential", discrete_geometry},
      {"hessian-check", "Hessian structure defect", discrete_hessian},
      {"canonical-check", "canonical divergence defect", discrete_canonical},
      {"conformal-check", "1-conformal defect", discrete_conformal},
      {"project", "Pythagorean projection of --rho", discrete_project},
      {"entropy-max", "entropy maximization check", discrete_entropy}};
  for (const auto& [name, help, f] : dverbs) {
    c = leaf(disc, name, help, f);
    c->add_option("--spec", o.spec, "family JSON or a file")->required();
    c->add_option("--theta", o.theta);
    c->add_option("--theta2", o.theta2);
    c->add_option("--rho", o.rho);
  }

  CLI::App* qg = app.add_subcommand("qgauss", "q-Gaussian families and repetitions")->require_subcommand(1);
  c = leaf(qg, "density", "p(x)", qgauss_density);
  qparams(c);
  c->add_option("--x", o.point)->required();
  c = leaf(qg, "lambda", "normalizer lambda_q(S)", qgauss_lambda);
  qparams(c);
  c = leaf(qg, "marginal-check", "marginal consistency defect", qgauss_marginal);
  qparams(c);
  c->add_option("--k", o.k);
  c->add_option("--kprime", o.kprime);
  c = leaf(qg, "sample", "exact draws from the k-fold repetition", qgauss_sample);
  qparams(c);
  c->add_option("--k", o.k);
  c->add_option("--n", o.n);
  c = leaf(qg, "mle", "maximum q_k-likelihood", qgauss_mle);
  qparams(c);
  c->add_option("--k", o.k);
  c->add_option("--data", o.data, "CSV with one observation per row")->required();
  c->add_option("--family", o.family)->check(CLI::IsMember({"full", "identity_mean_only"}));
  c = leaf(qg, "moments", "moments of coordinate i and pair (i, j), 1-based", qgauss_moments);
  qparams(c);
  c->add_option("--i", o.i);
  c->add_option("--j", o.j);

  CLI::App* lln = app.add_subcommand("lln", "law of large numbers experiments")->require_subcommand(1);
  c = leaf(lln, "run", "running averages per (k, rep)", lln_run);
  lparams(c, &o.k_max);
  c = leaf(lln, "bounds", "Chebyshev bounds at --k for each --eps", lln_bounds);
  lparams(c, &o.k_max);
  c->add_option("--k", o.k);
  c->add_option("--i", o.i);
  c->add_option("--j", o.j);
  c = leaf(lln, "verify", "exceedance frequencies against the bounds", lln_verify);
  lparams(c, &o.k_max);
  c = leaf(lln, "summability", "partial sums of the bound series", lln_summability);
  lparams(c, &o.sum_k_max);

  c = leaf(&app, "validate", "check a spec file", validate_spec);
  c->add_option("--spec", o.spec)->required();
  c->add_option("--for", o.kind_for)->check(CLI::IsMember({"discrete", "qgauss", "lln"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  try {
    logger()->debug("dispatching");
    return emit(action(o), o, out);
  } catch (const io::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  } catch (const NotApplicable& e) {
    err << "not applicable: " << e.what() << "\n";
    return kInvalid;
  } catch (const DomainError& e) {
    err << "invalid: " << e.what() << "\n";
    return kInvalid;
  } catch (const InvariantError& e) {
    err << "invalid: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace dgeo::cli
