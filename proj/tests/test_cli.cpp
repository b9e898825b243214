#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "dgeo/cli.hpp"
#include "dgeo/discrete_family.hpp"
#include "dgeo/io.hpp"
#include "dgeo/lln.hpp"
#include "dgeo/qgauss.hpp"
#include "dgeo/report.hpp"

using namespace dgeo;
using Eigen::MatrixXd;
using Eigen::VectorXd;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(DGEO_TEST_DATA) + "/" + name; }

io::json parse(const std::string& s) { return io::parse_json(s); }

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("dgeo_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) { return io::read_file(p.string()); }

}  // namespace

TEST(Cli, GaugeEvalPrintsExpAtZero) {
  Result r = invoke({"gauge", "eval", "--gauge", R"({"kind":"power","q":1.5})", "--fn", "exp", "--x", "0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1.0\n");
  r = invoke({"gauge", "eval", "--gauge", R"({"kind":"kl"})", "--fn", "d", "--x", "2", "--s", "1"});
  EXPECT_DOUBLE_EQ(parse(r.out).get<double>(), d_htau(builtin_gauge(GaugeKind::kl), 2, 1));
  r = invoke({"gauge", "conjugate", "--gauge", R"({"kind":"kl"})", "--x", "1"});
  EXPECT_NEAR(parse(r.out).get<double>(), 1.0, 1e-10);
}

TEST(Cli, GaugeEquivCheck) {
  Result r = invoke({"gauge", "equiv-check", "--gauge", R"({"kind":"escort","q":1.5})", "--a1", "0.3", "--a3", "0.2",
               "--lambda", "2", "--seed", "4"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_TRUE(parse(r.out)["pass"].get<bool>());
}

TEST(Cli, MarginalCheckReportsSmallDefect) {
  Result r = invoke({"qgauss", "marginal-check", "--q", "1.2", "--d", "1", "--k", "1", "--kprime", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse(r.out);
  EXPECT_LE(j["max_defect"].get<double>(), 1e-6);
  EXPECT_EQ(j["max_defect"].get<double>(), marginal_check(make_params(1.2, VectorXd::Zero(1)), 1, 1).max_defect);
}

TEST(Cli, HessianCheckOnCoin) {
  Result r = invoke({"discrete", "hessian-check", "--spec", data("coin.json"), "--theta", "0.4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse(r.out);
  EXPECT_LE(j["max_defect"].get<double>(), 1e-6);
  const DiscreteFamily fam = io::family_from_json(io::read_json_file(data("coin.json")));
  EXPECT_EQ(j["max_defect"].get<double>(), hessian_check(fam, VectorXd::Constant(1, 0.4)).max_defect);
}

TEST(Cli, NotApplicableIsExitTwo) {
  Result r = invoke({"discrete", "hessian-check", "--spec", data("escort.json"), "--theta", "0.2"});
  EXPECT_EQ(r.code, 2);
  r = invoke({"discrete", "canonical-check", "--spec", data("escort.json"), "--theta", "0.2", "--theta2", "-0.1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("not applicable"), std::string::npos);
  r = invoke({"discrete", "conformal-check", "--spec", data("escort.json"), "--theta", "0.2", "--theta2", "-0.1"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, DiscreteVerbsMatchLibrary) {
  const DiscreteFamily fam = io::family_from_json(io::read_json_file(data("power4.json")));
  VectorXd th(2), th2(2);
  th << 0.2, -0.1;
  th2 << -0.3, 0.25;
  Result r = invoke({"discrete", "normalize", "--spec", data("power4.json"), "--theta", "0.2,-0.1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse(r.out)["psi"].get<double>(), normalize(fam, th).psi);
  r = invoke({"discrete", "divergence", "--spec", data("power4.json"), "--theta", "0.2,-0.1", "--theta2", "[-0.3,0.25]"});
  EXPECT_EQ(parse(r.out)["divergence"].get<double>(),
            divergence(fam, normalize(fam, th).p, normalize(fam, th2).p));
  r = invoke({"discrete", "geometry", "--spec", data("power4.json"), "--theta", "0.2,-0.1"});
  EXPECT_EQ(io::matrix_from_json(parse(r.out)["g"], "g"), metric(fam, th));
  const VectorXd rho = normalize(fam, th2).p;
  std::string rho_text = io::to_json(rho).dump();
  r = invoke({"discrete", "project", "--spec", data("power4.json"), "--rho", rho_text});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(parse(r.out)["residual"].get<double>(), 1e-10);
  r = invoke({"discrete", "entropy-max", "--spec", data("power4.json"), "--rho", "0.4,0.1,0.3,0.2"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(parse(r.out)["holds"].get<bool>());
}

TEST(Cli, QgaussVerbsMatchLibrary) {
  const QGaussParams p = make_params(1.5, VectorXd::Constant(1, 0.5));
  Result r = invoke({"qgauss", "density", "--q", "1.5", "--v", "0.5", "--x", "1.2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse(r.out).get<double>(), density(p, VectorXd::Constant(1, 1.2)));
  r = invoke({"qgauss", "lambda", "--q", "1.2", "--d", "2"});
  EXPECT_EQ(parse(r.out).get<double>(), lambda_q(1.2, MatrixXd::Identity(2, 2)));
  r = invoke({"qgauss", "moments", "--q", "1.5", "--v", "0.5"});
  EXPECT_EQ(parse(r.out)["fourth"].get<double>(), moments(p, 0, 0).fourth);
  EXPECT_EQ(parse(r.out)["dof"].get<double>(), 7.0);

  r = invoke({"qgauss", "sample", "--q", "1.5", "--k", "2", "--n", "5", "--seed", "9"});
  ASSERT_EQ(r.code, 0) << r.err;
  const MatrixXd X = sample_joint(repetition(make_params(1.5, VectorXd::Zero(1)), 2), 5, 9);
  EXPECT_EQ(r.out, io::matrix_csv(X, "x_1_1,x_2_1"));
  EXPECT_EQ(io::read_csv_matrix(r.out), X);

  const fs::path csv = scratch("mle.csv");
  {
    std::ofstream f(csv);
    f << io::matrix_csv(sample_joint(repetition(make_params(1.5, VectorXd::Zero(1)), 2), 200, 3), "a,b");
  }
  r = invoke({"qgauss", "mle", "--q", "1.5", "--k", "2", "--data", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(parse(r.out)["grad_norm"].get<double>(), 1e-8);
  fs::remove(csv);
}

TEST(Cli, LlnVerbs) {
  Result r = invoke({"lln", "bounds", "--q", "1.5", "--k", "100", "--eps", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  SimConfig c;
  c.q = 1.5;
  c.v = VectorXd::Zero(1);
  const auto b = chebyshev_bounds(c, 100, 0.5);
  EXPECT_EQ(parse(r.out)[0]["bound_F"].get<double>(), b.bound_F);
  r = invoke({"lln", "summability", "--q", "1.5", "--eps", "0.5"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("100000,"), std::string::npos);
  r = invoke({"lln", "verify", "--q", "1.5", "--kmax", "100", "--reps", "100", "--format", "json"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(parse(r.out)["all_pass"].get<bool>());
}

TEST(Cli, RunBundleIsDeterministicAndReproducible) {
  const fs::path a = scratch("a"), b = scratch("b"), c = scratch("c");
  const std::vector<std::string> args{"lln", "run", "--q", "1.5", "--v", "2", "--kmax", "1000", "--reps", "20",
                                      "--seed", "42", "--workers", "3"};
  auto with_out = [&](fs::path dir) {
    auto v = args;
    v.push_back("--out");
    v.push_back(dir.string());
    return v;
  };
  ASSERT_EQ(invoke(with_out(a)).code, 0);
  ASSERT_EQ(invoke(with_out(b)).code, 0);
  const auto ma = io::read_json_file((a / "manifest.json").string());
  const auto mb = io::read_json_file((b / "manifest.json").string());
  EXPECT_EQ(ma["files"], mb["files"]);
  EXPECT_EQ(ma["seed"].get<std::uint64_t>(), 42u);
  EXPECT_EQ(ma["config"]["k_max"].get<long>(), 1000);
  EXPECT_EQ(ma["version"].get<std::string>(), DGEO_VERSION);
  EXPECT_EQ(slurp(a / "lln_run.csv"), slurp(b / "lln_run.csv"));
  for (const auto& f : ma["files"]) {
    const std::string name = f["name"].get<std::string>();
    EXPECT_EQ(f["sha256"].get<std::string>(), report::sha256_hex(slurp(a / name)));
  }
  // re-running from the manifest reproduces the CSV byte for byte
  ASSERT_EQ(invoke({"lln", "run", "--config", (a / "manifest.json").string(), "--out", c.string()}).code, 0);
  EXPECT_EQ(slurp(a / "lln_run.csv"), slurp(c / "lln_run.csv"));
  for (const auto& d : {a, b, c}) fs::remove_all(d);
}

TEST(Cli, Sha256KnownVectors) {
  EXPECT_EQ(report::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(report::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Cli, EmptyManifest) {
  report::Bundle empty;
  const auto m = report::manifest(empty);
  EXPECT_TRUE(m["files"].empty());
  EXPECT_TRUE(m["seed"].is_null());
}

TEST(Cli, ValidateSpecs) {
  Result r = invoke({"validate", "--spec", data("coin.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "PASS\n");
  r = invoke({"validate", "--spec", data("rank_deficient.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.out.rfind("FAIL\n", 0), 0u);
  EXPECT_NE(r.out.find("linearly dependent"), std::string::npos) << r.out;
  r = invoke({"validate", "--spec", data("bad_q.json"), "--for", "qgauss"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("q >= 1"), std::string::npos) << r.out;
}

TEST(Cli, ErrorsAndExitCodes) {
  Result r = invoke({"discrete", "normalize", "--spec", data("malformed.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 5"), std::string::npos) << r.err;
  r = invoke({"discrete", "normalize", "--spec", R"({"weights":[1,1],"gauge":{"kind":"kl"}})"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("spec.T"), std::string::npos) << r.err;
  r = invoke({"discrete", "normalize", "--spec", R"({"weights":[1,"x"],"gauge":{"kind":"kl"},"T":[[1,0]]})"});
  EXPECT_NE(r.err.find("spec.weights[1]"), std::string::npos) << r.err;
  r = invoke({"qgauss", "lambda", "--q", "0.5"});
  EXPECT_EQ(r.code, 2);
  r = invoke({"nosuchverb"});
  EXPECT_EQ(r.code, 1);
  r = invoke({"lln", "run", "--out", "/proc/forbidden/dir", "--kmax", "10", "--reps", "1"});
  EXPECT_EQ(r.code, 1);
  r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
}

TEST(Cli, LogLevelFromEnvironment) {
  ::setenv("DGEO_LOG", "debug", 1);
  Result r = invoke({"lln", "bounds", "--q", "1.5", "--k", "10", "--eps", "0.5"});
  ::unsetenv("DGEO_LOG");
  EXPECT_EQ(r.code, 0);
  // logging goes to stderr, never into the machine readable output
  EXPECT_NO_THROW(parse(r.out));
}
