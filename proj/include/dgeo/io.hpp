#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "dgeo/discrete_family.hpp"
#include "dgeo/gauge.hpp"
#include "dgeo/lln.hpp"
#include "dgeo/qgauss.hpp"

namespace dgeo::io {

using json = nlohmann::ordered_json;

// Malformed input; what() names the line or the offending field.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json parse_json(const std::string& text, const std::string& source = "input");
json read_json_file(const std::string& path);
std::string read_file(const std::string& path);

// Field accessors; `where` is the dotted path used in diagnostics.
double get_number(const json& j, const std::string& key, const std::string& where);
double get_number_or(const json& j, const std::string& key, double fallback, const std::string& where);
Eigen::VectorXd vector_from_json(const json& j, const std::string& where);
Eigen::MatrixXd matrix_from_json(const json& j, const std::string& where);
json to_json(const Eigen::VectorXd& v);
json to_json(const Eigen::MatrixXd& m);  // row major

// {"kind":"power","q":1.5,"lo":0,"hi":null}; scaled_log uses "lambda".
GaugeSpec gauge_from_json(const json& j, const std::string& where = "gauge");
json to_json(const GaugeSpec& g);

// {"weights":[...], "gauge":{...}, "T":[[...]], "c":[...], "theta_box":[[lo,hi],...]}
DiscreteFamily family_from_json(const json& j);

QGaussParams qgauss_from_json(const json& j);
json to_json(const QGaussParams& p);

SimConfig sim_config_from_json(const json& j);
json to_json(const SimConfig& c);

json to_json(const Normalized& n);
json to_json(const GeometryReport& r);
json to_json(const Projection& p);
json to_json(const EntropyMax& e);
json to_json(const MarginalReport& r);
json to_json(const Moments& m);
json to_json(const MleResult& r);
json to_json(const ChebyshevBounds& b);
json to_json(const Summability& s);

// Pretty printed with a trailing newline.
std::string dump(const json& j);

// %.17g
std::string format_double(double x);
std::string matrix_csv(const Eigen::MatrixXd& m, const std::string& header);
Eigen::MatrixXd read_csv_matrix(const std::string& text);

// One row per (k, rep) and per (k, eps) cell.
std::string averages_csv(const SimReport& r);
std::string bounds_csv(const std::vector<BoundCell>& cells);
std::string summability_csv(const Summability& s);

}  // namespace dgeo::io
