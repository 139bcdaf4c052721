// Copyright 2026 The qorrelate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QORRELATE_IO_HPP
#define QORRELATE_IO_HPP

#include <qorrelate/criteria.hpp>
#include <qorrelate/experiments.hpp>
#include <qorrelate/measurement.hpp>
#include <qorrelate/qstate.hpp>

#include <json.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace qorrelate {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Matrices: {"rows": n, "cols": m, "re": [row-major], "im": [row-major]}

template <typename Derived>
json matrix_to_json(const Eigen::MatrixBase<Derived>& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const cplx v(m(i, j));
      re.push_back(v.real());
      im.push_back(v.imag());
    }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

namespace detail {

[[noreturn]] inline void bad_input(const std::string& what) { throw Error(ErrorCode::InvalidInput, what); }

inline double get_number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) bad_input(std::string("missing numeric field '") + key + "'");
  return j.at(key).get<double>();
}

inline double get_number_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) bad_input(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

inline int get_int(const json& j, const char* key) {
  const double v = get_number(j, key);
  if (v != std::floor(v)) bad_input(std::string("field '") + key + "' must be an integer");
  return static_cast<int>(v);
}

}  // namespace detail

inline ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object()) detail::bad_input("matrix must be a JSON object");
  const int rows = detail::get_int(j, "rows");
  const int cols = detail::get_int(j, "cols");
  if (rows < 0 || cols < 0) detail::bad_input("matrix dimensions must be nonnegative");
  if (!j.contains("re") || !j.at("re").is_array()) detail::bad_input("matrix needs a 're' array");
  const json& re = j.at("re");
  const json im = j.contains("im") ? j.at("im") : json::array();
  const size_t n = static_cast<size_t>(rows) * cols;
  if (re.size() != n || (!im.empty() && im.size() != n)) {
    throw Error(ErrorCode::DimensionMismatch, "matrix entry count differs from rows*cols");
  }
  ComplexMatrix m(rows, cols);
  for (size_t k = 0; k < n; ++k) {
    if (!re[k].is_number() || (!im.empty() && !im[k].is_number())) detail::bad_input("matrix entries must be numbers");
    m(static_cast<Eigen::Index>(k / cols), static_cast<Eigen::Index>(k % cols)) =
        cplx(re[k].get<double>(), im.empty() ? 0.0 : im[k].get<double>());
  }
  require_finite(m, "matrix");
  return m;
}

// ---------------------------------------------------------------------------
// States

inline json state_to_json(const DensityMatrix& rho) {
  json j = {{"family", "explicit"}, {"matrix", matrix_to_json(rho.mat())}};
  j["dims"] = rho.is_bipartite() ? json{rho.dim_a(), rho.dim_b()} : json{rho.dim()};
  return j;
}

/// Families: werner{p}, isotropic{d, eta}, bell_diagonal{t}, horodecki{t},
/// horodecki_noise{t, p}, random_hs{d or dims, seed} (d gives d x d bipartite,
/// dims [n] a single system),
/// explicit{matrix, dims?}. Explicit square-dimension matrices default to
/// equal local dimensions.
inline DensityMatrix state_from_json(const json& j, const Tolerance& tol = {}) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string()) {
    detail::bad_input("state must be an object with a 'family' string");
  }
  const std::string f = j.at("family").get<std::string>();
  if (f == "werner") return werner(detail::get_number(j, "p"));
  if (f == "isotropic") return isotropic(detail::get_int(j, "d"), detail::get_number(j, "eta"));
  if (f == "horodecki") return horodecki_3x3(detail::get_number(j, "t"));
  if (f == "horodecki_noise") return horodecki_noise(detail::get_number(j, "t"), detail::get_number(j, "p"));
  if (f == "bell_diagonal") {
    if (!j.contains("t") || !j.at("t").is_array() || j.at("t").size() != 3) detail::bad_input("bell_diagonal needs t: [t1,t2,t3]");
    std::array<double, 3> t{};
    for (int k = 0; k < 3; ++k) {
      if (!j.at("t")[k].is_number()) detail::bad_input("bell_diagonal t entries must be numbers");
      t[k] = j.at("t")[k].get<double>();
    }
    return bell_diagonal(t, tol);
  }
  if (f == "random_hs") {
    const double s = detail::get_number_or(j, "seed", 0.0);
    if (s < 0 || s != std::floor(s)) detail::bad_input("seed must be a nonnegative integer");
    const auto seed = static_cast<std::uint64_t>(s);
    if (j.contains("dims")) {
      const json& d = j.at("dims");
      if (!d.is_array() || d.empty() || d.size() > 2) detail::bad_input("dims must be [d] or [dA, dB]");
      if (d.size() == 1) return random_hs(d[0].get<int>(), seed);
      return random_hs(d[0].get<int>(), d[1].get<int>(), seed);
    }
    const int d = detail::get_int(j, "d");
    return random_hs(d, d, seed);
  }
  if (f == "explicit") {
    if (!j.contains("matrix")) detail::bad_input("explicit state needs 'matrix'");
    const ComplexMatrix m = matrix_from_json(j.at("matrix"));
    if (j.contains("dims")) {
      const json& d = j.at("dims");
      if (!d.is_array() || d.empty() || d.size() > 2) detail::bad_input("dims must be [d] or [dA, dB]");
      if (d.size() == 1) return DensityMatrix::single(m, tol);
      return DensityMatrix::bipartite(m, d[0].get<int>(), d[1].get<int>(), tol);
    }
    const int n = static_cast<int>(m.rows());
    const int r = static_cast<int>(std::lround(std::sqrt(double(n))));
    if (r * r == n && r >= 2) return DensityMatrix::bipartite(m, r, r, tol);
    return DensityMatrix::single(m, tol);
  }
  detail::bad_input("unknown state family '" + f + "'");
}

// ---------------------------------------------------------------------------
// Measurements

inline json measurement_to_json(const Measurement& x) {
  json obs = json::array();
  for (const auto& o : x.observables()) obs.push_back(matrix_to_json(o));
  json j = {{"dim", x.dim()}, {"observables", obs}};
  if (!x.label().empty()) j["label"] = x.label();
  return j;
}

/// {"dim": d, "observables": [...]} or {"preset": name, ...}; a bare string is
/// a preset name. `default_dim` fills a missing "dim" (0: required).
inline Measurement measurement_from_json(const json& j, int default_dim = 0, const Tolerance& tol = {}) {
  json spec = j.is_string() ? json{{"preset", j.get<std::string>()}} : j;
  if (!spec.is_object()) detail::bad_input("measurement must be an object or a preset name");
  auto dim = [&]() {
    if (spec.contains("dim")) return detail::get_int(spec, "dim");
    if (default_dim >= 2) return default_dim;
    detail::bad_input("measurement needs 'dim'");
  };
  if (spec.contains("observables")) {
    if (!spec.at("observables").is_array() || spec.at("observables").empty()) {
      detail::bad_input("'observables' must be a nonempty array");
    }
    std::vector<ComplexMatrix> mats;
    for (const auto& o : spec.at("observables")) mats.push_back(matrix_from_json(o));
    Measurement m = Measurement::from_observables(std::move(mats), tol);
    if (spec.contains("dim") && detail::get_int(spec, "dim") != m.dim()) {
      throw Error(ErrorCode::DimensionMismatch, "'dim' differs from the observables");
    }
    if (spec.contains("label") && spec.at("label").is_string()) m.with_label(spec.at("label").get<std::string>());
    return m;
  }
  if (!spec.contains("preset") || !spec.at("preset").is_string()) detail::bad_input("measurement needs 'observables' or 'preset'");
  const std::string p = spec.at("preset").get<std::string>();
  if (p == "pauli") return pauli();
  if (p == "dichotomy") {
    return dichotomy(detail::get_number(spec, "theta"), detail::get_number_or(spec, "alpha", 1.0));
  }
  if (p == "om") return orthogonal_measurement(dim());
  if (p == "gellmann") return gell_mann_measurement(dim());
  if (p == "gellmann-h") return scaled_gell_mann(dim(), detail::get_number(spec, "h"));
  if (p == "sic") return sic_scm(dim());
  if (p == "scm") {
    const int d = dim();
    if (spec.value("sic", false)) return sic_scm(d);
    return scm(d, detail::get_number_or(spec, "alpha", 1.0), detail::get_number_or(spec, "h", 0.0));
  }
  detail::bad_input("unknown measurement preset '" + p + "'");
}

// ---------------------------------------------------------------------------
// Verdicts and scans

inline json params_to_json(const std::map<std::string, ParamValue>& params) {
  json j = json::object();
  for (const auto& [k, v] : params) {
    std::visit([&](const auto& x) { j[k] = x; }, v);
  }
  return j;
}

inline json verdict_to_json(const CriterionVerdict& v) {
  json j = {{"criterion", v.criterion}, {"lhs", v.lhs},         {"bound", v.bound},
            {"margin", v.margin},       {"detected", v.detected}, {"detection_eps", v.detection_eps},
            {"params", params_to_json(v.params)}};
  if (!v.notes.empty()) j["notes"] = v.notes;
  return j;
}

inline CriterionVerdict verdict_from_json(const json& j) {
  if (!j.is_object() || !j.contains("criterion") || !j.at("criterion").is_string()) {
    detail::bad_input("verdict needs a 'criterion' string");
  }
  CriterionVerdict v;
  v.criterion = j.at("criterion").get<std::string>();
  v.lhs = detail::get_number(j, "lhs");
  v.bound = detail::get_number(j, "bound");
  v.margin = detail::get_number(j, "margin");
  if (!j.contains("detected") || !j.at("detected").is_boolean()) detail::bad_input("verdict needs 'detected'");
  v.detected = j.at("detected").get<bool>();
  v.detection_eps = detail::get_number_or(j, "detection_eps", 1e-9);
  if (j.contains("params")) {
    for (const auto& [k, x] : j.at("params").items()) {
      if (x.is_boolean()) v.params[k] = x.get<bool>();
      else if (x.is_number()) v.params[k] = x.get<double>();
      else if (x.is_string()) v.params[k] = x.get<std::string>();
      else detail::bad_input("verdict params must be scalars");
    }
  }
  if (j.contains("notes") && j.at("notes").is_string()) v.notes = j.at("notes").get<std::string>();
  return v;
}

inline json table_to_json(const Table& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json row = json::array();
    for (double v : r) row.push_back(std::isfinite(v) ? json(v) : json(nullptr));
    rows.push_back(row);
  }
  return {{"columns", t.columns}, {"rows", rows}};
}

inline json scan_to_json(const ScanResult& r) {
  json j = {{"experiment", r.id}, {"grid", r.grid}, {"seed", r.seed}, {"table", table_to_json(r.table)},
            {"summary", r.summary}};
  if (!r.curves.columns.empty()) j["curves"] = table_to_json(r.curves);
  return j;
}

/// Inline JSON when the text starts with '{', '[' or '"'; otherwise the
/// contents of the named file when it exists; otherwise the bare string.
inline json parse_json_arg(const std::string& text) {
  auto parse = [](const std::string& s, const std::string& where) {
    try {
      return json::parse(s);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::InvalidInput, "malformed JSON in " + where + ": " + e.what());
    }
  };
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[' || text[first] == '"')) {
    return parse(text, "argument");
  }
  std::ifstream in(text);
  if (in) {
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), text);
  }
  return json(text);
}

}  // namespace qorrelate

#endif  // QORRELATE_IO_HPP
