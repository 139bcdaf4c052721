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

#ifndef QORRELATE_CLI_HPP
#define QORRELATE_CLI_HPP

#include <qorrelate/criteria.hpp>
#include <qorrelate/experiments.hpp>
#include <qorrelate/io.hpp>
#include <qorrelate/measurement.hpp>
#include <qorrelate/qstate.hpp>
#include <qorrelate/uncertainty.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qorrelate::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInvalidInput = 2;
inline constexpr int kNumericalFailure = 3;

struct Config {
  std::uint64_t seed = 0;
  int threads = default_threads();
  std::string output;
  std::string format;  // json | csv | table; empty means json (csv for scans)
  Tolerance tol;
  double detection_eps = 1e-9;
};

/// What a subcommand produced: a JSON document plus optional tables for
/// csv/table output.
struct Result {
  json doc;
  std::vector<Table> tables;
  bool scan = false;
  std::string svg;
  std::string svg_path;
};

namespace detail {

inline void write_table(std::ostream& out, const Table& t) {
  std::vector<size_t> w(t.columns.size());
  std::vector<std::vector<std::string>> cells;
  for (size_t c = 0; c < t.columns.size(); ++c) w[c] = t.columns[c].size();
  for (const auto& row : t.rows) {
    std::vector<std::string> line;
    for (size_t c = 0; c < row.size(); ++c) {
      std::ostringstream s;
      s << std::setprecision(10) << row[c];
      line.push_back(s.str());
      w[c] = std::max(w[c], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  for (size_t c = 0; c < t.columns.size(); ++c) out << (c ? "  " : "") << std::setw(int(w[c])) << t.columns[c];
  out << '\n';
  for (const auto& line : cells) {
    for (size_t c = 0; c < line.size(); ++c) out << (c ? "  " : "") << std::setw(int(w[c])) << line[c];
    out << '\n';
  }
}

// Scalar top-level fields as key/value lines.
inline void write_flat(std::ostream& out, const json& doc, const char* sep, bool header) {
  if (header) out << "key" << sep << "value\n";
  for (const auto& [k, v] : doc.items()) {
    if (v.is_primitive()) out << k << sep << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
}

inline void write_verdicts(std::ostream& out, const json& doc, bool csv) {
  std::vector<json> vs;
  if (doc.contains("verdicts")) {
    for (const auto& v : doc.at("verdicts")) vs.push_back(v);
  } else {
    vs.push_back(doc);
  }
  const char* sep = csv ? "," : "  ";
  out << "criterion" << sep << "lhs" << sep << "bound" << sep << "margin" << sep << "detected\n";
  for (const auto& v : vs) {
    out << v.at("criterion").get<std::string>() << sep << format_double(v.at("lhs").get<double>()) << sep
        << format_double(v.at("bound").get<double>()) << sep << format_double(v.at("margin").get<double>()) << sep
        << (v.at("detected").get<bool>() ? "true" : "false") << '\n';
  }
}

inline void emit(std::ostream& out, const Result& r, const std::string& format) {
  const std::string f = format.empty() ? (r.scan ? "csv" : "json") : format;
  const bool is_verdict = r.doc.contains("verdicts") || r.doc.contains("criterion");
  if (f == "json") {
    out << r.doc.dump(2) << '\n';
  } else if (f == "csv") {
    if (!r.tables.empty()) {
      for (size_t i = 0; i < r.tables.size(); ++i) {
        if (i) out << '\n';
        write_csv(out, r.tables[i]);
      }
    } else if (is_verdict) {
      write_verdicts(out, r.doc, true);
    } else {
      write_flat(out, r.doc, ",", true);
    }
  } else {
    if (!r.tables.empty()) {
      for (size_t i = 0; i < r.tables.size(); ++i) {
        if (i) out << '\n';
        write_table(out, r.tables[i]);
      }
    } else if (is_verdict) {
      write_verdicts(out, r.doc, false);
    } else {
      write_flat(out, r.doc, "  ", false);
    }
  }
}

inline DensityMatrix load_state(const std::string& arg, const Config& cfg) {
  return state_from_json(parse_json_arg(arg), cfg.tol);
}

inline Measurement load_measurement(const std::string& arg, int default_dim, const Config& cfg) {
  return measurement_from_json(parse_json_arg(arg), default_dim, cfg.tol);
}

inline CriterionOptions criterion_options(const Config& cfg) {
  CriterionOptions o;
  o.detection_eps = cfg.detection_eps;
  o.seed = cfg.seed;
  o.tol = cfg.tol;
  o.uncertainty.search.seed = cfg.seed;
  o.bx_search.seed = cfg.seed;
  return o;
}

inline json verdicts_doc(const std::vector<CriterionVerdict>& vs) {
  if (vs.size() == 1) return verdict_to_json(vs.front());
  json arr = json::array();
  for (const auto& v : vs) arr.push_back(verdict_to_json(v));
  return {{"verdicts", arr}};
}

inline RealVector parse_vector(const std::string& text) {
  const json j = parse_json_arg(text);
  if (!j.is_array()) throw Error(ErrorCode::InvalidInput, "expected a JSON array of numbers");
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorCode::InvalidInput, "expected a JSON array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

inline json structure_constants_json(const SuBasis& b) {
  const StructureConstants sc = structure_constants(b);
  json f = json::array(), g = json::array();
  for (int a = 0; a < sc.n; ++a)
    for (int bb = 0; bb < sc.n; ++bb)
      for (int c = 0; c < sc.n; ++c) {
        if (std::abs(sc.F(a, bb, c)) > 1e-12) f.push_back({a + 1, bb + 1, c + 1, sc.F(a, bb, c)});
        if (std::abs(sc.G(a, bb, c)) > 1e-12) g.push_back({a + 1, bb + 1, c + 1, sc.G(a, bb, c)});
      }
  return {{"f", f}, {"g", g}};
}

}  // namespace detail

/// Parses argv, runs one subcommand and writes its result. Returns 0 on
/// success, 2 on invalid input, 3 on numerical failure.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qorrelate: entanglement and steering detection from arbitrary Hermitian measurements"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--seed", cfg.seed, "Master RNG seed")->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker threads for scans")
      ->envname("QORRELATE_THREADS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--output,-o", cfg.output, "Output file (default stdout)");
  app.add_option("--format", cfg.format, "Output format: json|csv|table (default json, csv for scans)")
      ->check(CLI::IsMember({"json", "csv", "table"}));
  app.add_option("--eps-herm", cfg.tol.eps_herm, "Hermiticity tolerance")->capture_default_str();
  app.add_option("--eps-psd", cfg.tol.eps_psd, "Eigenvalue floor")->capture_default_str();
  app.add_option("--eps-rank", cfg.tol.eps_rank, "Relative rank cutoff")->capture_default_str();
  app.add_option("--eps-conv", cfg.tol.eps_conv, "Iteration convergence")->capture_default_str();
  app.add_option("--detection-eps", cfg.detection_eps, "Margin needed to report detection")->capture_default_str();

  Result result;
  std::function<void()> action;

  // basis
  auto* basis = app.add_subcommand("basis", "Generalized Gell-Mann basis (Tr[Pi_mu Pi_nu] = 2 delta)");
  int basis_dim = 2;
  bool with_sc = false;
  basis->add_option("--dim,-d", basis_dim, "Dimension d >= 2")->required();
  basis->add_flag("--structure-constants", with_sc, "Include nonzero f and g entries (1-based)");
  basis->callback([&] {
    action = [&] {
      const SuBasis& b = cached_basis(basis_dim);
      json gens = json::array();
      for (const auto& g : b.generators) gens.push_back(matrix_to_json(g));
      result.doc = {{"dim", b.dim},
                    {"order", "symmetric pairs, antisymmetric pairs, diagonal"},
                    {"pi0", matrix_to_json(b.pi0)},
                    {"generators", gens}};
      if (with_sc) result.doc["structure_constants"] = detail::structure_constants_json(b);
    };
  });

  // scm
  auto* scm_cmd = app.add_subcommand("scm", "Symmetric complete measurement X_mu = (h/d)1 + alpha e_mu.pi");
  int scm_dim = 2;
  double scm_alpha = 1.0, scm_h = 0.0;
  bool scm_sic = false;
  scm_cmd->add_option("--dim,-d", scm_dim, "Dimension d >= 2")->required();
  scm_cmd->add_option("--alpha", scm_alpha, "Common length alpha > 0")->capture_default_str();
  scm_cmd->set_help_flag("--help", "Print this help message and exit");
  scm_cmd->add_option("--h", scm_h, "Common trace h >= 0")->capture_default_str();
  scm_cmd->add_flag("--sic", scm_sic, "Use alpha^2 = (d-1)/(2d^3), h = 1/d");
  scm_cmd->callback([&] {
    action = [&] {
      const Measurement m = scm_sic ? sic_scm(scm_dim) : scm(scm_dim, scm_alpha, scm_h);
      const auto p = scm_parameters(m);
      const SicCheck sc = sic_check(m, cfg.tol);
      result.doc = {{"measurement", measurement_to_json(m)},
                    {"alpha", p->alpha},
                    {"h", p->h},
                    {"gram", matrix_to_json(gram(m))},
                    {"max_bx_norm", max_bx_norm(m).value},
                    {"uncertainty_bound", uncertainty_bound(m).value},
                    {"sic_check",
                     {{"is_povm", sc.is_povm},
                      {"is_sic", sc.is_sic},
                      {"sum_residual", sc.sum_residual},
                      {"min_eigenvalue", sc.min_eigenvalue},
                      {"gram_residual", sc.gram_residual}}}};
    };
  });

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "Reconstruct a state from expectation data");
  std::string rec_meas, rec_data, rec_state;
  int rec_dim = 0;
  rec->add_option("--measurement,-m", rec_meas, "Measurement JSON, file or preset name")->required();
  rec->add_option("--dim,-d", rec_dim, "Dimension for presets without 'dim'");
  auto* data_opt = rec->add_option("--data", rec_data, "Expectation values as a JSON array");
  rec->add_option("--state", rec_state, "Generate the data from this single-system state")->excludes(data_opt);
  rec->callback([&] {
    action = [&] {
      int d = rec_dim;
      std::optional<DensityMatrix> src;
      if (!rec_state.empty()) {
        src = detail::load_state(rec_state, cfg);
        if (src->is_bipartite()) throw Error(ErrorCode::InvalidInput, "reconstruct takes a single-system state");
        if (d == 0) d = src->dim();
      }
      const Measurement m = detail::load_measurement(rec_meas, d, cfg);
      RealVector x;
      if (src) {
        x = expectation_vector(*src, m);
      } else if (!rec_data.empty()) {
        x = detail::parse_vector(rec_data);
      } else {
        throw Error(ErrorCode::InvalidInput, "reconstruct needs --data or --state");
      }
      json doc;
      if (scm_parameters(m)) {
        const ScmReconstruction r = reconstruct_scm(x, m, cfg.tol);
        doc = {{"method", r.pinv_branch ? "scm_pinv" : "scm_formula"},
               {"is_psd", r.is_psd},
               {"min_eigenvalue", r.min_eigenvalue}};
        if (r.is_psd) {
          const DensityMatrix rho = r.state(cfg.tol);
          doc["state"] = state_to_json(rho);
          doc["purity"] = purity(rho);
        } else {
          doc["matrix"] = matrix_to_json(r.matrix);
        }
      } else {
        const DensityMatrix rho = reconstruct_general(x, m, cfg.tol);
        doc = {{"method", "general_pinv"}, {"is_psd", true}, {"state", state_to_json(rho)}, {"purity", purity(rho)}};
      }
      doc["purity_from_moments"] = purity_from_moments(x, m, cfg.tol);
      if (src) doc["max_abs_error"] = max_abs((src->mat() - matrix_from_json(doc.contains("state") ? doc["state"]["matrix"] : doc["matrix"])).eval());
      result.doc = doc;
    };
  });

  // uncertainty-bound
  auto* ub = app.add_subcommand("uncertainty-bound", "State-independent bound S = min V(rho, X)");
  std::string ub_meas;
  int ub_dim = 0, ub_starts = 128;
  bool ub_numeric = false;
  ub->add_option("--measurement,-m", ub_meas, "Measurement JSON, file or preset name")->required();
  ub->add_option("--dim,-d", ub_dim, "Dimension for presets without 'dim'");
  ub->add_flag("--numeric", ub_numeric, "Force the multi-start numeric minimization");
  ub->add_option("--starts", ub_starts, "Starts for the numeric minimization")->check(CLI::PositiveNumber)->capture_default_str();
  ub->callback([&] {
    action = [&] {
      const Measurement m = detail::load_measurement(ub_meas, ub_dim, cfg);
      UncertaintyOptions o;
      o.force_numeric = ub_numeric;
      o.search.starts = ub_starts;
      o.search.seed = cfg.seed;
      const UncertaintyBound b = uncertainty_bound(m, o);
      result.doc = {{"value", b.value}, {"method", b.method}, {"certified", b.certified}};
      if (b.certificate) {
        const ComplexVector& v = *b.certificate;
        result.doc["certificate"] = matrix_to_json(ComplexMatrix(v * v.adjoint()));
      }
    };
  });

  // check-entanglement
  auto* ce = app.add_subcommand("check-entanglement", "Entanglement criteria on a bipartite state");
  std::string ce_state, ce_a = "om", ce_b = "om", ce_crit = "all";
  ce->add_option("--state,-s", ce_state, "State JSON, file")->required();
  ce->add_option("--measurement-a,-a", ce_a, "Alice's measurement")->capture_default_str();
  ce->add_option("--measurement-b,-b", ce_b, "Bob's measurement")->capture_default_str();
  ce->add_option("--criterion,-c", ce_crit, "C | gamma | lur | nf-C | nf-gamma | all")
      ->check(CLI::IsMember({"C", "gamma", "lur", "nf-C", "nf-gamma", "all"}))
      ->capture_default_str();
  ce->callback([&] {
    action = [&] {
      const DensityMatrix rho = detail::load_state(ce_state, cfg);
      if (!rho.is_bipartite()) throw Error(ErrorCode::InvalidInput, "bipartite state required");
      const CriterionOptions o = detail::criterion_options(cfg);
      std::vector<CriterionVerdict> vs;
      const bool all = ce_crit == "all";
      if (all || ce_crit == "C" || ce_crit == "gamma" || ce_crit == "lur") {
        const Measurement xa = detail::load_measurement(ce_a, rho.dim_a(), cfg);
        const Measurement xb = detail::load_measurement(ce_b, rho.dim_b(), cfg);
        if (all || ce_crit == "C") vs.push_back(ent_criterion_C(rho, xa, xb, o));
        if (all || ce_crit == "gamma") vs.push_back(ent_criterion_gamma(rho, xa, xb, o));
        if (all || ce_crit == "lur") vs.push_back(lur_criterion(rho, xa, xb, o));
      }
      if ((all || ce_crit == "nf-C") && rho.dim_a() == rho.dim_b()) {
        vs.push_back(normalform_criterion(rho, NormalFormVariant::C_nf, o));
      }
      if ((all || ce_crit == "nf-gamma") && rho.dim_a() == rho.dim_b()) {
        vs.push_back(normalform_criterion(rho, NormalFormVariant::gamma_nf, o));
      }
      if (vs.empty()) throw Error(ErrorCode::DimensionMismatch, "normal-form criteria need equal local dimensions");
      result.doc = detail::verdicts_doc(vs);
    };
  });

  // check-steering
  auto* cs = app.add_subcommand("check-steering", "Steering (by Alice) criteria on a bipartite state");
  std::string cs_state, cs_a = "om", cs_b = "om", cs_crit = "C", cs_xi_vec;
  double cs_xi = 1.0;
  bool cs_opt_xi = false, cs_orbit = false;
  cs->add_option("--state,-s", cs_state, "State JSON, file")->required();
  cs->add_option("--measurement-a,-a", cs_a, "Alice's measurement")->capture_default_str();
  cs->add_option("--measurement-b,-b", cs_b, "Bob's measurement")->capture_default_str();
  cs->add_option("--criterion,-c", cs_crit, "C | gamma | nf | lur | all")
      ->check(CLI::IsMember({"C", "gamma", "nf", "lur", "all"}))
      ->capture_default_str();
  auto* xi_opt = cs->add_option("--xi", cs_xi, "Scalar xi > 0 for the gamma criterion")->capture_default_str();
  cs->add_option("--xi-vector", cs_xi_vec, "Per-component xi as a JSON array")->excludes(xi_opt);
  cs->add_flag("--optimize-xi", cs_opt_xi, "Golden-section search for the scalar xi");
  cs->add_flag("--orbit-search", cs_orbit, "Minimize kappa_A over the measurement orbit");
  cs->callback([&] {
    action = [&] {
      const DensityMatrix rho = detail::load_state(cs_state, cfg);
      if (!rho.is_bipartite()) throw Error(ErrorCode::InvalidInput, "bipartite state required");
      const Measurement xa = detail::load_measurement(cs_a, rho.dim_a(), cfg);
      const Measurement xb = detail::load_measurement(cs_b, rho.dim_b(), cfg);
      CriterionOptions o = detail::criterion_options(cfg);
      o.orbit_search = cs_orbit;
      const bool all = cs_crit == "all";
      std::vector<CriterionVerdict> vs;
      if (all || cs_crit == "C") vs.push_back(steer_criterion_C(rho, xa, xb, o));
      if (all || cs_crit == "gamma") {
        if (!cs_xi_vec.empty()) {
          vs.push_back(steer_criterion_gamma(rho, xa, xb, detail::parse_vector(cs_xi_vec), o));
        } else if (cs_opt_xi) {
          vs.push_back(optimize_xi(rho, xa, xb, o).verdict);
        } else {
          vs.push_back(steer_criterion_gamma(rho, xa, xb, cs_xi, o));
        }
      }
      if (all || cs_crit == "lur") vs.push_back(steer_lur(rho, xa, xb, o));
      if (cs_crit == "nf") {
        const RealVector xi =
            cs_xi_vec.empty() ? RealVector::Constant(xa.size(), cs_xi) : detail::parse_vector(cs_xi_vec);
        vs.push_back(steer_criterion_nf(rho, xa, xb, xi, o));
      }
      result.doc = detail::verdicts_doc(vs);
    };
  });

  // witness
  auto* wc = app.add_subcommand("witness", "Optimal witness kappa 1 - sum X'_mu^A (x) X'_mu^B for a state");
  std::string w_state, w_a = "om", w_b = "om";
  std::optional<double> w_kappa;
  wc->add_option("--state,-s", w_state, "State JSON, file")->required();
  wc->add_option("--measurement-a,-a", w_a, "Alice's measurement")->capture_default_str();
  wc->add_option("--measurement-b,-b", w_b, "Bob's measurement")->capture_default_str();
  wc->add_option("--kappa", w_kappa, "Override kappa (default kappa_A kappa_B)");
  wc->callback([&] {
    action = [&] {
      const DensityMatrix rho = detail::load_state(w_state, cfg);
      if (!rho.is_bipartite()) throw Error(ErrorCode::InvalidInput, "bipartite state required");
      const Measurement xa = detail::load_measurement(w_a, rho.dim_a(), cfg);
      const Measurement xb = detail::load_measurement(w_b, rho.dim_b(), cfg);
      OptimalWitness w = optimal_witness(rho, xa, xb, detail::criterion_options(cfg));
      if (w_kappa) {
        const int n = rho.dim();
        w.w += (*w_kappa - w.kappa) * ComplexMatrix::Identity(n, n);
        w.expectation += *w_kappa - w.kappa;
        w.kappa = *w_kappa;
      }
      result.doc = {{"kappa", w.kappa},
                    {"expectation", w.expectation},
                    {"detected", w.expectation < -cfg.detection_eps},
                    {"witness", matrix_to_json(w.w)},
                    {"orbit_a", matrix_to_json(w.oa)},
                    {"orbit_b", matrix_to_json(w.ob)}};
    };
  });

  // scan
  auto* scan = app.add_subcommand("scan", "Deterministic parameter scans");
  scan->require_subcommand(1);
  auto finish_scan = [&](const ScanResult& r) {
    result.scan = true;
    result.doc = scan_to_json(r);
    result.tables.push_back(r.table);
    if (!r.curves.columns.empty()) result.tables.push_back(r.curves);
    result.svg = r.svg;
  };

  auto* sh = scan->add_subcommand("horodecki", "Horodecki 3x3 states with white noise: CCNR, ESIC, chi'-chi");
  int sh_tn = 50, sh_pn = 50;
  double sh_pmin = 0.99, sh_pmax = 1.0;
  std::string sh_svg;
  sh->add_option("--t-points", sh_tn, "Points on t in [0,1]")->check(CLI::PositiveNumber)->capture_default_str();
  sh->add_option("--p-points", sh_pn, "Points on p")->check(CLI::PositiveNumber)->capture_default_str();
  sh->add_option("--p-min", sh_pmin, "Lower end of the p grid")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  sh->add_option("--p-max", sh_pmax, "Upper end of the p grid")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  sh->add_option("--svg", sh_svg, "Write the boundary curves as SVG to this path");
  sh->callback([&] {
    action = [&] {
      finish_scan(scan_horodecki(linspace(0.0, 1.0, sh_tn), linspace(sh_pmin, sh_pmax, sh_pn), cfg.threads));
      result.svg_path = sh_svg;
    };
  });

  auto* sr = scan->add_subcommand("random-steering", "Hilbert-Schmidt two-qubit states, single-xi gamma criterion");
  int sr_n = 10000, sr_xn = 100;
  std::string sr_preset;
  double sr_xmin = 0.02, sr_xmax = 2.0;
  auto* n_opt = sr->add_option("--n", sr_n, "Number of states")->check(CLI::PositiveNumber)->capture_default_str();
  sr->add_option("--preset", sr_preset, "ci (n = 10000) or full (n = 50000)")
      ->check(CLI::IsMember({"ci", "full"}))
      ->excludes(n_opt);
  sr->add_option("--xi-min", sr_xmin, "Smallest xi")->check(CLI::PositiveNumber)->capture_default_str();
  sr->add_option("--xi-max", sr_xmax, "Largest xi")->check(CLI::PositiveNumber)->capture_default_str();
  sr->add_option("--xi-points", sr_xn, "Points on the xi grid")->check(CLI::PositiveNumber)->capture_default_str();
  sr->callback([&] {
    action = [&] {
      const int n = sr_preset == "full" ? 50000 : sr_preset == "ci" ? 10000 : sr_n;
      finish_scan(scan_random_steering(n, linspace(sr_xmin, sr_xmax, sr_xn), cfg.seed, cfg.threads));
    };
  });

  auto* sw = scan->add_subcommand("werner", "Two-setting Werner steering thresholds versus delta");
  int sw_n = 11;
  sw->add_option("--delta-points", sw_n, "Points on delta in [pi/12, 11pi/12]")->check(CLI::PositiveNumber)->capture_default_str();
  sw->callback([&] {
    action = [&] { finish_scan(werner_thresholds(linspace(M_PI / 12, 11 * M_PI / 12, sw_n), cfg.threads)); };
  });

  auto* si = scan->add_subcommand("isotropic", "Isotropic steering thresholds eta*(d)");
  std::vector<int> si_dims{2, 3, 4};
  si->add_option("--dims", si_dims, "Local dimensions")->delimiter(',')->capture_default_str();
  si->callback([&] { action = [&] { finish_scan(isotropic_thresholds(si_dims, cfg.threads)); }; });

  auto* sp = scan->add_subcommand("ppt-agreement", "Normal-form criterion versus PPT on random two-qubit states");
  int sp_n = 1000, sp_sep = -1;
  sp->add_option("--n", sp_n, "Number of random states")->check(CLI::PositiveNumber)->capture_default_str();
  sp->add_option("--separable", sp_sep, "Separable soundness samples (default n)");
  sp->callback([&] { action = [&] { finish_scan(ppt_agreement(sp_n, cfg.seed, cfg.threads, sp_sep)); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    cfg.tol.validate();
    if (!(cfg.detection_eps >= 0.0)) throw Error(ErrorCode::InvalidInput, "detection-eps must be >= 0");
    action();
    std::ofstream file;
    if (!cfg.output.empty()) {
      file.open(cfg.output);
      if (!file) throw Error(ErrorCode::InvalidInput, "cannot open output file " + cfg.output);
    }
    std::ostream& dst = cfg.output.empty() ? out : file;
    detail::emit(dst, result, cfg.format);
    if (!result.svg_path.empty()) {
      std::ofstream svg(result.svg_path);
      if (!svg) throw Error(ErrorCode::InvalidInput, "cannot open svg file " + result.svg_path);
      svg << result.svg;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.numerical() ? kNumericalFailure : kInvalidInput;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kOk;
}

}  // namespace qorrelate::cli

#endif  // QORRELATE_CLI_HPP
