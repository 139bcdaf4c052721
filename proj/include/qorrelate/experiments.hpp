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

#ifndef QORRELATE_EXPERIMENTS_HPP
#define QORRELATE_EXPERIMENTS_HPP

#include <qorrelate/criteria.hpp>
#include <qorrelate/measurement.hpp>
#include <qorrelate/qstate.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace qorrelate {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ScanResult {
  std::string id;
  std::string grid;
  std::uint64_t seed = 0;
  Table table;
  Table curves;  // secondary table (boundary curves, thresholds); may be empty
  std::map<std::string, double> summary;
  std::string svg;
  double wall_seconds = 0.0;  // informational, never written to CSV
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// One header line, then one line per row at 17 significant digits.
inline void write_csv(std::ostream& out, const Table& t) {
  for (size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

inline std::string to_csv(const Table& t) {
  std::ostringstream s;
  write_csv(s, t);
  return s.str();
}

inline int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is
/// handled exactly once and results are written by index, so output does not
/// depend on the schedule. The first exception is rethrown after joining.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::thread> pool;
  const int k = std::min(threads, n);
  for (int t = 0; t < k; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

// Smallest x in [lo, hi] with pred(x) true, assuming pred is monotone;
// NaN when pred(hi) is false.
inline double bisect_threshold(const std::function<bool(double)>& pred, double lo, double hi, int iterations) {
  if (!pred(hi)) return std::numeric_limits<double>::quiet_NaN();
  if (pred(lo)) return lo;
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    (pred(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

inline std::string grid_text(const std::vector<double>& g) {
  if (g.empty()) return "[]";
  return "[" + format_double(g.front()) + ".." + format_double(g.back()) + "] x" + std::to_string(g.size());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Horodecki 3x3 states with white noise

struct HorodeckiMargins {
  double ccnr = 0.0;  // ent_C with the orthogonal measurement
  double esic = 0.0;  // ent_C with the SCM at SIC parameters
  double cor5 = 0.0;  // nf_gamma
};

inline HorodeckiMargins horodecki_margins(double t, double p) {
  static const Measurement om = orthogonal_measurement(3);
  static const Measurement sic = sic_scm(3);
  const DensityMatrix rho = horodecki_noise(t, p);
  return {ent_criterion_C(rho, om, om).margin, ent_criterion_C(rho, sic, sic).margin,
          normalform_criterion(rho, NormalFormVariant::gamma_nf).margin};
}

inline std::string threshold_svg(const Table& curves, const std::vector<std::string>& names, double ylo,
                                 double yhi) {
  const double w = 640, h = 400, pad = 40;
  const char* colors[] = {"#e67e22", "#2980b9", "#c0392b", "#27ae60"};
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  s << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << w - 2 * pad << "\" height=\"" << h - 2 * pad
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (size_t c = 0; c < names.size(); ++c) {
    s << "<polyline fill=\"none\" stroke=\"" << colors[c % 4] << "\" points=\"";
    for (const auto& row : curves.rows) {
      const double y = row[c + 1];
      if (!std::isfinite(y)) continue;
      const double px = pad + (w - 2 * pad) * row[0];
      const double py = h - pad - (h - 2 * pad) * (y - ylo) / (yhi - ylo);
      s << format_double(px) << "," << format_double(py) << " ";
    }
    s << "\"/>\n";
    s << "<text x=\"" << pad + 10 << "\" y=\"" << pad + 16 * (c + 1) << "\" fill=\"" << colors[c % 4] << "\">"
      << names[c] << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

/// Per (t, p): margins of CCNR, ESIC and the chi' - chi criterion; plus per-t
/// detection boundaries (minimal detected p) by 30-step bisection.
inline ScanResult scan_horodecki(const std::vector<double>& t_grid, const std::vector<double>& p_grid,
                                 int threads = 1) {
  detail::Stopwatch sw;
  for (double v : t_grid) require_unit_interval(v, "t");
  for (double v : p_grid) require_unit_interval(v, "p");
  ScanResult r;
  r.id = "horodecki";
  r.grid = "t=" + detail::grid_text(t_grid) + " p=" + detail::grid_text(p_grid);
  r.table.columns = {"t", "p", "ccnr_margin", "esic_margin", "cor5_margin",
                     "ccnr_detected", "esic_detected", "cor5_detected"};
  const int nt = static_cast<int>(t_grid.size());
  const int np = static_cast<int>(p_grid.size());
  r.table.rows.assign(static_cast<size_t>(nt) * np, {});
  parallel_for(nt * np, threads, [&](int k) {
    const double t = t_grid[k / np];
    const double p = p_grid[k % np];
    const HorodeckiMargins m = horodecki_margins(t, p);
    r.table.rows[k] = {t, p, m.ccnr, m.esic, m.cor5, double(m.ccnr > 1e-9), double(m.esic > 1e-9),
                       double(m.cor5 > 1e-9)};
  });

  r.curves.columns = {"t", "p_ccnr", "p_esic", "p_cor5"};
  r.curves.rows.assign(nt, {});
  parallel_for(nt, threads, [&](int i) {
    const double t = t_grid[i];
    auto boundary = [&](int which) {
      return detail::bisect_threshold(
          [&](double p) {
            const HorodeckiMargins m = horodecki_margins(t, p);
            const double v = which == 0 ? m.ccnr : which == 1 ? m.esic : m.cor5;
            return v > 1e-9;
          },
          0.0, 1.0, 30);
    };
    r.curves.rows[i] = {t, boundary(0), boundary(1), boundary(2)};
  });

  double n_ccnr = 0, n_esic = 0, n_cor5 = 0, below1_ccnr = 0, below1_esic = 0, below1_cor5 = 0;
  for (const auto& row : r.table.rows) {
    n_ccnr += row[5];
    n_esic += row[6];
    n_cor5 += row[7];
    if (row[1] < 1.0) {
      below1_ccnr += row[5];
      below1_esic += row[6];
      below1_cor5 += row[7];
    }
  }
  r.summary = {{"count_ccnr", n_ccnr},          {"count_esic", n_esic},
               {"count_cor5", n_cor5},          {"count_ccnr_p_below_1", below1_ccnr},
               {"count_esic_p_below_1", below1_esic}, {"count_cor5_p_below_1", below1_cor5}};
  double ylo = 1.0;
  for (const auto& row : r.curves.rows)
    for (int c = 1; c < 4; ++c)
      if (std::isfinite(row[c])) ylo = std::min(ylo, row[c]);
  r.svg = threshold_svg(r.curves, {"CCNR", "ESIC", "chi'-chi"}, ylo - 1e-4, 1.0);
  r.wall_seconds = sw.seconds();
  return r;
}

// ---------------------------------------------------------------------------
// Random two-qubit steering (single-parameter xi form, Pauli triples)

inline std::vector<double> default_xi_grid() { return linspace(0.02, 2.0, 100); }

inline ScanResult scan_random_steering(int n_states, const std::vector<double>& xi_grid, std::uint64_t seed,
                                       int threads = 1) {
  detail::Stopwatch sw;
  if (n_states < 1) throw Error(ErrorCode::InvalidInput, "n_states must be >= 1");
  for (double xi : xi_grid)
    if (!(xi > 0.0)) throw Error(ErrorCode::NonpositiveXi, "xi grid must be positive");
  const Measurement p = pauli();
  std::vector<SteeringGammaParts> parts(n_states);
  parallel_for(n_states, threads, [&](int i) {
    const DensityMatrix rho = random_hs(2, 2, derive_seed(seed, static_cast<std::uint64_t>(i)));
    parts[i] = steer_gamma_parts(rho, p, p);
  });

  ScanResult r;
  r.id = "random-steering";
  r.seed = seed;
  r.grid = "n=" + std::to_string(n_states) + " xi=" + detail::grid_text(xi_grid);
  r.table.columns = {"xi", "detected", "fraction", "stderr"};
  double best = -1.0, best_xi = 0.0, best_se = 0.0;
  for (double xi : xi_grid) {
    int hits = 0;
    for (const auto& pt : parts) hits += steer_gamma_verdict(pt, xi).detected ? 1 : 0;
    const double f = double(hits) / n_states;
    const double se = std::sqrt(f * (1.0 - f) / n_states);
    r.table.rows.push_back({xi, double(hits), f, se});
    if (f > best) {
      best = f;
      best_xi = xi;
      best_se = se;
    }
  }
  r.summary = {{"n", double(n_states)}, {"peak_fraction", best}, {"peak_xi", best_xi}, {"peak_stderr", best_se}};
  r.wall_seconds = sw.seconds();
  return r;
}

// ---------------------------------------------------------------------------
// Werner and isotropic thresholds

/// Threshold of the two-setting reference formula sqrt(1 + sin(2 delta)/2).
inline double werner_reference_threshold(double delta) { return std::sqrt(1.0 + std::sin(2.0 * delta) / 2.0); }

/// Threshold implied by kappa_B = sqrt(1 + |cos delta|), kappa_A = sqrt2 and
/// ||C||_tr = 2p for the singlet with two coplanar settings.
inline double werner_analytic_threshold(double delta) { return std::sqrt((1.0 + std::abs(std::cos(delta))) / 2.0); }

inline double werner_om_reference_threshold() { return (2.0 * std::sqrt(2.0) - 1.0) / 3.0; }

/// Root of the steer_C margin in p for Werner states; NaN when p = 1 is not
/// detected.
inline double werner_threshold(const Measurement& xa, const Measurement& xb) {
  auto margin = [&](double p) { return steer_criterion_C(werner(p), xa, xb).margin; };
  return detail::bisect_threshold([&](double p) { return margin(p) > 0.0; }, 0.0, 1.0, 60);
}

inline ScanResult werner_thresholds(const std::vector<double>& delta_grid, int threads = 1) {
  detail::Stopwatch sw;
  for (double dl : delta_grid)
    if (!(dl > 0.0 && dl < M_PI)) throw Error(ErrorCode::ParameterOutOfRange, "delta must lie in (0, pi)");
  ScanResult r;
  r.id = "werner";
  r.grid = "delta=" + detail::grid_text(delta_grid);
  r.table.columns = {"delta", "p_star", "p_reference", "p_analytic", "diff_reference", "diff_analytic"};
  r.table.rows.assign(delta_grid.size(), {});
  parallel_for(static_cast<int>(delta_grid.size()), threads, [&](int i) {
    const double dl = delta_grid[i];
    const Measurement x = dichotomy(dl);
    const double ps = werner_threshold(x, x);
    const double ref = werner_reference_threshold(dl);
    const double ana = werner_analytic_threshold(dl);
    r.table.rows[i] = {dl, ps, ref, ana, ps - ref, ps - ana};
  });
  const Measurement om = orthogonal_measurement(2);
  const double p_om = werner_threshold(om, om);
  double worst_ref = 0.0, worst_ana = 0.0;
  for (const auto& row : r.table.rows) {
    worst_ref = std::max(worst_ref, std::isfinite(row[4]) ? std::abs(row[4]) : std::numeric_limits<double>::infinity());
    worst_ana = std::max(worst_ana, std::isfinite(row[5]) ? std::abs(row[5]) : std::numeric_limits<double>::infinity());
  }
  r.summary = {{"p_star_om", p_om},
               {"p_reference_om", werner_om_reference_threshold()},
               {"max_abs_diff_reference", worst_ref},
               {"max_abs_diff_analytic", worst_ana}};
  r.wall_seconds = sw.seconds();
  return r;
}

/// eta* for isotropic states with X^A = X^B = {pi_mu} and xi = eta on every
/// component, by bisection of the steer_gamma margin.
inline double isotropic_threshold(int d) {
  const Measurement g = gell_mann_measurement(d);
  const int m = g.size();
  auto margin = [&](double eta) {
    return steer_criterion_gamma(isotropic(d, eta), g, g, RealVector::Constant(m, eta)).margin;
  };
  return detail::bisect_threshold([&](double eta) { return margin(eta) > 0.0; }, 1e-6, 1.0, 60);
}

inline ScanResult isotropic_thresholds(const std::vector<int>& d_list, int threads = 1) {
  detail::Stopwatch sw;
  for (int d : d_list)
    if (d < 2) throw Error(ErrorCode::DimensionTooSmall, "isotropic dimension must be >= 2");
  ScanResult r;
  r.id = "isotropic";
  std::string g = "d=[";
  for (size_t i = 0; i < d_list.size(); ++i) g += (i ? "," : "") + std::to_string(d_list[i]);
  r.grid = g + "]";
  r.table.columns = {"d", "eta_star", "eta_reference", "diff"};
  r.table.rows.assign(d_list.size(), {});
  parallel_for(static_cast<int>(d_list.size()), threads, [&](int i) {
    const int d = d_list[i];
    const double e = isotropic_threshold(d);
    const double ref = 1.0 / std::sqrt(d + 1.0);
    r.table.rows[i] = {double(d), e, ref, e - ref};
  });
  double worst = 0.0;
  for (const auto& row : r.table.rows) worst = std::max(worst, std::abs(row[3]));
  r.summary = {{"max_abs_diff", worst}};
  r.wall_seconds = sw.seconds();
  return r;
}

// ---------------------------------------------------------------------------
// Normal-form criterion versus partial transposition on two qubits

inline ScanResult ppt_agreement(int n_states, std::uint64_t seed, int threads = 1, int n_separable = -1) {
  detail::Stopwatch sw;
  if (n_states < 1) throw Error(ErrorCode::InvalidInput, "n_states must be >= 1");
  if (n_separable < 0) n_separable = n_states;
  ScanResult r;
  r.id = "ppt-agreement";
  r.seed = seed;
  r.grid = "n=" + std::to_string(n_states) + " separable=" + std::to_string(n_separable);
  // status: 0 compared, 1 boundary, 2 rank-deficient marginal, 3 no convergence
  r.table.columns = {"index", "nf_margin", "pt_min_eigenvalue", "nf_detected", "ppt_entangled", "agree", "status"};
  r.table.rows.assign(n_states, {});
  parallel_for(n_states, threads, [&](int i) {
    const DensityMatrix rho = random_hs(2, 2, derive_seed(seed, static_cast<std::uint64_t>(i)));
    const PptResult ppt = ppt_positive(rho);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    double margin = nan, status = 0.0, detected = 0.0;
    try {
      const CriterionVerdict v = normalform_criterion(rho, NormalFormVariant::C_nf);
      margin = v.margin;
      detected = v.detected ? 1.0 : 0.0;
      if (v.notes.find("rank-deficient") != std::string::npos) status = 2.0;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoConvergence) throw;
      status = 3.0;
    }
    if (status == 0.0 && (std::abs(margin) < 1e-6 || std::abs(ppt.min_eigenvalue) < 1e-6)) status = 1.0;
    const double ent = ppt.positive ? 0.0 : 1.0;
    r.table.rows[i] = {double(i), margin, ppt.min_eigenvalue, detected, ent, double(detected == ent), status};
  });

  // Soundness on separable mixtures of <= 8 random product states.
  std::vector<int> false_pos(n_separable, 0);
  const std::uint64_t sep_seed = derive_seed(seed, 0xA5A5A5A5ULL);
  parallel_for(n_separable, threads, [&](int i) {
    Rng rng(derive_seed(sep_seed, static_cast<std::uint64_t>(i)));
    const int k = 1 + static_cast<int>(rng() % 8);
    const DensityMatrix rho = random_separable(2, 2, k, rng);
    try {
      false_pos[i] = normalform_criterion(rho, NormalFormVariant::C_nf).detected ? 1 : 0;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoConvergence) throw;
    }
  });

  double compared = 0, agree = 0, boundary = 0, rank_def = 0, noconv = 0, entangled = 0;
  for (const auto& row : r.table.rows) {
    const int st = static_cast<int>(row[6]);
    if (st == 0) {
      compared += 1;
      agree += row[5];
      entangled += row[4];
    }
    boundary += st == 1;
    rank_def += st == 2;
    noconv += st == 3;
  }
  double fp = 0;
  for (int v : false_pos) fp += v;
  r.summary = {{"compared", compared},
               {"agreements", agree},
               {"agreement_rate", compared > 0 ? agree / compared : 0.0},
               {"entangled_compared", entangled},
               {"boundary_excluded", boundary},
               {"rank_deficient_excluded", rank_def},
               {"no_convergence_excluded", noconv},
               {"separable_samples", double(n_separable)},
               {"separable_false_positives", fp}};
  r.wall_seconds = sw.seconds();
  return r;
}

}  // namespace qorrelate

#endif  // QORRELATE_EXPERIMENTS_HPP
