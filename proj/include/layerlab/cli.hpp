#pragma once

// Command implementations behind the layerlab executable. Each command takes
// a RunConfig, writes human-readable lines to `log`, and returns the process
// exit code: 0 ok, 1 check failure, 2 validation or parse failure, 3 I/O.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "layerlab/diskgeom.hpp"
#include "layerlab/errors.hpp"
#include "layerlab/forward.hpp"
#include "layerlab/io.hpp"
#include "layerlab/media.hpp"
#include "layerlab/oracle.hpp"
#include "layerlab/rational.hpp"
#include "layerlab/spoly.hpp"

namespace layerlab {

enum exit_code : int { exit_ok = 0, exit_check_failed = 1, exit_invalid = 2, exit_io = 3 };

struct RunConfig {
  std::string command;
  std::string input;
  std::string output;
  std::string T;
  double sigma_max = 20.0 * 3.141592653589793;
  std::size_t sigma_n = 512;
  std::uint64_t seed = 42;
  int layers = 3;
  int p_max = 12;
  bool renormalize = false;
  bool tail_check = false;
  bool inject_mismatch = false;
  double r0 = 0.5;
  double theta0 = 0.0;
  std::optional<double> c0;
  int sign = 1;
  std::size_t points = 200;
};

inline constexpr int p_max_limit = 40;
inline constexpr double oracle_tolerance = 1e-9;
inline constexpr double psi_tolerance = 1e-15;

/// Random medium with complex |w_j| in [0.05, max_modulus] and travel times
/// a_j / D for a common D in [1, max_den], a_j in [ceil(D/2), 2D].
inline MediumParams random_medium(std::mt19937_64& rng, int n, double max_modulus = 0.9, int max_den = 16) {
  std::uniform_int_distribution<int> den_dist(1, max_den);
  std::uniform_real_distribution<double> mod_dist(0.05, max_modulus);
  std::uniform_real_distribution<double> arg_dist(-3.141592653589793, 3.141592653589793);
  const int D = den_dist(rng);
  std::uniform_int_distribution<int> a_dist((D + 1) / 2, 2 * D);
  MediumParams p;
  for (int j = 0; j < n; ++j) {
    p.w.push_back(std::polar(mod_dist(rng), arg_dist(rng)));
    p.tau.emplace_back(a_dist(rng), D);
  }
  return p;
}

inline Rational max_tau(const MediumParams& p) { return *std::max_element(p.tau.begin(), p.tau.end()); }

namespace detail {

inline Rational require_T(const RunConfig& cfg) {
  if (cfg.T.empty()) throw domain_error("--T is required");
  Rational T = parse_rational(cfg.T);
  if (T < 0) throw domain_error("--T must be non-negative");
  return T;
}

inline LoadedMedium require_medium(const RunConfig& cfg, std::ostream& log) {
  if (cfg.input.empty()) throw domain_error("--in is required");
  LoadedMedium m = load_medium(cfg.input, cfg.renormalize);
  if (m.inexact_times) log << "warning: travel times given as JSON floats were converted from binary exactly\n";
  return m;
}

// Sends `content` to the configured output file, or to `log` when none.
inline void emit(const RunConfig& cfg, const std::string& content, std::ostream& log) {
  if (cfg.output.empty())
    log << content;
  else
    atomic_write(cfg.output, content);
}

inline std::size_t divisor_count(int k) {
  std::size_t c = 0;
  for (int d = 1; d * d <= k; ++d)
    if (k % d == 0) c += d * d == k ? 1 : 2;
  return c;
}

}  // namespace detail

inline int cmd_synth(const RunConfig& cfg, std::ostream& log) {
  const Rational T = detail::require_T(cfg);
  const LoadedMedium m = detail::require_medium(cfg, log);
  const auto train = greens_function<double>(m.params, T);
  if (!cfg.output.empty()) write_train(cfg.output, train);
  else log << train_to_csv(train);
  log << "arrivals: " << train.size() << "\n";
  log << "energy: " << format_double(train.energy()) << "\n";
  return exit_ok;
}

inline int cmd_spectrum(const RunConfig& cfg, std::ostream& log) {
  const Rational T = detail::require_T(cfg);
  if (cfg.sigma_n < 1) throw domain_error("--sigma-n must be at least 1");
  const LoadedMedium m = detail::require_medium(cfg, log);
  const auto grid = sigma_grid<double>(cfg.sigma_max, cfg.sigma_n);
  const auto trace = spectrum(greens_function<double>(m.params, T), grid);
  double max_diff = 0.0;
  std::vector<std::vector<double>> rows;
  nlohmann::json doc = spectrum_to_json(trace);
  doc["recurrence"] = nlohmann::json::array();
  doc["abs_diff"] = nlohmann::json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cdouble rec = backward_recurrence<double>(m.params, grid[i]);
    const double d = std::abs(trace.values[i] - rec);
    max_diff = std::max(max_diff, d);
    rows.push_back({grid[i], trace.values[i].real(), trace.values[i].imag(), rec.real(), rec.imag(), d});
    doc["recurrence"].push_back({rec.real(), rec.imag()});
    doc["abs_diff"].push_back(d);
  }
  const std::string content = !cfg.output.empty() && wants_json(cfg.output)
                                  ? doc.dump(2) + "\n"
                                  : table_to_csv("sigma,re,im,rec_re,rec_im,abs_diff", rows);
  detail::emit(cfg, content, log);
  log << "max |partial - recurrence|: " << format_double(max_diff) << "\n";
  if (cfg.tail_check) {
    const auto doubled = spectrum(greens_function<double>(m.params, Rational(2) * T), grid);
    double max_doubled = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      max_doubled = std::max(max_doubled, std::abs(doubled.values[i] - backward_recurrence<double>(m.params, grid[i])));
    log << "tail check: T -> 2T gives " << format_double(max_doubled) << " (decrement factor "
        << format_double(max_doubled > 0.0 ? max_diff / max_doubled : INFINITY) << ")\n";
  }
  return exit_ok;
}

inline int cmd_oracle_check(const RunConfig& cfg, std::ostream& log) {
  MediumParams params;
  if (cfg.input.empty()) {
    if (cfg.layers < 1 || cfg.layers > 8) throw domain_error("--n must lie in [1, 8]");
    std::mt19937_64 rng(cfg.seed);
    params = random_medium(rng, cfg.layers);
  } else {
    params = detail::require_medium(cfg, log).params;
  }
  const Rational T = cfg.T.empty() ? Rational(20) * max_tau(params) : detail::require_T(cfg);
  auto engine = greens_function<double>(params, T);
  const auto oracle = oracle_train(params, T);
  if (cfg.inject_mismatch && !engine.arrivals.empty()) engine.arrivals.pop_back();

  nlohmann::json report;
  report["medium"] = medium_to_json(params);
  report["T"] = to_string(T);
  report["arrivals_engine"] = engine.size();
  report["arrivals_oracle"] = oracle.size();
  const bool times_match = same_times(engine, oracle);
  report["times_match"] = times_match;
  bool pass = times_match;
  if (times_match) {
    const double d = max_amplitude_difference(engine, oracle);
    report["max_discrepancy"] = d;
    pass = d <= oracle_tolerance;
    log << (pass ? "PASS" : "FAIL") << " oracle-check: " << engine.size()
        << " arrivals, max discrepancy " << format_double(d) << "\n";
  } else {
    log << "FAIL oracle-check: arrival time sets differ (engine " << engine.size() << ", oracle " << oracle.size()
        << ")\n";
  }
  report["pass"] = pass;
  if (!cfg.output.empty()) atomic_write(cfg.output, report.dump(2) + "\n");
  return pass ? exit_ok : exit_check_failed;
}

inline int cmd_poly(const RunConfig& cfg, std::ostream& log) {
  const int P = cfg.p_max;
  if (P < 1 || P > p_max_limit) throw domain_error("--p-max must lie in [1, " + std::to_string(p_max_limit) + "]");
  std::ostringstream out;
  bool ok = true;
  std::map<int, std::size_t> tally;
  for (int p = 0; p <= P; ++p) {
    for (int q = 0; q <= P; ++q) {
      const auto phi = scattering_poly(p, q);
      if (phi.is_zero()) continue;
      const bool eigen = hybrid_laplacian_apply(phi) == Rational(-p * q) * phi;
      ok = ok && eigen;
      if (p * q >= 1 && p * q <= P) ++tally[p * q];
      out << "phi^(" << p << "," << q << ") = " << phi.str() << "\n";
      out << "  eigenvalue " << p * q << ": " << (eigen ? "exact" : "FAILED") << "\n";
    }
  }
  out << "eigenspace dimensions (k: count / divisors)\n";
  for (int k = 1; k <= P; ++k) {
    const std::size_t c = tally[k];
    const std::size_t d = detail::divisor_count(k);
    ok = ok && c == d;
    out << "  k=" << k << ": " << c << " / " << d << "\n";
  }
  out << (ok ? "PASS" : "FAIL") << " poly: eigen-check for p,q <= " << P << "\n";
  detail::emit(cfg, out.str(), log);
  return ok ? exit_ok : exit_check_failed;
}

inline int cmd_wavefield(const RunConfig& cfg, std::ostream& log) {
  const Rational T = detail::require_T(cfg);
  const LoadedMedium m = detail::require_medium(cfg, log);
  const std::size_t n = m.params.layers();
  const auto polar = polar_coordinates(m.params.w);

  std::string header;
  for (std::size_t j = 0; j < n; ++j) header += "k" + std::to_string(j + 1) + ",";
  header += "t_num,t_den,re,im\n";
  std::string csv = header;
  std::vector<std::complex<long double>> z(n);
  for (const auto& k : enumerate_lattice(m.params.tau, T)) {
    for (std::size_t j = 0; j < n; ++j) z[j] = {static_cast<long double>(k.k[j]) + polar[j].real(), polar[j].imag()};
    const cdouble v = wavefield_psi<double>(std::span<const std::complex<long double>>(z));
    const Rational t = arrival_time(k.k, m.params.tau);
    for (int kj : k.k) csv += std::to_string(kj) + ",";
    csv += num(t).str() + "," + den(t).str() + "," + format_double(v.real()) + "," + format_double(v.imag()) + "\n";
  }
  detail::emit(cfg, csv, log);

  const auto report = pushforward_check<double>(m.params, T);
  const auto direct = greens_function<double>(m.params, T);
  const bool times = same_times(report.train, direct);
  const double d = times ? max_amplitude_difference(report.train, direct) : INFINITY;
  const bool pass = times && d <= psi_tolerance && report.shell_nonzero == 0;
  log << (pass ? "PASS" : "FAIL") << " wavefield: " << report.lattice_samples << " lattice samples, "
      << report.shell_samples << " shell samples (" << report.shell_nonzero << " non-zero), max difference "
      << format_double(d) << "\n";
  return pass ? exit_ok : exit_check_failed;
}

inline int cmd_geodesic(const RunConfig& cfg, std::ostream& log) {
  GeodesicParams gp{cfg.r0, cfg.theta0, cfg.c0.value_or(2.0 / (cfg.r0 * cfg.r0)), cfg.sign};
  validate_geodesic(gp);
  if (cfg.points < 2) throw domain_error("--points must be at least 2");
  const double lo = geodesic_turning_radius(gp);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < cfg.points; ++i) {
    const double r = lo + (1.0 - lo) * static_cast<double>(i) / static_cast<double>(cfg.points);
    rows.push_back({r, geodesic_theta(gp, r)});
  }
  detail::emit(cfg, table_to_csv("r,theta", rows), log);
  return exit_ok;
}

/// Dispatches on cfg.command and maps exceptions to exit codes.
inline int run(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  try {
    if (cfg.command == "synth") return cmd_synth(cfg, log);
    if (cfg.command == "spectrum") return cmd_spectrum(cfg, log);
    if (cfg.command == "oracle-check") return cmd_oracle_check(cfg, log);
    if (cfg.command == "poly") return cmd_poly(cfg, log);
    if (cfg.command == "wavefield") return cmd_wavefield(cfg, log);
    if (cfg.command == "geodesic") return cmd_geodesic(cfg, log);
    err << "error: unknown command '" << cfg.command << "'\n";
    return exit_invalid;
  } catch (const io_error& e) {
    err << "error: " << e.what() << "\n";
    return exit_io;
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    return exit_invalid;
  }
}

}  // namespace layerlab
