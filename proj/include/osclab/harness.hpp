#pragma once

#include "osclab/fock.hpp"
#include "osclab/measures.hpp"
#include "osclab/wigner.hpp"

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace osclab {

struct BuiltState {
  FockState state;
  /// |g_n^(1)| before normalization.
  double raw_norm;
};

/// g_n = g^(1) / |g^(1)| with g^(1) = sum_i sqrt(lambda_i) f_n^{A_i}, A_i = transporter(orbit_i).
BuiltState build_state(const ConvexMeasure& mu, int n, double slack = 0.0);

/// Two orbits with |<w0, w0'>| <= max_overlap, drawn uniformly from the sphere.
std::pair<Orbit, Orbit> random_separated_orbits(std::size_t d, std::mt19937_64& rng, double max_overlap = 0.9);

/// Successive-pair test shared by the reports: values at or below `floor` are treated as zero.
struct ColumnVerdict {
  bool passed = true;
  std::string reason;
};

struct CrossTermRow {
  int n;
  std::string symbol_id;
  double abs_value;
};

struct CrossTermReport {
  std::vector<CrossTermRow> rows;
  std::vector<int> n_list;
  std::vector<std::string> symbol_ids;
  std::map<std::string, ColumnVerdict> verdicts;

  bool passed() const;
  std::string to_csv() const;
};

/// |<a^w f_n^A, f_n^B>| per (symbol, n). A column passes when its value at the largest n is
/// below final_threshold and no step grows by more than a factor 2.
CrossTermReport cross_term_report(const Orbit& a, const Orbit& b, const TestFamily& family,
                                  const std::vector<int>& n_list, double final_threshold = 1e-2);

struct ConvergenceRow {
  int n;
  double hbar;
  std::string symbol_id;
  Complex value;
  Complex target;
  double abs_error;
};

struct ConvergenceReport {
  std::size_t dim = 0;
  std::vector<ConvergenceRow> rows;
  /// Emitted as "# key=value" lines ahead of the header.
  std::map<std::string, std::string> metadata;

  std::string to_csv() const;
  /// Parses to_csv output; checks every h_n against hbar_schedule and recomputes abs_error.
  static ConvergenceReport from_csv(const std::string& text);

  /// Errors of one symbol in ascending n.
  std::vector<double> column(const std::string& symbol_id) const;
  std::vector<std::string> symbol_ids() const;
};

/// Per symbol: final error <= final_threshold and median successive ratio < 1. Ratios whose
/// two errors are both <= zero_floor are skipped; a column with none left is converged.
std::map<std::string, ColumnVerdict> check_convergence(const ConvergenceReport& report, double final_threshold = 5e-2,
                                                      double zero_floor = 1e-14);

ConvergenceReport converge_report(const ConvexMeasure& mu, const TestFamily& family, const std::vector<int>& n_list,
                                  double slack = 0.0);

std::vector<int> default_n_list();

struct DecaySeries {
  std::vector<int> n;
  std::vector<double> value;
  std::vector<double> resolution;
};

/// microlocal_norm(a, f_n) for each n, f_n = reference_state(n, d).
DecaySeries microlocal_series(const BumpSymbol& a, const std::vector<int>& n_list);

/// Each step must decrease or land at or below its own resolution; the last value must be
/// below final_threshold.
ColumnVerdict check_decay(const DecaySeries& series, double final_threshold);

/// Random symbol with num_terms monomials of degree <= max_degree and Gaussian complex
/// coefficients. With level_shift set, every term has |gamma| - |beta| equal to it.
PolySymbol random_poly_symbol(std::size_t d, int max_degree, int num_terms, std::mt19937_64& rng,
                              std::optional<int> level_shift = std::nullopt);

/// Normalized combination of `count` distinct random basis states of the given level.
FockState random_level_state(std::size_t d, int level, double hbar, int count, std::mt19937_64& rng);

}  // namespace osclab
