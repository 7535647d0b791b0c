#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "weylmax/datum.hpp"
#include "weylmax/divset.hpp"
#include "weylmax/poly.hpp"

namespace weylmax {

struct Witness {
  std::int64_t q = 0;
  std::vector<std::int64_t> b;
  std::vector<double> delta;
  double value = 0;  ///< |u(b/q + delta, 1/q)|
};

struct ScanResult {
  double sup_lb = 0;  ///< min over scanned balls of min(|u(center)|, |u(center + delta)|)
  Witness witness;    ///< the ball and delta attaining sup_lb
  double max = 0;
  std::vector<double> quantiles;  ///< at kScanQuantiles
  std::uint64_t evaluated = 0;    ///< balls scanned
};

inline constexpr double kScanQuantiles[] = {0.05, 0.25, 0.5, 0.75, 0.95};

struct ScanOptions {
  std::uint64_t sample_budget = 8192;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Evaluates each scanned ball at t = 1/q, at its center and at one seeded
/// delta with |delta|_inf <= rho/(dN). All balls are scanned when
/// J <= sample_budget, otherwise a seeded uniform sample of that size.
ScanResult solution_scan(const IntPolynomial& p, const Datum& f, const DivergenceSet& x,
                         ScanOptions opts = {});

struct ExperimentConfig {
  double c = 0.5;
  double rho = 1.0 / 32.0;
  std::uint64_t seed = 42;
  std::uint64_t sample_budget = 8192;
  std::uint64_t mc_samples = 200000;
  unsigned threads = 1;
};

struct ExperimentRow {
  std::int64_t N = 0;
  std::int64_t Q = 0;
  std::size_t d = 0;
  unsigned k = 0;
  double s = 0;
  std::uint64_t J = 0;
  double measure = 0;      ///< value entering the ratio
  double measure_err = 0;
  std::string measure_method;
  double sup_lb = 0;
  double hs_norm = 0;
  double ratio = 0;        ///< sup_lb * sqrt(measure) / hs_norm
  double wall_ms = 0;
  Witness witness;
  bool failed = false;
  std::string message;
};

/// One row per N. The ladder must be strictly ascending with N >= 256.
/// A resource guard in any stage marks that row failed; the rest still run.
std::vector<ExperimentRow> ratio_experiment(const IntPolynomial& p, double s,
                                            const std::vector<std::int64_t>& ladder,
                                            const ExperimentConfig& config = {});

struct FitResult {
  double slope = 0;
  double intercept = 0;
  double residual = 0;  ///< RMS residual of the uncorrected fit
  std::size_t n_points = 0;
  double log_corrected_slope = 0;  ///< fit of ln ratio + ln(ln N)/2 against ln N
};

/// Least squares of ln ratio against ln N over the successful rows.
/// Fewer than 3 usable rows raise an insufficient-data error.
FitResult fit_exponent(const std::vector<ExperimentRow>& rows);

}  // namespace weylmax
