#pragma once

// Chi-square independence on the source x gender table, sentiment jitter,
// pinball-loss quantile regression and its case-resampling bootstrap.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "polcov/model.hpp"

namespace polcov {

// ---------------------------------------------------------------------------
// chi-square

struct ChiSquareResult {
  double statistic = 0.0;
  std::array<std::array<double, 2>, 2> expected{};
  /// +1 observed above expected, -1 below, 0 equal.
  std::array<std::array<int, 2>, 2> residual_sign{};
  double p_value = 1.0;  // df = 1
};

/// observed[row][col], e.g. [source][gender]. Throws DomainError on a zero marginal.
ChiSquareResult chi_square(const std::array<std::array<double, 2>, 2>& observed);

// ---------------------------------------------------------------------------
// jitter

inline constexpr double kDefaultJitter = 0.05;

/// y_i = s_i + u_i, u_i ~ U(-h, h), deterministic in seed.
std::vector<double> jitter(std::span<const double> scores, std::uint64_t seed,
                           double half_width = kDefaultJitter);

// ---------------------------------------------------------------------------
// quantile regression

/// Dense row-major design matrix.
struct Design {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

struct QuantRegFit {
  double tau = 0.5;
  std::vector<double> beta;
  double loss = 0.0;                 // sum of pinball losses
  std::vector<std::size_t> basis;    // observations with zero residual defining the vertex
  std::size_t iterations = 0;
};

double pinball_loss(double residual, double tau);
double total_pinball_loss(const Design& x, std::span<const double> y, std::span<const double> beta,
                          double tau);

/// Minimizes sum_i rho_tau(y_i - x_i' beta) exactly. The optimum is a vertex
/// of the LP: p observations fitted with zero residual. Starting from a
/// feasible basis, the solver walks edges (drop one basic observation,
/// line-search the piecewise-linear objective to its minimizing breakpoint)
/// until no edge descends. Throws DomainError if the design is rank deficient.
QuantRegFit quantile_regression(const Design& x, std::span<const double> y, double tau);

inline constexpr std::array<double, 5> kDefaultTaus{0.1, 0.25, 0.5, 0.75, 0.9};

/// Saturated 2x2 design: Gender = 1 for F, Source = 1 for online, reference
/// cell male/traditional.
///   Quantile(Y) = b0 + b1 Gender + b2 Source + b3 Gender*Source
struct QuantileModel {
  double tau = 0.5;
  std::array<double, 4> beta{};
  /// fitted[gender][source] with index_of(Gender), index_of(SourceType).
  std::array<std::array<double, 2>, 2> fitted{};
  double loss = 0.0;
};

struct SentimentObservation {
  double y = 0.0;
  Gender gender = Gender::M;
  SourceType source = SourceType::traditional;
};

Design saturated_design(std::span<const SentimentObservation> obs);

/// Throws DomainError naming the cell if any (gender, source) cell is empty.
QuantileModel fit_quantile_model(std::span<const SentimentObservation> obs, double tau);

struct CoefficientInterval {
  double estimate = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool significant = false;  // interval excludes 0
};

struct BootstrapResult {
  double tau = 0.5;
  std::size_t replicates = 0;
  std::size_t redraws = 0;  // resamples discarded for an empty cell
  std::array<CoefficientInterval, 4> coefficients{};
};

struct BootstrapOptions {
  std::size_t replicates = 200;
  std::uint64_t seed = 42;
  double level = 0.95;
  unsigned workers = 1;
};

/// Case-resampling bootstrap with percentile intervals. Each replicate draws
/// from its own derived seed, so results do not depend on worker count.
/// A resample with an empty cell is discarded and redrawn. Throws DomainError
/// when replicates < 100 or total draws exceed 10 * replicates.
BootstrapResult bootstrap_quantile_model(std::span<const SentimentObservation> obs, double tau,
                                         const BootstrapOptions& options);

}  // namespace polcov
