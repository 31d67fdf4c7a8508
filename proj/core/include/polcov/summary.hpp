#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "polcov/bias.hpp"

namespace polcov {

enum class Weighting { counts, unweighted };
std::string_view to_string(Weighting w);
std::optional<Weighting> parse_weighting(std::string_view s);

struct SummaryStats {
  std::size_t n = 0;
  double total_weight = 0.0;
  double mean = 0.0;       // mu
  double skewness = 0.0;   // gamma_3 = m3 / m2^(3/2), population moments
  bool skewness_degenerate = false;  // m2 == 0; skewness reported as 0
  double d1 = 0.0;
  double q1 = 0.0;
  double median = 0.0;     // D5
  double q3 = 0.0;
  double d9 = 0.0;
  double iqr = 0.0;        // Q3 - Q1
};

/// Inverse of the cumulative weight function: min { x : W(x) >= p * W_total },
/// except that when W hits p * W_total exactly the midpoint between that
/// value and the next one is returned. Throws DomainError on empty input or
/// non-positive total weight.
double weighted_quantile(std::span<const double> values, std::span<const double> weights, double p);

/// Linear interpolation between order statistics (h = (n - 1) p).
double interpolated_quantile(std::span<const double> values, double p);

/// With weights: weighted moments and weighted_quantile. Without: plain
/// moments and interpolated_quantile.
SummaryStats summarize(std::span<const double> values, std::span<const double> weights);
SummaryStats summarize(std::span<const double> values);

struct Histogram {
  double lo = -1.0;
  double hi = 1.0;
  std::vector<double> mass;     // summed weight per bin
  std::vector<double> density;  // mass / (total * bin width)
};

/// Fixed bins on [lo, hi]; the last bin is closed. Values outside are clamped.
Histogram histogram(std::span<const double> values, std::span<const double> weights,
                    std::size_t bins = 40, double lo = -1.0, double hi = 1.0);

struct KernelDensity {
  double bandwidth = 0.0;  // 0 when degenerate (no spread)
  std::vector<double> grid;
  std::vector<double> density;
};

/// Gaussian KDE with Silverman's rule 0.9 min(sd, IQR/1.34) n^(-1/5), n the
/// Kish effective sample size when weighted.
KernelDensity kernel_density(std::span<const double> values, std::span<const double> weights,
                             std::size_t points = 201, double lo = -1.0, double hi = 1.0);

struct IndexDistribution {
  std::optional<Category> category;
  Weighting weighting = Weighting::counts;
  SummaryStats stats;
  Histogram histogram;
  KernelDensity density;
};

/// Distribution of I(w) over the words of one lexicon category (all words
/// when category is nullopt). Words with undefined I are skipped. Throws
/// DomainError when nothing remains.
IndexDistribution index_distribution(const BiasProfile& profile, std::optional<Category> category,
                                     Weighting weighting = Weighting::counts, std::size_t bins = 40);

}  // namespace polcov
