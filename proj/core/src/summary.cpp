#include "polcov/summary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "polcov/error.hpp"

namespace polcov {

std::string_view to_string(Weighting w) { return w == Weighting::counts ? "counts" : "unweighted"; }

std::optional<Weighting> parse_weighting(std::string_view s) {
  if (s == "counts") return Weighting::counts;
  if (s == "unweighted") return Weighting::unweighted;
  return std::nullopt;
}

namespace {

std::vector<std::size_t> sorted_order(std::span<const double> values) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return values[a] < values[b]; });
  return idx;
}

struct Moments {
  double total = 0, mean = 0, m2 = 0, m3 = 0;
};

Moments moments(std::span<const double> values, std::span<const double> weights) {
  Moments mo;
  for (std::size_t i = 0; i < values.size(); ++i) {
    mo.total += weights[i];
    mo.mean += weights[i] * values[i];
  }
  mo.mean /= mo.total;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - mo.mean;
    mo.m2 += weights[i] * d * d;
    mo.m3 += weights[i] * d * d * d;
  }
  mo.m2 /= mo.total;
  mo.m3 /= mo.total;
  return mo;
}

void fill_moments(SummaryStats& s, const Moments& mo) {
  s.total_weight = mo.total;
  s.mean = mo.mean;
  // relative guard: rounding leaves m2 ~ 1e-33 for identical values
  if (mo.m2 <= 1e-24 * std::max(1.0, mo.mean * mo.mean)) {
    s.skewness = 0.0;
    s.skewness_degenerate = true;
  } else {
    s.skewness = mo.m3 / std::pow(mo.m2, 1.5);
  }
}

}  // namespace

double weighted_quantile(std::span<const double> values, std::span<const double> weights, double p) {
  if (values.empty() || values.size() != weights.size())
    throw DomainError("weighted_quantile needs matching, nonempty values and weights");
  const auto idx = sorted_order(values);
  double total = 0;
  for (double w : weights) {
    if (w < 0) throw DomainError("negative weight");
    total += w;
  }
  if (!(total > 0)) throw DomainError("weighted_quantile needs positive total weight");
  const double target = p * total;
  const double tol = 1e-12 * total;
  double cum = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const auto i = idx[k];
    cum += weights[i];
    if (weights[i] <= 0 || cum < target - tol) continue;
    if (std::abs(cum - target) <= tol) {
      // cumulative weight sits exactly on the target: midpoint of the plateau
      for (std::size_t j = k + 1; j < idx.size(); ++j)
        if (weights[idx[j]] > 0) return (values[i] + values[idx[j]]) / 2.0;
    }
    return values[i];
  }
  return values[idx.back()];
}

double interpolated_quantile(std::span<const double> values, double p) {
  if (values.empty()) throw DomainError("quantile of empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

SummaryStats summarize(std::span<const double> values, std::span<const double> weights) {
  if (values.empty()) throw DomainError("summary of empty sample");
  SummaryStats s;
  s.n = values.size();
  fill_moments(s, moments(values, weights));
  s.d1 = weighted_quantile(values, weights, 0.10);
  s.q1 = weighted_quantile(values, weights, 0.25);
  s.median = weighted_quantile(values, weights, 0.50);
  s.q3 = weighted_quantile(values, weights, 0.75);
  s.d9 = weighted_quantile(values, weights, 0.90);
  s.iqr = s.q3 - s.q1;
  return s;
}

SummaryStats summarize(std::span<const double> values) {
  if (values.empty()) throw DomainError("summary of empty sample");
  const std::vector<double> ones(values.size(), 1.0);
  SummaryStats s;
  s.n = values.size();
  fill_moments(s, moments(values, ones));
  s.d1 = interpolated_quantile(values, 0.10);
  s.q1 = interpolated_quantile(values, 0.25);
  s.median = interpolated_quantile(values, 0.50);
  s.q3 = interpolated_quantile(values, 0.75);
  s.d9 = interpolated_quantile(values, 0.90);
  s.iqr = s.q3 - s.q1;
  return s;
}

Histogram histogram(std::span<const double> values, std::span<const double> weights,
                    std::size_t bins, double lo, double hi) {
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.mass.assign(bins, 0.0);
  h.density.assign(bins, 0.0);
  const double width = (hi - lo) / static_cast<double>(bins);
  double total = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto b = static_cast<std::ptrdiff_t>(std::floor((values[i] - lo) / width));
    b = std::clamp<std::ptrdiff_t>(b, 0, static_cast<std::ptrdiff_t>(bins) - 1);
    h.mass[static_cast<std::size_t>(b)] += weights[i];
    total += weights[i];
  }
  if (total > 0)
    for (std::size_t b = 0; b < bins; ++b) h.density[b] = h.mass[b] / (total * width);
  return h;
}

KernelDensity kernel_density(std::span<const double> values, std::span<const double> weights,
                             std::size_t points, double lo, double hi) {
  KernelDensity kd;
  if (values.empty()) return kd;
  const auto mo = moments(values, weights);
  double sum_w2 = 0;
  for (double w : weights) sum_w2 += w * w;
  const double n_eff = mo.total * mo.total / sum_w2;
  const double sd = std::sqrt(mo.m2);
  const double iqr = weighted_quantile(values, weights, 0.75) - weighted_quantile(values, weights, 0.25);
  double spread = sd;
  if (iqr > 0) spread = std::min(sd, iqr / 1.34);
  kd.bandwidth = 0.9 * spread * std::pow(n_eff, -0.2);
  kd.grid.resize(points);
  kd.density.assign(points, 0.0);
  for (std::size_t k = 0; k < points; ++k)
    kd.grid[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
  if (!(kd.bandwidth > 0)) {
    kd.bandwidth = 0.0;
    return kd;
  }
  const double norm = 1.0 / (mo.total * kd.bandwidth * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t k = 0; k < points; ++k) {
    double acc = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double z = (kd.grid[k] - values[i]) / kd.bandwidth;
      acc += weights[i] * std::exp(-0.5 * z * z);
    }
    kd.density[k] = acc * norm;
  }
  return kd;
}

IndexDistribution index_distribution(const BiasProfile& profile, std::optional<Category> category,
                                     Weighting weighting, std::size_t bins) {
  std::vector<double> values, weights;
  for (const auto& w : profile.words) {
    if (!w.index) continue;
    if (category && w.counts.category != category) continue;
    values.push_back(*w.index);
    weights.push_back(weighting == Weighting::counts ? w.weight() : 1.0);
  }
  if (values.empty())
    throw DomainError(std::string("no words with defined I in category ") +
                      (category ? std::string(to_string(*category)) : std::string("(all)")));
  IndexDistribution d;
  d.category = category;
  d.weighting = weighting;
  d.stats = weighting == Weighting::counts ? summarize(values, weights) : summarize(values);
  d.histogram = histogram(values, weights, bins);
  d.density = kernel_density(values, weights);
  return d;
}

}  // namespace polcov
