#include "polcov/inferential.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "polcov/error.hpp"
#include "polcov/random.hpp"
#include "polcov/summary.hpp"

namespace polcov {

ChiSquareResult chi_square(const std::array<std::array<double, 2>, 2>& observed) {
  std::array<double, 2> row{}, col{};
  double total = 0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      if (observed[i][j] < 0) throw DomainError("negative count in contingency table");
      row[i] += observed[i][j];
      col[j] += observed[i][j];
      total += observed[i][j];
    }
  for (std::size_t k = 0; k < 2; ++k) {
    if (!(row[k] > 0)) throw DomainError("contingency table row " + std::to_string(k) + " sums to zero");
    if (!(col[k] > 0)) throw DomainError("contingency table column " + std::to_string(k) + " sums to zero");
  }
  ChiSquareResult r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      const double e = row[i] * col[j] / total;
      const double d = observed[i][j] - e;
      r.expected[i][j] = e;
      r.statistic += d * d / e;
      r.residual_sign[i][j] = d > 0 ? 1 : (d < 0 ? -1 : 0);
    }
  // upper tail of chi-square with one degree of freedom
  r.p_value = std::erfc(std::sqrt(r.statistic / 2.0));
  return r;
}

std::vector<double> jitter(std::span<const double> scores, std::uint64_t seed, double half_width) {
  std::vector<double> out(scores.begin(), scores.end());
  if (half_width == 0) return out;
  if (half_width < 0) throw DomainError("jitter half-width must be nonnegative");
  Rng rng(seed);
  for (auto& y : out) {
    double u;
    do {
      u = rng.uniform();
    } while (u == 0.0);  // open interval (-h, h)
    y += half_width * (2.0 * u - 1.0);
  }
  return out;
}

Design saturated_design(std::span<const SentimentObservation> obs) {
  Design d;
  d.rows = obs.size();
  d.cols = 4;
  d.values.reserve(obs.size() * 4);
  for (const auto& o : obs) {
    const double g = o.gender == Gender::F ? 1.0 : 0.0;
    const double s = o.source == SourceType::online ? 1.0 : 0.0;
    d.values.insert(d.values.end(), {1.0, g, s, g * s});
  }
  return d;
}

namespace {

std::array<std::array<std::size_t, 2>, 2> cell_sizes(std::span<const SentimentObservation> obs) {
  std::array<std::array<std::size_t, 2>, 2> n{};
  for (const auto& o : obs) ++n[index_of(o.gender)][index_of(o.source)];
  return n;
}

bool all_cells_filled(const std::array<std::array<std::size_t, 2>, 2>& n) {
  return n[0][0] && n[0][1] && n[1][0] && n[1][1];
}

}  // namespace

QuantileModel fit_quantile_model(std::span<const SentimentObservation> obs, double tau) {
  const auto n = cell_sizes(obs);
  for (auto g : kGenders)
    for (auto s : kSourceTypes)
      if (n[index_of(g)][index_of(s)] == 0)
        throw DomainError("empty design cell gender=" + std::string(to_string(g)) +
                          " source_type=" + std::string(to_string(s)));
  const auto design = saturated_design(obs);
  std::vector<double> y;
  y.reserve(obs.size());
  for (const auto& o : obs) y.push_back(o.y);
  const auto fit = quantile_regression(design, y, tau);

  QuantileModel m;
  m.tau = tau;
  m.loss = fit.loss;
  for (std::size_t k = 0; k < 4; ++k) m.beta[k] = fit.beta[k];
  for (auto g : kGenders)
    for (auto s : kSourceTypes) {
      const double gv = g == Gender::F ? 1.0 : 0.0;
      const double sv = s == SourceType::online ? 1.0 : 0.0;
      m.fitted[index_of(g)][index_of(s)] = m.beta[0] + m.beta[1] * gv + m.beta[2] * sv + m.beta[3] * gv * sv;
    }
  return m;
}

BootstrapResult bootstrap_quantile_model(std::span<const SentimentObservation> obs, double tau,
                                         const BootstrapOptions& options) {
  if (options.replicates < 100) throw DomainError("bootstrap needs at least 100 replicates");
  if (!(options.level > 0 && options.level < 1)) throw DomainError("confidence level must lie in (0, 1)");
  const auto point = fit_quantile_model(obs, tau);
  const std::size_t B = options.replicates;
  const std::size_t max_draws = 10 * B;
  const std::size_t n = obs.size();

  std::vector<std::array<double, 4>> betas(B);
  std::vector<std::size_t> draws(B, 0);

  auto run = [&](std::size_t first, std::size_t stride) {
    std::vector<SentimentObservation> sample(n);
    for (std::size_t b = first; b < B; b += stride) {
      for (std::size_t attempt = 0;; ++attempt) {
        if (attempt >= max_draws) return;  // reported through draws[] below
        Rng rng(derive_seed(options.seed, b, attempt));
        for (std::size_t i = 0; i < n; ++i) sample[i] = obs[rng.below(n)];
        ++draws[b];
        if (!all_cells_filled(cell_sizes(sample))) continue;
        betas[b] = fit_quantile_model(sample, tau).beta;
        break;
      }
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(B)));
  if (workers == 1) {
    run(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          run(w, workers);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::size_t total_draws = 0;
  for (auto d : draws) total_draws += d;
  if (total_draws > max_draws)
    throw DomainError("bootstrap exceeded " + std::to_string(max_draws) +
                      " resamples because of empty design cells");

  BootstrapResult r;
  r.tau = tau;
  r.replicates = B;
  r.redraws = total_draws - B;
  const double alpha = 1.0 - options.level;
  std::vector<double> column(B);
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t b = 0; b < B; ++b) column[b] = betas[b][k];
    auto& ci = r.coefficients[k];
    ci.estimate = point.beta[k];
    ci.lo = interpolated_quantile(column, alpha / 2.0);
    ci.hi = interpolated_quantile(column, 1.0 - alpha / 2.0);
    ci.significant = ci.lo > 0 || ci.hi < 0;
  }
  return r;
}

}  // namespace polcov
