#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "polcov/error.hpp"
#include "polcov/inferential.hpp"
#include "polcov/sentiment.hpp"
#include "support/oracles.hpp"
#include "support/testing.hpp"

using namespace polcov;

namespace {

Design design_of(const std::vector<std::vector<double>>& rows) {
  Design d;
  d.rows = rows.size();
  d.cols = rows.front().size();
  for (const auto& r : rows) d.values.insert(d.values.end(), r.begin(), r.end());
  return d;
}

/// Observations per cell [gender][source] with values from `draw`.
template <class Draw>
std::vector<SentimentObservation> cells(const std::array<std::array<int, 2>, 2>& sizes, Draw draw) {
  std::vector<SentimentObservation> out;
  for (auto g : kGenders)
    for (auto s : kSourceTypes)
      for (int i = 0; i < sizes[index_of(g)][index_of(s)]; ++i) out.push_back({draw(g, s, i), g, s});
  return out;
}

std::vector<double> cell_values(const std::vector<SentimentObservation>& obs, Gender g, SourceType s) {
  std::vector<double> v;
  for (const auto& o : obs)
    if (o.gender == g && o.source == s) v.push_back(o.y);
  return v;
}

}  // namespace

TEST_CASE("chi-square on the source by gender tables") {
  const auto cov = chi_square({{{550681, 3106012}, {378479, 1969639}}});
  CHECK(std::abs(cov.statistic - 1225.7) <= 0.5);
  const std::array<std::array<double, 2>, 2> expected{{{565822, 3090871}, {363338, 1984780}}};
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) CHECK(std::abs(cov.expected[r][c] - expected[r][c]) <= 1.0);
  CHECK(cov.residual_sign[0][0] == -1);  // traditional, F: below expected
  CHECK(cov.residual_sign[1][0] == 1);   // online, F: above expected
  CHECK(cov.p_value < 1e-100);

  const auto pers = chi_square({{{14803, 71415}, {9072, 39350}}});
  CHECK(std::abs(pers.statistic - 52.0) <= 0.5);

  const auto indep = chi_square({{{10, 20}, {30, 60}}});
  CHECK(indep.statistic == 0.0);
  CHECK(indep.p_value == 1.0);

  CHECK_THROWS_AS(chi_square({{{0, 0}, {3, 4}}}), DomainError);
}

TEST_CASE("chi-square symmetries and marginals") {
  Rng rng(21);
  for (int i = 0; i < 300; ++i) {
    std::array<std::array<double, 2>, 2> o{};
    for (auto& r : o)
      for (auto& c : r) c = testing::uniform_int(rng, 1, 5000);
    const auto base = chi_square(o);
    const auto t = chi_square({{{o[0][0], o[1][0]}, {o[0][1], o[1][1]}}});
    const auto swapped = chi_square({{{o[1][1], o[1][0]}, {o[0][1], o[0][0]}}});
    CHECK(t.statistic == doctest::Approx(base.statistic).epsilon(1e-12));
    CHECK(swapped.statistic == doctest::Approx(base.statistic).epsilon(1e-12));
    for (int r = 0; r < 2; ++r) {
      CHECK(base.expected[r][0] + base.expected[r][1] == doctest::Approx(o[r][0] + o[r][1]));
      CHECK(base.expected[0][r] + base.expected[1][r] == doctest::Approx(o[0][r] + o[1][r]));
    }
    CHECK(base.p_value >= 0.0);
    CHECK(base.p_value <= 1.0);
  }
}

TEST_CASE("jitter") {
  const std::vector<double> none;
  CHECK(jitter(none, 1).empty());
  std::vector<double> s;
  for (int k = 0; k <= 10; ++k)
    for (int r = 0; r < 50; ++r) s.push_back((k - 5) / 5.0);
  CHECK(jitter(s, 42) == jitter(s, 42));
  CHECK(jitter(s, 42) != jitter(s, 43));
  CHECK(jitter(s, 42, 0.0) == s);
  const auto y = jitter(s, 7);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(std::abs(y[i] - s[i]) < kDefaultJitter);
    CHECK(y[i] != s[i]);
    const double snapped = std::clamp(std::round((y[i] + 1) * 5), 0.0, 10.0) / 5 - 1;
    CHECK(classify(SentimentScore::from_value(snapped)) == classify(s[i]));
  }
}

TEST_CASE("pinball loss") {
  CHECK(pinball_loss(2.0, 0.25) == 0.5);
  CHECK(pinball_loss(-2.0, 0.25) == 1.5);
  CHECK(pinball_loss(0.0, 0.9) == 0.0);
}

TEST_CASE("quantile regression examples") {
  SUBCASE("intercept only gives the sample median") {
    const auto x = design_of({{1}, {1}, {1}});
    const std::vector<double> y{-1, 0, 1};
    const auto fit = quantile_regression(x, y, 0.5);
    CHECK(fit.beta[0] == 0.0);
  }
  SUBCASE("antisymmetric cells give zero medians") {
    const auto obs = cells({{{4, 6}, {8, 2}}}, [](Gender, SourceType, int i) {
      const double mag = 0.1 * (i / 2 + 1);
      return i % 2 ? mag : -mag;
    });
    // even cell sizes put the median on a plateau [-a, a]; any point minimizes
    const auto m = fit_quantile_model(obs, 0.5);
    for (auto g : kGenders)
      for (auto s : kSourceTypes) {
        const auto v = cell_values(obs, g, s);
        std::vector<double> sorted = v;
        std::sort(sorted.begin(), sorted.end());
        const double lo = sorted[sorted.size() / 2 - 1], hi = sorted[sorted.size() / 2];
        CHECK(m.fitted[index_of(g)][index_of(s)] >= lo - 1e-12);
        CHECK(m.fitted[index_of(g)][index_of(s)] <= hi + 1e-12);
      }
    const auto odd = cells({{{5, 7}, {9, 3}}}, [](Gender, SourceType, int i) {
      if (i == 0) return 0.0;
      const double mag = 0.1 * ((i + 1) / 2);
      return i % 2 ? mag : -mag;
    });
    const auto mo = fit_quantile_model(odd, 0.5);
    for (auto g : kGenders)
      for (auto s : kSourceTypes) CHECK(std::abs(mo.fitted[index_of(g)][index_of(s)]) <= 1e-12);
  }
  SUBCASE("tau outside (0, 1)") {
    const auto x = design_of({{1}, {1}});
    const std::vector<double> y{0, 1};
    CHECK_THROWS_AS(quantile_regression(x, y, 0.0), DomainError);
    CHECK_THROWS_AS(quantile_regression(x, y, 1.0), DomainError);
  }
  SUBCASE("rank-deficient design") {
    const auto x = design_of({{1, 2}, {2, 4}, {3, 6}});
    const std::vector<double> y{0, 1, 2};
    CHECK_THROWS_AS(quantile_regression(x, y, 0.5), DomainError);
  }
}

TEST_CASE("quantile regression matches exhaustive vertex search") {
  Rng rng(31);
  int compared = 0;
  for (int iter = 0; iter < 300; ++iter) {
    const std::size_t n = static_cast<std::size_t>(testing::uniform_int(rng, 4, 20));
    const std::size_t p = static_cast<std::size_t>(testing::uniform_int(rng, 1, 3));
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> r{1.0};
      for (std::size_t c = 1; c < p; ++c)
        r.push_back(iter % 3 == 0 ? static_cast<double>(rng.below(2)) : testing::uniform_real(rng, -2, 2));
      rows.push_back(r);
      y.push_back(iter % 4 == 0 ? testing::uniform_int(rng, -2, 2) * 0.5 : testing::uniform_real(rng, -3, 3));
    }
    const double tau = std::array<double, 5>{0.1, 0.25, 0.5, 0.75, 0.9}[rng.below(5)];
    const auto ref = oracle::exhaustive_quantile_regression(rows, y, tau);
    if (ref.beta.empty()) continue;
    const auto x = design_of(rows);
    QuantRegFit fit;
    try {
      fit = quantile_regression(x, y, tau);
    } catch (const DomainError&) {
      continue;  // random dummy column can be constant
    }
    REQUIRE(fit.loss == doctest::Approx(ref.loss).epsilon(1e-9));
    CHECK(total_pinball_loss(x, y, fit.beta, tau) == doctest::Approx(fit.loss).epsilon(1e-12));
    if (ref.runner_up - ref.loss > 1e-7)
      for (std::size_t c = 0; c < p; ++c) CHECK(fit.beta[c] == doctest::Approx(ref.beta[c]).epsilon(1e-9));
    ++compared;
  }
  CHECK(compared > 200);
}

TEST_CASE("quantile regression is locally optimal") {
  Rng rng(41);
  for (int iter = 0; iter < 60; ++iter) {
    const std::size_t n = static_cast<std::size_t>(testing::uniform_int(rng, 20, 200));
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (std::size_t i = 0; i < n; ++i) {
      const double g = static_cast<double>(rng.below(2)), s = static_cast<double>(rng.below(2));
      rows.push_back({1.0, g, s, g * s});
      y.push_back(testing::uniform_int(rng, -5, 5) / 5.0 + testing::uniform_real(rng, -0.05, 0.05));
    }
    const auto x = design_of(rows);
    const double tau = 0.1 + 0.8 * rng.uniform();
    QuantRegFit fit;
    try {
      fit = quantile_regression(x, y, tau);
    } catch (const DomainError&) {
      continue;
    }
    for (std::size_t c = 0; c < 4; ++c)
      for (double eps : {1e-4, -1e-4}) {
        auto b = fit.beta;
        b[c] += eps;
        CHECK(total_pinball_loss(x, y, b, tau) >= fit.loss - 1e-9);
      }
  }
}

TEST_CASE("saturated design fits cell quantiles") {
  Rng rng(51);
  for (int rep = 0; rep < 20; ++rep) {
    const int a = rep % 2 ? 21 : 41, b = rep % 2 ? 41 : 21;
    auto obs = cells({{{a, b}, {b, a}}}, [&](Gender, SourceType, int) {
      return testing::uniform_int(rng, 0, 10) / 5.0 - 1 + testing::uniform_real(rng, -0.05, 0.05);
    });
    for (double tau : kDefaultTaus) {
      const auto m = fit_quantile_model(obs, tau);
      for (auto g : kGenders)
        for (auto s : kSourceTypes) {
          const auto v = cell_values(obs, g, s);
          const double fitted = m.fitted[index_of(g)][index_of(s)];
          CHECK(std::abs(fitted - oracle::interpolated_quantile(v, tau)) <= 1e-6);
          CHECK(std::abs(fitted - oracle::inverse_ecdf_quantile(v, tau)) <= 1e-6);
        }
      // coefficients reproduce the cells
      const auto& f = m.fitted;
      const auto& bt = m.beta;
      CHECK(f[index_of(Gender::M)][index_of(SourceType::traditional)] == doctest::Approx(bt[0]));
      CHECK(f[index_of(Gender::F)][index_of(SourceType::online)] == doctest::Approx(bt[0] + bt[1] + bt[2] + bt[3]));
    }
  }
}

TEST_CASE("saturated design on arbitrary cell sizes hits the order statistic") {
  Rng rng(52);
  for (int rep = 0; rep < 40; ++rep) {
    std::array<std::array<int, 2>, 2> sizes{};
    for (auto& r : sizes)
      for (auto& c : r) c = testing::uniform_int(rng, 1, 30);
    const auto obs = cells(sizes, [&](Gender, SourceType, int) { return testing::uniform_real(rng, -1, 1); });
    for (double tau : kDefaultTaus) {
      const auto m = fit_quantile_model(obs, tau);
      for (auto g : kGenders)
        for (auto s : kSourceTypes) {
          const auto v = cell_values(obs, g, s);
          // nτ non-integral: the cell minimizer is unique
          if (std::abs(v.size() * tau - std::round(v.size() * tau)) < 1e-9) continue;
          CHECK(std::abs(m.fitted[index_of(g)][index_of(s)] - oracle::inverse_ecdf_quantile(v, tau)) <= 1e-9);
        }
    }
  }
}

TEST_CASE("empty cell is named") {
  const auto obs = cells({{{3, 0}, {3, 3}}}, [](Gender, SourceType, int i) { return i * 0.1; });
  try {
    fit_quantile_model(obs, 0.5);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("online") != std::string::npos);
  }
}

TEST_CASE("bootstrap") {
  Rng rng(61);
  const auto obs = cells({{{40, 40}, {40, 40}}}, [&](Gender, SourceType, int) { return testing::uniform_real(rng, -1, 1); });
  BootstrapOptions o;
  o.replicates = 0;
  CHECK_THROWS_AS(bootstrap_quantile_model(obs, 0.5, o), DomainError);
  o.replicates = 99;
  CHECK_THROWS_AS(bootstrap_quantile_model(obs, 0.5, o), DomainError);

  o.replicates = 120;
  o.seed = 5;
  const auto one = bootstrap_quantile_model(obs, 0.5, o);
  o.workers = 4;
  const auto four = bootstrap_quantile_model(obs, 0.5, o);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(one.coefficients[k].lo == four.coefficients[k].lo);
    CHECK(one.coefficients[k].hi == four.coefficients[k].hi);
    CHECK(one.coefficients[k].lo <= one.coefficients[k].hi);
  }

  SUBCASE("constant response") {
    const auto flat = cells({{{10, 10}, {10, 10}}}, [](Gender, SourceType, int) { return 0.4; });
    BootstrapOptions c;
    c.replicates = 100;
    const auto r = bootstrap_quantile_model(flat, 0.5, c);
    CHECK(r.coefficients[0].estimate == doctest::Approx(0.4));
    for (std::size_t k = 1; k < 4; ++k) {
      CHECK(std::abs(r.coefficients[k].lo) <= 1e-12);
      CHECK(std::abs(r.coefficients[k].hi) <= 1e-12);
      CHECK_FALSE(r.coefficients[k].significant);
    }
  }
}

TEST_CASE("bootstrap intervals cover zero for identical groups") {
  int covered = 0;
  const int trials = 10;
  for (int t = 0; t < trials; ++t) {
    Rng rng(1000 + static_cast<std::uint64_t>(t));
    const auto obs = cells({{{150, 150}, {150, 150}}}, [&](Gender, SourceType, int) { return testing::uniform_real(rng, -1, 1); });
    BootstrapOptions o;
    o.replicates = 100;
    o.seed = static_cast<std::uint64_t>(t);
    o.workers = 2;
    const auto r = bootstrap_quantile_model(obs, 0.5, o);
    covered += !r.coefficients[1].significant;
  }
  CHECK(covered >= 8);
}
