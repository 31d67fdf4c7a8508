#include <cmath>

#include "doctest.h"
#include "polcov/error.hpp"
#include "polcov/temporal.hpp"
#include "support/oracles.hpp"
#include "support/testing.hpp"

using namespace polcov;

namespace {

const Date kStart = Date::from_ymd(2017, 1, 1);

DailySeries series(const std::vector<double>& values, Date start = kStart) {
  DailySeries s;
  for (std::size_t i = 0; i < values.size(); ++i) s.points.push_back({start + static_cast<std::int32_t>(i), values[i]});
  return s;
}

std::vector<double> values_of(const DailySeries& s) {
  std::vector<double> v;
  for (const auto& p : s.points) v.push_back(p.value);
  return v;
}

void check_values(const DailySeries& s, const std::vector<double>& expected) {
  REQUIRE(s.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(s.points[i].value == doctest::Approx(expected[i]).epsilon(1e-15));
}

AreaDecomposition area(const std::vector<double>& x, const std::vector<double>& d) { return area_decomposition(x, d); }

}  // namespace

TEST_CASE("moving average examples") {
  SUBCASE("constant") {
    const auto avg = moving_average(series(std::vector<double>(200, 0.25)));
    CHECK(avg.size() == 111);
    for (const auto& p : avg.points) CHECK(p.value == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(avg.points.front().date == kStart + 89);
  }
  SUBCASE("impulse") {
    std::vector<double> v(400, 0.0);
    v[150] = 1.0;
    const auto avg = moving_average(series(v));
    int hits = 0;
    for (const auto& p : avg.points)
      if (p.value != 0.0) {
        ++hits;
        CHECK(p.value == doctest::Approx(1.0 / 90).epsilon(1e-15));
      }
    CHECK(hits == 90);
  }
  SUBCASE("window 1 is the identity") {
    const std::vector<double> v{0.1, 0.5, 0.2, 0.0, 0.9};
    CHECK(values_of(moving_average(series(v), 1)) == v);
  }
  SUBCASE("too short") {
    CHECK_THROWS_AS(moving_average(series(std::vector<double>(10, 0.1))), DomainError);
  }
}

TEST_CASE("missing days follow the fill policy") {
  DailySeries s;
  s.points = {{kStart, 0.3}, {kStart + 3, 0.6}};
  const auto zero = moving_average(s, 2, FillPolicy::zero);
  check_values(zero, {0.15, 0.0, 0.3});
  const auto carry = moving_average(s, 2, FillPolicy::carry_forward);
  check_values(carry, {0.3, 0.3, 0.45});
  const auto wider = moving_average(s, 2, FillPolicy::zero, kStart + (-1), kStart + 4);
  CHECK(wider.points.front().date == kStart);
  CHECK(wider.size() == 5);
}

TEST_CASE("moving average commutes with adding a constant") {
  Rng rng(71);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<double> v(static_cast<std::size_t>(testing::uniform_int(rng, 90, 200)));
    for (auto& x : v) x = rng.uniform() * 0.5;
    const double c = rng.uniform() * 0.3;
    std::vector<double> shifted = v;
    for (auto& x : shifted) x += c;
    const auto a = values_of(moving_average(series(v)));
    const auto b = values_of(moving_average(series(shifted)));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(a[i] + c).epsilon(1e-12));
  }
}

TEST_CASE("dominance") {
  const auto same = dominance_fractions(series({0.1, 0.2, 0.3}), series({0.1, 0.2, 0.3}));
  CHECK(same.share_f == 0.0);
  CHECK(same.share_m == 0.0);
  CHECK(same.tie_share == 1.0);
  const auto above = dominance_fractions(series({0.5, 0.5}), series({0.1, 0.2}));
  CHECK(above.share_f == 1.0);
  CHECK(above.share_m == 0.0);
  const auto alt = dominance_fractions(series({1, 0, 1, 0}), series({0, 1, 0, 1}));
  CHECK(alt.share_f == 0.5);
  CHECK(alt.share_m == 0.5);
  CHECK(alt.days == 4);
  CHECK_THROWS_AS(dominance_fractions(series({1}), series({1}, kStart + 5)), DomainError);
}

TEST_CASE("area decomposition examples") {
  const auto rect = area({0, 1, 2}, {0.5, 0.5, 0.5});
  CHECK(rect.a_f == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rect.a_m == 0.0);
  CHECK(rect.a == rect.a_f);

  const auto sq = area({0, 1, 2}, {0, 1, 4});
  CHECK(sq.a_f == doctest::Approx(8.0 / 3).epsilon(1e-15));

  const auto cross = area({0, 1, 2}, {-1, 0, 1});
  CHECK(cross.a_f == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cross.a_m == doctest::Approx(0.5).epsilon(1e-15));

  CHECK_THROWS_AS(area({0, 1}, {1, 1}), DomainError);
}

TEST_CASE("Simpson is exact on cubics") {
  Rng rng(81);
  for (int iter = 0; iter < 500; ++iter) {
    double c[4];
    for (auto& v : c) v = testing::uniform_real(rng, -2, 2);
    const int n = testing::uniform_int(rng, 3, 40);  // points
    const double a = testing::uniform_real(rng, -3, 0), h = testing::uniform_real(rng, 0.05, 0.5);
    std::vector<double> x, d;
    // lift the cubic above zero on the grid's span
    double lo = INFINITY;
    for (int i = 0; i <= 2000; ++i) lo = std::min(lo, oracle::cubic(c, a + (n - 1) * h * i / 2000.0));
    c[0] += 0.5 - lo + 1.0;
    for (int i = 0; i < n; ++i) {
      x.push_back(a + i * h);
      d.push_back(oracle::cubic(c, x.back()));
    }
    const double exact = oracle::cubic_integral(c, x.front(), x.back());
    const auto pos = area(x, d);
    CHECK(std::abs(pos.a_f - exact) <= 1e-9 * std::abs(exact));
    CHECK(pos.a_m == 0.0);
    for (auto& v : d) v = -v;
    const auto neg = area(x, d);
    CHECK(std::abs(neg.a_m - exact) <= 1e-9 * std::abs(exact));
  }
}

TEST_CASE("area decomposition symmetries") {
  Rng rng(91);
  for (int iter = 0; iter < 500; ++iter) {
    const int n = testing::uniform_int(rng, 3, 60);
    std::vector<double> x, f, m, d, neg;
    double t = 0;
    for (int i = 0; i < n; ++i) {
      t += iter % 2 ? 1.0 : testing::uniform_real(rng, 0.2, 2.0);
      x.push_back(t);
      f.push_back(rng.uniform() * 0.1);
      m.push_back(rng.below(5) == 0 ? f.back() : rng.uniform() * 0.1);
      d.push_back(f.back() - m.back());
      neg.push_back(m.back() - f.back());
    }
    const auto a = area(x, d), b = area(x, neg);
    CHECK(std::abs(a.a - (a.a_f + a.a_m)) <= 1e-12);
    CHECK(a.a_f >= 0);
    CHECK(a.a_m >= 0);
    CHECK(b.a_f == a.a_m);
    CHECK(b.a_m == a.a_f);
    CHECK(b.a == a.a);
  }
}

TEST_CASE("daily fraction and category trend") {
  DailyCounts daily;
  for (int i = 0; i < 120; ++i) {
    const Date d = kStart + i;
    daily.add_coverage(d, Gender::F, 10);
    daily.add_coverage(d, Gender::M, 20);
    daily.add_personalization(d, Gender::F, Category::physical, 2);
    daily.add_personalization(d, Gender::M, Category::physical, 1);
  }
  const auto p = daily_fraction(daily, Gender::F, Category::physical);
  REQUIRE(p.size() == 120);
  CHECK(p.points.front().value == 0.2);

  const auto trend = category_trend(daily, Category::physical, 90);
  CHECK(trend.average[0].size() == 31);
  CHECK(trend.dominance.share_f == 1.0);
  CHECK(trend.area.a_f == doctest::Approx(30 * 0.15).epsilon(1e-12));
  CHECK(trend.area.a_m == 0.0);
}
