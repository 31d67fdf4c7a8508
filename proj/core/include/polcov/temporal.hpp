#pragma once

// Daily personalization fractions, trailing moving averages and the area
// between the two gender trend curves.

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "polcov/counts.hpp"
#include "polcov/model.hpp"

namespace polcov {

struct SeriesPoint {
  Date date;
  double value = 0.0;
  friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

/// Dates strictly increasing; gaps allowed.
struct DailySeries {
  std::vector<SeriesPoint> points;
  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

/// p_{g,c}(t): words of category c attributed to gender g on day t divided by
/// all coverage words of gender g that day. Only days with coverage for g
/// appear.
DailySeries daily_fraction(const DailyCounts& daily, Gender g, Category c);

enum class FillPolicy { zero, carry_forward };
std::string_view to_string(FillPolicy f);
std::optional<FillPolicy> parse_fill_policy(std::string_view s);

inline constexpr std::size_t kDefaultWindow = 90;

/// Trailing mean over `window` consecutive calendar days. The series is first
/// reindexed onto every day of [from, to] (defaults: its own first and last
/// date) with missing days filled per `fill`; output starts at the window-th
/// day. Throws DomainError when the grid is shorter than the window.
DailySeries moving_average(const DailySeries& series, std::size_t window = kDefaultWindow,
                           FillPolicy fill = FillPolicy::zero, std::optional<Date> from = std::nullopt,
                           std::optional<Date> to = std::nullopt);

struct DominanceShares {
  double share_f = 0.0;    // days with F strictly above M
  double share_m = 0.0;
  double tie_share = 0.0;
  std::size_t days = 0;    // common days compared
};

/// Compared over the dates both series share. Throws DomainError if none.
DominanceShares dominance_fractions(const DailySeries& f, const DailySeries& m);

struct AreaDecomposition {
  double a_f = 0.0;  // area where F lies above M
  double a_m = 0.0;
  double a = 0.0;    // a_f + a_m
};

/// Area between the curves on an arbitrary increasing grid x with difference
/// d = f - m. Zero crossings are located by linear interpolation and inserted;
/// each sign-constant segment is integrated by composite Simpson (3/8 rule on
/// the last three intervals when the interval count is odd, trapezoid for a
/// single interval). Throws DomainError with fewer than 3 points.
AreaDecomposition area_decomposition(std::span<const double> x, std::span<const double> d);

/// Same on two daily series over identical dates; x is measured in days.
AreaDecomposition area_decomposition(const DailySeries& f, const DailySeries& m);

struct CategoryTrend {
  Category category = Category::physical;
  std::size_t window = kDefaultWindow;
  FillPolicy fill = FillPolicy::zero;
  std::array<DailySeries, 2> daily;    // indexed by gender
  std::array<DailySeries, 2> average;
  DominanceShares dominance;
  AreaDecomposition area;
};

/// Both genders' averages share the calendar grid spanning every day in
/// `daily`, so they can be compared point by point.
CategoryTrend category_trend(const DailyCounts& daily, Category c, std::size_t window = kDefaultWindow,
                             FillPolicy fill = FillPolicy::zero);

}  // namespace polcov
