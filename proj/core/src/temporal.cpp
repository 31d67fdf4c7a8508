#include "polcov/temporal.hpp"

#include <cmath>
#include <string>

#include "polcov/error.hpp"

namespace polcov {

DailySeries daily_fraction(const DailyCounts& daily, Gender g, Category c) {
  DailySeries s;
  for (const auto& [date, day] : daily.days()) {
    const auto coverage = day.coverage[index_of(g)];
    if (coverage == 0) continue;
    const auto words = day.personalization[index_of(g)][index_of(c)];
    s.points.push_back({date, static_cast<double>(words) / static_cast<double>(coverage)});
  }
  return s;
}

std::string_view to_string(FillPolicy f) { return f == FillPolicy::zero ? "zero" : "carry_forward"; }

std::optional<FillPolicy> parse_fill_policy(std::string_view s) {
  if (s == "zero") return FillPolicy::zero;
  if (s == "carry_forward") return FillPolicy::carry_forward;
  return std::nullopt;
}

namespace {

void check_increasing(const DailySeries& s) {
  for (std::size_t i = 1; i < s.points.size(); ++i)
    if (!(s.points[i - 1].date < s.points[i].date))
      throw DomainError("series dates not strictly increasing at " + s.points[i].date.iso());
}

}  // namespace

DailySeries moving_average(const DailySeries& series, std::size_t window, FillPolicy fill,
                           std::optional<Date> from, std::optional<Date> to) {
  if (window == 0) throw DomainError("moving-average window must be positive");
  check_increasing(series);
  if (series.empty() && (!from || !to)) throw DomainError("moving average of an empty series");
  const Date first = from ? *from : series.points.front().date;
  const Date last = to ? *to : series.points.back().date;
  if (last < first) throw DomainError("moving-average range is empty");
  const auto length = static_cast<std::size_t>(last - first) + 1;
  if (length < window)
    throw DomainError("series spans " + std::to_string(length) + " days, shorter than window " +
                      std::to_string(window));

  std::vector<double> grid(length, 0.0);
  std::vector<bool> present(length, false);
  for (const auto& p : series.points) {
    if (p.date < first || last < p.date) continue;
    const auto k = static_cast<std::size_t>(p.date - first);
    grid[k] = p.value;
    present[k] = true;
  }
  if (fill == FillPolicy::carry_forward)
    for (std::size_t k = 1; k < length; ++k)
      if (!present[k]) grid[k] = grid[k - 1];

  DailySeries out;
  out.points.reserve(length - window + 1);
  for (std::size_t k = window - 1; k < length; ++k) {
    double sum = 0;
    for (std::size_t j = k + 1 - window; j <= k; ++j) sum += grid[j];
    out.points.push_back({first + static_cast<std::int32_t>(k), sum / static_cast<double>(window)});
  }
  return out;
}

DominanceShares dominance_fractions(const DailySeries& f, const DailySeries& m) {
  check_increasing(f);
  check_increasing(m);
  DominanceShares d;
  std::size_t above = 0, below = 0, ties = 0;
  std::size_t i = 0, j = 0;
  while (i < f.size() && j < m.size()) {
    const auto a = f.points[i].date, b = m.points[j].date;
    if (a < b) {
      ++i;
    } else if (b < a) {
      ++j;
    } else {
      const double x = f.points[i].value, y = m.points[j].value;
      if (x > y)
        ++above;
      else if (y > x)
        ++below;
      else
        ++ties;
      ++i;
      ++j;
    }
  }
  d.days = above + below + ties;
  if (d.days == 0) throw DomainError("series share no dates");
  const auto n = static_cast<double>(d.days);
  d.share_f = static_cast<double>(above) / n;
  d.share_m = static_cast<double>(below) / n;
  d.tie_share = static_cast<double>(ties) / n;
  return d;
}

namespace {

int sign(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

/// Exact integral of the quadratic through three (possibly unequally spaced) points.
double simpson_pair(double x0, double x1, double x2, double f0, double f1, double f2) {
  const double h0 = x1 - x0, h1 = x2 - x1;
  return (h0 + h1) / 6.0 *
         ((2.0 - h1 / h0) * f0 + (h0 + h1) * (h0 + h1) / (h0 * h1) * f1 + (2.0 - h0 / h1) * f2);
}

/// Exact integral of the cubic through four points (the 3/8 rule on a uniform
/// grid), by two-point Gauss-Legendre on the Lagrange interpolant.
double cubic_segment(const double* x, const double* f) {
  auto interp = [&](double t) {
    double sum = 0;
    for (int i = 0; i < 4; ++i) {
      double l = 1;
      for (int j = 0; j < 4; ++j)
        if (j != i) l *= (t - x[j]) / (x[i] - x[j]);
      sum += l * f[i];
    }
    return sum;
  };
  const double mid = (x[0] + x[3]) / 2.0, half = (x[3] - x[0]) / 2.0;
  const double off = half / std::sqrt(3.0);
  return half * (interp(mid - off) + interp(mid + off));
}

double trapezoid(std::span<const double> x, std::span<const double> f) {
  double total = 0;
  for (std::size_t k = 1; k < x.size(); ++k) total += (x[k] - x[k - 1]) * (f[k] + f[k - 1]) / 2.0;
  return total;
}

double integrate(std::span<const double> x, std::span<const double> f) {
  const std::size_t intervals = x.size() - 1;
  if (intervals == 1) return trapezoid(x, f);
  const std::size_t paired = intervals % 2 == 0 ? intervals : intervals - 3;
  double total = 0;
  for (std::size_t k = 0; k < paired; k += 2)
    total += simpson_pair(x[k], x[k + 1], x[k + 2], f[k], f[k + 1], f[k + 2]);
  if (paired < intervals) total += cubic_segment(&x[paired], &f[paired]);
  return total;
}

}  // namespace

AreaDecomposition area_decomposition(std::span<const double> x, std::span<const double> d) {
  if (x.size() != d.size()) throw DomainError("grid and values differ in length");
  if (x.size() < 3) throw DomainError("area decomposition needs at least 3 points");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i - 1] < x[i])) throw DomainError("grid not strictly increasing");

  std::vector<double> gx, gd;
  gx.reserve(2 * x.size());
  gd.reserve(2 * x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i > 0 && sign(d[i - 1]) * sign(d[i]) < 0) {
      gx.push_back(x[i - 1] + d[i - 1] * (x[i] - x[i - 1]) / (d[i - 1] - d[i]));
      gd.push_back(0.0);
    }
    gx.push_back(x[i]);
    gd.push_back(d[i]);
  }

  // Cut at the zero points separating opposite signs: at both ends of a zero
  // run, so the run itself forms a segment of zero area.
  const std::size_t n = gx.size();
  std::vector<std::size_t> cuts{0};
  int prev_sign = 0;
  for (std::size_t i = 0; i < n;) {
    if (gd[i] != 0) {
      prev_sign = sign(gd[i]);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && gd[j + 1] == 0) ++j;
    const int next_sign = j + 1 < n ? sign(gd[j + 1]) : 0;
    if (prev_sign != 0 && next_sign != 0 && prev_sign != next_sign) {
      if (cuts.back() != i) cuts.push_back(i);
      if (cuts.back() != j) cuts.push_back(j);
    }
    i = j + 1;
  }
  if (cuts.back() != n - 1) cuts.push_back(n - 1);

  AreaDecomposition out;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const auto lo = cuts[c], hi = cuts[c + 1];
    int s = 0;
    for (std::size_t k = lo; k <= hi && s == 0; ++k) s = sign(gd[k]);
    if (s == 0) continue;
    const std::span<const double> sx(gx.data() + lo, hi - lo + 1), sd(gd.data() + lo, hi - lo + 1);
    // Uneven spacing (crossings land anywhere) gives Simpson negative end
    // weights; a sign-constant segment must not integrate to the other sign.
    double area = s * integrate(sx, sd);
    if (area < 0) area = s * trapezoid(sx, sd);
    (s > 0 ? out.a_f : out.a_m) += area;
  }
  out.a = out.a_f + out.a_m;
  return out;
}

AreaDecomposition area_decomposition(const DailySeries& f, const DailySeries& m) {
  if (f.size() != m.size()) throw DomainError("series cover different dates");
  check_increasing(f);
  std::vector<double> x(f.size()), d(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.points[i].date != m.points[i].date)
      throw DomainError("series cover different dates at " + f.points[i].date.iso());
    x[i] = static_cast<double>(f.points[i].date - f.points.front().date);
    d[i] = f.points[i].value - m.points[i].value;
  }
  return area_decomposition(x, d);
}

CategoryTrend category_trend(const DailyCounts& daily, Category c, std::size_t window, FillPolicy fill) {
  if (daily.days().empty()) throw DomainError("no daily counts");
  CategoryTrend t;
  t.category = c;
  t.window = window;
  t.fill = fill;
  const Date first = daily.days().begin()->first;
  const Date last = daily.days().rbegin()->first;
  for (auto g : kGenders) {
    t.daily[index_of(g)] = daily_fraction(daily, g, c);
    t.average[index_of(g)] = moving_average(t.daily[index_of(g)], window, fill, first, last);
  }
  const auto& f = t.average[index_of(Gender::F)];
  const auto& m = t.average[index_of(Gender::M)];
  t.dominance = dominance_fractions(f, m);
  t.area = area_decomposition(f, m);
  return t;
}

}  // namespace polcov
