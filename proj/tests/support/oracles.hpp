#pragma once

// Independent reference implementations. They follow the textbook
// definitions directly (full recomputation, pair enumeration, exhaustive
// search) and share no code with the library routines they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

namespace oracle {

// ---------------------------------------------------------------------------
// bias statistics

struct Word {
  double f = 0;
  double m = 0;
};

struct Corpus {
  std::vector<Word> words;
  double politicians_f = 1;
  double politicians_m = 1;
};

struct Rates {
  double f, m;
};

/// Adjusted rates of every word; nullopt if a gender has no words.
inline std::optional<std::vector<Rates>> rates(const Corpus& c, bool literal) {
  double df = 0, dm = 0;
  for (const auto& w : c.words) {
    df += w.f;
    dm += w.m;
  }
  if (df <= 0 || dm <= 0) return std::nullopt;
  const double af = df / c.politicians_f, am = dm / c.politicians_m;
  const double mean = (af + am) / 2;
  const double cf = af / mean, cm = am / mean;
  std::vector<Rates> out;
  for (const auto& w : c.words) {
    if (literal)
      out.push_back({(w.f / df) / (cf * df), (w.m / dm) / (cm * dm)});
    else
      out.push_back({(w.f / df) / cf, (w.m / dm) / cm});
  }
  return out;
}

inline std::optional<double> dissimilarity(const Corpus& c, bool literal) {
  const auto r = rates(c, literal);
  if (!r) return std::nullopt;
  double df = 0, dm = 0;
  for (const auto& w : c.words) {
    df += w.f;
    dm += w.m;
  }
  const double af = df / c.politicians_f, am = dm / c.politicians_m;
  const double cf = af / ((af + am) / 2), cm = am / ((af + am) / 2);
  double sum = 0;
  for (const auto& x : *r) sum += std::abs(x.f - x.m);
  return cf * cm / (cf + cm) * sum;
}

/// Diss with word k removed, politician tallies unchanged.
inline std::optional<double> dissimilarity_without(const Corpus& c, std::size_t k, bool literal) {
  Corpus rest = c;
  rest.words.erase(rest.words.begin() + static_cast<std::ptrdiff_t>(k));
  return dissimilarity(rest, literal);
}

// ---------------------------------------------------------------------------
// exact rationals for the two-word fixture

struct Fraction {
  std::int64_t num = 0, den = 1;
  Fraction(std::int64_t n = 0, std::int64_t d = 1) : num(n), den(d) { reduce(); }
  void reduce() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const auto g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  friend Fraction operator+(Fraction a, Fraction b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
  friend Fraction operator-(Fraction a, Fraction b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
  friend Fraction operator*(Fraction a, Fraction b) { return {a.num * b.num, a.den * b.den}; }
  friend Fraction operator/(Fraction a, Fraction b) { return {a.num * b.den, a.den * b.num}; }
  friend bool operator==(Fraction a, Fraction b) { return a.num == b.num && a.den == b.den; }
  Fraction abs() const { return {num < 0 ? -num : num, den}; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Ratio-mode Diss in exact arithmetic.
inline Fraction exact_dissimilarity(const std::vector<std::pair<int, int>>& words, int pf, int pm) {
  std::int64_t df = 0, dm = 0;
  for (auto [f, m] : words) {
    df += f;
    dm += m;
  }
  const Fraction af(df, pf), am(dm, pm);
  const Fraction mean = (af + am) / Fraction(2);
  const Fraction cf = af / mean, cm = am / mean;
  Fraction sum;
  for (auto [f, m] : words) {
    const Fraction tf = Fraction(f, df) / cf, tm = Fraction(m, dm) / cm;
    sum = sum + (tf - tm).abs();
  }
  return cf * cm / (cf + cm) * sum;
}

// ---------------------------------------------------------------------------
// Krippendorff's alpha, ordinal metric, by pair enumeration

/// ratings[unit][annotator]; values < -100 denote missing.
inline std::optional<double> alpha_ordinal(const std::vector<std::vector<int>>& ratings) {
  std::vector<std::vector<int>> units;
  for (const auto& u : ratings) {
    std::vector<int> vals;
    for (int v : u)
      if (v > -100) vals.push_back(v);
    if (vals.size() >= 2) units.push_back(vals);
  }
  if (units.size() < 2) return std::nullopt;
  std::map<int, double> marg;
  double n = 0;
  for (const auto& u : units)
    for (int v : u) {
      marg[v] += 1;
      n += 1;
    }
  auto delta2 = [&](int c, int k) {
    if (c > k) std::swap(c, k);
    double s = 0;
    for (const auto& [g, ng] : marg)
      if (g >= c && g <= k) s += ng;
    s -= (marg[c] + marg[k]) / 2;
    return s * s;
  };
  // observed: every ordered pair of values within a unit, weighted 1/(m_u - 1)
  double observed = 0;
  for (const auto& u : units) {
    const double w = 1.0 / static_cast<double>(u.size() - 1);
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < u.size(); ++j)
        if (i != j) observed += w * delta2(u[i], u[j]);
  }
  observed /= n;
  // expected: every ordered pair of distinct pairable values in the whole data
  std::vector<int> all;
  for (const auto& u : units) all.insert(all.end(), u.begin(), u.end());
  double expected = 0;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = 0; j < all.size(); ++j)
      if (i != j) expected += delta2(all[i], all[j]);
  expected /= n * (n - 1);
  if (expected == 0) return 1.0;
  return 1.0 - observed / expected;
}

// ---------------------------------------------------------------------------
// weighted quantile by scanning distinct values

inline double weighted_quantile(const std::vector<double>& values, const std::vector<double>& weights, double p) {
  std::map<double, double> mass;
  double total = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (weights[i] > 0) mass[values[i]] += weights[i];
    total += weights[i];
  }
  const double target = p * total;
  double cum = 0;
  for (auto it = mass.begin(); it != mass.end(); ++it) {
    cum += it->second;
    if (std::abs(cum - target) <= 1e-12 * total) {
      auto next = std::next(it);
      return next == mass.end() ? it->first : (it->first + next->first) / 2;
    }
    if (cum > target) return it->first;
  }
  return mass.rbegin()->first;
}

// ---------------------------------------------------------------------------
// quantile regression by exhaustive vertex search

inline double pinball(double u, double tau) { return u >= 0 ? tau * u : (tau - 1) * u; }

/// Solves the p x p system a x = b by Gaussian elimination; nullopt if singular.
inline std::optional<std::vector<double>> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t p = b.size();
  for (std::size_t c = 0; c < p; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c; r < p; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-10) return std::nullopt;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = 0; r < p; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < p; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t c = 0; c < p; ++c) b[c] /= a[c][c];
  return b;
}

struct VertexSearch {
  std::vector<double> beta;
  double loss = 0;
  double runner_up = 0;  // best loss among vertices with a different fit
};

/// Every LP vertex fits p observations exactly; try all p-subsets.
inline VertexSearch exhaustive_quantile_regression(const std::vector<std::vector<double>>& x,
                                                   const std::vector<double>& y, double tau) {
  const std::size_t n = y.size(), p = x.front().size();
  VertexSearch best;
  best.loss = best.runner_up = INFINITY;
  std::vector<std::size_t> idx(p);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (auto i : idx) {
      a.push_back(x[i]);
      b.push_back(y[i]);
    }
    if (auto beta = solve(a, b)) {
      double loss = 0;
      for (std::size_t i = 0; i < n; ++i) {
        double fit = 0;
        for (std::size_t c = 0; c < p; ++c) fit += x[i][c] * (*beta)[c];
        loss += pinball(y[i] - fit, tau);
      }
      bool same = !best.beta.empty();
      for (std::size_t c = 0; same && c < p; ++c) same = std::abs(best.beta[c] - (*beta)[c]) < 1e-9;
      if (loss < best.loss - 1e-12 && !same) {
        best.runner_up = best.loss;
        best.loss = loss;
        best.beta = *beta;
      } else if (!same && loss < best.runner_up) {
        best.runner_up = loss;
      }
    }
    // next combination
    std::size_t k = p;
    while (k > 0 && idx[k - 1] == n - p + k - 1) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t j = k; j < p; ++j) idx[j] = idx[j - 1] + 1;
  }
  return best;
}

/// Smallest order statistic minimizing the pinball loss: y_(ceil(n tau)).
inline double inverse_ecdf_quantile(std::vector<double> v, double tau) {
  std::sort(v.begin(), v.end());
  auto k = static_cast<std::size_t>(std::ceil(static_cast<double>(v.size()) * tau));
  return v[std::max<std::size_t>(k, 1) - 1];
}

/// Linear interpolation between order statistics, h = (n - 1) tau.
inline double interpolated_quantile(std::vector<double> v, double tau) {
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1) * tau;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

// ---------------------------------------------------------------------------
// polynomials

/// Exact integral of c0 + c1 x + c2 x^2 + c3 x^3 over [a, b].
inline double cubic_integral(const double c[4], double a, double b) {
  auto prim = [&](double x) { return c[0] * x + c[1] * x * x / 2 + c[2] * x * x * x / 3 + c[3] * x * x * x * x / 4; };
  return prim(b) - prim(a);
}

inline double cubic(const double c[4], double x) { return c[0] + x * (c[1] + x * (c[2] + x * c[3])); }

}  // namespace oracle
