#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "polcov/error.hpp"
#include "polcov/inferential.hpp"

namespace polcov {

double pinball_loss(double residual, double tau) {
  return residual >= 0 ? tau * residual : (tau - 1.0) * residual;
}

double total_pinball_loss(const Design& x, std::span<const double> y, std::span<const double> beta,
                          double tau) {
  double loss = 0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    double fit = 0;
    for (std::size_t c = 0; c < x.cols; ++c) fit += x.at(i, c) * beta[c];
    loss += pinball_loss(y[i] - fit, tau);
  }
  return loss;
}

namespace {

/// Gauss-Jordan inverse with partial pivoting; false if singular.
bool invert(std::vector<double> a, std::size_t p, std::vector<double>& inv) {
  inv.assign(p * p, 0.0);
  for (std::size_t i = 0; i < p; ++i) inv[i * p + i] = 1.0;
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < p; ++r)
      if (std::abs(a[r * p + col]) > std::abs(a[piv * p + col])) piv = r;
    if (std::abs(a[piv * p + col]) < 1e-12) return false;
    if (piv != col) {
      for (std::size_t c = 0; c < p; ++c) {
        std::swap(a[piv * p + c], a[col * p + c]);
        std::swap(inv[piv * p + c], inv[col * p + c]);
      }
    }
    const double d = a[col * p + col];
    for (std::size_t c = 0; c < p; ++c) {
      a[col * p + c] /= d;
      inv[col * p + c] /= d;
    }
    for (std::size_t r = 0; r < p; ++r) {
      if (r == col) continue;
      const double f = a[r * p + col];
      if (f == 0) continue;
      for (std::size_t c = 0; c < p; ++c) {
        a[r * p + c] -= f * a[col * p + c];
        inv[r * p + c] -= f * inv[col * p + c];
      }
    }
  }
  return true;
}

/// Observations sharing a design row share fitted values and edge slopes.
struct RowGroups {
  std::vector<std::size_t> group_of;
  std::vector<std::vector<double>> rows;
};

RowGroups group_rows(const Design& x) {
  RowGroups g;
  g.group_of.resize(x.rows);
  std::map<std::vector<double>, std::size_t> seen;
  std::vector<double> row(x.cols);
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t c = 0; c < x.cols; ++c) row[c] = x.at(i, c);
    auto [it, inserted] = seen.emplace(row, g.rows.size());
    if (inserted) g.rows.push_back(row);
    g.group_of[i] = it->second;
  }
  return g;
}

std::vector<std::size_t> initial_basis(const Design& x, std::span<const double> y, double tau,
                                       const RowGroups& groups) {
  const std::size_t n = x.rows, p = x.cols;
  std::vector<double> sorted(y.begin(), y.end());
  const auto k = std::min(n - 1, static_cast<std::size_t>(std::floor(tau * static_cast<double>(n))));
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end());
  const double target = sorted[k];

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(y[a] - target) < std::abs(y[b] - target);
  });

  // incremental elimination: accept rows that raise the rank
  std::vector<std::vector<double>> reduced;
  std::vector<std::size_t> pivots, basis;
  std::vector<bool> group_tried(groups.rows.size(), false);
  for (auto i : order) {
    if (basis.size() == p) break;
    if (group_tried[groups.group_of[i]]) continue;
    group_tried[groups.group_of[i]] = true;
    std::vector<double> v(p);
    for (std::size_t c = 0; c < p; ++c) v[c] = x.at(i, c);
    for (std::size_t r = 0; r < reduced.size(); ++r) {
      const double f = v[pivots[r]] / reduced[r][pivots[r]];
      for (std::size_t c = 0; c < p; ++c) v[c] -= f * reduced[r][c];
    }
    std::size_t piv = 0;
    for (std::size_t c = 1; c < p; ++c)
      if (std::abs(v[c]) > std::abs(v[piv])) piv = c;
    if (std::abs(v[piv]) < 1e-9) continue;
    reduced.push_back(std::move(v));
    pivots.push_back(piv);
    basis.push_back(i);
  }
  if (basis.size() < p) throw DomainError("quantile regression design matrix is rank deficient");
  return basis;
}

}  // namespace

QuantRegFit quantile_regression(const Design& x, std::span<const double> y, double tau) {
  if (!(tau > 0 && tau < 1)) throw DomainError("tau must lie in (0, 1)");
  if (x.rows != y.size() || x.values.size() != x.rows * x.cols)
    throw DomainError("design and response sizes differ");
  const std::size_t n = x.rows, p = x.cols;
  if (n < p) throw DomainError("fewer observations than coefficients");

  const auto groups = group_rows(x);
  const std::size_t G = groups.rows.size();
  QuantRegFit fit;
  fit.tau = tau;
  fit.basis = initial_basis(x, y, tau, groups);

  std::vector<double> xh(p * p), inv, fitted(G), resid(n), a_group(G);
  std::vector<bool> in_basis(n, false);
  std::vector<std::tuple<double, double, std::size_t>> breaks;

  // Symbolic perturbation y + eps*e: zero residuals take the sign of the
  // perturbed residual, which makes every vertex simple (lexicographic rule).
  std::vector<double> e(n), pert(n), beta_e(p);
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (auto& v : e) {
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= h >> 27;
    v = 0.5 + static_cast<double>(h >> 11) * 0x1.0p-53;
  }
  auto effective = [&](std::size_t i) { return resid[i] != 0 ? resid[i] : pert[i]; };
  breaks.reserve(n);
  const std::size_t max_iter = 100 + 20 * n;

  for (;;) {
    for (std::size_t r = 0; r < p; ++r)
      for (std::size_t c = 0; c < p; ++c) xh[r * p + c] = x.at(fit.basis[r], c);
    if (!invert(xh, p, inv)) throw DomainError("quantile regression basis became singular");

    fit.beta.assign(p, 0.0);
    for (std::size_t r = 0; r < p; ++r)
      for (std::size_t c = 0; c < p; ++c) fit.beta[r] += inv[r * p + c] * y[fit.basis[c]];
    for (std::size_t g = 0; g < G; ++g) {
      double f = 0;
      for (std::size_t c = 0; c < p; ++c) f += groups.rows[g][c] * fit.beta[c];
      fitted[g] = f;
    }
    beta_e.assign(p, 0.0);
    for (std::size_t r = 0; r < p; ++r)
      for (std::size_t c = 0; c < p; ++c) beta_e[r] += inv[r * p + c] * e[fit.basis[c]];
    std::fill(in_basis.begin(), in_basis.end(), false);
    for (auto b : fit.basis) in_basis[b] = true;
    for (std::size_t i = 0; i < n; ++i) {
      double r = in_basis[i] ? 0.0 : y[i] - fitted[groups.group_of[i]];
      // ties with a basic observation leave rounding noise; such points sit on the fit
      if (std::abs(r) <= 1e-12 * (1.0 + std::abs(y[i]))) r = 0.0;
      resid[i] = r;
      double pe = 0;
      if (!in_basis[i]) {
        pe = e[i];
        for (std::size_t c = 0; c < p; ++c) pe -= groups.rows[groups.group_of[i]][c] * beta_e[c];
      }
      pert[i] = pe;
    }

    if (fit.iterations >= max_iter) throw Error("quantile regression did not converge");

    // Edge directions: column j of the basis inverse moves the fit of basic
    // observation j by +1 and leaves the other basic fits unchanged.
    double best_slope = 0;
    std::size_t best_j = p;
    double best_sign = 0;
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t g = 0; g < G; ++g) {
        double a = 0;
        for (std::size_t c = 0; c < p; ++c) a += groups.rows[g][c] * inv[c * p + j];
        a_group[g] = a;
      }
      double up = 1.0 - tau, down = tau, scale = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (in_basis[i]) continue;
        const double a = a_group[groups.group_of[i]];
        if (a == 0) continue;
        scale += std::abs(a);
        const double r = effective(i);
        if (r > 0) {
          up += -tau * a;
          down += tau * a;
        } else if (r < 0) {
          up += (1.0 - tau) * a;
          down += -(1.0 - tau) * a;
        } else {
          up += std::max(-tau * a, (1.0 - tau) * a);
          down += std::max(tau * a, -(1.0 - tau) * a);
        }
      }
      const double tol = 1e-11 * scale;
      if (up < -tol && up < best_slope) {
        best_slope = up;
        best_j = j;
        best_sign = 1.0;
      }
      if (down < -tol && down < best_slope) {
        best_slope = down;
        best_j = j;
        best_sign = -1.0;
      }
    }
    if (best_j == p) break;  // no descending edge: optimal vertex

    for (std::size_t g = 0; g < G; ++g) {
      double a = 0;
      for (std::size_t c = 0; c < p; ++c) a += groups.rows[g][c] * inv[c * p + best_j];
      a_group[g] = best_sign * a;
    }
    breaks.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (in_basis[i]) continue;
      const double a = a_group[groups.group_of[i]];
      if (a == 0) continue;
      const double t = resid[i] / a, te = pert[i] / a;
      if (t > 0 || (t == 0 && te > 0)) breaks.emplace_back(t, te, i);
    }
    std::sort(breaks.begin(), breaks.end());
    double slope = best_slope;
    std::size_t entering = n;
    for (const auto& [t, te, i] : breaks) {
      slope += std::abs(a_group[groups.group_of[i]]);
      if (slope >= 0) {
        entering = i;
        break;
      }
    }
    if (entering == n) throw DomainError("quantile regression objective is unbounded");
    fit.basis[best_j] = entering;
    ++fit.iterations;
  }

  fit.loss = 0;
  for (std::size_t i = 0; i < n; ++i) fit.loss += pinball_loss(resid[i], tau);
  return fit;
}

}  // namespace polcov
