#include "polcov/bias.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "polcov/error.hpp"

namespace polcov {

std::string_view to_string(RatesMode m) { return m == RatesMode::ratio ? "ratio" : "literal"; }

std::optional<RatesMode> parse_rates_mode(std::string_view s) {
  if (s == "ratio") return RatesMode::ratio;
  if (s == "literal") return RatesMode::literal;
  return std::nullopt;
}

CorrectionFactors correction_factors(double total_f, double politicians_f, double total_m,
                                     double politicians_m) {
  if (!(politicians_f > 0)) throw DomainError("correction factor undefined: no women politicians (|F| = 0)");
  if (!(politicians_m > 0)) throw DomainError("correction factor undefined: no men politicians (|M| = 0)");
  if (!(total_f > 0)) throw DomainError("correction factor undefined: no words for women (|D_F| = 0)");
  if (!(total_m > 0)) throw DomainError("correction factor undefined: no words for men (|D_M| = 0)");
  const double a_f = total_f / politicians_f;
  const double a_m = total_m / politicians_m;
  const double mean = (a_f + a_m) / 2.0;
  return {a_f / mean, a_m / mean};
}

CorrectionFactors correction_factors(const WordFrequencies& freq) {
  return correction_factors(static_cast<double>(freq.total_f), static_cast<double>(freq.politicians_f),
                            static_cast<double>(freq.total_m), static_cast<double>(freq.politicians_m));
}

AdjustedRates adjusted_rates(double count_f, double count_m, double total_f, double total_m,
                             CorrectionFactors factors, RatesMode mode) {
  const double t_f = count_f / total_f;
  const double t_m = count_m / total_m;
  if (mode == RatesMode::ratio) return {t_f / factors.c_f, t_m / factors.c_m};
  return {t_f / (factors.c_f * total_f), t_m / (factors.c_m * total_m)};
}

std::optional<double> coverage_bias_index(double rate_f, double rate_m) {
  const double sum = rate_f + rate_m;
  if (!(sum > 0)) return std::nullopt;
  // exact +-1 for single-gender words
  if (rate_m == 0) return 1.0;
  if (rate_f == 0) return -1.0;
  return (rate_f - rate_m) / sum;
}

BiasProfile bias_profile(const WordFrequencies& freq, RatesMode mode) {
  BiasProfile p;
  p.mode = mode;
  p.factors = correction_factors(freq);
  p.marginals = freq;
  p.marginals.words.clear();
  p.words.reserve(freq.words.size());
  const auto tf = static_cast<double>(freq.total_f);
  const auto tm = static_cast<double>(freq.total_m);
  for (const auto& w : freq.words) {
    WordBias b;
    b.counts = w;
    b.rates = adjusted_rates(static_cast<double>(w.f), static_cast<double>(w.m), tf, tm, p.factors, mode);
    b.index = coverage_bias_index(b.rates.f, b.rates.m);
    if (!b.index) ++p.undefined;
    p.words.push_back(std::move(b));
  }
  return p;
}

namespace {

/// Scale factors so that t~_F(w) = alpha |w_F| and t~_M(w) = beta |w_M|.
struct Scales {
  double alpha;
  double beta;
  double prefactor;  // c_F c_M / (c_F + c_M)
};

Scales scales_for(double total_f, double total_m, double pol_f, double pol_m, RatesMode mode) {
  const auto cf = correction_factors(total_f, pol_f, total_m, pol_m);
  Scales s;
  if (mode == RatesMode::ratio) {
    s.alpha = 1.0 / (total_f * cf.c_f);
    s.beta = 1.0 / (total_m * cf.c_m);
  } else {
    s.alpha = 1.0 / (total_f * cf.c_f * total_f);
    s.beta = 1.0 / (total_m * cf.c_m * total_m);
  }
  s.prefactor = cf.c_f * cf.c_m / (cf.c_f + cf.c_m);
  return s;
}

/// sum_w |alpha f_w - beta m_w| via words sorted by F-share r = f/(f+m):
/// alpha f - beta m >= 0  <=>  r >= beta / (alpha + beta).
class AbsDiffSum {
 public:
  explicit AbsDiffSum(const std::vector<WordCount>& words) {
    order_.resize(words.size());
    std::iota(order_.begin(), order_.end(), 0);
    share_.resize(words.size());
    for (std::size_t i = 0; i < words.size(); ++i)
      share_[i] = static_cast<double>(words[i].f) / static_cast<double>(words[i].f + words[i].m);
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return share_[a] < share_[b] || (share_[a] == share_[b] && a < b);
    });
    sorted_share_.resize(words.size());
    prefix_f_.assign(words.size() + 1, 0.0);
    prefix_m_.assign(words.size() + 1, 0.0);
    for (std::size_t k = 0; k < order_.size(); ++k) {
      sorted_share_[k] = share_[order_[k]];
      prefix_f_[k + 1] = prefix_f_[k] + static_cast<double>(words[order_[k]].f);
      prefix_m_[k + 1] = prefix_m_[k] + static_cast<double>(words[order_[k]].m);
    }
  }

  double operator()(double alpha, double beta) const {
    const double theta = beta / (alpha + beta);
    const auto split = static_cast<std::size_t>(
        std::lower_bound(sorted_share_.begin(), sorted_share_.end(), theta) - sorted_share_.begin());
    const double f_lo = prefix_f_[split], m_lo = prefix_m_[split];
    const double f_hi = prefix_f_.back() - f_lo, m_hi = prefix_m_.back() - m_lo;
    return (alpha * f_hi - beta * m_hi) + (beta * m_lo - alpha * f_lo);
  }

 private:
  std::vector<std::size_t> order_;
  std::vector<double> share_;
  std::vector<double> sorted_share_;
  std::vector<double> prefix_f_;
  std::vector<double> prefix_m_;
};

}  // namespace

double dissimilarity(const WordFrequencies& freq, RatesMode mode) {
  const auto s = scales_for(static_cast<double>(freq.total_f), static_cast<double>(freq.total_m),
                            static_cast<double>(freq.politicians_f),
                            static_cast<double>(freq.politicians_m), mode);
  double sum = 0.0;
  for (const auto& w : freq.words)
    sum += std::abs(s.alpha * static_cast<double>(w.f) - s.beta * static_cast<double>(w.m));
  return s.prefactor * sum;
}

LeaveOneOutResult leave_one_out(const WordFrequencies& freq, RatesMode mode) {
  LeaveOneOutResult res;
  res.mode = mode;
  res.diss = dissimilarity(freq, mode);
  const auto tf = static_cast<double>(freq.total_f);
  const auto tm = static_cast<double>(freq.total_m);
  const auto pf = static_cast<double>(freq.politicians_f);
  const auto pm = static_cast<double>(freq.politicians_m);
  const auto factors = correction_factors(freq);
  const AbsDiffSum abs_sum(freq.words);

  res.entries.reserve(freq.words.size());
  for (const auto& w : freq.words) {
    LeaveOneOutEntry e;
    e.counts = w;
    const double wf = static_cast<double>(w.f), wm = static_cast<double>(w.m);
    const auto rates = adjusted_rates(wf, wm, tf, tm, factors, mode);
    e.leaning = rates.m > rates.f ? Gender::M : Gender::F;
    const double rest_f = tf - wf, rest_m = tm - wm;
    if (rest_f > 0 && rest_m > 0) {
      const auto s = scales_for(rest_f, rest_m, pf, pm, mode);
      const double sum = abs_sum(s.alpha, s.beta) - std::abs(s.alpha * wf - s.beta * wm);
      e.diss_without = s.prefactor * std::max(sum, 0.0);
      e.distinctive = *e.diss_without < res.diss;
      e.weight = res.diss - *e.diss_without;
    }
    res.entries.push_back(std::move(e));
  }
  return res;
}

std::vector<LeaveOneOutEntry> distinctive_words(const LeaveOneOutResult& loo, Gender leaning,
                                                std::optional<Category> category) {
  std::vector<LeaveOneOutEntry> out;
  for (const auto& e : loo.entries) {
    if (!e.distinctive || e.leaning != leaning) continue;
    if (category && e.counts.category != category) continue;
    out.push_back(e);
  }
  std::stable_sort(out.begin(), out.end(), [](const LeaveOneOutEntry& a, const LeaveOneOutEntry& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.counts.word < b.counts.word;
  });
  return out;
}

}  // namespace polcov
