#include "polcov/sentiment.hpp"

#include <cmath>
#include <map>

#include "polcov/error.hpp"

namespace polcov {

std::string_view to_string(SentimentClass c) {
  switch (c) {
    case SentimentClass::strong_negative: return "strong_negative";
    case SentimentClass::weakly_negative: return "weakly_negative";
    case SentimentClass::neutral: return "neutral";
    case SentimentClass::weakly_positive: return "weakly_positive";
    case SentimentClass::strong_positive: return "strong_positive";
  }
  return "";
}

std::optional<SentimentClass> parse_sentiment_class(std::string_view s) {
  for (auto c : kSentimentClasses)
    if (to_string(c) == s) return c;
  return std::nullopt;
}

SentimentScore SentimentScore::from_grid_index(int k) {
  if (k < 0 || k > 10) throw ValidationError("sentiment grid index out of range: " + std::to_string(k));
  return SentimentScore(k);
}

SentimentScore SentimentScore::from_value(double v) {
  const double k = v * 5.0 + 5.0;
  const double r = std::round(k);
  if (!std::isfinite(v) || std::abs(k - r) > 5e-9 || r < 0 || r > 10)
    throw DomainError("sentiment score off the (k-5)/5 grid: " + std::to_string(v));
  return SentimentScore(static_cast<int>(r));
}

SentimentScore aggregate_score(std::span<const int> scores) {
  if (scores.size() != kAnnotators)
    throw ValidationError("aggregate_score needs exactly 5 scores, got " +
                          std::to_string(scores.size()));
  int sum = 0;
  for (int s : scores) {
    if (s < -1 || s > 1) throw ValidationError("annotator score outside {-1,0,1}: " + std::to_string(s));
    sum += s;
  }
  return SentimentScore::from_grid_index(sum + 5);
}

SentimentClass classify(SentimentScore score) {
  const int k = score.grid_index();  // value = (k-5)/5
  if (k <= 1) return SentimentClass::strong_negative;  // {-1, -0.8}
  if (k <= 3) return SentimentClass::weakly_negative;  // {-0.6, -0.4}
  if (k <= 6) return SentimentClass::neutral;          // {-0.2, 0, 0.2}
  if (k <= 8) return SentimentClass::weakly_positive;  // {0.4, 0.6}
  return SentimentClass::strong_positive;              // {0.8, 1}
}

SentimentClass classify(double score) { return classify(SentimentScore::from_value(score)); }

void Lexicon::add(LexiconEntry entry) {
  Key key{entry.lemma, entry.upos};
  if (entries_.contains(key))
    throw ValidationError("duplicate lexicon key " + entry.lemma + "," + entry.upos);
  entries_.emplace(std::move(key), std::move(entry));
}

const LexiconEntry* Lexicon::find(std::string_view lemma, std::string_view upos) const {
  // std::pair lacks heterogeneous comparison; a short-lived key is fine here.
  auto it = entries_.find(Key{std::string(lemma), std::string(upos)});
  return it == entries_.end() ? nullptr : &it->second;
}

AnnotationMatrix annotation_matrix(const Lexicon& lexicon, std::optional<Category> only) {
  AnnotationMatrix m;
  for (const auto& [key, e] : lexicon) {
    if (only && e.category != *only) continue;
    m.unit_ids.push_back(key.first + "," + key.second);
    std::vector<std::optional<int>> row;
    for (int s : e.scores) row.emplace_back(s);
    m.ratings.push_back(std::move(row));
  }
  return m;
}

AlphaResult krippendorff_alpha_ordinal(const AnnotationMatrix& matrix) {
  // value -> column in the coincidence matrix
  std::map<int, std::size_t> value_index;
  std::size_t usable = 0;
  for (const auto& row : matrix.ratings) {
    std::size_t m = 0;
    for (const auto& r : row) m += r.has_value();
    if (m < 2) continue;
    ++usable;
    for (const auto& r : row)
      if (r) value_index.emplace(*r, 0);
  }
  if (usable < 2) throw DomainError("krippendorff alpha needs at least two units with two ratings");

  std::size_t next = 0;
  for (auto& [v, idx] : value_index) idx = next++;
  const std::size_t V = value_index.size();

  std::vector<double> coincidence(V * V, 0.0);
  std::vector<double> unit_counts(V);
  for (const auto& row : matrix.ratings) {
    double m = 0;
    for (const auto& r : row) m += r.has_value();
    if (m < 2) continue;
    std::fill(unit_counts.begin(), unit_counts.end(), 0.0);
    for (const auto& r : row)
      if (r) unit_counts[value_index.at(*r)] += 1.0;
    for (std::size_t c = 0; c < V; ++c) {
      if (unit_counts[c] == 0) continue;
      for (std::size_t k = 0; k < V; ++k) {
        const double pairs = unit_counts[c] * (unit_counts[k] - (c == k ? 1.0 : 0.0));
        coincidence[c * V + k] += pairs / (m - 1.0);
      }
    }
  }

  std::vector<double> n_c(V, 0.0);
  double n = 0;
  for (std::size_t c = 0; c < V; ++c) {
    for (std::size_t k = 0; k < V; ++k) n_c[c] += coincidence[c * V + k];
    n += n_c[c];
  }

  // Ordinal metric: (sum_{g=c..k} n_g - (n_c + n_k)/2)^2.
  std::vector<double> prefix(V + 1, 0.0);
  for (std::size_t g = 0; g < V; ++g) prefix[g + 1] = prefix[g] + n_c[g];
  auto delta2 = [&](std::size_t c, std::size_t k) {
    const std::size_t lo = std::min(c, k), hi = std::max(c, k);
    const double d = (prefix[hi + 1] - prefix[lo]) - (n_c[c] + n_c[k]) / 2.0;
    return c == k ? 0.0 : d * d;
  };

  double observed = 0, expected = 0;
  for (std::size_t c = 0; c < V; ++c) {
    for (std::size_t k = 0; k < V; ++k) {
      const double d2 = delta2(c, k);
      observed += coincidence[c * V + k] * d2;
      expected += n_c[c] * n_c[k] * d2;
    }
  }

  AlphaResult res;
  res.units_used = usable;
  res.pairable_values = n;
  res.observed_disagreement = observed / n;
  res.expected_disagreement = expected / (n * (n - 1.0));
  for (const auto& [v, idx] : value_index) res.marginals.emplace_back(v, n_c[idx]);
  if (res.expected_disagreement == 0.0) {
    res.alpha = 1.0;
    res.degenerate = true;
  } else {
    res.alpha = 1.0 - res.observed_disagreement / res.expected_disagreement;
  }
  return res;
}

}  // namespace polcov
