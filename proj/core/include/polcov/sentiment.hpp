#pragma once

// Lexicon entries, aggregate sentiment on the (k-5)/5 grid, five-bucket
// classification and ordinal Krippendorff's alpha.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polcov/model.hpp"

namespace polcov {

enum class SentimentClass : std::uint8_t {
  strong_negative,
  weakly_negative,
  neutral,
  weakly_positive,
  strong_positive,
};

inline constexpr std::array<SentimentClass, 5> kSentimentClasses{
    SentimentClass::strong_negative, SentimentClass::weakly_negative, SentimentClass::neutral,
    SentimentClass::weakly_positive, SentimentClass::strong_positive};

std::string_view to_string(SentimentClass c);
std::optional<SentimentClass> parse_sentiment_class(std::string_view s);

/// Aggregate score held exactly as k in 0..10, value (k - 5) / 5.
class SentimentScore {
 public:
  constexpr SentimentScore() = default;
  /// Throws ValidationError unless 0 <= k <= 10.
  static SentimentScore from_grid_index(int k);
  /// Snaps a serialized value back onto the grid; throws DomainError if it
  /// is more than 1e-9 away from every grid point.
  static SentimentScore from_value(double v);

  constexpr int grid_index() const { return k_; }
  constexpr double value() const { return (k_ - 5) / 5.0; }
  friend constexpr auto operator<=>(SentimentScore, SentimentScore) = default;

 private:
  constexpr explicit SentimentScore(int k) : k_(k) {}
  int k_ = 5;
};

inline constexpr std::size_t kAnnotators = 5;

/// Mean of exactly five scores in {-1, 0, 1}.
SentimentScore aggregate_score(std::span<const int> scores);

SentimentClass classify(SentimentScore score);
/// Value overload; off-grid input is a DomainError.
SentimentClass classify(double score);

struct LexiconEntry {
  std::string lemma;
  std::string upos;
  Category category = Category::moral_behavioral;
  std::array<int, kAnnotators> scores{};
  SentimentScore aggregate;
  SentimentClass sentiment = SentimentClass::neutral;
};

class Lexicon {
 public:
  using Key = std::pair<std::string, std::string>;  // (lemma, upos)

  /// Throws ValidationError on a duplicate (lemma, upos) key.
  void add(LexiconEntry entry);
  const LexiconEntry* find(std::string_view lemma, std::string_view upos) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  std::map<Key, LexiconEntry, std::less<>> entries_;
};

/// Units x annotators; missing cells are nullopt.
struct AnnotationMatrix {
  std::vector<std::string> unit_ids;
  std::vector<std::vector<std::optional<int>>> ratings;

  std::size_t units() const { return ratings.size(); }
};

AnnotationMatrix annotation_matrix(const Lexicon& lexicon,
                                   std::optional<Category> only = std::nullopt);

struct AlphaResult {
  double alpha = 1.0;
  double observed_disagreement = 0.0;  // D_o
  double expected_disagreement = 0.0;  // D_e
  std::vector<std::pair<int, double>> marginals;  // value -> n_c
  double pairable_values = 0.0;                   // n
  std::size_t units_used = 0;
  bool degenerate = false;  // D_e == 0, alpha reported as 1
};

/// Krippendorff's alpha with the ordinal metric. Units with fewer than two
/// ratings are excluded. Throws DomainError with fewer than two usable units.
AlphaResult krippendorff_alpha_ordinal(const AnnotationMatrix& matrix);

}  // namespace polcov
