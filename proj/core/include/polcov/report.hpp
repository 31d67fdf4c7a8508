#pragma once

// Report tables assembled from extraction and analysis results, and their
// CSV/JSON writers. Writers emit keys in a fixed order and no timestamps, so
// identical inputs give byte-identical files.

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polcov/bias.hpp"
#include "polcov/inferential.hpp"
#include "polcov/sentiment.hpp"
#include "polcov/summary.hpp"
#include "polcov/syntax.hpp"
#include "polcov/temporal.hpp"

namespace polcov {

// ---------------------------------------------------------------------------
// sentiment fractions

struct SentimentFractionRow {
  Category category = Category::moral_behavioral;
  std::string group;  // "F", "M" or "lexicon"
  std::size_t n = 0;
  std::array<double, 5> fractions{};  // indexed like kSentimentClasses
};

struct SentimentFractionTable {
  std::vector<SentimentFractionRow> rows;
  std::vector<std::string> warnings;  // omitted empty slices
};

/// Per category: one row per gender from the records, then the class
/// distribution of the lexicon entries of that category.
SentimentFractionTable sentiment_fractions(std::span<const PersonalizationRecord> records,
                                           const Lexicon& lexicon);
void write_sentiment_fractions_csv(const fs::path& path, const SentimentFractionTable& table);

// ---------------------------------------------------------------------------
// distinctive words

struct DistinctiveList {
  Category category = Category::moral_behavioral;
  Gender gender = Gender::F;
  bool negative_only = false;
  std::vector<LeaveOneOutEntry> entries;  // weight descending
};

/// Per category and gender, distinctive lexicon words ranked by
/// Diss - Diss_(-w). With negative_only, words whose lexicon sentiment is
/// weakly or strongly negative.
std::vector<DistinctiveList> distinctive_lists(const LeaveOneOutResult& loo, const Lexicon& lexicon,
                                               bool negative_only = false);
void write_distinctive_csv(const fs::path& path, const DistinctiveList& list, const Lexicon& lexicon);

// ---------------------------------------------------------------------------
// descriptives

struct DatasetBreakdown {
  std::size_t politicians = 0;
  std::size_t contents = 0;
  std::size_t sentences = 0;
  std::uint64_t words = 0;
  std::size_t distinct_words = 0;
  friend bool operator==(const DatasetBreakdown&, const DatasetBreakdown&) = default;
};

/// [dataset][gender]
using BreakdownTable = std::array<std::array<DatasetBreakdown, 2>, 2>;

BreakdownTable breakdown(const Descriptives& d, const CountTable& counts);

/// Points (x, P(X >= x)) for every observed x, from a value -> frequency map.
std::vector<std::pair<std::uint64_t, double>> ccdf(const std::map<std::uint64_t, std::uint64_t>& histogram);
std::map<std::uint64_t, std::uint64_t> histogram_of(const std::map<std::string, std::uint64_t>& per_item);

void write_descriptives_report(const fs::path& path, const BreakdownTable& table, const Descriptives& d);
void write_ccdf_csv(const fs::path& path, const Descriptives& d);

// ---------------------------------------------------------------------------
// analysis sections

struct CategorySummary {
  std::optional<Category> category;  // nullopt: all coverage words
  std::optional<IndexDistribution> counts;
  std::optional<IndexDistribution> unweighted;
  std::string error;  // set when the slice has no defined index
};

void write_bias_profile_json(const fs::path& path, const BiasProfile& profile, const LeaveOneOutResult& loo,
                             int radius, NeighborhoodMode mode);
void write_summary_stats_json(const fs::path& path, std::span<const CategorySummary> summaries);

struct ChiSquareSection {
  Dataset dataset = Dataset::coverage;
  std::array<std::array<std::uint64_t, 2>, 2> observed{};  // [source][gender]
  std::optional<ChiSquareResult> result;
  std::string error;
};
void write_chi_square_json(const fs::path& path, std::span<const ChiSquareSection> sections);

struct QuantileSection {
  Category category = Category::moral_behavioral;
  std::size_t n = 0;
  std::uint64_t jitter_seed = 0;
  std::uint64_t bootstrap_seed = 0;
  std::vector<QuantileModel> models;       // one per tau
  std::vector<BootstrapResult> bootstrap;  // parallel to models; may be empty
  std::string error;
};
/// Rows category,gender,source_type,D1,Q1,D5,Q3,D9 (columns follow the taus).
void write_quantiles_csv(const fs::path& path, std::span<const QuantileSection> sections,
                         std::span<const double> taus);
void write_quantile_coefficients_json(const fs::path& path, std::span<const QuantileSection> sections,
                                      double jitter_half_width, std::size_t replicates, double level);

struct TemporalSection {
  Category category = Category::moral_behavioral;
  std::optional<CategoryTrend> trend;
  std::string error;
};
void write_temporal_json(const fs::path& path, const TemporalSection& section, std::size_t window,
                         FillPolicy fill);

struct AlphaSection {
  std::optional<Category> category;
  std::optional<AlphaResult> result;
  std::string error;
};
void write_alpha_json(const fs::path& path, std::span<const AlphaSection> sections);

/// Quantile level label: 0.1 -> "D1", 0.25 -> "Q1", 0.5 -> "D5", 0.75 -> "Q3",
/// 0.9 -> "D9", otherwise "q<tau>".
std::string tau_label(double tau);

}  // namespace polcov
