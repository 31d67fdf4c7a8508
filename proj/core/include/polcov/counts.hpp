#pragma once

// Associative count aggregates produced by extraction. Shards built in
// parallel combine with merge(), which is cellwise addition (and set union
// for politician tallies), so totals do not depend on merge order.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "polcov/ingest.hpp"
#include "polcov/model.hpp"

namespace polcov {

struct WordKey {
  std::string lemma;
  std::string upos;
  friend auto operator<=>(const WordKey&, const WordKey&) = default;
};

struct CountCell {
  WordKey word;
  Gender gender = Gender::F;
  std::optional<Category> category;  // set iff the word is a lexicon entry
  SourceType source_type = SourceType::traditional;

  friend auto operator<=>(const CountCell&, const CountCell&) = default;
};

/// Per-word counts for one gender pair, aggregated over source types.
struct WordCount {
  WordKey word;
  std::optional<Category> category;
  std::uint64_t f = 0;  // |w_F|
  std::uint64_t m = 0;  // |w_M|
};

/// Word counts plus the marginals needed by the bias statistics.
struct WordFrequencies {
  std::vector<WordCount> words;  // sorted by word; f + m > 0 for every entry
  std::uint64_t total_f = 0;     // |D_F|
  std::uint64_t total_m = 0;     // |D_M|
  std::uint64_t politicians_f = 0;  // |F|
  std::uint64_t politicians_m = 0;  // |M|

  std::uint64_t total() const { return total_f + total_m; }
};

class CountTable {
 public:
  void add(const WordKey& word, Gender g, std::optional<Category> category, SourceType s,
           const std::string& pid, std::uint64_t n = 1);
  /// Registers a politician without words (used when reading serialized tallies).
  void add_politician(const std::string& pid, Gender g, std::optional<Category> category);
  void merge(const CountTable& other);

  const std::map<CountCell, std::uint64_t>& cells() const { return cells_; }

  std::uint64_t total(Gender g) const;
  std::uint64_t total() const { return total(Gender::F) + total(Gender::M); }
  std::uint64_t personalization_total(Gender g) const;
  /// Politicians with >= 1 coverage word (or >= 1 word of the category).
  std::size_t politicians(Gender g, std::optional<Category> category = std::nullopt) const;
  std::size_t personalization_politicians(Gender g) const;
  const std::set<std::string>& politician_ids(Gender g, std::optional<Category> c = std::nullopt) const;

  /// Coverage dataset, optionally restricted to one lexicon category (slice
  /// marginals and tallies are then those of the category).
  WordFrequencies frequencies(std::optional<Category> category = std::nullopt,
                              std::optional<SourceType> source = std::nullopt) const;

  /// observed[source][gender]; personalization restricts to lexicon words.
  std::array<std::array<std::uint64_t, 2>, 2> contingency(bool personalization) const;

  std::size_t distinct_words(Gender g, bool personalization) const;

  /// Sorted CSV: lemma,upos,gender,category,source_type,count (category empty
  /// for non-lexicon words).
  void write_csv(const fs::path& path) const;
  /// pid,gender,category ("*" for the coverage tally).
  void write_politicians_csv(const fs::path& path) const;
  static CountTable read_csv(const fs::path& counts, const fs::path& politicians);

  friend bool operator==(const CountTable&, const CountTable&) = default;

 private:
  std::map<CountCell, std::uint64_t> cells_;
  std::array<std::set<std::string>, 2> politicians_;
  std::array<std::array<std::set<std::string>, 3>, 2> category_politicians_;
};

/// Daily word counts for the temporal analysis.
class DailyCounts {
 public:
  void add_coverage(Date d, Gender g, std::uint64_t n = 1);
  void add_personalization(Date d, Gender g, Category c, std::uint64_t n = 1);
  void merge(const DailyCounts& other);

  struct Day {
    std::array<std::uint64_t, 2> coverage{};
    std::array<std::array<std::uint64_t, 3>, 2> personalization{};
    friend bool operator==(const Day&, const Day&) = default;
  };
  const std::map<Date, Day>& days() const { return days_; }

  /// date,gender,category,count with category "*" for coverage rows.
  void write_csv(const fs::path& path) const;
  static DailyCounts read_csv(const fs::path& path);

  friend bool operator==(const DailyCounts&, const DailyCounts&) = default;

 private:
  std::map<Date, Day> days_;
};

}  // namespace polcov
