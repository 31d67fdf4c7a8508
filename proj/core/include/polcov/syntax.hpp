#pragma once

// Dependency trees, syntactic neighborhoods of mentions and the extraction
// pass that turns parsed documents into counts and personalization records.

#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "polcov/counts.hpp"
#include "polcov/entity.hpp"
#include "polcov/ingest.hpp"
#include "polcov/model.hpp"
#include "polcov/sentiment.hpp"

namespace polcov {

class DependencyTree {
 public:
  /// Throws DomainError if a head is out of range or the heads form a cycle.
  explicit DependencyTree(const Sentence& sentence);

  int size() const { return static_cast<int>(heads_.size()) - 1; }
  int head(int i) const { return heads_.at(static_cast<std::size_t>(i)); }
  const std::vector<int>& children(int i) const { return children_.at(static_cast<std::size_t>(i)); }
  const std::vector<int>& roots() const { return roots_; }

  /// Undirected path length; nullopt when a and b lie in different trees.
  std::optional<int> distance(int a, int b) const;

  /// Multi-source BFS up to `limit` steps. Undirected, or following head ->
  /// child edges only. Entry i is the distance to token i, -1 if not reached
  /// (entry 0 unused).
  std::vector<int> distances_from(std::span<const int> sources, bool children_only, int limit) const;

 private:
  std::vector<int> heads_;
  std::vector<std::vector<int>> children_;
  std::vector<int> roots_;
};

enum class NeighborhoodMode { undirected, children };
std::string_view to_string(NeighborhoodMode m);
std::optional<NeighborhoodMode> parse_neighborhood_mode(std::string_view s);

struct NeighborhoodOptions {
  int radius = 2;
  NeighborhoodMode mode = NeighborhoodMode::undirected;
  std::set<std::string, std::less<>> modal_lemmas{"potere", "dovere", "volere", "solere"};
};

/// ADJ, NOUN or VERB; not AUX, not a modal verb, not filtered.
bool is_candidate(const Token& token, const NeighborhoodOptions& options);

/// Candidate tokens within `radius` of the mention span, excluding the span
/// itself and any token inside `excluded` spans. Sorted token indices.
std::vector<int> neighborhood(const DependencyTree& tree, const Sentence& sentence,
                              const Mention& mention, const NeighborhoodOptions& options,
                              std::span<const TokenSpan> excluded = {});

/// A neighborhood word and the mentions it is attributed to: the nearest
/// ones by tree distance, several on a tie.
struct Attribution {
  int token = 0;
  std::vector<std::size_t> mentions;  // indexes into the mention list
};

std::vector<Attribution> attribute_words(const DependencyTree& tree, const Sentence& sentence,
                                         std::span<const Mention> mentions,
                                         const NeighborhoodOptions& options);

struct PersonalizationRecord {
  std::string pid;
  Gender gender = Gender::F;
  std::string doc_id;
  Date date;
  SourceType source_type = SourceType::traditional;
  std::string lemma;
  std::string upos;
  Category category = Category::moral_behavioral;
  SentimentScore aggregate_sentiment;
  std::string sent_id;
  std::size_t sentence = 0;  // ordinal within the document
  int token = 0;

  friend bool operator==(const PersonalizationRecord&, const PersonalizationRecord&) = default;
};

void write_records_jsonl(const fs::path& path, std::span<const PersonalizationRecord> records);
std::vector<PersonalizationRecord> read_records_jsonl(const fs::path& path);

enum class Dataset { coverage, personalization };
inline constexpr std::array<Dataset, 2> kDatasets{Dataset::coverage, Dataset::personalization};
inline constexpr std::size_t index_of(Dataset d) { return static_cast<std::size_t>(d); }
std::string_view to_string(Dataset d);

/// Contents and sentences per gender and dataset, plus the raw material of
/// the neighbors-per-sentence and sentences-per-politician distributions.
/// Every field merges by union or addition.
struct Descriptives {
  std::array<std::array<std::set<std::string>, 2>, 2> contents;   // [dataset][gender] doc ids
  std::array<std::array<std::set<std::string>, 2>, 2> sentences;  // "doc_id#ordinal"
  /// [gender]: neighborhood words in a sentence -> sentences. Every sentence
  /// with a mention of the gender counts, including pruned ones (0 words).
  std::array<std::map<std::uint64_t, std::uint64_t>, 2> neighbors_per_sentence;
  /// [gender]: pid -> sentences with >= 1 attributed word.
  std::array<std::map<std::string, std::uint64_t>, 2> sentences_per_politician;
  std::size_t mentions = 0;
  std::size_t pruned_sentences = 0;  // mention present, no neighborhood word

  void merge(const Descriptives& other);
  void write_json(const fs::path& path) const;
  static Descriptives read_json(const fs::path& path);
  friend bool operator==(const Descriptives&, const Descriptives&) = default;
};

struct ExtractionResult {
  CountTable counts;
  DailyCounts daily;
  Descriptives descriptives;
  std::vector<PersonalizationRecord> records;
  MatchDiagnostics match;

  void merge(ExtractionResult&& other);
};

class Extractor {
 public:
  Extractor(const EntityMatcher& matcher, const Lexicon& lexicon, NeighborhoodOptions options = {});

  /// Adds one document's contribution to `out`.
  void process(const DocumentUnit& unit, ExtractionResult& out) const;

  const NeighborhoodOptions& options() const { return options_; }

 private:
  const EntityMatcher& matcher_;
  const Lexicon& lexicon_;
  NeighborhoodOptions options_;
};

/// Drains the reader in batches; workers process disjoint slices of a batch
/// and partial results are merged in input order, so the output is the same
/// for any worker count.
ExtractionResult extract(CorpusReader& reader, const Extractor& extractor, unsigned workers = 1,
                         std::size_t batch = 256);
ExtractionResult extract(std::span<const DocumentUnit> units, const Extractor& extractor,
                         unsigned workers = 1);

}  // namespace polcov
