#pragma once

// Readers for the corpus bundle. The CoNLL-U reader streams one document at
// a time; everything else is small enough to load eagerly.

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "polcov/model.hpp"
#include "polcov/sentiment.hpp"

namespace polcov {

namespace fs = std::filesystem;

struct CorpusBundle {
  std::vector<fs::path> conllu;
  fs::path metadata;
  fs::path registry;
  fs::path lexicon;
  fs::path stopwords;
  std::optional<fs::path> lemma_map;
};

using Stopwords = std::unordered_set<std::string>;
using LemmaMap = std::unordered_map<std::string, std::string>;  // normalized surface -> lemma
using MetadataIndex = std::map<std::string, Document, std::less<>>;

Stopwords read_stopwords(const fs::path& path);
/// "surface<TAB>lemma" (or whitespace separated) per line.
LemmaMap read_lemma_map(const fs::path& path);
/// JSON lines; every field is required. Duplicate doc_ids are rejected.
MetadataIndex read_metadata(const fs::path& path);

/// CSV lemma,upos,category,s1..s5 with an optional header row.
Lexicon read_lexicon(const fs::path& path);
/// A lexicon lemma that is also a stopword could never be matched.
void check_lexicon_against_stopwords(const Lexicon& lexicon, const Stopwords& stopwords);

/// CSV lemma,upos,a1..a5; empty cells are missing ratings.
AnnotationMatrix read_annotation_matrix(const fs::path& path);

class PoliticianRegistry {
 public:
  enum class Resolution { none, unique, ambiguous };
  struct Lookup {
    Resolution status = Resolution::none;
    std::size_t index = 0;
  };

  PoliticianRegistry() = default;
  /// Builds indexes; throws ValidationError for two politicians sharing a
  /// (role keyword, jurisdiction) with overlapping tenure.
  explicit PoliticianRegistry(std::vector<Politician> politicians);

  const std::vector<Politician>& politicians() const { return politicians_; }
  const Politician& at(std::size_t i) const { return politicians_.at(i); }
  const Politician* find_pid(std::string_view pid) const;
  std::size_t size() const { return politicians_.size(); }

  /// Normalized name token sequences (given+surname and every alias), each
  /// paired with the politician index. Sorted for deterministic matching.
  const std::vector<std::pair<std::vector<std::string>, std::size_t>>& full_names() const {
    return full_names_;
  }
  /// Candidates sharing a normalized surname token sequence.
  const std::vector<std::size_t>* by_surname(const std::string& joined_surname) const;
  const std::vector<std::vector<std::string>>& surname_sequences() const { return surnames_; }

  /// Politician holding (keyword, jurisdiction) on the given date.
  Lookup resolve_role(std::string_view keyword, const std::vector<std::string>& jurisdiction,
                      Date date) const;
  const std::vector<std::vector<std::string>>& jurisdictions() const { return jurisdictions_; }

 private:
  std::vector<Politician> politicians_;
  std::vector<std::pair<std::vector<std::string>, std::size_t>> full_names_;
  std::map<std::string, std::vector<std::size_t>> surname_index_;
  std::vector<std::vector<std::string>> surnames_;
  std::map<std::pair<std::string, std::string>, std::vector<std::pair<std::size_t, Tenure>>>
      role_index_;
  std::vector<std::vector<std::string>> jurisdictions_;
  std::map<std::string, std::size_t, std::less<>> pid_index_;
};

/// Semicolon-separated pid;given_name;surname;gender;roles;aliases;tenure.
/// A header row selects columns by name; without one the positional layout
/// above applies and trailing optional columns may be omitted.
PoliticianRegistry read_registry(const fs::path& path);

struct DocumentUnit {
  Document document;
  std::vector<Sentence> sentences;
};

struct IngestDiagnostics {
  std::size_t documents = 0;
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::size_t skipped_out_of_window = 0;
  std::vector<std::string> rejected_sentences;  // "<file>:<line>: reason"
};

struct IngestOptions {
  std::optional<Date> window_from;
  std::optional<Date> window_to;
};

/// Streams (Document, sentences) units from one or more CoNLL-U files.
/// Memory is bounded by the largest document.
class CorpusReader {
 public:
  CorpusReader(std::vector<fs::path> files, const MetadataIndex& metadata,
               const Stopwords& stopwords, const LemmaMap* lemma_map = nullptr,
               IngestOptions options = {});

  /// Next document in input order, or nullopt at end of stream.
  std::optional<DocumentUnit> next();
  const IngestDiagnostics& diagnostics() const { return diag_; }

 private:
  bool open_next_file();
  bool read_line(std::string& line);
  void finish_sentence();
  void start_document(const std::string& doc_id);
  Token make_token(const std::vector<std::string_view>& cols);

  std::vector<fs::path> files_;
  std::size_t file_idx_ = 0;
  std::ifstream in_;
  std::string current_file_;
  std::size_t line_no_ = 0;

  const MetadataIndex& metadata_;
  const Stopwords& stopwords_;
  const LemmaMap* lemma_map_;
  IngestOptions options_;

  std::set<std::string> seen_docs_;
  std::optional<DocumentUnit> pending_;
  std::optional<DocumentUnit> ready_;
  std::vector<Token> sent_tokens_;
  std::string sent_id_;
  std::size_t sent_start_line_ = 0;
  bool skip_current_doc_ = false;
  bool done_ = false;
  IngestDiagnostics diag_;
};

/// Returns true if following heads from every token reaches the root.
bool heads_acyclic(const std::vector<Token>& tokens);

/// Convenience: eager read of a whole bundle (tests and small corpora).
std::vector<DocumentUnit> read_corpus(const CorpusBundle& bundle, IngestOptions options = {},
                                      IngestDiagnostics* diagnostics = nullptr);

}  // namespace polcov
