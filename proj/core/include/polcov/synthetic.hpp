#pragma once

// Synthetic corpus bundles with planted gender differences, used for
// end-to-end checks and benchmarks.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "polcov/pipeline.hpp"

namespace polcov {

struct SyntheticSpec {
  std::size_t documents = 5000;
  std::size_t sentences_per_document = 2;
  std::size_t politicians_f = 10;
  std::size_t politicians_m = 30;
  std::uint64_t seed = 42;
  /// Multiplier on the women's probability of a physical-category word.
  double physical_boost = 2.0;
  /// Share of the women's physical words drawn from the planted words.
  double planted_share = 0.5;
  double online_share = 0.4;
  std::size_t days = 365;
  Date start = Date::from_ymd(2017, 1, 1);
};

/// Totals known by construction.
struct SyntheticExpectation {
  std::size_t documents = 0;
  std::array<std::size_t, 2> sentences{};          // [gender]
  std::array<std::uint64_t, 2> coverage_words{};   // [gender]
  std::array<std::array<std::uint64_t, 3>, 2> lexicon_words{};  // [gender][category]
  std::vector<std::string> planted;                // physical ADJ lemmas
};

struct SyntheticCorpus {
  fs::path config_path;
  Config config;
  SyntheticExpectation expected;
};

/// Writes corpus.conllu, metadata.jsonl, registry.csv, lexicon.csv,
/// stopwords.txt and polcov.conf (output directory "out") into `dir`.
/// Identical specs produce identical files.
SyntheticCorpus generate_synthetic(const SyntheticSpec& spec, const fs::path& dir);

}  // namespace polcov
