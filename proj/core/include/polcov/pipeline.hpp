#pragma once

// End-to-end orchestration: configuration, the extract / analyze / report
// stages and the run manifest. Each stage reads the previous stage's files
// from the output directory, so stages can be rerun independently.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polcov/bias.hpp"
#include "polcov/error.hpp"
#include "polcov/ingest.hpp"
#include "polcov/syntax.hpp"
#include "polcov/temporal.hpp"

namespace polcov {

struct Config {
  std::vector<fs::path> conllu;
  fs::path metadata;
  fs::path registry;
  fs::path lexicon;
  fs::path stopwords;
  std::optional<fs::path> lemma_map;
  std::optional<fs::path> gazetteer;
  std::optional<Date> window_from;
  std::optional<Date> window_to;

  NeighborhoodOptions neighborhood;
  RatesMode rates_mode = RatesMode::ratio;
  std::size_t histogram_bins = 40;
  std::size_t ma_window = kDefaultWindow;
  FillPolicy fill = FillPolicy::zero;
  double jitter = 0.05;
  std::size_t bootstrap = 200;
  std::uint64_t seed = 42;
  unsigned workers = 1;
  std::vector<double> taus{0.1, 0.25, 0.5, 0.75, 0.9};
  fs::path out = "polcov-out";

  CorpusBundle bundle() const;
};

/// key = value lines; '#' and ';' start comments, [section] headers are
/// ignored. Relative paths resolve against the config file's directory.
/// Unknown keys and malformed values raise ValidationError.
Config load_config(const fs::path& path);

/// Applies one key = value setting (the same keys as the config file).
void apply_setting(Config& config, const std::string& key, const std::string& value,
                   const fs::path& base = {});

/// Input files exist and numeric settings are in range; throws ValidationError.
void validate(const Config& config);

/// Canonical key=value rendering used for the config hash (output directory excluded).
std::string canonical_config(const Config& config);
/// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

struct IngestSummary {
  std::size_t lexicon_entries = 0;
  std::size_t politicians = 0;
  std::size_t metadata_rows = 0;
  std::size_t stopwords = 0;
  IngestDiagnostics corpus;
};

/// Loads and validates every input without extracting anything.
IngestSummary ingest_check(const Config& config);

/// Writes counts.csv, politicians.csv, daily.csv, records.jsonl and
/// descriptives.json.
ExtractionResult run_extract(const Config& config);

/// Reads the extract artifacts and writes bias_profile.json,
/// summary_stats.json, distinctive_*.csv, chi_square.json, quantiles.csv,
/// quantile_coefficients.json, temporal_*.json and alpha.json.
void run_analyze(const Config& config);

/// Writes sentiment_fractions.csv, descriptives_table.json, ccdf.csv and
/// manifest.json.
void run_report(const Config& config);

/// All stages in order. A failing stage is reported as "<stage>: <error>".
void run_pipeline(const Config& config);

/// Wraps an exception from a named stage.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace polcov
