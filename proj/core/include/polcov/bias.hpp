#pragma once

// Gender-adjusted incidence rates, the coverage bias index I(w), the
// dissimilarity Diss between the two adjusted-rate distributions and the
// leave-one-out ranking of gender-distinctive words.
//
// Notation: |w_g| word count for gender g, |D_g| total words for g, |g|
// politicians of gender g with at least one word.
//   a_g = |D_g| / |g|,  c_g = a_g / ((a_F + a_M) / 2)
//   ratio mode:   t~_g(w) = (|w_g| / |D_g|) / c_g
//   literal mode: t~_g(w) = (|w_g| / |D_g|) / (c_g |D_g|)
//   I(w) = (t~_F - t~_M) / (t~_F + t~_M)
//   Diss = c_F c_M / (c_F + c_M) * sum_w |t~_F(w) - t~_M(w)|

#include <optional>
#include <string_view>
#include <vector>

#include "polcov/counts.hpp"
#include "polcov/model.hpp"

namespace polcov {

enum class RatesMode { ratio, literal };
std::string_view to_string(RatesMode m);
std::optional<RatesMode> parse_rates_mode(std::string_view s);

struct CorrectionFactors {
  double c_f = 1.0;
  double c_m = 1.0;
};

/// Throws DomainError naming the side when a gender has no politicians or no words.
CorrectionFactors correction_factors(double total_f, double politicians_f, double total_m,
                                     double politicians_m);
CorrectionFactors correction_factors(const WordFrequencies& freq);

struct AdjustedRates {
  double f = 0.0;
  double m = 0.0;
};

AdjustedRates adjusted_rates(double count_f, double count_m, double total_f, double total_m,
                             CorrectionFactors factors, RatesMode mode);

/// nullopt when both rates are zero (word undefined for the index).
std::optional<double> coverage_bias_index(double rate_f, double rate_m);

struct WordBias {
  WordCount counts;
  AdjustedRates rates;
  std::optional<double> index;  // I(w)
  double weight() const { return static_cast<double>(counts.f + counts.m); }
};

struct BiasProfile {
  RatesMode mode = RatesMode::ratio;
  CorrectionFactors factors;
  WordFrequencies marginals;  // words cleared; only totals and tallies kept
  std::vector<WordBias> words;
  std::size_t undefined = 0;  // words with both adjusted rates zero
};

BiasProfile bias_profile(const WordFrequencies& freq, RatesMode mode = RatesMode::ratio);

double dissimilarity(const WordFrequencies& freq, RatesMode mode = RatesMode::ratio);

struct LeaveOneOutEntry {
  WordCount counts;
  std::optional<double> diss_without;  // nullopt if removal empties a gender
  double weight = 0.0;                 // Diss - Diss_(-w), 0 when undefined
  bool distinctive = false;            // Diss_(-w) < Diss
  Gender leaning = Gender::F;          // M iff t~_M(w) > t~_F(w)
};

struct LeaveOneOutResult {
  RatesMode mode = RatesMode::ratio;
  double diss = 0.0;
  std::vector<LeaveOneOutEntry> entries;  // same order as freq.words
};

/// Removes each word in turn, recomputing correction factors and adjusted
/// rates on the remaining data. Politician tallies stay fixed. Runs in
/// O(W log W) by sorting words on their F-share.
LeaveOneOutResult leave_one_out(const WordFrequencies& freq, RatesMode mode = RatesMode::ratio);

/// Distinctive entries of one leaning, sorted by weight descending (ties by word).
std::vector<LeaveOneOutEntry> distinctive_words(const LeaveOneOutResult& loo, Gender leaning,
                                                std::optional<Category> category = std::nullopt);

}  // namespace polcov
