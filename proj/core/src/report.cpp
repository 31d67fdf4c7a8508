#include "polcov/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "polcov/error.hpp"

namespace polcov {

using ojson = nlohmann::ordered_json;

namespace {

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void dump(const fs::path& path, const ojson& j) {
  auto out = open_out(path);
  out << j.dump(1) << '\n';
}

ojson opt(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

std::string category_label(const std::optional<Category>& c) {
  return c ? std::string(to_string(*c)) : std::string("all");
}

}  // namespace

std::string tau_label(double tau) {
  if (tau == 0.1) return "D1";
  if (tau == 0.25) return "Q1";
  if (tau == 0.5) return "D5";
  if (tau == 0.75) return "Q3";
  if (tau == 0.9) return "D9";
  return "q" + num(tau);
}

// ---------------------------------------------------------------------------
// sentiment fractions

SentimentFractionTable sentiment_fractions(std::span<const PersonalizationRecord> records,
                                           const Lexicon& lexicon) {
  std::array<std::array<std::array<std::size_t, 5>, 2>, 3> by_gender{};
  std::array<std::array<std::size_t, 5>, 3> by_lexicon{};
  for (const auto& r : records)
    ++by_gender[index_of(r.category)][index_of(r.gender)]
               [static_cast<std::size_t>(classify(r.aggregate_sentiment))];
  for (const auto& [key, e] : lexicon) ++by_lexicon[index_of(e.category)][static_cast<std::size_t>(e.sentiment)];

  SentimentFractionTable t;
  auto add_row = [&](Category c, std::string group, const std::array<std::size_t, 5>& counts) {
    std::size_t n = 0;
    for (auto k : counts) n += k;
    if (n == 0) {
      t.warnings.push_back("no " + group + " words in category " + std::string(to_string(c)) +
                           "; row omitted");
      return;
    }
    SentimentFractionRow row{c, std::move(group), n, {}};
    for (std::size_t k = 0; k < 5; ++k) row.fractions[k] = static_cast<double>(counts[k]) / static_cast<double>(n);
    t.rows.push_back(std::move(row));
  };
  for (auto c : kCategories) {
    for (auto g : kGenders) add_row(c, std::string(to_string(g)), by_gender[index_of(c)][index_of(g)]);
    add_row(c, "lexicon", by_lexicon[index_of(c)]);
  }
  return t;
}

void write_sentiment_fractions_csv(const fs::path& path, const SentimentFractionTable& table) {
  auto out = open_out(path);
  out << "category,group,n";
  for (auto c : kSentimentClasses) out << ',' << to_string(c);
  out << '\n';
  for (const auto& r : table.rows) {
    out << to_string(r.category) << ',' << r.group << ',' << r.n;
    for (double f : r.fractions) out << ',' << num(f);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// distinctive words

std::vector<DistinctiveList> distinctive_lists(const LeaveOneOutResult& loo, const Lexicon& lexicon,
                                               bool negative_only) {
  std::vector<DistinctiveList> lists;
  for (auto c : kCategories)
    for (auto g : kGenders) {
      DistinctiveList l{c, g, negative_only, distinctive_words(loo, g, c)};
      if (negative_only)
        std::erase_if(l.entries, [&](const LeaveOneOutEntry& e) {
          const auto* entry = lexicon.find(e.counts.word.lemma, e.counts.word.upos);
          return !entry || !(entry->sentiment == SentimentClass::strong_negative ||
                             entry->sentiment == SentimentClass::weakly_negative);
        });
      lists.push_back(std::move(l));
    }
  return lists;
}

void write_distinctive_csv(const fs::path& path, const DistinctiveList& list, const Lexicon& lexicon) {
  auto out = open_out(path);
  out << "rank,lemma,upos,weight,diss_without,count_f,count_m,sentiment\n";
  std::size_t rank = 0;
  for (const auto& e : list.entries) {
    const auto* entry = lexicon.find(e.counts.word.lemma, e.counts.word.upos);
    out << ++rank << ',' << e.counts.word.lemma << ',' << e.counts.word.upos << ',' << num(e.weight) << ','
        << (e.diss_without ? num(*e.diss_without) : std::string()) << ',' << e.counts.f << ',' << e.counts.m
        << ',' << (entry ? std::string(to_string(entry->sentiment)) : std::string()) << '\n';
  }
}

// ---------------------------------------------------------------------------
// descriptives

BreakdownTable breakdown(const Descriptives& d, const CountTable& counts) {
  BreakdownTable t{};
  for (auto g : kGenders) {
    const auto gi = index_of(g);
    auto& cov = t[index_of(Dataset::coverage)][gi];
    cov.politicians = counts.politicians(g);
    cov.contents = d.contents[index_of(Dataset::coverage)][gi].size();
    cov.sentences = d.sentences[index_of(Dataset::coverage)][gi].size();
    cov.words = counts.total(g);
    cov.distinct_words = counts.distinct_words(g, false);
    auto& per = t[index_of(Dataset::personalization)][gi];
    per.politicians = counts.personalization_politicians(g);
    per.contents = d.contents[index_of(Dataset::personalization)][gi].size();
    per.sentences = d.sentences[index_of(Dataset::personalization)][gi].size();
    per.words = counts.personalization_total(g);
    per.distinct_words = counts.distinct_words(g, true);
  }
  return t;
}

std::vector<std::pair<std::uint64_t, double>> ccdf(const std::map<std::uint64_t, std::uint64_t>& histogram) {
  std::uint64_t total = 0;
  for (const auto& [x, n] : histogram) total += n;
  std::vector<std::pair<std::uint64_t, double>> out;
  std::uint64_t at_least = total;
  for (const auto& [x, n] : histogram) {
    out.emplace_back(x, static_cast<double>(at_least) / static_cast<double>(total));
    at_least -= n;
  }
  return out;
}

std::map<std::uint64_t, std::uint64_t> histogram_of(const std::map<std::string, std::uint64_t>& per_item) {
  std::map<std::uint64_t, std::uint64_t> h;
  for (const auto& [item, v] : per_item) ++h[v];
  return h;
}

void write_descriptives_report(const fs::path& path, const BreakdownTable& table, const Descriptives& d) {
  ojson j;
  for (auto ds : kDatasets) {
    auto& dj = j["datasets"][std::string(to_string(ds))];
    for (auto g : kGenders) {
      const auto& b = table[index_of(ds)][index_of(g)];
      dj[std::string(to_string(g))] = {{"politicians", b.politicians}, {"contents", b.contents},
                                       {"sentences", b.sentences},     {"words", b.words},
                                       {"distinct_words", b.distinct_words}};
    }
  }
  j["mentions"] = d.mentions;
  j["pruned_sentences"] = d.pruned_sentences;
  dump(path, j);
}

void write_ccdf_csv(const fs::path& path, const Descriptives& d) {
  auto out = open_out(path);
  out << "distribution,gender,x,ccdf\n";
  for (auto g : kGenders) {
    for (const auto& [x, p] : ccdf(d.neighbors_per_sentence[index_of(g)]))
      out << "neighbors_per_sentence," << to_string(g) << ',' << x << ',' << num(p) << '\n';
  }
  for (auto g : kGenders) {
    for (const auto& [x, p] : ccdf(histogram_of(d.sentences_per_politician[index_of(g)])))
      out << "sentences_per_politician," << to_string(g) << ',' << x << ',' << num(p) << '\n';
  }
}

// ---------------------------------------------------------------------------
// analysis sections

void write_bias_profile_json(const fs::path& path, const BiasProfile& profile, const LeaveOneOutResult& loo,
                             int radius, NeighborhoodMode mode) {
  ojson j;
  j["rates_mode"] = to_string(profile.mode);
  j["radius"] = radius;
  j["neighborhood"] = to_string(mode);
  j["attribution"] = "nearest mention by tree distance, ties to all";
  j["totals"] = {{"F", profile.marginals.total_f}, {"M", profile.marginals.total_m}};
  j["politicians"] = {{"F", profile.marginals.politicians_f}, {"M", profile.marginals.politicians_m}};
  j["correction_factors"] = {{"F", profile.factors.c_f}, {"M", profile.factors.c_m}};
  j["dissimilarity"] = loo.diss;
  j["undefined_words"] = profile.undefined;
  auto& words = j["words"];
  words = ojson::array();
  for (std::size_t i = 0; i < profile.words.size(); ++i) {
    const auto& w = profile.words[i];
    ojson wj;
    wj["lemma"] = w.counts.word.lemma;
    wj["upos"] = w.counts.word.upos;
    wj["category"] = w.counts.category ? ojson(to_string(*w.counts.category)) : ojson(nullptr);
    wj["count_f"] = w.counts.f;
    wj["count_m"] = w.counts.m;
    wj["rate_f"] = w.rates.f;
    wj["rate_m"] = w.rates.m;
    wj["index"] = opt(w.index);
    if (i < loo.entries.size()) {
      const auto& e = loo.entries[i];
      wj["diss_without"] = opt(e.diss_without);
      wj["weight"] = e.weight;
      wj["distinctive"] = e.distinctive;
      wj["leaning"] = to_string(e.leaning);
    }
    words.push_back(std::move(wj));
  }
  dump(path, j);
}

namespace {

ojson stats_json(const SummaryStats& s) {
  return {{"n", s.n},
          {"total_weight", s.total_weight},
          {"mean", s.mean},
          {"skewness", s.skewness},
          {"skewness_degenerate", s.skewness_degenerate},
          {"D1", s.d1},
          {"Q1", s.q1},
          {"D5", s.median},
          {"Q3", s.q3},
          {"D9", s.d9},
          {"IQR", s.iqr}};
}

ojson distribution_json(const IndexDistribution& d) {
  ojson j;
  j["weighting"] = to_string(d.weighting);
  j["stats"] = stats_json(d.stats);
  j["histogram"] = {{"lo", d.histogram.lo}, {"hi", d.histogram.hi}, {"mass", d.histogram.mass},
                    {"density", d.histogram.density}};
  j["kde"] = {{"bandwidth", d.density.bandwidth}, {"grid", d.density.grid}, {"density", d.density.density}};
  return j;
}

}  // namespace

void write_summary_stats_json(const fs::path& path, std::span<const CategorySummary> summaries) {
  ojson j = ojson::array();
  for (const auto& s : summaries) {
    ojson sj;
    sj["category"] = category_label(s.category);
    if (!s.error.empty()) {
      sj["error"] = s.error;
    } else {
      if (s.counts) sj["counts"] = distribution_json(*s.counts);
      if (s.unweighted) sj["unweighted"] = distribution_json(*s.unweighted);
    }
    j.push_back(std::move(sj));
  }
  dump(path, j);
}

void write_chi_square_json(const fs::path& path, std::span<const ChiSquareSection> sections) {
  ojson j = ojson::array();
  for (const auto& s : sections) {
    ojson sj;
    sj["dataset"] = to_string(s.dataset);
    sj["layout"] = "rows source_type (traditional, online), columns gender (F, M)";
    sj["observed"] = s.observed;
    if (s.result) {
      sj["expected"] = s.result->expected;
      sj["residual_sign"] = s.result->residual_sign;
      sj["chi_square"] = s.result->statistic;
      sj["df"] = 1;
      sj["p_value"] = s.result->p_value;
    } else {
      sj["error"] = s.error;
    }
    j.push_back(std::move(sj));
  }
  dump(path, j);
}

void write_quantiles_csv(const fs::path& path, std::span<const QuantileSection> sections,
                         std::span<const double> taus) {
  auto out = open_out(path);
  out << "category,gender,source_type";
  for (double t : taus) out << ',' << tau_label(t);
  out << '\n';
  for (const auto& s : sections) {
    if (s.models.size() != taus.size()) continue;
    for (auto g : kGenders)
      for (auto src : kSourceTypes) {
        out << to_string(s.category) << ',' << to_string(g) << ',' << to_string(src);
        for (const auto& m : s.models) out << ',' << num(m.fitted[index_of(g)][index_of(src)]);
        out << '\n';
      }
  }
}

void write_quantile_coefficients_json(const fs::path& path, std::span<const QuantileSection> sections,
                                      double jitter_half_width, std::size_t replicates, double level) {
  static constexpr const char* kNames[4] = {"intercept", "gender", "source", "gender_x_source"};
  ojson j;
  j["model"] = "Quantile(Y) = b0 + b1 Gender + b2 Source + b3 Gender*Source";
  j["coding"] = {{"Gender", "1 = F, 0 = M"}, {"Source", "1 = online, 0 = traditional"},
                 {"reference_cell", "M/traditional"}};
  j["jitter_half_width"] = jitter_half_width;
  j["bootstrap"] = {{"replicates", replicates}, {"level", level}, {"interval", "percentile"}};
  auto& cats = j["categories"];
  cats = ojson::array();
  for (const auto& s : sections) {
    ojson cj;
    cj["category"] = to_string(s.category);
    cj["n"] = s.n;
    cj["jitter_seed"] = s.jitter_seed;
    cj["bootstrap_seed"] = s.bootstrap_seed;
    if (!s.error.empty()) {
      cj["error"] = s.error;
      cats.push_back(std::move(cj));
      continue;
    }
    auto& fits = cj["fits"];
    fits = ojson::array();
    for (std::size_t k = 0; k < s.models.size(); ++k) {
      const auto& m = s.models[k];
      ojson fj;
      fj["tau"] = m.tau;
      fj["label"] = tau_label(m.tau);
      fj["loss"] = m.loss;
      auto& coef = fj["coefficients"];
      for (std::size_t b = 0; b < 4; ++b) {
        ojson bj;
        bj["estimate"] = m.beta[b];
        if (k < s.bootstrap.size()) {
          const auto& ci = s.bootstrap[k].coefficients[b];
          bj["ci_lo"] = ci.lo;
          bj["ci_hi"] = ci.hi;
          bj["significant"] = ci.significant;
        }
        coef[kNames[b]] = std::move(bj);
      }
      if (k < s.bootstrap.size()) fj["bootstrap_redraws"] = s.bootstrap[k].redraws;
      fits.push_back(std::move(fj));
    }
    cats.push_back(std::move(cj));
  }
  dump(path, j);
}

void write_temporal_json(const fs::path& path, const TemporalSection& section, std::size_t window,
                         FillPolicy fill) {
  ojson j;
  j["category"] = to_string(section.category);
  j["window"] = window;
  j["fill"] = to_string(fill);
  j["time_unit"] = "day";
  if (!section.trend) {
    j["error"] = section.error;
    dump(path, j);
    return;
  }
  const auto& t = *section.trend;
  j["A_F"] = t.area.a_f;
  j["A_M"] = t.area.a_m;
  j["A"] = t.area.a;
  j["share_F"] = t.dominance.share_f;
  j["share_M"] = t.dominance.share_m;
  j["tie_share"] = t.dominance.tie_share;
  j["days_compared"] = t.dominance.days;
  auto series = [](const DailySeries& s) {
    ojson a = ojson::array();
    for (const auto& p : s.points) a.push_back({p.date.iso(), p.value});
    return a;
  };
  for (auto g : kGenders) {
    j["daily"][std::string(to_string(g))] = series(t.daily[index_of(g)]);
    j["moving_average"][std::string(to_string(g))] = series(t.average[index_of(g)]);
  }
  dump(path, j);
}

void write_alpha_json(const fs::path& path, std::span<const AlphaSection> sections) {
  ojson j = ojson::array();
  for (const auto& s : sections) {
    ojson sj;
    sj["category"] = category_label(s.category);
    sj["metric"] = "ordinal";
    if (s.result) {
      const auto& r = *s.result;
      sj["alpha"] = r.alpha;
      sj["D_o"] = r.observed_disagreement;
      sj["D_e"] = r.expected_disagreement;
      sj["degenerate"] = r.degenerate;
      sj["units"] = r.units_used;
      sj["pairable_values"] = r.pairable_values;
      ojson m = ojson::object();
      for (const auto& [v, n] : r.marginals) m[std::to_string(v)] = n;
      sj["marginals"] = std::move(m);
    } else {
      sj["error"] = s.error;
    }
    j.push_back(std::move(sj));
  }
  dump(path, j);
}

}  // namespace polcov
