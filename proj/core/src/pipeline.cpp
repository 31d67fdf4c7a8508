#include "polcov/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "polcov/entity.hpp"
#include "polcov/inferential.hpp"
#include "polcov/random.hpp"
#include "polcov/report.hpp"
#include "polcov/summary.hpp"
#include "polcov/text.hpp"

namespace polcov {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

namespace {

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto res = std::from_chars(value.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end)
    throw ValidationError("config key '" + key + "': invalid number '" + value + "'");
  return out;
}

Date parse_date(const std::string& key, const std::string& value) {
  const auto d = Date::parse(value);
  if (!d) throw ValidationError("config key '" + key + "': invalid date '" + value + "'");
  return *d;
}

std::vector<std::string> list_of(const std::string& value) {
  std::vector<std::string> out;
  for (auto part : text::split(value, ',')) {
    auto t = std::string(text::trim(part));
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

fs::path resolve(const fs::path& base, const std::string& value) {
  fs::path p(value);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

// Seeds for the stochastic steps, derived from the run seed so each step is
// reproducible on its own.
std::uint64_t jitter_seed(std::uint64_t seed, Category c) { return derive_seed(seed, 1, index_of(c)); }
std::uint64_t bootstrap_seed(std::uint64_t seed, Category c, std::size_t tau_index) {
  return derive_seed(seed, 2, index_of(c) * 64 + tau_index);
}

template <typename F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

const fs::path kCounts = "counts.csv";
const fs::path kPoliticians = "politicians.csv";
const fs::path kDaily = "daily.csv";
const fs::path kRecords = "records.jsonl";
const fs::path kDescriptives = "descriptives.json";
const fs::path kExtractInfo = "extract_info.json";

void require_artifact(const fs::path& p) {
  if (!fs::exists(p)) throw ValidationError("missing stage input " + p.string() + " (run extract first)");
}

}  // namespace

CorpusBundle Config::bundle() const {
  return CorpusBundle{conllu, metadata, registry, lexicon, stopwords, lemma_map};
}

void apply_setting(Config& c, const std::string& key, const std::string& value, const fs::path& base) {
  if (key == "conllu") {
    for (const auto& f : list_of(value)) c.conllu.push_back(resolve(base, f));
  } else if (key == "metadata") {
    c.metadata = resolve(base, value);
  } else if (key == "registry") {
    c.registry = resolve(base, value);
  } else if (key == "lexicon") {
    c.lexicon = resolve(base, value);
  } else if (key == "stopwords") {
    c.stopwords = resolve(base, value);
  } else if (key == "lemma_map") {
    c.lemma_map = resolve(base, value);
  } else if (key == "gazetteer") {
    c.gazetteer = resolve(base, value);
  } else if (key == "window_from") {
    c.window_from = parse_date(key, value);
  } else if (key == "window_to") {
    c.window_to = parse_date(key, value);
  } else if (key == "radius") {
    c.neighborhood.radius = parse_number<int>(key, value);
  } else if (key == "neighborhood") {
    const auto m = parse_neighborhood_mode(value);
    if (!m) throw ValidationError("config key 'neighborhood': expected undirected or children");
    c.neighborhood.mode = *m;
  } else if (key == "modal_lemmas") {
    c.neighborhood.modal_lemmas.clear();
    for (const auto& l : list_of(value)) {
      const auto n = normalize_lemma(l);
      if (n) c.neighborhood.modal_lemmas.insert(*n);
    }
  } else if (key == "rates_mode") {
    const auto m = parse_rates_mode(value);
    if (!m) throw ValidationError("config key 'rates_mode': expected ratio or literal");
    c.rates_mode = *m;
  } else if (key == "bins") {
    c.histogram_bins = parse_number<std::size_t>(key, value);
  } else if (key == "window" || key == "ma_window") {
    c.ma_window = parse_number<std::size_t>(key, value);
  } else if (key == "fill") {
    const auto f = parse_fill_policy(value);
    if (!f) throw ValidationError("config key 'fill': expected zero or carry_forward");
    c.fill = *f;
  } else if (key == "jitter") {
    c.jitter = parse_number<double>(key, value);
  } else if (key == "bootstrap") {
    c.bootstrap = parse_number<std::size_t>(key, value);
  } else if (key == "seed") {
    c.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "workers") {
    c.workers = parse_number<unsigned>(key, value);
  } else if (key == "taus") {
    c.taus.clear();
    for (const auto& t : list_of(value)) c.taus.push_back(parse_number<double>(key, t));
  } else if (key == "out") {
    c.out = resolve(base, value);
  } else {
    throw ValidationError("unknown config key '" + key + "'");
  }
}

Config load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config " + path.string());
  Config c;
  const auto base = path.parent_path();
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    std::string_view v = line;
    if (no == 1) v = text::strip_bom(v);
    v = text::trim(v);
    if (v.empty() || v.front() == '#' || v.front() == ';' || v.front() == '[') continue;
    const auto eq = v.find('=');
    if (eq == std::string_view::npos) throw ParseError(path.string(), no, "expected key = value");
    auto key = std::string(text::trim(v.substr(0, eq)));
    auto value = std::string(text::trim(v.substr(eq + 1)));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    try {
      apply_setting(c, key, value, base);
    } catch (const ValidationError& e) {
      throw ParseError(path.string(), no, e.what());
    }
  }
  return c;
}

void validate(const Config& c) {
  auto need = [](const fs::path& p, const char* what) {
    if (p.empty()) throw ValidationError(std::string("config is missing the ") + what + " path");
    if (!fs::is_regular_file(p)) throw ValidationError(std::string(what) + " file not found: " + p.string());
  };
  if (c.conllu.empty()) throw ValidationError("config lists no conllu files");
  for (const auto& f : c.conllu) need(f, "conllu");
  need(c.metadata, "metadata");
  need(c.registry, "registry");
  need(c.lexicon, "lexicon");
  need(c.stopwords, "stopwords");
  if (c.lemma_map) need(*c.lemma_map, "lemma_map");
  if (c.gazetteer) need(*c.gazetteer, "gazetteer");
  if (c.window_from && c.window_to && *c.window_to < *c.window_from)
    throw ValidationError("window_to precedes window_from");
  if (c.neighborhood.radius < 1) throw ValidationError("radius must be at least 1");
  if (c.ma_window < 1) throw ValidationError("window must be at least 1");
  if (c.histogram_bins < 1) throw ValidationError("bins must be at least 1");
  if (!(c.jitter >= 0 && c.jitter < 0.1)) throw ValidationError("jitter must lie in [0, 0.1)");
  if (c.bootstrap != 0 && c.bootstrap < 100)
    throw ValidationError("bootstrap needs at least 100 replicates (0 disables it)");
  if (c.taus.empty()) throw ValidationError("taus is empty");
  for (double t : c.taus)
    if (!(t > 0 && t < 1)) throw ValidationError("taus must lie in (0, 1)");
}

std::string canonical_config(const Config& c) {
  std::ostringstream s;
  auto path_list = [](const std::vector<fs::path>& v) {
    std::vector<std::string> parts;
    for (const auto& p : v) parts.push_back(p.generic_string());
    return text::join(parts, ",");
  };
  s << "conllu=" << path_list(c.conllu) << '\n'
    << "metadata=" << c.metadata.generic_string() << '\n'
    << "registry=" << c.registry.generic_string() << '\n'
    << "lexicon=" << c.lexicon.generic_string() << '\n'
    << "stopwords=" << c.stopwords.generic_string() << '\n'
    << "lemma_map=" << (c.lemma_map ? c.lemma_map->generic_string() : "") << '\n'
    << "gazetteer=" << (c.gazetteer ? c.gazetteer->generic_string() : "") << '\n'
    << "window_from=" << (c.window_from ? c.window_from->iso() : "") << '\n'
    << "window_to=" << (c.window_to ? c.window_to->iso() : "") << '\n'
    << "radius=" << c.neighborhood.radius << '\n'
    << "neighborhood=" << to_string(c.neighborhood.mode) << '\n'
    << "modal_lemmas="
    << text::join(std::vector<std::string>(c.neighborhood.modal_lemmas.begin(), c.neighborhood.modal_lemmas.end()), ",")
    << '\n'
    << "rates_mode=" << to_string(c.rates_mode) << '\n'
    << "bins=" << c.histogram_bins << '\n'
    << "window=" << c.ma_window << '\n'
    << "fill=" << to_string(c.fill) << '\n'
    << "jitter=" << num(c.jitter) << '\n'
    << "bootstrap=" << c.bootstrap << '\n'
    << "seed=" << c.seed << '\n';
  std::vector<std::string> taus;
  for (double t : c.taus) taus.push_back(num(t));
  s << "taus=" << text::join(taus, ",") << '\n';
  return s.str();
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// stages

namespace {

struct Inputs {
  Stopwords stopwords;
  std::optional<LemmaMap> lemma_map;
  MetadataIndex metadata;
  Lexicon lexicon;
  PoliticianRegistry registry;
  RoleGazetteer gazetteer;
};

Inputs load_inputs(const Config& c) {
  Inputs in;
  in.stopwords = read_stopwords(c.stopwords);
  if (c.lemma_map) in.lemma_map = read_lemma_map(*c.lemma_map);
  in.metadata = read_metadata(c.metadata);
  in.lexicon = read_lexicon(c.lexicon);
  check_lexicon_against_stopwords(in.lexicon, in.stopwords);
  in.registry = read_registry(c.registry);
  in.gazetteer = c.gazetteer ? read_role_gazetteer(*c.gazetteer) : RoleGazetteer::defaults();
  return in;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

IngestSummary ingest_check(const Config& config) {
  return stage("ingest-check", [&] {
    validate(config);
    const auto in = load_inputs(config);
    IngestSummary s;
    s.lexicon_entries = in.lexicon.size();
    s.politicians = in.registry.size();
    s.metadata_rows = in.metadata.size();
    s.stopwords = in.stopwords.size();
    CorpusReader reader(config.conllu, in.metadata, in.stopwords, in.lemma_map ? &*in.lemma_map : nullptr,
                        IngestOptions{config.window_from, config.window_to});
    while (reader.next()) {
    }
    s.corpus = reader.diagnostics();
    return s;
  });
}

ExtractionResult run_extract(const Config& config) {
  return stage("extract", [&] {
    validate(config);
    const auto in = load_inputs(config);
    CorpusReader reader(config.conllu, in.metadata, in.stopwords, in.lemma_map ? &*in.lemma_map : nullptr,
                        IngestOptions{config.window_from, config.window_to});
    const EntityMatcher matcher(in.registry, in.gazetteer);
    const Extractor extractor(matcher, in.lexicon, config.neighborhood);
    auto result = extract(reader, extractor, config.workers);

    fs::create_directories(config.out);
    result.counts.write_csv(config.out / kCounts);
    result.counts.write_politicians_csv(config.out / kPoliticians);
    result.daily.write_csv(config.out / kDaily);
    write_records_jsonl(config.out / kRecords, result.records);
    result.descriptives.write_json(config.out / kDescriptives);

    const auto& d = reader.diagnostics();
    ojson info;
    info["documents"] = d.documents;
    info["sentences"] = d.sentences;
    info["tokens"] = d.tokens;
    info["skipped_out_of_window"] = d.skipped_out_of_window;
    info["rejected_sentences"] = d.rejected_sentences;
    info["ambiguous_role_mentions"] = result.match.ambiguous_role;
    info["ambiguous_name_mentions"] = result.match.ambiguous_name;
    info["records"] = result.records.size();
    std::ofstream(config.out / kExtractInfo, std::ios::binary) << info.dump(1) << '\n';
    return result;
  });
}

void run_analyze(const Config& config) {
  stage("analyze", [&] {
    validate(config);
    for (const auto& f : {kCounts, kPoliticians, kDaily, kRecords}) require_artifact(config.out / f);
    const auto counts = CountTable::read_csv(config.out / kCounts, config.out / kPoliticians);
    const auto daily = DailyCounts::read_csv(config.out / kDaily);
    const auto records = read_records_jsonl(config.out / kRecords);
    const auto lexicon = read_lexicon(config.lexicon);

    const auto freq = counts.frequencies();
    const auto profile = bias_profile(freq, config.rates_mode);
    const auto loo = leave_one_out(freq, config.rates_mode);
    write_bias_profile_json(config.out / "bias_profile.json", profile, loo, config.neighborhood.radius,
                            config.neighborhood.mode);

    std::vector<CategorySummary> summaries;
    std::vector<std::optional<Category>> slices{std::nullopt};
    for (auto c : kCategories) slices.emplace_back(c);
    for (const auto& c : slices) {
      CategorySummary s;
      s.category = c;
      try {
        s.counts = index_distribution(profile, c, Weighting::counts, config.histogram_bins);
        s.unweighted = index_distribution(profile, c, Weighting::unweighted, config.histogram_bins);
      } catch (const DomainError& e) {
        s.counts.reset();
        s.unweighted.reset();
        s.error = e.what();
      }
      summaries.push_back(std::move(s));
    }
    write_summary_stats_json(config.out / "summary_stats.json", summaries);

    for (bool negative : {false, true})
      for (const auto& list : distinctive_lists(loo, lexicon, negative)) {
        const std::string name = std::string("distinctive_") + (negative ? "negative_" : "") +
                                 std::string(to_string(list.category)) + "_" +
                                 std::string(to_string(list.gender)) + ".csv";
        write_distinctive_csv(config.out / name, list, lexicon);
      }

    std::vector<ChiSquareSection> chi;
    for (auto ds : kDatasets) {
      ChiSquareSection s;
      s.dataset = ds;
      s.observed = counts.contingency(ds == Dataset::personalization);
      std::array<std::array<double, 2>, 2> o{};
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) o[i][j] = static_cast<double>(s.observed[i][j]);
      try {
        s.result = chi_square(o);
      } catch (const DomainError& e) {
        s.error = e.what();
      }
      chi.push_back(s);
    }
    write_chi_square_json(config.out / "chi_square.json", chi);

    std::vector<QuantileSection> quantiles;
    for (auto c : kCategories) {
      QuantileSection s;
      s.category = c;
      s.jitter_seed = jitter_seed(config.seed, c);
      s.bootstrap_seed = bootstrap_seed(config.seed, c, 0);
      std::vector<double> scores;
      std::vector<SentimentObservation> obs;
      for (const auto& r : records)
        if (r.category == c) {
          scores.push_back(r.aggregate_sentiment.value());
          obs.push_back({0.0, r.gender, r.source_type});
        }
      s.n = obs.size();
      const auto y = jitter(scores, s.jitter_seed, config.jitter);
      for (std::size_t i = 0; i < obs.size(); ++i) obs[i].y = y[i];
      try {
        for (std::size_t k = 0; k < config.taus.size(); ++k) {
          s.models.push_back(fit_quantile_model(obs, config.taus[k]));
          if (config.bootstrap > 0) {
            BootstrapOptions opt;
            opt.replicates = config.bootstrap;
            opt.seed = bootstrap_seed(config.seed, c, k);
            opt.workers = config.workers;
            s.bootstrap.push_back(bootstrap_quantile_model(obs, config.taus[k], opt));
          }
        }
      } catch (const DomainError& e) {
        s.models.clear();
        s.bootstrap.clear();
        s.error = e.what();
      }
      quantiles.push_back(std::move(s));
    }
    write_quantiles_csv(config.out / "quantiles.csv", quantiles, config.taus);
    write_quantile_coefficients_json(config.out / "quantile_coefficients.json", quantiles, config.jitter,
                                     config.bootstrap, BootstrapOptions{}.level);

    for (auto c : kCategories) {
      TemporalSection s;
      s.category = c;
      try {
        s.trend = category_trend(daily, c, config.ma_window, config.fill);
      } catch (const DomainError& e) {
        s.error = e.what();
      }
      write_temporal_json(config.out / ("temporal_" + std::string(to_string(c)) + ".json"), s,
                          config.ma_window, config.fill);
    }

    std::vector<AlphaSection> alphas;
    for (const auto& c : slices) {
      AlphaSection s;
      s.category = c;
      try {
        s.result = krippendorff_alpha_ordinal(annotation_matrix(lexicon, c));
      } catch (const DomainError& e) {
        s.error = e.what();
      }
      alphas.push_back(std::move(s));
    }
    write_alpha_json(config.out / "alpha.json", alphas);
    return 0;
  });
}

void run_report(const Config& config) {
  stage("report", [&] {
    validate(config);
    for (const auto& f : {kCounts, kPoliticians, kRecords, kDescriptives}) require_artifact(config.out / f);
    const auto counts = CountTable::read_csv(config.out / kCounts, config.out / kPoliticians);
    const auto records = read_records_jsonl(config.out / kRecords);
    const auto descriptives = Descriptives::read_json(config.out / kDescriptives);
    const auto lexicon = read_lexicon(config.lexicon);

    const auto fractions = sentiment_fractions(records, lexicon);
    write_sentiment_fractions_csv(config.out / "sentiment_fractions.csv", fractions);
    const auto table = breakdown(descriptives, counts);
    write_descriptives_report(config.out / "descriptives_table.json", table, descriptives);
    write_ccdf_csv(config.out / "ccdf.csv", descriptives);

    ojson m;
    m["tool"] = "polcov";
    m["config_hash"] = fnv1a_hex(canonical_config(config));
    ojson cfg = ojson::object();
    std::istringstream lines(canonical_config(config));
    for (std::string line; std::getline(lines, line);) {
      const auto eq = line.find('=');
      cfg[line.substr(0, eq)] = line.substr(eq + 1);
    }
    m["config"] = std::move(cfg);
    m["modes"] = {{"rates_mode", to_string(config.rates_mode)},
                  {"radius", config.neighborhood.radius},
                  {"neighborhood", to_string(config.neighborhood.mode)},
                  {"attribution", "nearest mention, ties to all"},
                  {"jitter_half_width", config.jitter},
                  {"moving_average_window", config.ma_window},
                  {"fill", to_string(config.fill)},
                  {"bootstrap_replicates", config.bootstrap},
                  {"weighted_quantiles", "inverse cumulative weight, plateau midpoint"}};
    ojson seeds;
    seeds["seed"] = config.seed;
    for (auto c : kCategories) {
      ojson cs;
      cs["jitter"] = jitter_seed(config.seed, c);
      ojson bs = ojson::array();
      for (std::size_t k = 0; k < config.taus.size(); ++k) bs.push_back(bootstrap_seed(config.seed, c, k));
      cs["bootstrap"] = std::move(bs);
      seeds[std::string(to_string(c))] = std::move(cs);
    }
    m["seeds"] = std::move(seeds);
    ojson t1;
    for (auto ds : kDatasets)
      for (auto g : kGenders) {
        const auto& b = table[index_of(ds)][index_of(g)];
        t1[std::string(to_string(ds))][std::string(to_string(g))] = {
            {"politicians", b.politicians}, {"contents", b.contents},       {"sentences", b.sentences},
            {"words", b.words},             {"distinct_words", b.distinct_words}};
      }
    m["counts"] = std::move(t1);
    if (fs::exists(config.out / kExtractInfo))
      m["extract"] = ojson::parse(read_file(config.out / kExtractInfo));
    m["warnings"] = fractions.warnings;

    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(config.out))
      if (e.is_regular_file() && e.path().filename() != "manifest.json")
        names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    ojson files = ojson::object();
    for (const auto& n : names) files[n] = fnv1a_hex(read_file(config.out / n));
    m["files"] = std::move(files);
    std::ofstream(config.out / "manifest.json", std::ios::binary) << m.dump(1) << '\n';
    return 0;
  });
}

void run_pipeline(const Config& config) {
  run_extract(config);
  run_analyze(config);
  run_report(config);
}

}  // namespace polcov
