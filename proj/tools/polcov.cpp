// polcov: gendered personalization statistics over dependency-parsed news.
//
//   polcov ingest-check --config run.conf
//   polcov run --config run.conf --out report/ --seed 42
//   polcov synth --dir /tmp/synthetic

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "polcov/pipeline.hpp"
#include "polcov/synthetic.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;
  std::optional<int> radius;
  std::optional<std::string> rates_mode;
  std::optional<std::size_t> window;
  std::optional<double> jitter;
  std::optional<std::size_t> bootstrap;
  std::optional<std::string> out;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "key = value configuration file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--workers", o.workers, "worker threads");
  cmd->add_option("--seed", o.seed, "seed for jitter and bootstrap (default 42)");
  cmd->add_option("--radius", o.radius, "neighborhood radius in tree edges (default 2)");
  cmd->add_option("--rates-mode", o.rates_mode, "adjusted-rate formula: ratio or literal")
      ->check(CLI::IsMember({"ratio", "literal"}));
  cmd->add_option("--window", o.window, "moving-average window in days (default 90)");
  cmd->add_option("--jitter", o.jitter, "sentiment jitter half-width (default 0.05)");
  cmd->add_option("--bootstrap", o.bootstrap, "bootstrap replicates, 0 to disable (default 200)");
  cmd->add_option("--out", o.out, "output directory");
}

polcov::Config resolve(const Overrides& o) {
  auto c = polcov::load_config(o.config);
  if (o.workers) c.workers = *o.workers;
  if (o.seed) c.seed = *o.seed;
  if (o.radius) c.neighborhood.radius = *o.radius;
  if (o.rates_mode) polcov::apply_setting(c, "rates_mode", *o.rates_mode);
  if (o.window) c.ma_window = *o.window;
  if (o.jitter) c.jitter = *o.jitter;
  if (o.bootstrap) c.bootstrap = *o.bootstrap;
  if (o.out) c.out = *o.out;
  polcov::validate(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gender-bias statistics of politicians' personalized news coverage"};
  app.require_subcommand(1);

  Overrides o;
  auto* check = app.add_subcommand("ingest-check", "load and validate every input, report counts");
  auto* ext = app.add_subcommand("extract", "mentions, neighborhoods, counts and records");
  auto* ana = app.add_subcommand("analyze", "bias index, dissimilarity, tests, quantiles, trends");
  auto* rep = app.add_subcommand("report", "sentiment fractions, descriptives and manifest");
  auto* run = app.add_subcommand("run", "extract, analyze and report");
  for (auto* cmd : {check, ext, ana, rep, run}) add_common(cmd, o);

  auto* synth = app.add_subcommand("synth", "write a synthetic corpus bundle with planted differences");
  std::string synth_dir;
  polcov::SyntheticSpec spec;
  synth->add_option("--dir", synth_dir, "destination directory")->required();
  synth->add_option("--documents", spec.documents, "number of documents");
  synth->add_option("--seed", spec.seed, "generator seed");
  synth->add_option("--boost", spec.physical_boost, "women's physical-word rate multiplier");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      const auto corpus = polcov::generate_synthetic(spec, synth_dir);
      std::cout << "wrote " << corpus.config_path.string() << '\n';
      return 0;
    }
    const auto config = resolve(o);
    if (*check) {
      const auto s = polcov::ingest_check(config);
      std::cout << "lexicon entries\t" << s.lexicon_entries << '\n'
                << "politicians\t" << s.politicians << '\n'
                << "metadata rows\t" << s.metadata_rows << '\n'
                << "stopwords\t" << s.stopwords << '\n'
                << "documents\t" << s.corpus.documents << '\n'
                << "sentences\t" << s.corpus.sentences << '\n'
                << "tokens\t" << s.corpus.tokens << '\n'
                << "skipped (out of window)\t" << s.corpus.skipped_out_of_window << '\n'
                << "rejected sentences\t" << s.corpus.rejected_sentences.size() << '\n';
      for (const auto& r : s.corpus.rejected_sentences) std::cerr << "rejected: " << r << '\n';
    } else if (*ext) {
      const auto r = polcov::run_extract(config);
      std::cout << "records\t" << r.records.size() << "\nwords\t" << r.counts.total() << '\n';
    } else if (*ana) {
      polcov::run_analyze(config);
    } else if (*rep) {
      polcov::run_report(config);
    } else if (*run) {
      polcov::run_pipeline(config);
      std::cout << "report written to " << config.out.string() << '\n';
    }
  } catch (const polcov::Error& e) {
    std::cerr << "polcov: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "polcov: unexpected error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
