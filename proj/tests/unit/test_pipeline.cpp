#include "doctest.h"
#include "json.hpp"
#include "polcov/pipeline.hpp"
#include "polcov/synthetic.hpp"
#include "support/testing.hpp"

using namespace polcov;
using testing::TempDir;
using nlohmann::json;

namespace {

Config small_config(const TempDir& dir) {
  testing::copy_small_bundle(dir.path());
  auto c = load_config(dir / "polcov.conf");
  c.out = dir / "out";
  return c;
}

std::map<std::string, std::string> bundle_files(const fs::path& out) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(out)) files[e.path().filename().string()] = testing::slurp(e.path());
  return files;
}

}  // namespace

TEST_CASE("config parsing") {
  TempDir dir("cfg");
  dir.write("c.conllu", "");
  const auto p = dir.write("run.conf",
                           "# comment\n[input]\nconllu = c.conllu\nmetadata=m.jsonl\n"
                           "radius = 3\nrates_mode = literal\nwindow = 30\nfill = carry_forward\n"
                           "taus = 0.5, 0.9\nmodal_lemmas = potere\nseed = 7\nbootstrap = 0\n");
  const auto c = load_config(p);
  REQUIRE(c.conllu.size() == 1);
  CHECK(c.conllu[0] == dir / "c.conllu");
  CHECK(c.metadata == dir / "m.jsonl");
  CHECK(c.neighborhood.radius == 3);
  CHECK(c.rates_mode == RatesMode::literal);
  CHECK(c.ma_window == 30);
  CHECK(c.fill == FillPolicy::carry_forward);
  CHECK(c.taus == std::vector<double>{0.5, 0.9});
  CHECK(c.neighborhood.modal_lemmas.size() == 1);
  CHECK(c.seed == 7);
  CHECK(c.bootstrap == 0);

  CHECK_THROWS_AS(load_config(dir.write("bad.conf", "colour = red\n")), ParseError);
  CHECK_THROWS_AS(load_config(dir.write("bad2.conf", "radius = two\n")), Error);
  CHECK_THROWS_AS(load_config(dir.write("bad3.conf", "just words\n")), ParseError);
}

TEST_CASE("missing lexicon fails validation before any output") {
  TempDir dir("pipe");
  auto c = small_config(dir);
  fs::remove(dir / "lexicon.csv");
  CHECK_THROWS_AS(validate(c), ValidationError);
  CHECK_THROWS_AS(run_pipeline(c), StageError);
  CHECK_FALSE(fs::exists(c.out / "counts.csv"));
  try {
    run_extract(c);
  } catch (const StageError& e) {
    CHECK(e.stage() == "extract");
    CHECK(std::string(e.what()).find("lexicon") != std::string::npos);
  }
}

TEST_CASE("bootstrap setting") {
  TempDir dir("pipe");
  auto c = small_config(dir);
  c.bootstrap = 50;
  CHECK_THROWS_AS(validate(c), ValidationError);
  c.bootstrap = 100;
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("stages need their inputs") {
  TempDir dir("pipe");
  const auto c = small_config(dir);
  CHECK_THROWS_AS(run_analyze(c), StageError);
  CHECK_THROWS_AS(run_report(c), StageError);
}

TEST_CASE("two-politician fixture end to end") {
  TempDir dir("pipe");
  const auto c = small_config(dir);
  const auto summary = ingest_check(c);
  CHECK(summary.politicians == 2);
  CHECK(summary.lexicon_entries == 5);
  CHECK(summary.corpus.documents == 3);
  CHECK(summary.corpus.sentences == 7);

  run_pipeline(c);
  const auto m = json::parse(testing::slurp(c.out / "manifest.json"));
  const auto& cov = m["counts"]["coverage"];
  const auto& per = m["counts"]["personalization"];
  CHECK(cov["F"]["words"] == 5);
  CHECK(cov["M"]["words"] == 5);
  CHECK(cov["F"]["distinct_words"] == 5);
  CHECK(cov["M"]["distinct_words"] == 4);
  CHECK(cov["F"]["contents"] == 2);
  CHECK(cov["M"]["sentences"] == 2);
  CHECK(per["F"]["words"] == 2);
  CHECK(per["M"]["words"] == 3);
  CHECK(per["M"]["distinct_words"] == 2);
  CHECK(cov["F"]["politicians"] == 1);
  CHECK(m["config"]["bootstrap"] == "0");
  CHECK(m["files"].contains("counts.csv"));
  CHECK(m["config_hash"].get<std::string>().size() == 16);
}

TEST_CASE("reruns are byte-identical") {
  TempDir dir("pipe");
  auto c = small_config(dir);
  run_pipeline(c);
  const auto first = bundle_files(c.out);
  run_pipeline(c);
  CHECK(bundle_files(c.out) == first);
  c.out = dir / "elsewhere";
  c.workers = 3;
  run_pipeline(c);
  CHECK(bundle_files(c.out) == first);
}

TEST_CASE("synthetic bundle totals reach the manifest") {
  TempDir dir("synth");
  SyntheticSpec spec;
  spec.documents = 400;
  spec.seed = 9;
  const auto corpus = generate_synthetic(spec, dir.path());
  auto c = corpus.config;
  c.bootstrap = 100;
  c.workers = 2;
  run_pipeline(c);
  const auto m = json::parse(testing::slurp(c.out / "manifest.json"));
  const auto& e = corpus.expected;
  for (auto g : kGenders) {
    const std::string gs(to_string(g));
    CHECK(m["counts"]["coverage"][gs]["words"] == e.coverage_words[index_of(g)]);
    CHECK(m["counts"]["coverage"][gs]["sentences"] == e.sentences[index_of(g)]);
    std::uint64_t lex = 0;
    for (auto cat : kCategories) lex += e.lexicon_words[index_of(g)][index_of(cat)];
    CHECK(m["counts"]["personalization"][gs]["words"] == lex);
  }
  for (const char* f : {"manifest.json", "counts.csv", "bias_profile.json", "summary_stats.json",
                        "distinctive_physical_F.csv", "sentiment_fractions.csv", "chi_square.json",
                        "quantiles.csv", "temporal_physical.json", "records.jsonl", "alpha.json"})
    CHECK_MESSAGE(fs::exists(c.out / f), f);
  const auto q = json::parse(testing::slurp(c.out / "quantile_coefficients.json"));
  CHECK(q.dump().find("\"error\"") == std::string::npos);
}

TEST_CASE("canonical config and hash") {
  TempDir dir("pipe");
  auto a = small_config(dir);
  auto b = a;
  b.out = "somewhere/else";
  CHECK(canonical_config(a) == canonical_config(b));
  b.seed = 43;
  CHECK(fnv1a_hex(canonical_config(a)) != fnv1a_hex(canonical_config(b)));
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}
