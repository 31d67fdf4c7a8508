#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "polcov/error.hpp"
#include "polcov/syntax.hpp"
#include "support/testing.hpp"

using namespace polcov;

namespace {

struct Tok {
  std::string lemma;
  std::string upos;
  int head;
  bool filtered = false;
};

Sentence make_sentence(const std::vector<Tok>& toks, std::string doc = "d1", std::size_t ordinal = 0) {
  Sentence s;
  s.doc_id = doc;
  s.sent_id = doc + "-" + std::to_string(ordinal + 1);
  s.ordinal = ordinal;
  int i = 1;
  for (const auto& t : toks) {
    Token k;
    k.index = i++;
    k.surface = t.lemma;
    k.lemma = t.lemma;
    k.upos = t.upos;
    k.head = t.head;
    k.filtered = t.filtered;
    s.tokens.push_back(k);
  }
  return s;
}

Mention mention(int first, int last, std::string pid = "p1") {
  Mention m;
  m.pid = std::move(pid);
  m.span = {first, last};
  return m;
}

/// Random tree over n tokens: a random order where each token hangs under an earlier one.
Sentence random_sentence(Rng& rng, int n) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 1);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  std::vector<Tok> toks(static_cast<std::size_t>(n));
  static const std::vector<std::string> upos{"ADJ", "NOUN", "VERB", "AUX", "DET", "PROPN", "ADV"};
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto& t = toks[static_cast<std::size_t>(order[k] - 1)];
    t.head = k == 0 ? 0 : order[rng.below(k)];
    t.upos = upos[rng.below(upos.size())];
    t.lemma = "w" + std::to_string(order[k]);
    t.filtered = rng.below(8) == 0;
  }
  return make_sentence(toks);
}

/// All-pairs undirected distances by Floyd-Warshall.
std::vector<std::vector<int>> all_pairs(const Sentence& s) {
  const int n = static_cast<int>(s.size());
  const int inf = 1 << 20;
  std::vector<std::vector<int>> d(static_cast<std::size_t>(n + 1), std::vector<int>(static_cast<std::size_t>(n + 1), inf));
  for (int i = 1; i <= n; ++i) {
    d[i][i] = 0;
    const int h = s.at(i).head;
    if (h > 0) d[i][h] = d[h][i] = 1;
  }
  for (int k = 1; k <= n; ++k)
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

}  // namespace

TEST_CASE("tree distances") {
  SUBCASE("chain") {
    const auto s = make_sentence({{"a", "NOUN", 2}, {"b", "NOUN", 3}, {"c", "VERB", 0}});
    DependencyTree t(s);
    CHECK(t.distance(1, 3) == 2);
    CHECK(t.distance(3, 1) == 2);
    CHECK(t.roots() == std::vector<int>{3});
  }
  SUBCASE("star") {
    const auto s = make_sentence({{"r", "VERB", 0}, {"a", "NOUN", 1}, {"b", "NOUN", 1}, {"c", "NOUN", 1}});
    DependencyTree t(s);
    for (int i = 2; i <= 4; ++i)
      for (int j = 2; j <= 4; ++j)
        if (i != j) CHECK(t.distance(i, j) == 2);
  }
  SUBCASE("single token") {
    DependencyTree t(make_sentence({{"a", "VERB", 0}}));
    CHECK(t.size() == 1);
    CHECK(t.distance(1, 1) == 0);
  }
  SUBCASE("cycle") {
    CHECK_THROWS_AS(DependencyTree(make_sentence({{"a", "NOUN", 2}, {"b", "NOUN", 1}})), DomainError);
  }
  SUBCASE("random trees agree with all-pairs shortest paths") {
    Rng rng(11);
    for (int iter = 0; iter < 200; ++iter) {
      const auto s = random_sentence(rng, testing::uniform_int(rng, 1, 14));
      DependencyTree t(s);
      const auto d = all_pairs(s);
      for (int i = 1; i <= t.size(); ++i)
        for (int j = 1; j <= t.size(); ++j) REQUIRE(t.distance(i, j) == d[i][j]);
    }
  }
}

TEST_CASE("candidate words") {
  NeighborhoodOptions o;
  Token t;
  t.lemma = "bello";
  for (const char* u : {"ADJ", "NOUN", "VERB"}) {
    t.upos = u;
    CHECK(is_candidate(t, o));
  }
  for (const char* u : {"AUX", "PROPN", "DET", "ADV"}) {
    t.upos = u;
    CHECK_FALSE(is_candidate(t, o));
  }
  t.upos = "VERB";
  t.lemma = "dovere";
  CHECK_FALSE(is_candidate(t, o));
  t.lemma = "andare";
  t.filtered = true;
  CHECK_FALSE(is_candidate(t, o));
}

TEST_CASE("the mayor of Rome met the actress") {
  // The(1) mayor(2) of(3) Rome(4) met(5) the(6) actress(7) visiting(8) the(9) capital(10)
  const auto s = make_sentence({{"the", "DET", 2, true},
                                {"mayor", "NOUN", 5},
                                {"of", "ADP", 4, true},
                                {"rome", "PROPN", 2},
                                {"meet", "VERB", 0},
                                {"the", "DET", 7, true},
                                {"actress", "NOUN", 5},
                                {"visit", "VERB", 7},
                                {"the", "DET", 10, true},
                                {"capital", "NOUN", 8}});
  DependencyTree t(s);
  const auto m = mention(2, 4);
  NeighborhoodOptions o;
  o.radius = 1;
  CHECK(neighborhood(t, s, m, o) == std::vector<int>{5});
  o.radius = 2;
  CHECK(neighborhood(t, s, m, o) == std::vector<int>{5, 7});
}

TEST_CASE("neighborhood basics") {
  SUBCASE("mention spanning the sentence") {
    const auto s = make_sentence({{"anna", "PROPN", 0}, {"rossi", "PROPN", 1}});
    DependencyTree t(s);
    CHECK(neighborhood(t, s, mention(1, 2), {}).empty());
  }
  SUBCASE("adjective on the mention head at radius 1") {
    // sindaco(1) Rossi(2) elegante(3) parla(4)
    const auto s = make_sentence({{"sindaco", "NOUN", 4}, {"rossi", "PROPN", 1}, {"elegante", "ADJ", 1}, {"parlare", "VERB", 0}});
    DependencyTree t(s);
    NeighborhoodOptions o;
    o.radius = 1;
    CHECK(neighborhood(t, s, mention(1, 2), o) == std::vector<int>{3, 4});
    o.mode = NeighborhoodMode::children;
    CHECK(neighborhood(t, s, mention(1, 2), o) == std::vector<int>{3});
  }
  SUBCASE("tokens of other mentions are excluded") {
    const auto s = make_sentence({{"anna", "PROPN", 3}, {"bello", "ADJ", 1}, {"sindaco", "NOUN", 0}});
    DependencyTree t(s);
    const std::vector<TokenSpan> other{{3, 3}};
    CHECK(neighborhood(t, s, mention(1, 1), {}, other) == std::vector<int>{2});
  }
}

TEST_CASE("neighborhood is monotone in radius") {
  Rng rng(5);
  for (int iter = 0; iter < 300; ++iter) {
    const int n = testing::uniform_int(rng, 2, 16);
    const auto s = random_sentence(rng, n);
    DependencyTree t(s);
    const int first = testing::uniform_int(rng, 1, n);
    const int last = std::min(n, first + testing::uniform_int(rng, 0, 2));
    const auto m = mention(first, last);
    for (auto mode : {NeighborhoodMode::undirected, NeighborhoodMode::children}) {
      NeighborhoodOptions o;
      o.mode = mode;
      std::vector<int> prev;
      for (int r = 1; r <= 6; ++r) {
        o.radius = r;
        const auto cur = neighborhood(t, s, m, o);
        REQUIRE(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
        prev = cur;
      }
    }
  }
}

TEST_CASE("words go to the nearest mention, ties to both") {
  // anna(1) bella(2) incontra(3) marco(4) alto(5)
  const auto s = make_sentence({{"anna", "PROPN", 3}, {"bello", "ADJ", 1}, {"incontrare", "VERB", 0},
                                {"marco", "PROPN", 3}, {"alto", "ADJ", 4}});
  DependencyTree t(s);
  const std::vector<Mention> ms{mention(1, 1, "f"), mention(4, 4, "m")};
  const auto a = attribute_words(t, s, ms, {});
  REQUIRE(a.size() == 3);
  CHECK(a[0].token == 2);
  CHECK(a[0].mentions == std::vector<std::size_t>{0});
  CHECK(a[1].token == 3);
  CHECK(a[1].mentions == std::vector<std::size_t>{0, 1});
  CHECK(a[2].token == 5);
  CHECK(a[2].mentions == std::vector<std::size_t>{1});
}

namespace {

struct SmallWorld {
  Lexicon lexicon;
  PoliticianRegistry registry;
  std::vector<DocumentUnit> units;

  SmallWorld() {
    const auto dir = testing::fixture("small");
    lexicon = read_lexicon(dir / "lexicon.csv");
    registry = read_registry(dir / "registry.csv");
    CorpusBundle b;
    b.conllu = {dir / "corpus.conllu"};
    b.metadata = dir / "metadata.jsonl";
    b.stopwords = dir / "stopwords.txt";
    b.lemma_map = dir / "lemma_map.tsv";
    units = read_corpus(b);
  }
};

}  // namespace

TEST_CASE("extraction on the two-politician fixture") {
  SmallWorld w;
  EntityMatcher matcher(w.registry, RoleGazetteer::defaults());
  Extractor ex(matcher, w.lexicon);
  const auto r = extract(std::span<const DocumentUnit>(w.units), ex);

  CHECK(r.counts.total(Gender::F) == 5);
  CHECK(r.counts.total(Gender::M) == 5);
  CHECK(r.counts.personalization_total(Gender::F) == 2);
  CHECK(r.counts.personalization_total(Gender::M) == 3);
  CHECK(r.records.size() == 5);

  // "bello" twice in one neighborhood gives two records
  const auto bello_m = std::count_if(r.records.begin(), r.records.end(), [](const auto& x) {
    return x.lemma == "bello" && x.gender == Gender::M;
  });
  CHECK(bello_m == 2);
  for (const auto& rec : r.records) {
    const auto* e = w.lexicon.find(rec.lemma, rec.upos);
    REQUIRE(e != nullptr);
    CHECK(rec.category == e->category);
    CHECK(rec.aggregate_sentiment == e->aggregate);
  }

  const auto& d = r.descriptives;
  CHECK(d.mentions == 5);
  CHECK(d.pruned_sentences == 1);
  CHECK(d.contents[index_of(Dataset::coverage)][index_of(Gender::F)] == std::set<std::string>{"d1", "d2"});
  CHECK(d.contents[index_of(Dataset::coverage)][index_of(Gender::M)] == std::set<std::string>{"d1", "d3"});
  CHECK(d.neighbors_per_sentence[index_of(Gender::M)] == std::map<std::uint64_t, std::uint64_t>{{0, 1}, {2, 1}, {3, 1}});
  CHECK(d.sentences_per_politician[index_of(Gender::F)] == std::map<std::string, std::uint64_t>{{"p1", 2}});

  const auto obs = r.counts.contingency(false);
  CHECK(obs[index_of(SourceType::traditional)][index_of(Gender::F)] == 3);
  CHECK(obs[index_of(SourceType::online)][index_of(Gender::M)] == 3);
}

TEST_CASE("every record is also a coverage word") {
  SmallWorld w;
  EntityMatcher matcher(w.registry, RoleGazetteer::defaults());
  const auto r = extract(std::span<const DocumentUnit>(w.units), Extractor(matcher, w.lexicon));
  std::map<std::tuple<std::string, Gender, SourceType>, std::uint64_t> from_records;
  for (const auto& rec : r.records) ++from_records[{rec.lemma, rec.gender, rec.source_type}];
  for (const auto& [key, n] : from_records) {
    const auto& [lemma, g, src] = key;
    std::uint64_t cov = 0;
    for (const auto& [cell, c] : r.counts.cells())
      if (cell.word.lemma == lemma && cell.gender == g && cell.source_type == src) cov += c;
    CHECK(cov >= n);
  }
}

TEST_CASE("extraction does not depend on document order or worker count") {
  SmallWorld w;
  EntityMatcher matcher(w.registry, RoleGazetteer::defaults());
  Extractor ex(matcher, w.lexicon);
  const auto base = extract(std::span<const DocumentUnit>(w.units), ex, 1);

  auto reversed = w.units;
  std::reverse(reversed.begin(), reversed.end());
  const auto rev = extract(std::span<const DocumentUnit>(reversed), ex, 1);
  CHECK(rev.counts == base.counts);
  CHECK(rev.daily == base.daily);
  CHECK(rev.descriptives == base.descriptives);
  auto sorted = [](std::vector<PersonalizationRecord> v) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
      return std::tie(a.doc_id, a.sentence, a.token, a.pid) < std::tie(b.doc_id, b.sentence, b.token, b.pid);
    });
    return v;
  };
  CHECK(sorted(rev.records) == sorted(base.records));

  for (unsigned workers : {2u, 3u, 8u}) {
    const auto par = extract(std::span<const DocumentUnit>(w.units), ex, workers);
    CHECK(par.counts == base.counts);
    CHECK(par.records == base.records);
    CHECK(par.descriptives == base.descriptives);
  }
}

TEST_CASE("records and descriptives round-trip through their files") {
  SmallWorld w;
  EntityMatcher matcher(w.registry, RoleGazetteer::defaults());
  const auto r = extract(std::span<const DocumentUnit>(w.units), Extractor(matcher, w.lexicon));
  testing::TempDir dir("rt");
  write_records_jsonl(dir / "r.jsonl", r.records);
  CHECK(read_records_jsonl(dir / "r.jsonl") == r.records);
  r.descriptives.write_json(dir / "d.json");
  CHECK(Descriptives::read_json(dir / "d.json") == r.descriptives);
}
