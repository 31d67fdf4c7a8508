#include "polcov/syntax.hpp"

#include <algorithm>
#include <deque>
#include <exception>
#include <fstream>
#include <thread>

#include "json.hpp"
#include "polcov/error.hpp"

namespace polcov {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

DependencyTree::DependencyTree(const Sentence& sentence) {
  const int n = static_cast<int>(sentence.size());
  heads_.assign(static_cast<std::size_t>(n) + 1, 0);
  children_.assign(static_cast<std::size_t>(n) + 1, {});
  for (int i = 1; i <= n; ++i) {
    const int h = sentence.at(i).head;
    if (h < 0 || h > n || h == i)
      throw DomainError("sentence " + sentence.sent_id + ": token " + std::to_string(i) +
                        " has invalid head " + std::to_string(h));
    heads_[static_cast<std::size_t>(i)] = h;
    if (h == 0)
      roots_.push_back(i);
    else
      children_[static_cast<std::size_t>(h)].push_back(i);
  }
  for (int i = 1; i <= n; ++i) {
    int cur = i;
    for (int steps = 0; cur != 0; ++steps) {
      if (steps > n) throw DomainError("sentence " + sentence.sent_id + ": cyclic head chain");
      cur = heads_[static_cast<std::size_t>(cur)];
    }
  }
}

std::vector<int> DependencyTree::distances_from(std::span<const int> sources, bool children_only,
                                                int limit) const {
  std::vector<int> dist(heads_.size(), -1);
  std::deque<int> queue;
  for (int s : sources) {
    if (s < 1 || s > size()) continue;
    if (dist[static_cast<std::size_t>(s)] == 0) continue;
    dist[static_cast<std::size_t>(s)] = 0;
    queue.push_back(s);
  }
  auto visit = [&](int v, int d) {
    if (dist[static_cast<std::size_t>(v)] >= 0) return;
    dist[static_cast<std::size_t>(v)] = d;
    queue.push_back(v);
  };
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    const int d = dist[static_cast<std::size_t>(u)];
    if (d >= limit) continue;
    for (int c : children_[static_cast<std::size_t>(u)]) visit(c, d + 1);
    if (!children_only && heads_[static_cast<std::size_t>(u)] != 0)
      visit(heads_[static_cast<std::size_t>(u)], d + 1);
  }
  return dist;
}

std::optional<int> DependencyTree::distance(int a, int b) const {
  if (a < 1 || a > size() || b < 1 || b > size()) throw DomainError("token index out of range");
  const int src[] = {a};
  const auto d = distances_from(src, false, size())[static_cast<std::size_t>(b)];
  if (d < 0) return std::nullopt;
  return d;
}

std::string_view to_string(NeighborhoodMode m) {
  return m == NeighborhoodMode::undirected ? "undirected" : "children";
}

std::optional<NeighborhoodMode> parse_neighborhood_mode(std::string_view s) {
  if (s == "undirected") return NeighborhoodMode::undirected;
  if (s == "children") return NeighborhoodMode::children;
  return std::nullopt;
}

bool is_candidate(const Token& token, const NeighborhoodOptions& options) {
  if (token.filtered) return false;
  if (token.upos == "ADJ" || token.upos == "NOUN") return true;
  if (token.upos == "VERB") return !options.modal_lemmas.contains(token.lemma);
  return false;
}

namespace {

std::vector<int> span_tokens(const TokenSpan& span) {
  std::vector<int> v;
  for (int i = span.first; i <= span.last; ++i) v.push_back(i);
  return v;
}

bool inside_any(int i, std::span<const TokenSpan> spans) {
  return std::any_of(spans.begin(), spans.end(), [i](const TokenSpan& s) { return s.contains(i); });
}

}  // namespace

std::vector<int> neighborhood(const DependencyTree& tree, const Sentence& sentence,
                              const Mention& mention, const NeighborhoodOptions& options,
                              std::span<const TokenSpan> excluded) {
  if (options.radius < 1) throw DomainError("neighborhood radius must be at least 1");
  const auto sources = span_tokens(mention.span);
  const auto dist =
      tree.distances_from(sources, options.mode == NeighborhoodMode::children, options.radius);
  std::vector<int> out;
  for (int i = 1; i <= tree.size(); ++i) {
    if (dist[static_cast<std::size_t>(i)] < 0 || mention.span.contains(i)) continue;
    if (inside_any(i, excluded)) continue;
    if (is_candidate(sentence.at(i), options)) out.push_back(i);
  }
  return out;
}

std::vector<Attribution> attribute_words(const DependencyTree& tree, const Sentence& sentence,
                                         std::span<const Mention> mentions,
                                         const NeighborhoodOptions& options) {
  if (options.radius < 1) throw DomainError("neighborhood radius must be at least 1");
  std::vector<TokenSpan> spans;
  std::vector<std::vector<int>> dist;
  for (const auto& m : mentions) {
    spans.push_back(m.span);
    dist.push_back(tree.distances_from(span_tokens(m.span), options.mode == NeighborhoodMode::children,
                                       options.radius));
  }
  std::vector<Attribution> out;
  for (int i = 1; i <= tree.size(); ++i) {
    if (inside_any(i, spans) || !is_candidate(sentence.at(i), options)) continue;
    int best = -1;
    for (const auto& d : dist) {
      const int v = d[static_cast<std::size_t>(i)];
      if (v >= 0 && (best < 0 || v < best)) best = v;
    }
    if (best < 0) continue;
    Attribution a{i, {}};
    for (std::size_t k = 0; k < dist.size(); ++k)
      if (dist[k][static_cast<std::size_t>(i)] == best) a.mentions.push_back(k);
    out.push_back(std::move(a));
  }
  return out;
}

// ---------------------------------------------------------------------------
// records

void write_records_jsonl(const fs::path& path, std::span<const PersonalizationRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& r : records) {
    ojson j;
    j["pid"] = r.pid;
    j["gender"] = to_string(r.gender);
    j["doc_id"] = r.doc_id;
    j["date"] = r.date.iso();
    j["source_type"] = to_string(r.source_type);
    j["lemma"] = r.lemma;
    j["upos"] = r.upos;
    j["category"] = to_string(r.category);
    j["aggregate_sentiment"] = r.aggregate_sentiment.value();
    j["sent_id"] = r.sent_id;
    j["sentence"] = r.sentence;
    j["token"] = r.token;
    out << j.dump() << '\n';
  }
}

std::vector<PersonalizationRecord> read_records_jsonl(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<PersonalizationRecord> records;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (line.empty()) continue;
    try {
      const auto j = json::parse(line);
      PersonalizationRecord r;
      r.pid = j.at("pid").get<std::string>();
      const auto g = parse_gender(j.at("gender").get<std::string>());
      const auto d = Date::parse(j.at("date").get<std::string>());
      const auto s = parse_source_type(j.at("source_type").get<std::string>());
      const auto c = parse_category(j.at("category").get<std::string>());
      if (!g || !d || !s || !c) throw ParseError(path.string(), no, "invalid enum or date field");
      r.gender = *g;
      r.date = *d;
      r.source_type = *s;
      r.category = *c;
      r.doc_id = j.at("doc_id").get<std::string>();
      r.lemma = j.at("lemma").get<std::string>();
      r.upos = j.at("upos").get<std::string>();
      r.aggregate_sentiment = SentimentScore::from_value(j.at("aggregate_sentiment").get<double>());
      r.sent_id = j.at("sent_id").get<std::string>();
      r.sentence = j.at("sentence").get<std::size_t>();
      r.token = j.at("token").get<int>();
      records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ParseError(path.string(), no, std::string("invalid record: ") + e.what());
    }
  }
  return records;
}

// ---------------------------------------------------------------------------
// descriptives

std::string_view to_string(Dataset d) { return d == Dataset::coverage ? "coverage" : "personalization"; }

void Descriptives::merge(const Descriptives& other) {
  for (std::size_t d = 0; d < 2; ++d)
    for (std::size_t g = 0; g < 2; ++g) {
      contents[d][g].insert(other.contents[d][g].begin(), other.contents[d][g].end());
      sentences[d][g].insert(other.sentences[d][g].begin(), other.sentences[d][g].end());
    }
  for (std::size_t g = 0; g < 2; ++g) {
    for (const auto& [k, v] : other.neighbors_per_sentence[g]) neighbors_per_sentence[g][k] += v;
    for (const auto& [k, v] : other.sentences_per_politician[g]) sentences_per_politician[g][k] += v;
  }
  mentions += other.mentions;
  pruned_sentences += other.pruned_sentences;
}

void Descriptives::write_json(const fs::path& path) const {
  ojson j;
  j["mentions"] = mentions;
  j["pruned_sentences"] = pruned_sentences;
  for (auto d : kDatasets) {
    auto& dj = j["datasets"][std::string(to_string(d))];
    for (auto g : kGenders) {
      auto& gj = dj[std::string(to_string(g))];
      gj["contents"] = contents[index_of(d)][index_of(g)];
      gj["sentences"] = sentences[index_of(d)][index_of(g)];
    }
  }
  for (auto g : kGenders) {
    auto& nj = j["neighbors_per_sentence"][std::string(to_string(g))];
    nj = ojson::array();
    for (const auto& [k, v] : neighbors_per_sentence[index_of(g)]) nj.push_back({k, v});
    auto& pj = j["sentences_per_politician"][std::string(to_string(g))];
    pj = ojson::object();
    for (const auto& [k, v] : sentences_per_politician[index_of(g)]) pj[k] = v;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(1) << '\n';
}

Descriptives Descriptives::read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  Descriptives out;
  try {
    const auto j = json::parse(in);
    out.mentions = j.at("mentions").get<std::size_t>();
    out.pruned_sentences = j.at("pruned_sentences").get<std::size_t>();
    for (auto d : kDatasets)
      for (auto g : kGenders) {
        const auto& gj = j.at("datasets").at(std::string(to_string(d))).at(std::string(to_string(g)));
        out.contents[index_of(d)][index_of(g)] = gj.at("contents").get<std::set<std::string>>();
        out.sentences[index_of(d)][index_of(g)] = gj.at("sentences").get<std::set<std::string>>();
      }
    for (auto g : kGenders) {
      for (const auto& kv : j.at("neighbors_per_sentence").at(std::string(to_string(g))))
        out.neighbors_per_sentence[index_of(g)][kv.at(0).get<std::uint64_t>()] = kv.at(1).get<std::uint64_t>();
      for (const auto& [k, v] : j.at("sentences_per_politician").at(std::string(to_string(g))).items())
        out.sentences_per_politician[index_of(g)][k] = v.get<std::uint64_t>();
    }
  } catch (const json::exception& e) {
    throw ParseError(path.string(), 0, std::string("invalid descriptives: ") + e.what());
  }
  return out;
}

// ---------------------------------------------------------------------------
// extraction

void ExtractionResult::merge(ExtractionResult&& other) {
  counts.merge(other.counts);
  daily.merge(other.daily);
  descriptives.merge(other.descriptives);
  records.insert(records.end(), std::make_move_iterator(other.records.begin()),
                 std::make_move_iterator(other.records.end()));
  match.ambiguous_role += other.match.ambiguous_role;
  match.ambiguous_name += other.match.ambiguous_name;
}

Extractor::Extractor(const EntityMatcher& matcher, const Lexicon& lexicon, NeighborhoodOptions options)
    : matcher_(matcher), lexicon_(lexicon), options_(std::move(options)) {
  if (options_.radius < 1) throw DomainError("neighborhood radius must be at least 1");
}

void Extractor::process(const DocumentUnit& unit, ExtractionResult& out) const {
  const auto& doc = unit.document;
  const auto& registry = matcher_.registry();
  for (const auto& sentence : unit.sentences) {
    const auto mentions = matcher_.find_mentions(sentence, doc, &out.match);
    if (mentions.empty()) continue;
    const DependencyTree tree(sentence);
    const auto words = attribute_words(tree, sentence, mentions, options_);

    std::vector<Gender> gender_of(mentions.size());
    std::array<bool, 2> mentioned{};
    for (std::size_t k = 0; k < mentions.size(); ++k) {
      const auto* p = registry.find_pid(mentions[k].pid);
      if (!p) throw ValidationError("mention of unknown politician " + mentions[k].pid);
      gender_of[k] = p->gender;
      mentioned[index_of(p->gender)] = true;
    }
    out.descriptives.mentions += mentions.size();

    std::array<std::uint64_t, 2> word_count{};
    std::array<bool, 2> personalized{};
    std::map<std::string, Gender> speaking;  // politicians with >= 1 word here
    for (const auto& a : words) {
      const auto& tok = sentence.at(a.token);
      const WordKey key{tok.lemma, tok.upos};
      const auto* entry = lexicon_.find(tok.lemma, tok.upos);
      std::set<std::string> pids;
      for (auto k : a.mentions) {
        if (!pids.insert(mentions[k].pid).second) continue;
        const Gender g = gender_of[k];
        const auto gi = index_of(g);
        speaking.emplace(mentions[k].pid, g);
        ++word_count[gi];
        out.counts.add(key, g, entry ? std::optional(entry->category) : std::nullopt, doc.source_type,
                       mentions[k].pid);
        out.daily.add_coverage(doc.date, g);
        if (!entry) continue;
        personalized[gi] = true;
        out.daily.add_personalization(doc.date, g, entry->category);
        out.records.push_back({mentions[k].pid, g, doc.doc_id, doc.date, doc.source_type, tok.lemma,
                               tok.upos, entry->category, entry->aggregate, sentence.sent_id,
                               sentence.ordinal, a.token});
      }
    }

    const std::string sentence_key = doc.doc_id + "#" + std::to_string(sentence.ordinal);
    for (auto g : kGenders) {
      const auto gi = index_of(g);
      if (!mentioned[gi]) continue;
      ++out.descriptives.neighbors_per_sentence[gi][word_count[gi]];
      if (word_count[gi] > 0) {
        out.descriptives.contents[index_of(Dataset::coverage)][gi].insert(doc.doc_id);
        out.descriptives.sentences[index_of(Dataset::coverage)][gi].insert(sentence_key);
      }
      if (personalized[gi]) {
        out.descriptives.contents[index_of(Dataset::personalization)][gi].insert(doc.doc_id);
        out.descriptives.sentences[index_of(Dataset::personalization)][gi].insert(sentence_key);
      }
    }
    for (const auto& [pid, g] : speaking) ++out.descriptives.sentences_per_politician[index_of(g)][pid];
    if (words.empty()) ++out.descriptives.pruned_sentences;
  }
}

ExtractionResult extract(std::span<const DocumentUnit> units, const Extractor& extractor,
                         unsigned workers) {
  ExtractionResult total;
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, units.size()))));
  if (workers == 1) {
    for (const auto& u : units) extractor.process(u, total);
    return total;
  }
  std::vector<ExtractionResult> parts(workers);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  const std::size_t chunk = (units.size() + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        const std::size_t lo = std::min(units.size(), w * chunk);
        const std::size_t hi = std::min(units.size(), lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) extractor.process(units[i], parts[w]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (auto& p : parts) total.merge(std::move(p));
  return total;
}

ExtractionResult extract(CorpusReader& reader, const Extractor& extractor, unsigned workers,
                         std::size_t batch) {
  ExtractionResult total;
  std::vector<DocumentUnit> units;
  units.reserve(batch);
  for (;;) {
    units.clear();
    while (units.size() < std::max<std::size_t>(1, batch)) {
      auto u = reader.next();
      if (!u) break;
      units.push_back(std::move(*u));
    }
    if (units.empty()) break;
    total.merge(extract(units, extractor, workers));
  }
  return total;
}

}  // namespace polcov
