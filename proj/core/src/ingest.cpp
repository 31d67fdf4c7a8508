#include "polcov/ingest.hpp"

#include <algorithm>
#include <charconv>

#include "json.hpp"
#include "polcov/error.hpp"
#include "polcov/text.hpp"

namespace polcov {
namespace {

using json = nlohmann::json;

std::ifstream open_or_throw(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

/// Calls fn(line_number, line) for every line, BOM and trailing CR stripped.
template <typename Fn>
void for_each_line(const fs::path& path, Fn&& fn) {
  auto in = open_or_throw(path);
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    std::string_view view = line;
    if (no == 1) view = text::strip_bom(view);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    fn(no, view);
  }
}

std::optional<int> parse_int(std::string_view s) {
  s = text::trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string joined(const std::vector<std::string>& tokens) { return text::join(tokens, " "); }

}  // namespace

Stopwords read_stopwords(const fs::path& path) {
  Stopwords out;
  for_each_line(path, [&](std::size_t, std::string_view line) {
    line = text::trim(line);
    if (line.empty() || line.front() == '#') return;
    if (auto norm = normalize_lemma(line)) out.insert(*norm);
  });
  return out;
}

LemmaMap read_lemma_map(const fs::path& path) {
  LemmaMap out;
  for_each_line(path, [&](std::size_t no, std::string_view line) {
    if (text::trim(line).empty() || line.front() == '#') return;
    auto cols = text::split_ws(line);
    if (cols.size() != 2) throw ParseError(path.string(), no, "expected 'surface<TAB>lemma'");
    auto surface = normalize_lemma(cols[0]);
    auto lemma = normalize_lemma(cols[1]);
    if (!surface || !lemma) throw ParseError(path.string(), no, "non-lexical lemma map entry");
    out[*surface] = *lemma;
  });
  return out;
}

MetadataIndex read_metadata(const fs::path& path) {
  MetadataIndex out;
  for_each_line(path, [&](std::size_t no, std::string_view line) {
    if (text::trim(line).empty()) return;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(path.string(), no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object() || !obj.contains("doc_id") || !obj["doc_id"].is_string())
      throw ParseError(path.string(), no, "metadata row without string doc_id");
    Document doc;
    doc.doc_id = obj["doc_id"].get<std::string>();
    auto field = [&](const char* name) -> std::string {
      if (!obj.contains(name) || !obj[name].is_string())
        throw ValidationError("metadata for doc_id '" + doc.doc_id + "' is missing \"" + name + "\"");
      return obj[name].get<std::string>();
    };
    const auto date = Date::parse(field("date"));
    if (!date) throw ValidationError("metadata for doc_id '" + doc.doc_id + "' has invalid date");
    doc.date = *date;
    doc.source_id = field("source_id");
    const auto st = parse_source_type(field("source_type"));
    if (!st)
      throw ValidationError("metadata for doc_id '" + doc.doc_id + "' has unknown source_type");
    doc.source_type = *st;
    if (!out.emplace(doc.doc_id, doc).second)
      throw ValidationError("duplicate doc_id in metadata: " + doc.doc_id);
  });
  return out;
}

Lexicon read_lexicon(const fs::path& path) {
  Lexicon lex;
  for_each_line(path, [&](std::size_t no, std::string_view line) {
    if (text::trim(line).empty() || line.front() == '#') return;
    auto cols = text::split(line, ',');
    if (no == 1 && text::trim(cols[0]) == "lemma") return;  // header
    if (cols.size() != 3 + kAnnotators)
      throw ParseError(path.string(), no, "expected lemma,upos,category,s1..s5");
    LexiconEntry e;
    auto lemma = normalize_lemma(cols[0]);
    if (!lemma) throw ParseError(path.string(), no, "empty lemma");
    e.lemma = *lemma;
    e.upos = std::string(text::trim(cols[1]));
    if (e.upos.empty()) throw ParseError(path.string(), no, "empty upos");
    const auto cat = parse_category(text::trim(cols[2]));
    if (!cat)
      throw ValidationError(path.string() + ":" + std::to_string(no) + ": unknown category '" +
                            std::string(text::trim(cols[2])) + "'");
    e.category = *cat;
    for (std::size_t i = 0; i < kAnnotators; ++i) {
      const auto v = parse_int(cols[3 + i]);
      if (!v || *v < -1 || *v > 1)
        throw ValidationError(path.string() + ":" + std::to_string(no) +
                              ": score outside {-1,0,1}: '" + std::string(cols[3 + i]) + "'");
      e.scores[i] = *v;
    }
    e.aggregate = aggregate_score(e.scores);
    e.sentiment = classify(e.aggregate);
    lex.add(std::move(e));
  });
  return lex;
}

void check_lexicon_against_stopwords(const Lexicon& lexicon, const Stopwords& stopwords) {
  for (const auto& [key, e] : lexicon)
    if (stopwords.contains(e.lemma))
      throw ValidationError("lexicon lemma '" + e.lemma + "' is also a stopword");
}

AnnotationMatrix read_annotation_matrix(const fs::path& path) {
  AnnotationMatrix m;
  for_each_line(path, [&](std::size_t no, std::string_view line) {
    if (text::trim(line).empty() || line.front() == '#') return;
    auto cols = text::split(line, ',');
    if (no == 1 && text::trim(cols[0]) == "lemma") return;
    if (cols.size() < 4) throw ParseError(path.string(), no, "expected lemma,upos,a1..ak");
    m.unit_ids.push_back(std::string(text::trim(cols[0])) + "," + std::string(text::trim(cols[1])));
    std::vector<std::optional<int>> row;
    for (std::size_t i = 2; i < cols.size(); ++i) {
      if (text::trim(cols[i]).empty()) {
        row.emplace_back();
        continue;
      }
      const auto v = parse_int(cols[i]);
      if (!v) throw ParseError(path.string(), no, "non-integer rating '" + std::string(cols[i]) + "'");
      row.emplace_back(*v);
    }
    m.ratings.push_back(std::move(row));
  });
  return m;
}

// ---------------------------------------------------------------------------
// Registry

PoliticianRegistry::PoliticianRegistry(std::vector<Politician> politicians)
    : politicians_(std::move(politicians)) {
  std::set<std::vector<std::string>> surname_set, jur_set;
  for (std::size_t i = 0; i < politicians_.size(); ++i) {
    const auto& p = politicians_[i];
    if (!pid_index_.emplace(p.pid, i).second)
      throw ValidationError("duplicate politician pid: " + p.pid);
    auto given = text::normalize_phrase(p.given_name);
    auto surname = text::normalize_phrase(p.surname);
    if (surname.empty()) throw ValidationError("politician " + p.pid + " has empty surname");
    auto full = given;
    full.insert(full.end(), surname.begin(), surname.end());
    full_names_.emplace_back(full, i);
    for (const auto& alias : p.aliases) {
      auto a = text::normalize_phrase(alias);
      if (!a.empty()) full_names_.emplace_back(std::move(a), i);
    }
    surname_index_[joined(surname)].push_back(i);
    surname_set.insert(surname);
    for (const auto& r : p.roles) {
      if (r.keyword.empty()) throw ValidationError("politician " + p.pid + " has a role without keyword");
      role_index_[{r.keyword, joined(r.jurisdiction)}].emplace_back(i, r.tenure);
      if (!r.jurisdiction.empty()) jur_set.insert(r.jurisdiction);
    }
  }
  std::sort(full_names_.begin(), full_names_.end());
  full_names_.erase(std::unique(full_names_.begin(), full_names_.end()), full_names_.end());
  surnames_.assign(surname_set.begin(), surname_set.end());
  jurisdictions_.assign(jur_set.begin(), jur_set.end());

  for (const auto& [key, holders] : role_index_) {
    if (key.second.empty()) continue;  // role without jurisdiction cannot drive specific_role
    for (std::size_t a = 0; a < holders.size(); ++a) {
      for (std::size_t b = a + 1; b < holders.size(); ++b) {
        if (holders[a].first == holders[b].first) continue;
        if (holders[a].second.overlaps(holders[b].second))
          throw ValidationError("ambiguous role " + key.first + ":" + key.second + " held by " +
                                politicians_[holders[a].first].pid + " and " +
                                politicians_[holders[b].first].pid + " with overlapping tenure");
      }
    }
  }
}

const Politician* PoliticianRegistry::find_pid(std::string_view pid) const {
  auto it = pid_index_.find(pid);
  return it == pid_index_.end() ? nullptr : &politicians_[it->second];
}

const std::vector<std::size_t>* PoliticianRegistry::by_surname(const std::string& s) const {
  auto it = surname_index_.find(s);
  return it == surname_index_.end() ? nullptr : &it->second;
}

PoliticianRegistry::Lookup PoliticianRegistry::resolve_role(
    std::string_view keyword, const std::vector<std::string>& jurisdiction, Date date) const {
  auto it = role_index_.find({std::string(keyword), joined(jurisdiction)});
  if (it == role_index_.end()) return {};
  Lookup out;
  for (const auto& [idx, tenure] : it->second) {
    if (!tenure.covers(date)) continue;
    if (out.status == Resolution::unique && out.index != idx) return {Resolution::ambiguous, 0};
    out = {Resolution::unique, idx};
  }
  return out;
}

PoliticianRegistry read_registry(const fs::path& path) {
  static const std::vector<std::string> kPositional{"pid",   "given_name", "surname", "gender",
                                                    "roles", "aliases",    "tenure"};
  std::vector<std::string> columns = kPositional;
  std::vector<Politician> out;
  for_each_line(path, [&](std::size_t no, std::string_view line) {
    if (text::trim(line).empty() || line.front() == '#') return;
    auto cols = text::split(line, ';');
    if (out.empty() && no == 1) {
      bool header = false;
      for (auto c : cols) header |= text::trim(c) == "surname";
      if (header) {
        columns.clear();
        for (auto c : cols) columns.emplace_back(text::trim(c));
        return;
      }
    }
    if (cols.size() > columns.size()) throw ParseError(path.string(), no, "too many registry columns");
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < cols.size(); ++i) row[columns[i]] = std::string(text::trim(cols[i]));

    Politician p;
    p.given_name = row["given_name"];
    p.surname = row["surname"];
    if (p.surname.empty()) throw ParseError(path.string(), no, "empty surname");
    const auto g = parse_gender(row["gender"]);
    if (!g) throw ParseError(path.string(), no, "gender must be F or M");
    p.gender = *g;
    p.pid = row["pid"];
    if (p.pid.empty()) {
      auto parts = text::normalize_phrase(p.given_name + " " + p.surname);
      p.pid = text::join(parts, "_");
    }
    if (!row["roles"].empty()) {
      for (auto r : text::split(row["roles"], ',')) {
        r = text::trim(r);
        if (r.empty()) continue;
        const auto colon = r.find(':');
        Role role;
        const auto kw = normalize_lemma(r.substr(0, colon));
        if (!kw) throw ParseError(path.string(), no, "role without keyword");
        role.keyword = *kw;
        if (colon != std::string_view::npos) role.jurisdiction = text::normalize_phrase(r.substr(colon + 1));
        p.roles.push_back(std::move(role));
      }
    }
    if (!row["aliases"].empty()) {
      for (auto a : text::split(row["aliases"], ',')) {
        a = text::trim(a);
        if (!a.empty()) p.aliases.emplace_back(a);
      }
    }
    if (!row["tenure"].empty()) {
      auto spans = text::split(row["tenure"], ',');
      if (spans.size() != p.roles.size())
        throw ParseError(path.string(), no, "tenure entries must align with roles");
      for (std::size_t i = 0; i < spans.size(); ++i) {
        auto s = text::trim(spans[i]);
        if (s.empty()) continue;
        const auto slash = s.find('/');
        if (slash == std::string_view::npos) throw ParseError(path.string(), no, "tenure must be from/to");
        auto parse_end = [&](std::string_view v) -> std::optional<Date> {
          v = text::trim(v);
          if (v.empty()) return std::nullopt;
          auto d = Date::parse(v);
          if (!d) throw ParseError(path.string(), no, "invalid tenure date '" + std::string(v) + "'");
          return d;
        };
        p.roles[i].tenure.from = parse_end(s.substr(0, slash));
        p.roles[i].tenure.to = parse_end(s.substr(slash + 1));
      }
    }
    out.push_back(std::move(p));
  });
  return PoliticianRegistry(std::move(out));
}

// ---------------------------------------------------------------------------
// CoNLL-U

bool heads_acyclic(const std::vector<Token>& tokens) {
  const auto n = tokens.size();
  // 0 = unvisited, 1 = on current path, 2 = reaches root
  std::vector<unsigned char> state(n + 1, 0);
  state[0] = 2;
  for (std::size_t start = 1; start <= n; ++start) {
    std::vector<std::size_t> path;
    std::size_t cur = start;
    while (state[cur] == 0) {
      state[cur] = 1;
      path.push_back(cur);
      const int h = tokens[cur - 1].head;
      if (h < 0 || static_cast<std::size_t>(h) > n) return false;
      cur = static_cast<std::size_t>(h);
    }
    if (state[cur] == 1) return false;
    for (auto p : path) state[p] = 2;
  }
  return true;
}

CorpusReader::CorpusReader(std::vector<fs::path> files, const MetadataIndex& metadata,
                           const Stopwords& stopwords, const LemmaMap* lemma_map,
                           IngestOptions options)
    : files_(std::move(files)),
      metadata_(metadata),
      stopwords_(stopwords),
      lemma_map_(lemma_map),
      options_(options) {}

bool CorpusReader::open_next_file() {
  if (file_idx_ >= files_.size()) return false;
  in_ = open_or_throw(files_[file_idx_]);
  current_file_ = files_[file_idx_].string();
  ++file_idx_;
  line_no_ = 0;
  return true;
}

bool CorpusReader::read_line(std::string& line) {
  for (;;) {
    if (in_.is_open() && std::getline(in_, line)) {
      ++line_no_;
      if (line_no_ == 1) line = std::string(text::strip_bom(line));
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return true;
    }
    if (in_.is_open()) {
      in_.close();
      // a file boundary also ends an unterminated sentence
      line.clear();
      ++line_no_;
      return true;
    }
    if (!open_next_file()) return false;
  }
}

Token CorpusReader::make_token(const std::vector<std::string_view>& cols) {
  Token t;
  const auto id = [&](std::string_view s, const char* what) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw ParseError(current_file_, line_no_, std::string("invalid ") + what + " '" + std::string(s) + "'");
    return v;
  };
  t.index = id(cols[0], "ID");
  t.surface = std::string(cols[1]);
  t.upos = std::string(cols[3]);
  t.head = id(cols[6], "HEAD");
  t.deprel = std::string(cols[7]);
  if (t.index < 1) throw ParseError(current_file_, line_no_, "token ID must be >= 1");
  if (t.head < 0) throw ParseError(current_file_, line_no_, "HEAD must be >= 0");
  if (t.head == t.index) throw ParseError(current_file_, line_no_, "token is its own head");

  const auto norm_surface = normalize_lemma(t.surface);
  std::optional<std::string> lemma;
  if (lemma_map_ && norm_surface) {
    if (auto it = lemma_map_->find(*norm_surface); it != lemma_map_->end()) lemma = it->second;
  }
  if (!lemma) lemma = cols[2] == "_" ? norm_surface : normalize_lemma(cols[2]);

  bool filtered = false;
  if (lemma) {
    t.lemma = *lemma;
  } else {
    t.lemma = std::string(cols[2]);
    filtered = true;  // non-lexical token
  }
  filtered = filtered || t.upos == "PUNCT" || t.upos == "SYM" || t.upos == "NUM" ||
             text::is_numeric(t.surface) || !text::has_letter(t.surface) ||
             text::looks_like_url(t.surface) || stopwords_.contains(t.lemma) ||
             (norm_surface && stopwords_.contains(*norm_surface));
  t.filtered = filtered;
  return t;
}

void CorpusReader::start_document(const std::string& doc_id) {
  if (!seen_docs_.insert(doc_id).second)
    throw ParseError(current_file_, line_no_, "duplicate document id '" + doc_id + "'");
  if (pending_) ready_ = std::move(pending_);
  pending_.reset();
  auto it = metadata_.find(doc_id);
  if (it == metadata_.end())
    throw ParseError(current_file_, line_no_, "unknown doc_id '" + doc_id + "' (not in metadata)");
  const Date d = it->second.date;
  skip_current_doc_ = (options_.window_from && d < *options_.window_from) ||
                      (options_.window_to && d > *options_.window_to);
  if (skip_current_doc_) {
    ++diag_.skipped_out_of_window;
    return;
  }
  pending_ = DocumentUnit{it->second, {}};
}

void CorpusReader::finish_sentence() {
  if (sent_tokens_.empty()) return;
  std::vector<Token> tokens = std::move(sent_tokens_);
  sent_tokens_.clear();
  const std::string where = current_file_ + ":" + std::to_string(sent_start_line_);
  if (seen_docs_.empty()) throw ParseError(current_file_, sent_start_line_, "sentence before '# newdoc id'");
  if (sent_id_.empty()) throw ParseError(current_file_, sent_start_line_, "sentence without '# sent_id'");
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].index != static_cast<int>(i + 1))
      throw ParseError(current_file_, sent_start_line_, "token IDs must be consecutive from 1");
    if (tokens[i].head > static_cast<int>(tokens.size()))
      throw ParseError(current_file_, sent_start_line_,
                       "HEAD " + std::to_string(tokens[i].head) + " references a missing token");
  }
  std::string sid = std::move(sent_id_);
  sent_id_.clear();
  if (skip_current_doc_ || !pending_) return;
  if (!heads_acyclic(tokens)) {
    diag_.rejected_sentences.push_back(where + ": cyclic head chain in sentence " + sid);
    return;
  }
  Sentence s;
  s.doc_id = pending_->document.doc_id;
  s.sent_id = std::move(sid);
  s.ordinal = pending_->sentences.size();
  s.tokens = std::move(tokens);
  ++diag_.sentences;
  diag_.tokens += s.tokens.size();
  pending_->sentences.push_back(std::move(s));
}

std::optional<DocumentUnit> CorpusReader::next() {
  std::string line;
  while (!ready_ && !done_) {
    if (!read_line(line)) {
      finish_sentence();
      done_ = true;
      if (pending_) ready_ = std::move(pending_);
      pending_.reset();
      break;
    }
    if (line.empty()) {
      finish_sentence();
      continue;
    }
    if (line.front() == '#') {
      std::string_view body = text::trim(std::string_view(line).substr(1));
      auto value_of = [&](std::string_view key) -> std::optional<std::string> {
        if (!body.starts_with(key)) return std::nullopt;
        auto rest = text::trim(body.substr(key.size()));
        if (rest.empty() || rest.front() != '=') return std::nullopt;
        return std::string(text::trim(rest.substr(1)));
      };
      if (auto doc = value_of("newdoc id")) {
        finish_sentence();
        start_document(*doc);
      } else if (auto sid = value_of("sent_id")) {
        if (sent_tokens_.empty()) sent_id_ = *sid;
      }
      continue;
    }
    auto cols = text::split(line, '\t');
    if (cols.size() != 10)
      throw ParseError(current_file_, line_no_,
                       "expected 10 tab-separated columns, got " + std::to_string(cols.size()));
    // multiword token ranges and empty nodes are not part of the basic tree
    if (cols[0].find_first_of("-.") != std::string_view::npos) continue;
    if (sent_tokens_.empty()) sent_start_line_ = line_no_;
    sent_tokens_.push_back(make_token(cols));
  }
  if (!ready_) return std::nullopt;
  std::optional<DocumentUnit> out = std::move(ready_);
  ready_.reset();
  ++diag_.documents;
  return out;
}

std::vector<DocumentUnit> read_corpus(const CorpusBundle& bundle, IngestOptions options,
                                      IngestDiagnostics* diagnostics) {
  const auto metadata = read_metadata(bundle.metadata);
  const auto stopwords = read_stopwords(bundle.stopwords);
  std::optional<LemmaMap> lemma_map;
  if (bundle.lemma_map) lemma_map = read_lemma_map(*bundle.lemma_map);
  CorpusReader reader(bundle.conllu, metadata, stopwords, lemma_map ? &*lemma_map : nullptr, options);
  std::vector<DocumentUnit> out;
  while (auto unit = reader.next()) out.push_back(std::move(*unit));
  if (diagnostics) *diagnostics = reader.diagnostics();
  return out;
}

}  // namespace polcov
