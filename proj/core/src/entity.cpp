#include "polcov/entity.hpp"

#include <algorithm>
#include <tuple>

#include "polcov/error.hpp"
#include "polcov/text.hpp"

namespace polcov {

RoleGazetteer RoleGazetteer::defaults() {
  RoleGazetteer g;
  for (auto s : {"sindaco", "sindaca", "mayor"}) g.add(s, "mayor");
  for (auto s : {"ministro", "ministra", "minister"}) g.add(s, "minister");
  for (auto s : {"sottosegretario", "sottosegretaria", "undersecretary"}) g.add(s, "undersecretary");
  for (auto s : {"governatore", "governatrice", "presidente", "governor", "president"})
    g.add(s, "governor");
  g.connectors = {"di",   "del", "della", "dello", "dell", "dei", "degli", "delle", "d",
                  "il",   "lo",  "la",    "l",     "i",    "gli", "le",    "regione",
                  "comune", "provincia", "of", "the", "region"};
  return g;
}

void RoleGazetteer::add(std::string surface, std::string canonical) {
  auto s = normalize_lemma(surface);
  auto c = normalize_lemma(canonical);
  if (!s || !c) throw ValidationError("empty role keyword");
  entries_[*s] = *c;
}

const std::string* RoleGazetteer::canonical(std::string_view surface) const {
  auto it = entries_.find(surface);
  return it == entries_.end() ? nullptr : &it->second;
}

RoleGazetteer read_role_gazetteer(const fs::path& path) {
  RoleGazetteer g;
  g.connectors = RoleGazetteer::defaults().connectors;
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    std::string_view v = text::trim(no == 1 ? text::strip_bom(line) : std::string_view(line));
    if (v.empty() || v.front() == '#') continue;
    const auto colon = v.find(':');
    if (colon == std::string_view::npos) {
      g.add(std::string(v), std::string(v));
      continue;
    }
    const std::string canonical(text::trim(v.substr(0, colon)));
    if (canonical.empty()) throw ParseError(path.string(), no, "empty canonical role keyword");
    g.add(canonical, canonical);
    for (auto s : text::split(v.substr(colon + 1), ',')) {
      s = text::trim(s);
      if (!s.empty()) g.add(std::string(s), canonical);
    }
  }
  return g;
}

namespace {

struct Candidate {
  TokenSpan span;
  MentionPattern pattern;
  std::size_t politician;
};

bool matches_at(const std::vector<std::optional<std::string>>& norm, std::size_t pos,
                const std::vector<std::string>& seq) {
  if (pos + seq.size() > norm.size()) return false;
  for (std::size_t k = 0; k < seq.size(); ++k)
    if (!norm[pos + k] || *norm[pos + k] != seq[k]) return false;
  return true;
}

bool has_role(const Politician& p, const std::string& keyword) {
  return std::any_of(p.roles.begin(), p.roles.end(),
                     [&](const Role& r) { return r.keyword == keyword; });
}

bool has_role_at(const Politician& p, const std::string& keyword, Date d) {
  return std::any_of(p.roles.begin(), p.roles.end(),
                     [&](const Role& r) { return r.keyword == keyword && r.tenure.covers(d); });
}

}  // namespace

EntityMatcher::EntityMatcher(const PoliticianRegistry& registry, RoleGazetteer gazetteer)
    : registry_(registry), gazetteer_(std::move(gazetteer)) {
  const auto& names = registry_.full_names();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (!names[i].first.empty()) names_by_first_[names[i].first.front()].push_back(i);
  const auto& surnames = registry_.surname_sequences();
  for (std::size_t i = 0; i < surnames.size(); ++i) surnames_by_first_[surnames[i].front()].push_back(i);
  const auto& jur = registry_.jurisdictions();
  for (std::size_t i = 0; i < jur.size(); ++i) jurisdictions_by_first_[jur[i].front()].push_back(i);
}

std::vector<Mention> EntityMatcher::find_mentions(const Sentence& sentence, const Document& doc,
                                                  MatchDiagnostics* diagnostics) const {
  const auto n = sentence.tokens.size();
  std::vector<std::optional<std::string>> norm(n);
  std::vector<const std::string*> role(n, nullptr);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = sentence.tokens[i];
    norm[i] = normalize_lemma(t.surface);
    if (norm[i]) role[i] = gazetteer_.canonical(*norm[i]);
    if (!role[i] && !t.lemma.empty()) role[i] = gazetteer_.canonical(t.lemma);
  }

  std::vector<Candidate> cands;
  auto span_of = [](std::size_t first, std::size_t len) {
    return TokenSpan{static_cast<int>(first + 1), static_cast<int>(first + len)};
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (!norm[i]) continue;

    // name + surname (and aliases)
    if (auto it = names_by_first_.find(*norm[i]); it != names_by_first_.end()) {
      for (auto idx : it->second) {
        const auto& [seq, pol] = registry_.full_names()[idx];
        if (matches_at(norm, i, seq)) cands.push_back({span_of(i, seq.size()), MentionPattern::name_surname, pol});
      }
    }

    if (!role[i]) continue;
    const std::string& kw = *role[i];
    const std::size_t after = i + 1;
    if (after >= n || !norm[after]) continue;

    // role + [given name] + surname
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> role_hits;  // length -> politicians
    if (auto it = surnames_by_first_.find(*norm[after]); it != surnames_by_first_.end()) {
      for (auto sidx : it->second) {
        const auto& seq = registry_.surname_sequences()[sidx];
        if (!matches_at(norm, after, seq)) continue;
        const auto* holders = registry_.by_surname(text::join(seq, " "));
        if (!holders) continue;
        role_hits.push_back({seq.size(), *holders});
      }
    }
    if (auto it = names_by_first_.find(*norm[after]); it != names_by_first_.end()) {
      for (auto idx : it->second) {
        const auto& [seq, pol] = registry_.full_names()[idx];
        if (matches_at(norm, after, seq)) role_hits.push_back({seq.size(), {pol}});
      }
    }
    for (const auto& [len, holders] : role_hits) {
      std::vector<std::size_t> with_role;
      for (auto h : holders)
        if (has_role(registry_.at(h), kw)) with_role.push_back(h);
      if (with_role.size() > 1) {
        std::vector<std::size_t> active;
        for (auto h : with_role)
          if (has_role_at(registry_.at(h), kw, doc.date)) active.push_back(h);
        with_role = std::move(active);
        if (with_role.size() != 1) {
          if (diagnostics) ++diagnostics->ambiguous_role;
          continue;
        }
      }
      if (with_role.size() == 1)
        cands.push_back({span_of(i, 1 + len), MentionPattern::role_surname, with_role.front()});
    }

    // role + connectors + jurisdiction
    std::size_t j = after;
    while (j < n && norm[j] && gazetteer_.connectors.contains(*norm[j])) ++j;
    if (j == after || j >= n || !norm[j]) continue;
    auto jit = jurisdictions_by_first_.find(*norm[j]);
    if (jit == jurisdictions_by_first_.end()) continue;
    // longest jurisdiction first
    std::vector<std::size_t> order = jit->second;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const auto& ja = registry_.jurisdictions()[a];
      const auto& jb = registry_.jurisdictions()[b];
      if (ja.size() != jb.size()) return ja.size() > jb.size();
      return ja < jb;
    });
    for (auto jidx : order) {
      const auto& jur = registry_.jurisdictions()[jidx];
      if (!matches_at(norm, j, jur)) continue;
      const auto look = registry_.resolve_role(kw, jur, doc.date);
      if (look.status == PoliticianRegistry::Resolution::unique) {
        cands.push_back({span_of(i, j + jur.size() - i), MentionPattern::specific_role, look.index});
        break;
      }
      if (look.status == PoliticianRegistry::Resolution::ambiguous) {
        if (diagnostics) ++diagnostics->ambiguous_role;
        break;
      }
    }
  }

  // Same span and pattern claimed by different politicians: drop all claimants.
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    return std::tuple(a.span.first, a.span.last, a.pattern, a.politician) <
           std::tuple(b.span.first, b.span.last, b.pattern, b.politician);
  });
  cands.erase(std::unique(cands.begin(), cands.end(),
                          [](const Candidate& a, const Candidate& b) {
                            return a.span == b.span && a.pattern == b.pattern &&
                                   a.politician == b.politician;
                          }),
              cands.end());
  std::vector<Candidate> unique_cands;
  for (std::size_t k = 0; k < cands.size();) {
    std::size_t e = k + 1;
    while (e < cands.size() && cands[e].span == cands[k].span && cands[e].pattern == cands[k].pattern) ++e;
    if (e - k == 1) {
      unique_cands.push_back(cands[k]);
    } else if (diagnostics) {
      ++diagnostics->ambiguous_name;
    }
    k = e;
  }

  std::sort(unique_cands.begin(), unique_cands.end(), [](const Candidate& a, const Candidate& b) {
    return std::tuple(-a.span.length(), a.pattern, a.span.first, a.politician) <
           std::tuple(-b.span.length(), b.pattern, b.span.first, b.politician);
  });
  std::vector<Mention> out;
  for (const auto& c : unique_cands) {
    const bool clash = std::any_of(out.begin(), out.end(),
                                   [&](const Mention& m) { return m.span.overlaps(c.span); });
    if (clash) continue;
    out.push_back({registry_.at(c.politician).pid, sentence.doc_id, sentence.ordinal, c.span, c.pattern});
  }
  std::sort(out.begin(), out.end(), [](const Mention& a, const Mention& b) {
    return a.span.first < b.span.first;
  });
  return out;
}

std::vector<Mention> find_mentions(const Sentence& sentence, const Document& doc,
                                   const PoliticianRegistry& registry,
                                   const RoleGazetteer& gazetteer, MatchDiagnostics* diagnostics) {
  return EntityMatcher(registry, gazetteer).find_mentions(sentence, doc, diagnostics);
}

}  // namespace polcov
