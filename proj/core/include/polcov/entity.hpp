#pragma once

// Politician mention detection with the three supported patterns:
// name + surname, role + surname, and role + jurisdiction ("sindaco di Roma").

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "polcov/ingest.hpp"
#include "polcov/model.hpp"

namespace polcov {

/// Maps surface role words (normalized) onto the canonical role keywords
/// used in the registry. Synonyms share a canonical keyword.
class RoleGazetteer {
 public:
  /// sindaco/mayor, ministro/minister, sottosegretario/undersecretary,
  /// governatore|presidente/governor, with the Italian feminine forms.
  static RoleGazetteer defaults();

  void add(std::string surface, std::string canonical);
  const std::string* canonical(std::string_view surface) const;

  /// Words allowed between a role keyword and its jurisdiction.
  std::set<std::string, std::less<>> connectors;

  const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

/// One group per line: "canonical: surface, surface, ..." or a bare keyword.
/// Connector words keep their defaults.
RoleGazetteer read_role_gazetteer(const fs::path& path);

struct MatchDiagnostics {
  std::size_t ambiguous_role = 0;  // role resolution not unique at document date
  std::size_t ambiguous_name = 0;  // same span claimed by several politicians
};

/// Precomputed lookup tables over a registry; cheap to share across threads.
class EntityMatcher {
 public:
  EntityMatcher(const PoliticianRegistry& registry, RoleGazetteer gazetteer);

  /// Non-overlapping mentions ordered by span start. Longest match wins;
  /// equal lengths fall back to name_surname > role_surname > specific_role.
  std::vector<Mention> find_mentions(const Sentence& sentence, const Document& doc,
                                     MatchDiagnostics* diagnostics = nullptr) const;

  const PoliticianRegistry& registry() const { return registry_; }
  const RoleGazetteer& gazetteer() const { return gazetteer_; }

 private:
  const PoliticianRegistry& registry_;
  RoleGazetteer gazetteer_;
  // first token -> indexes into registry_.full_names()
  std::unordered_map<std::string, std::vector<std::size_t>> names_by_first_;
  std::unordered_map<std::string, std::vector<std::size_t>> surnames_by_first_;
  std::unordered_map<std::string, std::vector<std::size_t>> jurisdictions_by_first_;
};

/// Free-function form for one-off calls.
std::vector<Mention> find_mentions(const Sentence& sentence, const Document& doc,
                                   const PoliticianRegistry& registry,
                                   const RoleGazetteer& gazetteer = RoleGazetteer::defaults(),
                                   MatchDiagnostics* diagnostics = nullptr);

}  // namespace polcov
