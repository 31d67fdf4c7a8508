#pragma once

// Core domain types. No I/O and no statistics live here.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace polcov {

enum class Gender : std::uint8_t { F, M };
enum class SourceType : std::uint8_t { traditional, online };
enum class Category : std::uint8_t { moral_behavioral, physical, socio_economic };
enum class MentionPattern : std::uint8_t { name_surname, role_surname, specific_role };

inline constexpr std::array<Gender, 2> kGenders{Gender::F, Gender::M};
inline constexpr std::array<SourceType, 2> kSourceTypes{SourceType::traditional,
                                                        SourceType::online};
inline constexpr std::array<Category, 3> kCategories{
    Category::moral_behavioral, Category::physical, Category::socio_economic};

std::string_view to_string(Gender g);
std::string_view to_string(SourceType s);
std::string_view to_string(Category c);
std::string_view to_string(MentionPattern p);

// Parsers accept exactly the strings emitted by to_string; nullopt otherwise.
std::optional<Gender> parse_gender(std::string_view s);
std::optional<SourceType> parse_source_type(std::string_view s);
std::optional<Category> parse_category(std::string_view s);
std::optional<MentionPattern> parse_mention_pattern(std::string_view s);

inline constexpr std::size_t index_of(Gender g) { return static_cast<std::size_t>(g); }
inline constexpr std::size_t index_of(SourceType s) { return static_cast<std::size_t>(s); }
inline constexpr std::size_t index_of(Category c) { return static_cast<std::size_t>(c); }

/// Calendar day, stored as days since 1970-01-01 (proleptic Gregorian).
class Date {
 public:
  constexpr Date() = default;
  static constexpr Date from_days(std::int32_t days) { return Date(days); }
  static Date from_ymd(int year, unsigned month, unsigned day);
  /// Strict "YYYY-MM-DD"; nullopt when malformed or not a real calendar day.
  static std::optional<Date> parse(std::string_view iso);

  constexpr std::int32_t days() const { return days_; }
  std::string iso() const;

  friend constexpr auto operator<=>(Date, Date) = default;
  friend constexpr Date operator+(Date d, std::int32_t n) { return Date(d.days_ + n); }
  friend constexpr std::int32_t operator-(Date a, Date b) { return a.days_ - b.days_; }

 private:
  constexpr explicit Date(std::int32_t d) : days_(d) {}
  std::int32_t days_ = 0;
};

struct Token {
  int index = 1;          // 1-based position within sentence
  std::string surface;
  std::string lemma;      // normalized; for non-lexical tokens the raw lemma
  std::string upos;
  int head = 0;           // 0 = root
  std::string deprel;
  bool filtered = false;  // stopword, digit, special characters, URL or non-lexical
};

struct Sentence {
  std::string doc_id;
  std::string sent_id;
  std::size_t ordinal = 0;  // 0-based position within its document
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  const Token& at(int index) const { return tokens.at(static_cast<std::size_t>(index - 1)); }
};

struct Document {
  std::string doc_id;
  Date date;
  std::string source_id;
  SourceType source_type = SourceType::traditional;
};

struct Tenure {
  std::optional<Date> from;
  std::optional<Date> to;

  bool covers(Date d) const { return (!from || *from <= d) && (!to || d <= *to); }
  bool overlaps(const Tenure& o) const;
};

struct Role {
  std::string keyword;                    // canonical keyword, e.g. "mayor"
  std::vector<std::string> jurisdiction;  // normalized tokens; may be empty
  Tenure tenure;
};

struct Politician {
  std::string pid;
  std::string given_name;
  std::string surname;
  Gender gender = Gender::F;
  std::vector<Role> roles;
  std::vector<std::string> aliases;  // alternative full-name spellings
};

struct TokenSpan {
  int first = 1;  // inclusive, 1-based
  int last = 1;   // inclusive

  int length() const { return last - first + 1; }
  bool contains(int i) const { return first <= i && i <= last; }
  bool overlaps(const TokenSpan& o) const { return first <= o.last && o.first <= last; }
  friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

struct Mention {
  std::string pid;
  std::string doc_id;
  std::size_t sentence = 0;
  TokenSpan span;
  MentionPattern pattern = MentionPattern::name_surname;
};

/// Case-folds and strips edge punctuation; diacritics are kept. Returns
/// nullopt for non-lexical tokens (nothing left after stripping).
std::optional<std::string> normalize_lemma(std::string_view raw);

}  // namespace polcov
