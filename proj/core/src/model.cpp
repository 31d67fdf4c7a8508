#include "polcov/model.hpp"

#include <cstdio>

#include "polcov/error.hpp"
#include "polcov/text.hpp"

namespace polcov {

std::string_view to_string(Gender g) { return g == Gender::F ? "F" : "M"; }

std::string_view to_string(SourceType s) {
  return s == SourceType::traditional ? "traditional" : "online";
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::moral_behavioral: return "moral_behavioral";
    case Category::physical: return "physical";
    case Category::socio_economic: return "socio_economic";
  }
  return "";
}

std::string_view to_string(MentionPattern p) {
  switch (p) {
    case MentionPattern::name_surname: return "name_surname";
    case MentionPattern::role_surname: return "role_surname";
    case MentionPattern::specific_role: return "specific_role";
  }
  return "";
}

std::optional<Gender> parse_gender(std::string_view s) {
  if (s == "F") return Gender::F;
  if (s == "M") return Gender::M;
  return std::nullopt;
}

std::optional<SourceType> parse_source_type(std::string_view s) {
  if (s == "traditional") return SourceType::traditional;
  if (s == "online") return SourceType::online;
  return std::nullopt;
}

std::optional<Category> parse_category(std::string_view s) {
  for (auto c : kCategories)
    if (to_string(c) == s) return c;
  return std::nullopt;
}

std::optional<MentionPattern> parse_mention_pattern(std::string_view s) {
  for (auto p : {MentionPattern::name_surname, MentionPattern::role_surname,
                 MentionPattern::specific_role})
    if (to_string(p) == s) return p;
  return std::nullopt;
}

// Civil-calendar conversions after H. Hinnant's days_from_civil.
Date Date::from_ymd(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return Date(era * 146097 + static_cast<int>(doe) - 719468);
}

std::optional<Date> Date::parse(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
  auto num = [&](std::size_t pos, std::size_t len) -> int {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (iso[i] < '0' || iso[i] > '9') return -1;
      v = v * 10 + (iso[i] - '0');
    }
    return v;
  };
  const int y = num(0, 4), m = num(5, 2), d = num(8, 2);
  if (y < 0 || m < 1 || m > 12 || d < 1) return std::nullopt;
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  const int max_day = kDays[m - 1] + (m == 2 && leap ? 1 : 0);
  if (d > max_day) return std::nullopt;
  return from_ymd(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::string Date::iso() const {
  int z = days_ + 719468;
  const int era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int y0 = static_cast<int>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  const int y = y0 + (m <= 2);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", y, m, d);
  return buf;
}

bool Tenure::overlaps(const Tenure& o) const {
  const bool starts_before_other_ends = !from || !o.to || *from <= *o.to;
  const bool other_starts_before_end = !o.from || !to || *o.from <= *to;
  return starts_before_other_ends && other_starts_before_end;
}

std::optional<std::string> normalize_lemma(std::string_view raw) {
  const auto stripped = text::strip_edge_punct(raw);
  if (stripped.empty()) return std::nullopt;
  return text::fold_case(stripped);
}

}  // namespace polcov
