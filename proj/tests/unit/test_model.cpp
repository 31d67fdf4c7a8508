#include "doctest.h"
#include "polcov/model.hpp"
#include "polcov/random.hpp"
#include "polcov/text.hpp"
#include "support/testing.hpp"

using namespace polcov;

TEST_CASE("normalize_lemma folds case and keeps diacritics") {
  CHECK(normalize_lemma("Sceriffo") == "sceriffo");
  CHECK(normalize_lemma("città") == "città");
  CHECK(normalize_lemma("CITTÀ") == "città");
  CHECK(normalize_lemma("«bello»") == "bello");
  CHECK_FALSE(normalize_lemma("...").has_value());
  CHECK_FALSE(normalize_lemma("").has_value());
}

TEST_CASE("normalize_lemma is idempotent") {
  Rng rng(7);
  const std::vector<std::string> pieces{"A", "b", "È", "ò", "-", ".", "'", "Ω", "Ж", "x", "“", "…", " "};
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const int len = testing::uniform_int(rng, 0, 8);
    for (int k = 0; k < len; ++k) s += pieces[rng.below(pieces.size())];
    const auto once = normalize_lemma(s);
    if (!once) continue;
    const auto twice = normalize_lemma(*once);
    REQUIRE(twice.has_value());
    CHECK(*twice == *once);
  }
}

TEST_CASE("enum names round-trip") {
  for (auto g : kGenders) CHECK(parse_gender(to_string(g)) == g);
  for (auto s : kSourceTypes) CHECK(parse_source_type(to_string(s)) == s);
  for (auto c : kCategories) CHECK(parse_category(to_string(c)) == c);
  for (auto p : {MentionPattern::name_surname, MentionPattern::role_surname, MentionPattern::specific_role})
    CHECK(parse_mention_pattern(to_string(p)) == p);
  CHECK_FALSE(parse_category("looks").has_value());
  CHECK_FALSE(parse_gender("f").has_value());
}

TEST_CASE("dates") {
  CHECK(Date::from_ymd(1970, 1, 1).days() == 0);
  CHECK(Date::from_ymd(2017, 3, 1) - Date::from_ymd(2017, 2, 28) == 1);
  CHECK(Date::from_ymd(2016, 3, 1) - Date::from_ymd(2016, 2, 28) == 2);
  CHECK(Date::parse("2017-06-30")->iso() == "2017-06-30");
  CHECK_FALSE(Date::parse("2017-02-29").has_value());
  CHECK_FALSE(Date::parse("2017-6-30").has_value());
  CHECK_FALSE(Date::parse("2017-06-30x").has_value());
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto d = Date::from_days(testing::uniform_int(rng, -50000, 50000));
    CHECK(Date::parse(d.iso()) == d);
  }
}

TEST_CASE("tenure") {
  Tenure t{Date::from_ymd(2016, 6, 1), Date::from_ymd(2021, 10, 18)};
  CHECK(t.covers(Date::from_ymd(2017, 1, 1)));
  CHECK_FALSE(t.covers(Date::from_ymd(2016, 5, 31)));
  CHECK(Tenure{}.covers(Date::from_ymd(1900, 1, 1)));
  CHECK(t.overlaps(Tenure{Date::from_ymd(2021, 10, 18), std::nullopt}));
  CHECK_FALSE(t.overlaps(Tenure{Date::from_ymd(2021, 10, 19), std::nullopt}));
}

TEST_CASE("text helpers") {
  CHECK(text::split("a,,b", ',') == std::vector<std::string_view>{"a", "", "b"});
  CHECK(text::split_ws("  a \t b  ") == std::vector<std::string_view>{"a", "b"});
  CHECK(text::is_numeric("1.000"));
  CHECK_FALSE(text::is_numeric("1a"));
  CHECK(text::looks_like_url("https://example.org/x"));
  CHECK(text::looks_like_url("www.example.org"));
  CHECK_FALSE(text::looks_like_url("bello"));
  CHECK(text::normalize_phrase("  Reggio   Emilia ") == std::vector<std::string>{"reggio", "emilia"});
  CHECK(text::strip_bom("\xEF\xBB\xBFx") == "x");
}
