#include "polcov/counts.hpp"

#include <charconv>
#include <fstream>

#include "polcov/error.hpp"
#include "polcov/text.hpp"

namespace polcov {

void CountTable::add(const WordKey& word, Gender g, std::optional<Category> category, SourceType s,
                     const std::string& pid, std::uint64_t n) {
  cells_[CountCell{word, g, category, s}] += n;
  add_politician(pid, g, category);
}

void CountTable::add_politician(const std::string& pid, Gender g, std::optional<Category> category) {
  politicians_[index_of(g)].insert(pid);
  if (category) category_politicians_[index_of(g)][index_of(*category)].insert(pid);
}

void CountTable::merge(const CountTable& other) {
  for (const auto& [cell, n] : other.cells_) cells_[cell] += n;
  for (std::size_t g = 0; g < 2; ++g) {
    politicians_[g].insert(other.politicians_[g].begin(), other.politicians_[g].end());
    for (std::size_t c = 0; c < 3; ++c)
      category_politicians_[g][c].insert(other.category_politicians_[g][c].begin(),
                                         other.category_politicians_[g][c].end());
  }
}

std::uint64_t CountTable::total(Gender g) const {
  std::uint64_t t = 0;
  for (const auto& [cell, n] : cells_)
    if (cell.gender == g) t += n;
  return t;
}

std::uint64_t CountTable::personalization_total(Gender g) const {
  std::uint64_t t = 0;
  for (const auto& [cell, n] : cells_)
    if (cell.gender == g && cell.category) t += n;
  return t;
}

const std::set<std::string>& CountTable::politician_ids(Gender g, std::optional<Category> c) const {
  return c ? category_politicians_[index_of(g)][index_of(*c)] : politicians_[index_of(g)];
}

std::size_t CountTable::politicians(Gender g, std::optional<Category> c) const {
  return politician_ids(g, c).size();
}

std::size_t CountTable::personalization_politicians(Gender g) const {
  std::set<std::string> u;
  for (const auto& s : category_politicians_[index_of(g)]) u.insert(s.begin(), s.end());
  return u.size();
}

WordFrequencies CountTable::frequencies(std::optional<Category> category,
                                        std::optional<SourceType> source) const {
  WordFrequencies out;
  std::map<WordKey, WordCount> acc;
  for (const auto& [cell, n] : cells_) {
    if (category && cell.category != category) continue;
    if (source && cell.source_type != *source) continue;
    auto& wc = acc[cell.word];
    wc.word = cell.word;
    wc.category = cell.category;
    if (cell.gender == Gender::F) {
      wc.f += n;
      out.total_f += n;
    } else {
      wc.m += n;
      out.total_m += n;
    }
  }
  out.words.reserve(acc.size());
  for (auto& [k, wc] : acc)
    if (wc.f + wc.m > 0) out.words.push_back(std::move(wc));
  out.politicians_f = politicians(Gender::F, category);
  out.politicians_m = politicians(Gender::M, category);
  return out;
}

std::array<std::array<std::uint64_t, 2>, 2> CountTable::contingency(bool personalization) const {
  std::array<std::array<std::uint64_t, 2>, 2> t{};
  for (const auto& [cell, n] : cells_) {
    if (personalization && !cell.category) continue;
    t[index_of(cell.source_type)][index_of(cell.gender)] += n;
  }
  return t;
}

std::size_t CountTable::distinct_words(Gender g, bool personalization) const {
  std::set<WordKey> words;
  for (const auto& [cell, n] : cells_)
    if (cell.gender == g && n > 0 && (!personalization || cell.category)) words.insert(cell.word);
  return words.size();
}

void CountTable::write_csv(const fs::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "lemma,upos,gender,category,source_type,count\n";
  for (const auto& [cell, n] : cells_) {
    out << cell.word.lemma << ',' << cell.word.upos << ',' << to_string(cell.gender) << ','
        << (cell.category ? to_string(*cell.category) : std::string_view{}) << ','
        << to_string(cell.source_type) << ',' << n << '\n';
  }
}

void CountTable::write_politicians_csv(const fs::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "pid,gender,category\n";
  for (auto g : kGenders) {
    for (const auto& pid : politicians_[index_of(g)]) out << pid << ',' << to_string(g) << ",*\n";
    for (auto c : kCategories)
      for (const auto& pid : category_politicians_[index_of(g)][index_of(c)])
        out << pid << ',' << to_string(g) << ',' << to_string(c) << '\n';
  }
}

namespace {

std::uint64_t parse_count(std::string_view s, const fs::path& path, std::size_t line) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(path.string(), line, "invalid count '" + std::string(s) + "'");
  return v;
}

template <typename Fn>
void for_each_data_row(const fs::path& path, std::size_t columns, Fn&& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (no == 1 || line.empty()) continue;  // header
    auto cols = text::split(line, ',');
    if (cols.size() != columns)
      throw ParseError(path.string(), no, "expected " + std::to_string(columns) + " columns");
    fn(no, cols);
  }
}

}  // namespace

CountTable CountTable::read_csv(const fs::path& counts, const fs::path& politicians) {
  CountTable t;
  for_each_data_row(counts, 6, [&](std::size_t no, const std::vector<std::string_view>& c) {
    CountCell cell;
    cell.word = {std::string(c[0]), std::string(c[1])};
    const auto g = parse_gender(c[2]);
    const auto s = parse_source_type(c[4]);
    if (!g || !s) throw ParseError(counts.string(), no, "invalid gender or source_type");
    cell.gender = *g;
    cell.source_type = *s;
    if (!c[3].empty()) {
      cell.category = parse_category(c[3]);
      if (!cell.category) throw ParseError(counts.string(), no, "unknown category");
    }
    t.cells_[cell] += parse_count(c[5], counts, no);
  });
  for_each_data_row(politicians, 3, [&](std::size_t no, const std::vector<std::string_view>& c) {
    const auto g = parse_gender(c[1]);
    if (!g) throw ParseError(politicians.string(), no, "invalid gender");
    std::optional<Category> cat;
    if (c[2] != "*") {
      cat = parse_category(c[2]);
      if (!cat) throw ParseError(politicians.string(), no, "unknown category");
    }
    if (cat) {
      t.category_politicians_[index_of(*g)][index_of(*cat)].insert(std::string(c[0]));
    } else {
      t.politicians_[index_of(*g)].insert(std::string(c[0]));
    }
  });
  return t;
}

void DailyCounts::add_coverage(Date d, Gender g, std::uint64_t n) {
  days_[d].coverage[index_of(g)] += n;
}

void DailyCounts::add_personalization(Date d, Gender g, Category c, std::uint64_t n) {
  days_[d].personalization[index_of(g)][index_of(c)] += n;
}

void DailyCounts::merge(const DailyCounts& other) {
  for (const auto& [d, day] : other.days_) {
    auto& mine = days_[d];
    for (std::size_t g = 0; g < 2; ++g) {
      mine.coverage[g] += day.coverage[g];
      for (std::size_t c = 0; c < 3; ++c) mine.personalization[g][c] += day.personalization[g][c];
    }
  }
}

void DailyCounts::write_csv(const fs::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "date,gender,category,count\n";
  for (const auto& [d, day] : days_) {
    const auto iso = d.iso();
    for (auto g : kGenders) {
      out << iso << ',' << to_string(g) << ",*," << day.coverage[index_of(g)] << '\n';
      for (auto c : kCategories)
        out << iso << ',' << to_string(g) << ',' << to_string(c) << ','
            << day.personalization[index_of(g)][index_of(c)] << '\n';
    }
  }
}

DailyCounts DailyCounts::read_csv(const fs::path& path) {
  DailyCounts t;
  for_each_data_row(path, 4, [&](std::size_t no, const std::vector<std::string_view>& c) {
    const auto d = Date::parse(c[0]);
    const auto g = parse_gender(c[1]);
    if (!d || !g) throw ParseError(path.string(), no, "invalid date or gender");
    const auto n = parse_count(c[3], path, no);
    if (c[2] == "*") {
      t.days_[*d].coverage[index_of(*g)] += n;
    } else {
      const auto cat = parse_category(c[2]);
      if (!cat) throw ParseError(path.string(), no, "unknown category");
      t.days_[*d].personalization[index_of(*g)][index_of(*cat)] += n;
    }
  });
  return t;
}

}  // namespace polcov
