#include "polcov/synthetic.hpp"

#include <cstdio>
#include <fstream>

#include "polcov/error.hpp"
#include "polcov/random.hpp"

namespace polcov {

namespace {

struct Word {
  const char* lemma;
  const char* upos;
};

const std::vector<Word> kPhysical{
    {"bello", "ADJ"},    {"elegante", "ADJ"}, {"biondo", "ADJ"},  {"alto", "ADJ"},
    {"magro", "ADJ"},    {"robusto", "ADJ"},  {"bruno", "ADJ"},   {"sorridente", "ADJ"},
    {"truccato", "ADJ"}, {"anziano", "ADJ"},  {"capelli", "NOUN"}, {"sorriso", "NOUN"},
    {"abito", "NOUN"},   {"tacco", "NOUN"},   {"fisico", "NOUN"}, {"look", "NOUN"}};
const std::vector<std::string> kPlanted{"bello", "elegante", "biondo"};

const std::vector<Word> kMoral{
    {"onesto", "ADJ"},     {"corrotto", "ADJ"},  {"coraggioso", "ADJ"}, {"arrogante", "ADJ"},
    {"leale", "ADJ"},      {"ambiguo", "ADJ"},   {"generoso", "ADJ"},   {"ipocrita", "ADJ"},
    {"menzogna", "NOUN"},  {"coerenza", "NOUN"}, {"scandalo", "NOUN"},  {"integrità", "NOUN"},
    {"mentire", "VERB"},   {"tradire", "VERB"}};

const std::vector<Word> kSocio{
    {"ricco", "ADJ"},        {"povero", "ADJ"},       {"laureato", "ADJ"},    {"benestante", "ADJ"},
    {"precario", "ADJ"},     {"stipendio", "NOUN"},   {"carriera", "NOUN"},   {"patrimonio", "NOUN"},
    {"imprenditore", "NOUN"}, {"laurea", "NOUN"},     {"famiglia", "NOUN"},   {"villa", "NOUN"}};

const std::vector<std::string> kGenericAdj{"nuovo", "regionale", "nazionale", "pubblico", "politico",
                                           "europeo", "locale", "ufficiale"};
const std::vector<std::string> kGenericNoun{"legge", "riforma", "governo", "bilancio", "progetto",
                                            "incontro", "decreto", "piano", "cantiere", "ospedale"};
const std::vector<std::string> kGenericVerb{"annunciare", "presentare", "incontrare", "dichiarare",
                                            "visitare", "firmare", "difendere", "criticare"};

const std::vector<std::string> kGivenF{"Anna", "Chiara", "Giulia", "Paola", "Elena",
                                       "Laura", "Marta", "Sara", "Silvia", "Valeria"};
const std::vector<std::string> kGivenM{"Marco", "Luca", "Paolo", "Andrea", "Giorgio",
                                       "Matteo", "Stefano", "Roberto", "Carlo", "Franco"};
const std::vector<std::string> kPortfolios{"interno", "esteri", "difesa", "giustizia", "salute",
                                           "lavoro", "istruzione", "cultura", "ambiente", "economia",
                                           "trasporti", "agricoltura", "turismo", "sport", "famiglia",
                                           "sud", "innovazione", "disabilità", "pubblica", "riforme"};
const std::vector<std::string> kCities{"Torino", "Milano", "Genova", "Bologna", "Firenze", "Napoli",
                                       "Bari", "Palermo", "Verona", "Padova", "Trieste", "Parma",
                                       "Modena", "Perugia", "Ancona", "Pescara", "Cagliari", "Catania",
                                       "Messina", "Brescia", "Bergamo", "Lecce", "Taranto", "Rimini"};

struct SynthPolitician {
  std::string pid, given, surname;
  Gender gender;
  bool mayor;
  std::string city;
};

std::string surname_for(std::size_t i) {
  static const std::vector<std::string> stems{"Rossi",  "Bianchi", "Esposito", "Colombo", "Ricci",
                                              "Marino", "Greco",   "Ferrari",    "Gallo",   "Conti",
                                              "Costa",  "Giordano", "Mancini", "Lombardi", "Moretti"};
  const auto& s = stems[i % stems.size()];
  return i < stems.size() ? s : s + "ni" + std::string(i / stems.size(), 'e');
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[rng.below(v.size())];
}

std::vector<Word> of_pos(const std::vector<Word>& v, std::string_view upos) {
  std::vector<Word> out;
  for (const auto& w : v)
    if (upos == w.upos) out.push_back(w);
  return out;
}

struct TokenOut {
  std::string form, lemma, upos;
  int head;
  std::string deprel;
};

}  // namespace

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec, const fs::path& dir) {
  if (spec.politicians_f == 0 || spec.politicians_m == 0) throw DomainError("need politicians of both genders");
  if (spec.days == 0 || spec.documents == 0) throw DomainError("empty synthetic corpus");
  fs::create_directories(dir);
  Rng rng(spec.seed);

  // registry: half the politicians are mayors of distinct cities, the rest ministers
  std::vector<SynthPolitician> pols;
  for (std::size_t i = 0; i < spec.politicians_f + spec.politicians_m; ++i) {
    const bool female = i < spec.politicians_f;
    SynthPolitician p;
    p.gender = female ? Gender::F : Gender::M;
    p.given = female ? kGivenF[i % kGivenF.size()] : kGivenM[i % kGivenM.size()];
    p.surname = surname_for(i);
    char pid[16];
    std::snprintf(pid, sizeof pid, "p%03zu", i);
    p.pid = pid;
    p.mayor = i % 2 == 0 && i / 2 < kCities.size();
    if (p.mayor)
      p.city = kCities[i / 2];
    else
      p.city = kPortfolios[i % kPortfolios.size()] + (i < kPortfolios.size() ? "" : std::to_string(i));
    pols.push_back(p);
  }
  {
    std::ofstream out(dir / "registry.csv", std::ios::binary);
    out << "pid;given_name;surname;gender;roles;aliases;tenure\n";
    for (const auto& p : pols)
      out << p.pid << ';' << p.given << ';' << p.surname << ';' << to_string(p.gender) << ';'
          << (p.mayor ? "mayor:" : "minister:") << p.city << ";;\n";
  }

  // lexicon with simulated annotators around a per-word base sentiment
  {
    std::ofstream out(dir / "lexicon.csv", std::ios::binary);
    out << "lemma,upos,category,s1,s2,s3,s4,s5\n";
    auto emit = [&](const std::vector<Word>& words, Category c) {
      for (const auto& w : words) {
        const int base = static_cast<int>(rng.below(3)) - 1;
        out << w.lemma << ',' << w.upos << ',' << to_string(c);
        for (int a = 0; a < 5; ++a) {
          int s = base;
          if (rng.uniform() < 0.2) s = static_cast<int>(rng.below(3)) - 1;
          out << ',' << s;
        }
        out << '\n';
      }
    };
    emit(kMoral, Category::moral_behavioral);
    emit(kPhysical, Category::physical);
    emit(kSocio, Category::socio_economic);
  }
  {
    std::ofstream out(dir / "stopwords.txt", std::ios::binary);
    out << "il\ndi\nla\ne\n";
  }

  const std::array<std::vector<Word>, 3> lex_adj{of_pos(kMoral, "ADJ"), of_pos(kPhysical, "ADJ"),
                                                 of_pos(kSocio, "ADJ")};
  const std::array<std::vector<Word>, 3> lex_noun{of_pos(kMoral, "NOUN"), of_pos(kPhysical, "NOUN"),
                                                  of_pos(kSocio, "NOUN")};
  // per-slot probability of a lexicon word by category, before the boost
  const std::array<double, 3> p_adj{0.15, 0.12, 0.10};
  const std::array<double, 3> p_noun{0.10, 0.05, 0.10};

  SyntheticExpectation exp;
  exp.documents = spec.documents;
  exp.planted = kPlanted;

  auto draw = [&](bool adj, Gender g, std::optional<Category>& category) -> Word {
    const auto& probs = adj ? p_adj : p_noun;
    double u = rng.uniform();
    for (auto c : kCategories) {
      double p = probs[index_of(c)];
      if (c == Category::physical && g == Gender::F) p *= spec.physical_boost;
      if (u < p) {
        category = c;
        if (adj && c == Category::physical && g == Gender::F) {
          // a planted_share of the women's physical adjectives are planted words
          if (rng.uniform() < spec.planted_share) {
            const auto& lemma = pick(rng, kPlanted);
            return Word{lemma.c_str(), "ADJ"};
          }
        }
        const auto& pool = adj ? lex_adj[index_of(c)] : lex_noun[index_of(c)];
        return pick(rng, pool);
      }
      u -= p;
    }
    category.reset();
    return adj ? Word{pick(rng, kGenericAdj).c_str(), "ADJ"} : Word{pick(rng, kGenericNoun).c_str(), "NOUN"};
  };

  std::ofstream conllu(dir / "corpus.conllu", std::ios::binary);
  std::ofstream meta(dir / "metadata.jsonl", std::ios::binary);
  for (std::size_t d = 0; d < spec.documents; ++d) {
    char doc_id[16];
    std::snprintf(doc_id, sizeof doc_id, "d%05zu", d);
    const Date date = spec.start + static_cast<std::int32_t>(rng.below(spec.days));
    const bool online = rng.uniform() < spec.online_share;
    const auto outlet = rng.below(8);
    meta << "{\"doc_id\":\"" << doc_id << "\",\"date\":\"" << date.iso() << "\",\"source_id\":\""
         << (online ? "web" : "paper") << outlet << "\",\"source_type\":\""
         << (online ? "online" : "traditional") << "\"}\n";
    conllu << "# newdoc id = " << doc_id << '\n';

    for (std::size_t s = 0; s < spec.sentences_per_document; ++s) {
      const auto& p = pols[rng.below(pols.size())];
      const auto gi = index_of(p.gender);
      std::vector<TokenOut> toks;
      int head_tok;
      const double pattern = rng.uniform();
      if (pattern < 0.7) {
        toks.push_back({p.given, p.given, "PROPN", 0, "nsubj"});
        toks.push_back({p.surname, p.surname, "PROPN", 1, "flat:name"});
        head_tok = 1;
      } else if (pattern < 0.85 || !p.mayor) {
        const bool f = p.gender == Gender::F;
        const std::string role = p.mayor ? (f ? "sindaca" : "sindaco") : (f ? "ministra" : "ministro");
        toks.push_back({role, role, "NOUN", 0, "nsubj"});
        toks.push_back({p.surname, p.surname, "PROPN", 1, "flat:name"});
        head_tok = 1;
      } else {
        toks.push_back({"sindaco", "sindaco", "NOUN", 0, "nsubj"});
        toks.push_back({"di", "di", "ADP", 3, "case"});
        toks.push_back({p.city, p.city, "PROPN", 1, "nmod"});
        head_tok = 1;
      }
      const int k = static_cast<int>(toks.size());
      const int adj_a = k + 1, verb = k + 2, det = k + 3, noun = k + 4, adj_b = k + 5, punct = k + 6;
      (void)det;
      toks[static_cast<std::size_t>(head_tok - 1)].head = verb;

      std::optional<Category> ca, cn, cb;
      const Word wa = draw(true, p.gender, ca);
      const Word wn = draw(false, p.gender, cn);
      const Word wb = draw(true, p.gender, cb);  // three steps away: outside the default radius
      const std::string v = pick(rng, kGenericVerb);
      toks.push_back({wa.lemma, wa.lemma, "ADJ", head_tok, "amod"});
      toks.push_back({v, v, "VERB", 0, "root"});
      toks.push_back({"il", "il", "DET", noun, "det"});
      toks.push_back({wn.lemma, wn.lemma, wn.upos, verb, "obj"});
      toks.push_back({wb.lemma, wb.lemma, "ADJ", noun, "amod"});
      toks.push_back({".", ".", "PUNCT", verb, "punct"});
      (void)adj_a;
      (void)adj_b;
      (void)punct;

      ++exp.sentences[gi];
      exp.coverage_words[gi] += 3;
      if (ca) ++exp.lexicon_words[gi][index_of(*ca)];
      if (cn) ++exp.lexicon_words[gi][index_of(*cn)];

      conllu << "# sent_id = " << doc_id << '-' << s + 1 << '\n';
      for (std::size_t t = 0; t < toks.size(); ++t) {
        const auto& tk = toks[t];
        conllu << t + 1 << '\t' << tk.form << '\t' << tk.lemma << '\t' << tk.upos << "\t_\t_\t" << tk.head << '\t'
               << tk.deprel << "\t_\t_\n";
      }
      conllu << '\n';
    }
  }
  conllu.close();
  meta.close();

  {
    std::ofstream out(dir / "polcov.conf", std::ios::binary);
    out << "# synthetic corpus, seed " << spec.seed << "\n"
        << "conllu = corpus.conllu\n"
        << "metadata = metadata.jsonl\n"
        << "registry = registry.csv\n"
        << "lexicon = lexicon.csv\n"
        << "stopwords = stopwords.txt\n"
        << "out = out\n";
  }

  SyntheticCorpus corpus;
  corpus.config_path = dir / "polcov.conf";
  corpus.config = load_config(corpus.config_path);
  corpus.expected = std::move(exp);
  return corpus;
}

}  // namespace polcov
