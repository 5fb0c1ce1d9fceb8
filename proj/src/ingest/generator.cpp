#include "chemdelt/ingest/generator.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "chemdelt/linker/text.h"

namespace chemdelt::ingest {

XorShift64Star::XorShift64Star(std::uint64_t seed) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  state_ = z ? z : 0x2545F4914F6CDD1DULL;
}

std::uint64_t XorShift64Star::next() {
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  return state_ * 0x2545F4914F6CDD1DULL;
}

std::uint64_t XorShift64Star::below(std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
}

double XorShift64Star::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

namespace {

constexpr std::array kSyllables = {"ben", "zol", "eth", "an",  "ol",   "meth", "prop", "but", "chlor", "brom",
                                   "flu", "sulf", "nitr", "ox", "hydr", "carb", "am",   "phen", "cycl", "ac",
                                   "yl",  "in",  "id",  "at",  "on",   "äth",  "gly",  "cer", "ket",   "lak",
                                   "tos", "sil", "phos", "kal", "nat", "mag",  "ur",   "al",  "ös",    "tri"};
constexpr std::array kSecondWords = {"Säure", "Ester", "Salz", "Ion", "Oxid", "Radikal", "Komplex", "Gruppe"};
constexpr std::array kFiller = {"die",      "der",     "das",      "und",   "ist",    "wird",     "mit",
                                "eine",     "bei",     "von",      "im",    "zur",    "durch",    "auch",
                                "man",      "hier",    "sehr",     "wichtig", "Reaktion", "Beispiel", "Lösung",
                                "Molekül",  "entsteht", "bildet",  "reagiert", "schnell", "oft",   "Stoff"};
constexpr std::array kTopics = {"Grundlagen", "Einführung", "Eigenschaften", "Reaktionen",
                                "Übungen",    "Anwendungen", "Vertiefung"};

template <class Array>
const char* pick(XorShift64Star& rng, const Array& a) {
  return a[rng.below(a.size())];
}

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string padded(char prefix, std::size_t n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, n);
  return buf;
}

class LabelFactory {
 public:
  explicit LabelFactory(XorShift64Star& rng) : rng_(rng) {
    for (const char* w : kFiller) taken_.insert(linker::normalize(w));
    for (const char* w : kSecondWords) taken_.insert(linker::normalize(w));
    for (const char* w : kTopics) taken_.insert(linker::normalize(w));
  }

  std::string word() {
    while (true) {
      std::string w;
      auto n = 2 + rng_.below(3);
      for (std::uint64_t i = 0; i < n; ++i) w += pick(rng_, kSyllables);
      w = capitalize(w);
      if (!taken_.contains(linker::normalize(w))) return w;
    }
  }

  // Fresh label, unique after normalization; 15% are two words.
  std::string label() {
    while (true) {
      std::string l = word();
      if (rng_.chance(0.15)) l += std::string(" ") + pick(rng_, kSecondWords);
      if (taken_.insert(linker::normalize(l)).second) return l;
    }
  }

 private:
  XorShift64Star& rng_;
  std::set<std::string> taken_;
};

void append_text(std::vector<BodyRun>& body, std::size_t paragraph, const std::string& text) {
  if (!body.empty()) {
    if (auto* t = std::get_if<TextRun>(&body.back()); t && t->paragraph == paragraph) {
      t->text += text;
      return;
    }
  }
  body.emplace_back(TextRun{text, paragraph});
}

}  // namespace

std::vector<std::pair<std::string, std::string>> GeneratedCorpus::files() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("concepts.xml", write_concept_scheme_xml(concepts));
  for (const LessonDoc& l : lessons) out.emplace_back("lessons/" + l.id + ".xml", write_lesson_xml(l));
  std::sort(out.begin(), out.end());
  return out;
}

GeneratedCorpus generate_corpus(const GeneratorParams& params) {
  if (params.chapters <= 0) throw std::invalid_argument("chapters must be positive");
  if (params.concepts <= 0) throw std::invalid_argument("concepts must be positive");
  if (!(params.mean_pages_per_chapter >= 1.0)) throw std::invalid_argument("mean pages per chapter must be >= 1");
  if (!(params.prereq_density >= 0.0 && params.prereq_density <= 1.0)) {
    throw std::invalid_argument("prerequisite density must be in [0, 1]");
  }

  XorShift64Star rng(params.seed);
  LabelFactory labels(rng);
  GeneratedCorpus corpus;
  const auto n = static_cast<std::size_t>(params.concepts);

  // Concepts.
  for (std::size_t i = 0; i < n; ++i) {
    ConceptDoc c;
    c.id = padded('c', i + 1, 4);
    c.label = labels.label();
    if (rng.chance(0.25)) c.synonyms.push_back(labels.label());
    if (rng.chance(0.5)) c.external_id = "KEY-" + padded('0', i + 1, 4);
    corpus.concepts.push_back(std::move(c));
  }

  // Random permutation; edges only point to earlier positions.
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  std::vector<std::size_t> position(n);
  for (std::size_t k = 0; k < n; ++k) position[perm[k]] = k;

  for (std::size_t k = 1; k < n; ++k) {
    ConceptDoc& c = corpus.concepts[perm[k]];
    std::set<std::size_t> drawn;
    std::size_t draws = std::min<std::size_t>(k, 3);
    while (drawn.size() < draws) drawn.insert(rng.below(k));
    for (std::size_t earlier : drawn) {
      if (rng.chance(params.prereq_density)) c.requires_ids.push_back(corpus.concepts[perm[earlier]].id);
    }
    if (rng.chance(0.3)) c.broader.push_back(corpus.concepts[perm[rng.below(k)]].id);
  }

  // Pages per chapter.
  const auto chapters = static_cast<std::size_t>(params.chapters);
  const auto pages = static_cast<std::size_t>(std::llround(params.chapters * params.mean_pages_per_chapter));
  std::vector<std::size_t> per_chapter(chapters, 1);
  for (std::size_t p = chapters; p < pages; ++p) ++per_chapter[rng.below(chapters)];

  std::vector<std::string> lesson_ids;
  for (std::size_t g = 0; g < pages; ++g) lesson_ids.push_back(padded('u', g + 1, 5));

  std::size_t g = 0;
  for (std::size_t h = 0; h < chapters; ++h) {
    for (std::size_t order = 1; order <= per_chapter[h]; ++order, ++g) {
      LessonDoc l;
      l.id = lesson_ids[g];
      l.chapter_id = padded('h', h + 1, 4);
      l.order = static_cast<int>(order);

      // Walk the concept permutation across the whole corpus so that earlier
      // pages teach prerequisites of later ones.
      std::size_t main_pos = g * n / pages;
      std::vector<std::size_t> taught{perm[main_pos]};
      auto extras = rng.below(3);
      for (std::uint64_t e = 0; e < extras; ++e) {
        std::size_t c = perm[rng.below(main_pos + 1)];
        if (std::find(taught.begin(), taught.end(), c) == taught.end()) taught.push_back(c);
      }
      const ConceptDoc& main = corpus.concepts[taught.front()];
      l.title = main.label + ": " + pick(rng, kTopics);
      l.study_time_minutes = static_cast<int>(5 * (1 + rng.below(12)));
      int diff = 1 + static_cast<int>(5 * main_pos / n) + static_cast<int>(rng.below(3)) - 1;
      l.difficulty = std::clamp(diff, 1, 5);
      double tg = rng.unit();
      l.target_group = tg < 0.55   ? TargetGroup::kStudents
                       : tg < 0.75 ? TargetGroup::kPupils
                       : tg < 0.85 ? TargetGroup::kTeachers
                                   : TargetGroup::kTrainees;
      auto readings = rng.below(3);
      for (std::uint64_t r = 0; r < readings; ++r) {
        const std::string& ref = lesson_ids[rng.below(pages)];
        if (ref != l.id && std::find(l.recommended_reading.begin(), l.recommended_reading.end(), ref) ==
                               l.recommended_reading.end()) {
          l.recommended_reading.push_back(ref);
        }
      }

      // Media count: 0/1/2/3 with probabilities .15/.40/.35/.10 (mean 1.4).
      double mr = rng.unit();
      std::size_t media = mr < 0.15 ? 0 : mr < 0.55 ? 1 : mr < 0.90 ? 2 : 3;

      std::size_t paragraphs = 2 + rng.below(3);
      std::size_t mention_cursor = 0;
      std::size_t media_left = media;
      for (std::size_t p = 0; p < paragraphs; ++p) {
        std::size_t sentences = 2 + rng.below(2);
        for (std::size_t s = 0; s < sentences; ++s) {
          std::string sentence = (p || s) ? " " : "";
          sentence += capitalize(pick(rng, kFiller));
          for (auto w = 1 + rng.below(3); w > 0; --w) sentence += std::string(" ") + pick(rng, kFiller);
          // Every taught concept appears at least once; later sentences add
          // mentions 80% of the time.
          bool mention = mention_cursor < taught.size() || rng.chance(0.8);
          if (mention) {
            const ConceptDoc& c =
                corpus.concepts[taught[mention_cursor < taught.size() ? mention_cursor : rng.below(taught.size())]];
            ++mention_cursor;
            std::string surface = !c.synonyms.empty() && rng.chance(0.3) ? c.synonyms.front() : c.label;
            append_text(l.body, p, sentence + " ");
            if (rng.chance(0.7)) {
              l.body.emplace_back(ChemRef{c.id, surface, p});
            } else {
              append_text(l.body, p, surface);
            }
            sentence.clear();
          }
          sentence += std::string(" ") + pick(rng, kFiller);
          for (auto w = rng.below(3); w > 0; --w) sentence += std::string(" ") + pick(rng, kFiller);
          append_text(l.body, p, sentence + ".");
        }
        bool last = p + 1 == paragraphs;
        while (media_left > 0 && (last || rng.chance(0.4))) {
          auto type = static_cast<MediaType>(rng.below(4));
          std::size_t k = media - media_left + 1;
          static constexpr std::array kExt = {".mp4", ".swf", ".png", ".jar"};
          l.body.emplace_back(MediaRef{type, "media/" + l.id + "-" + std::to_string(k) + kExt[static_cast<int>(type)]});
          --media_left;
        }
      }
      corpus.lessons.push_back(std::move(l));
    }
  }
  return corpus;
}

}  // namespace chemdelt::ingest
