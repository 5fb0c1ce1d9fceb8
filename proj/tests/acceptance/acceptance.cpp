// Acceptance runner: one PASS/FAIL line per primary criterion.
// Usage: acceptance [WORKDIR] [--only NAME]

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "chemdelt/delt/trajectory.h"
#include "chemdelt/ingest/corpus.h"
#include "chemdelt/kg/graph_store.h"
#include "chemdelt/kg/ntriples.h"
#include "chemdelt/kg/vocabulary.h"
#include "chemdelt/learner/profile.h"
#include "chemdelt/linker/alignment.h"
#include "chemdelt/linker/entity_linker.h"
#include "chemdelt/linker/lexicon.h"
#include "chemdelt/linker/text.h"
#include "chemdelt/search/index.h"
#include "chemdelt/service/app.h"
#include "chemdelt/service/cli.h"
#include "chemdelt/service/http.h"
#include "oracles/delt_oracle.h"
#include "oracles/linker_oracle.h"
#include "oracles/search_oracle.h"
#include "support/random_dag.h"
#include "support/random_graph.h"
#include "support/search_fixture.h"
#include "support/service_fixture.h"

namespace fs = std::filesystem;
using namespace chemdelt;
namespace v = kg::vocab;
using kg::Iri;
using kg::Literal;
using kg::Triple;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// Collects failures; keeps the first few messages.
struct Tally {
  std::size_t failures = 0;
  std::vector<std::string> samples;

  void fail(std::string msg) {
    if (samples.size() < 3) samples.push_back(std::move(msg));
    ++failures;
  }
  std::string sample() const {
    std::string out;
    for (const auto& s : samples) out += (out.empty() ? "" : "; ") + s;
    return out;
  }
};

fs::path g_workdir;

int cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  int code = service::run_cli(args, out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

// Default-parameter corpus and its store, generated once.
struct ScaleCorpus {
  fs::path content;
  fs::path store;
  int gen_code = -1;
  int ingest_code = -1;
  double ingest_seconds = 0;
};

const ScaleCorpus& scale_corpus() {
  static ScaleCorpus c = [] {
    ScaleCorpus s;
    s.content = g_workdir / "corpus";
    s.store = g_workdir / "corpus.nt";
    fs::remove_all(s.content);
    s.gen_code = cli({"gen-corpus", "--out", s.content.string()});
    auto t0 = Clock::now();
    s.ingest_code = cli({"ingest", s.content.string(), "--out", s.store.string()});
    s.ingest_seconds = seconds_since(t0);
    return s;
  }();
  return c;
}

// ---------------------------------------------------------------------------

Outcome corpus_shape() {
  const auto& c = scale_corpus();
  if (c.gen_code != 0 || c.ingest_code != 0) {
    return {false, "gen-corpus exit " + std::to_string(c.gen_code) + ", ingest exit " + std::to_string(c.ingest_code)};
  }
  auto store = kg::load_ntriples(ingest::read_file(c.store));
  auto stats = ingest::corpus_stats(store);
  std::string validate_out;
  int validate = cli({"validate", c.store.string()}, &validate_out);

  bool chapters_ok = stats.chapters == 170;
  bool pages_ok = std::abs(static_cast<double>(stats.pages) - 1802.0) <= 0.05 * 1802.0;
  bool media_ok = std::abs(static_cast<double>(stats.media_objects) - 2500.0) <= 0.10 * 2500.0;
  bool time_ok = c.ingest_seconds < 60.0;
  Outcome o;
  o.pass = chapters_ok && pages_ok && media_ok && time_ok && validate == 0;
  o.detail = "chapters=" + std::to_string(stats.chapters) + " pages=" + std::to_string(stats.pages) +
             " (1802 +-5%) media=" + std::to_string(stats.media_objects) + " (2500 +-10%) triples=" +
             std::to_string(stats.triples) + " ingest=" + fmt("%.2fs", c.ingest_seconds) +
             " validate exit=" + std::to_string(validate);
  return o;
}

std::vector<Triple> linear_scan(const std::vector<Triple>& all, const kg::Pattern& q) {
  std::vector<Triple> out;
  for (const Triple& t : all) {
    if (q.subject && *q.subject != t.subject) continue;
    if (q.predicate && *q.predicate != t.predicate) continue;
    if (q.object && *q.object != t.object) continue;
    out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Outcome triple_store_suite() {
  auto t0 = Clock::now();
  testing::RandomGraph gen(20261016);
  Tally tally;
  std::size_t largest = 0, total = 0;
  const double log_max = std::log(10001.0);
  for (int round = 0; round < 1000; ++round) {
    auto target = static_cast<std::size_t>(
        std::exp(std::uniform_real_distribution<double>(0.0, log_max)(gen.engine())) - 1.0);
    kg::GraphStore s = gen.store(std::min<std::size_t>(target, 10000));
    largest = std::max(largest, s.size());
    total += s.size();

    std::string bytes = kg::serialize_ntriples(s);
    std::vector<kg::LineError> errors;
    kg::GraphStore back = kg::load_ntriples(bytes, &errors);
    auto spo = s.enumerate(kg::IndexOrder::kSpo);
    if (!errors.empty()) tally.fail("round " + std::to_string(round) + ": reparse error " + errors[0].message);
    if (back.enumerate(kg::IndexOrder::kSpo) != spo) tally.fail("round " + std::to_string(round) + ": triples differ");
    if (kg::serialize_ntriples(back) != bytes) tally.fail("round " + std::to_string(round) + ": bytes differ");

    // Same triples inserted in another order serialize identically.
    std::vector<Triple> shuffled = spo;
    std::shuffle(shuffled.begin(), shuffled.end(), gen.engine());
    kg::GraphStore other;
    for (const auto& t : shuffled) other.insert(t);
    if (kg::serialize_ntriples(other) != bytes) tally.fail("round " + std::to_string(round) + ": order-dependent");

    for (int probe_i = 0; probe_i < 3; ++probe_i) {
      Triple probe = spo.empty() || gen.uniform(0, 2) == 0 ? gen.triple(16)
                                                           : spo[gen.uniform(0, static_cast<int>(spo.size()) - 1)];
      for (int mask = 0; mask < 8; ++mask) {
        kg::Pattern p;
        if (mask & 1) p.subject = probe.subject;
        if (mask & 2) p.predicate = probe.predicate;
        if (mask & 4) p.object = probe.object;
        auto got = s.match(p);
        std::sort(got.begin(), got.end());
        auto want = linear_scan(spo, p);
        if (got != want || s.count(p) != want.size()) {
          tally.fail("round " + std::to_string(round) + ": mask " + std::to_string(mask));
        }
      }
    }
  }
  double secs = seconds_since(t0);
  Outcome o;
  o.pass = tally.failures == 0 && secs < 60.0;
  o.detail = "1000 stores (max " + std::to_string(largest) + ", total " + std::to_string(total) +
             " triples), 8 masks x 3 probes each, failures=" + std::to_string(tally.failures) + ", " +
             fmt("%.1fs", secs) + " (< 60s)";
  if (tally.failures) o.detail += ": " + tally.sample();
  return o;
}

Outcome search_oracle() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(777);
  Tally tally;
  int queries = 0;
  std::size_t hits = 0;
  for (int corpus = 0; corpus < 20; ++corpus) {
    auto fx = testing::random_search_fixture(rng, 5 + static_cast<int>(rng() % 60));
    auto idx = search::build_index(fx.store, fx.bodies);
    auto docs = oracle::naive_docs(fx.store, fx.bodies);
    for (int i = 0; i < 25; ++i, ++queries) {
      auto q = testing::random_query(rng, idx);
      auto got = search::search(idx, q);
      hits += got.total;
      if (!oracle::pages_agree(got, oracle::naive_search(docs, q), 1e-9)) {
        tally.fail("corpus " + std::to_string(corpus) + " query " + std::to_string(i));
      }
    }
  }
  double secs = seconds_since(t0);
  Outcome o;
  o.pass = tally.failures == 0 && queries == 500 && secs < 120.0;
  o.detail = std::to_string(queries) + " queries over 20 corpora (" + std::to_string(hits) +
             " total hits), mismatches=" + std::to_string(tally.failures) + ", " + fmt("%.1fs", secs) + " (< 120s)";
  if (tally.failures) o.detail += ": " + tally.sample();
  return o;
}

// Pronounceable unique words; fillers come from a disjoint alphabet.
std::string random_word(std::mt19937_64& rng, const char* const* syllables, std::size_t n, int parts) {
  std::string w;
  for (int i = 0; i < parts; ++i) w += syllables[rng() % n];
  return w;
}

Outcome entity_linker() {
  static const char* const kSyl[] = {"ben", "zol", "eth", "anol", "meth", "yl", "chlor", "id", "sulf", "at",
                                     "phos", "nitr", "ox", "ami", "carb", "on", "hydr", "fluor", "brom", "ester"};
  static const char* const kFill[] = {"und", "der", "die", "das", "mit", "ist", "wird", "eine", "durch", "bei",
                                      "nach", "über", "für", "sehr", "auch", "oft"};
  std::mt19937_64 rng(4242);

  // Planted fixture: unique 1-2 word labels, mentions separated by fillers.
  kg::GraphStore store;
  std::vector<std::pair<std::string, Iri>> labels;
  std::set<std::string> seen;
  while (labels.size() < 150) {
    int words = 1 + static_cast<int>(rng() % 2);
    std::string label;
    for (int w = 0; w < words; ++w) label += (w ? " " : "") + random_word(rng, kSyl, std::size(kSyl), 2 + rng() % 2);
    label[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(label[0])));
    if (!seen.insert(linker::normalize(label)).second) continue;
    Iri c = v::concept_iri("p" + std::to_string(labels.size()));
    store.insert(Triple{c, v::type(), v::concept_class()});
    store.insert(Triple{c, v::label(), Literal(label)});
    labels.emplace_back(label, c);
  }
  auto lex = linker::build_lexicon(store);

  std::size_t planted = 0, found = 0, correct = 0;
  for (int t = 0; t < 300; ++t) {
    std::string text;
    std::vector<std::tuple<std::size_t, std::size_t, Iri>> expected;
    int mentions = 1 + static_cast<int>(rng() % 20);
    for (int m = 0; m < mentions; ++m) {
      int fillers = 1 + static_cast<int>(rng() % 3);
      for (int f = 0; f < fillers; ++f) text += std::string(kFill[rng() % std::size(kFill)]) + (rng() % 6 ? " " : ", ");
      const auto& [label, c] = labels[rng() % labels.size()];
      std::string surface = label;
      if (rng() % 4 == 0) std::transform(surface.begin(), surface.end(), surface.begin(), ::toupper);
      expected.emplace_back(text.size(), text.size() + surface.size(), c);
      text += surface + (rng() % 3 ? " " : ". ");
    }
    auto got = linker::link_entities(text, lex, {});
    planted += expected.size();
    found += got.size();
    std::set<std::tuple<std::size_t, std::size_t, Iri>> want(expected.begin(), expected.end());
    for (const auto& m : got) correct += want.count({m.start, m.end, m.concept_iri});
  }
  double recall = planted ? static_cast<double>(correct) / planted : 1.0;
  double precision = found ? static_cast<double>(correct) / found : 1.0;

  // Property half: longest match and non-overlap on random texts.
  const std::vector<std::string> words = {"a", "b", "c", "ab", "Ä", "d-e", "f", "Säure"};
  Tally tally;
  for (int round = 0; round < 1000; ++round) {
    linker::Lexicon random_lex;
    int keys = 1 + static_cast<int>(rng() % 6);
    for (int k = 0; k < keys; ++k) {
      std::string key;
      int len = 1 + static_cast<int>(rng() % 3);
      for (int j = 0; j < len; ++j) key += (j ? " " : "") + words[rng() % words.size()];
      random_lex.add(key, v::concept_iri("r" + std::to_string(rng() % 4)));
    }
    std::string text;
    int n = static_cast<int>(rng() % 16);
    for (int j = 0; j < n; ++j) text += (j ? (rng() % 5 ? " " : ", ") : "") + words[rng() % words.size()];
    auto got = linker::link_entities(text, random_lex, {});
    if (got != oracle::greedy_longest_match(text, random_lex, {})) tally.fail("oracle mismatch on '" + text + "'");
    if (!oracle::non_overlapping_sorted(got)) tally.fail("overlap on '" + text + "'");
    if (!oracle::no_rightward_extension(text, random_lex, got)) tally.fail("not longest on '" + text + "'");
  }

  Outcome o;
  o.pass = correct == planted && found == planted && tally.failures == 0;
  o.detail = "planted=" + std::to_string(planted) + " recall=" + fmt("%.4f", recall) + " precision=" +
             fmt("%.4f", precision) + "; 1000 random texts, property failures=" + std::to_string(tally.failures);
  if (tally.failures) o.detail += ": " + tally.sample();
  return o;
}

// Brute-force alignment oracle: identifier matches first, then normalized
// label/synonym matches, smallest external IRI in each tier.
std::map<Iri, std::pair<Iri, linker::AlignMethod>> naive_align(const kg::GraphStore& store,
                                                               const linker::ExternalVocab& vocab) {
  std::map<Iri, std::pair<Iri, linker::AlignMethod>> out;
  for (const Triple& t : store) {
    if (t.predicate != v::type() || t.object != kg::Term(v::concept_class())) continue;
    const Iri& c = t.subject;
    std::set<std::string> ids, names;
    for (const Triple& u : store) {
      if (u.subject != c || !u.object.is_literal()) continue;
      if (u.predicate == v::external_id()) ids.insert(u.object.literal().lexical());
      if (u.predicate == v::label() || u.predicate == v::synonym()) names.insert(linker::normalize(u.object.literal().lexical()));
    }
    std::optional<Iri> by_id, by_label;
    for (const auto& e : vocab.entries) {
      if (e.identifier_key && ids.count(*e.identifier_key) && (!by_id || e.external_iri < *by_id)) by_id = e.external_iri;
      if (!e.label.empty() && names.count(linker::normalize(e.label)) && (!by_label || e.external_iri < *by_label)) {
        by_label = e.external_iri;
      }
    }
    if (by_id) {
      out.emplace(c, std::make_pair(*by_id, linker::AlignMethod::kIdentifier));
    } else if (by_label) {
      out.emplace(c, std::make_pair(*by_label, linker::AlignMethod::kLabel));
    }
  }
  return out;
}

Outcome alignment_fixture() {
  std::mt19937_64 rng(60301);
  static const char* const kSyl[] = {"ka", "lo", "mi", "ne", "pu", "ra", "si", "to", "ve", "zu"};

  kg::GraphStore store;
  std::vector<std::string> label(100);
  std::set<std::string> seen;
  for (int i = 0; i < 100; ++i) {
    do {
      label[i] = "Stoff " + random_word(rng, kSyl, std::size(kSyl), 3);
    } while (!seen.insert(label[i]).second);
    Iri c = v::concept_iri("a" + std::to_string(1000 + i));
    store.insert(Triple{c, v::type(), v::concept_class()});
    store.insert(Triple{c, v::label(), Literal(label[i])});
    if (i < 60) store.insert(Triple{c, v::external_id(), Literal("KEY-" + std::to_string(i))});
  }
  // Mutated copies keep the label normalized-equal.
  auto variant = [&](const std::string& s) {
    std::string out = "  ";
    for (char ch : s) out += rng() % 2 ? static_cast<char>(std::toupper(static_cast<unsigned char>(ch))) : ch;
    return out + (rng() % 2 ? " " : "");
  };
  std::string nt;
  for (int i = 0; i < 60; ++i) {
    // Identifier entries carry a decoy label belonging to another identified concept.
    std::string iri = "<http://ext.example/id/" + std::to_string(1000 + i) + ">";
    nt += iri + " <http://example.org/chemelearn/externalId> \"KEY-" + std::to_string(i) + "\" .\n";
    nt += iri + " <http://example.org/chemelearn/label> \"" + label[(i + 7) % 60] + "\" .\n";
  }
  for (int i = 60; i < 90; ++i) {
    std::string iri = "<http://ext.example/lbl/" + std::to_string(1000 + i) + ">";
    nt += iri + " <http://example.org/chemelearn/label> \"" + variant(label[i]) + "\" .\n";
    nt += iri + " <http://example.org/chemelearn/externalId> \"OTHER-" + std::to_string(i) + "\" .\n";
  }
  for (int i = 90; i < 100; ++i) {
    nt += "<http://ext.example/miss/" + std::to_string(i) + "> <http://example.org/chemelearn/label> \"" + label[i] +
          " x\" .\n";
  }
  auto loaded = linker::load_external_vocab(nt, "planted");
  auto links = linker::align(store, loaded.vocab);
  std::size_t by_id = 0, by_label = 0, wrong = 0;
  std::set<Iri> linked;
  for (const auto& l : links) {
    linked.insert(l.local_concept);
    std::string local = *v::local_id(l.local_concept, "concept");
    int idx = std::stoi(local.substr(1)) - 1000;
    if (l.method == linker::AlignMethod::kIdentifier) {
      ++by_id;
      if (idx >= 60 || l.external_iri.str() != "http://ext.example/id/" + std::to_string(1000 + idx)) ++wrong;
    } else {
      ++by_label;
      if (idx < 60 || idx >= 90 || l.external_iri.str() != "http://ext.example/lbl/" + std::to_string(1000 + idx)) {
        ++wrong;
      }
    }
  }
  std::size_t unlinked = 100 - linked.size();

  // Randomized fixtures: identifier precedence and full agreement with the oracle.
  Tally tally;
  std::size_t precedence_cases = 0;
  for (int round = 0; round < 300; ++round) {
    kg::GraphStore s;
    int n = 1 + static_cast<int>(rng() % 30);
    int key_pool = 1 + static_cast<int>(rng() % 10);
    int label_pool = 1 + static_cast<int>(rng() % 10);
    for (int i = 0; i < n; ++i) {
      Iri c = v::concept_iri("r" + std::to_string(i));
      s.insert(Triple{c, v::type(), v::concept_class()});
      s.insert(Triple{c, v::label(), Literal("Name " + std::to_string(rng() % label_pool))});
      if (rng() % 3 == 0) s.insert(Triple{c, v::synonym(), Literal("NAME " + std::to_string(rng() % label_pool))});
      if (rng() % 2) s.insert(Triple{c, v::external_id(), Literal("K" + std::to_string(rng() % key_pool))});
    }
    linker::ExternalVocab vocab{"random", {}};
    int entries = static_cast<int>(rng() % 25);
    std::set<Iri> used;
    for (int e = 0; e < entries; ++e) {
      Iri iri("http://ext.example/r/" + std::to_string(rng() % 1000));
      if (!used.insert(iri).second) continue;
      linker::VocabEntry entry{iri, rng() % 4 ? " name " + std::to_string(rng() % label_pool) : "", std::nullopt};
      if (rng() % 2) entry.identifier_key = "K" + std::to_string(rng() % key_pool);
      vocab.entries.push_back(entry);
    }
    std::sort(vocab.entries.begin(), vocab.entries.end(),
              [](const auto& a, const auto& b) { return a.external_iri < b.external_iri; });
    auto want = naive_align(s, vocab);
    kg::GraphStore copy = s;
    auto got = linker::align(copy, vocab);
    std::map<Iri, std::pair<Iri, linker::AlignMethod>> got_map;
    for (const auto& l : got) got_map.emplace(l.local_concept, std::make_pair(l.external_iri, l.method));
    if (got_map != want) tally.fail("round " + std::to_string(round));
    for (const auto& [c, link] : want) precedence_cases += link.second == linker::AlignMethod::kIdentifier;
  }

  Outcome o;
  o.pass = by_id == 60 && by_label == 30 && unlinked == 10 && wrong == 0 && tally.failures == 0;
  o.detail = "identifier=" + std::to_string(by_id) + " label=" + std::to_string(by_label) + " unlinked=" +
             std::to_string(unlinked) + " misdirected=" + std::to_string(wrong) + "; 300 random fixtures (" +
             std::to_string(precedence_cases) + " identifier links), mismatches=" + std::to_string(tally.failures);
  return o;
}

Outcome trajectory_suite() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(1000);
  Tally tally;
  std::size_t steps = 0, gaps = 0, truncated = 0;
  for (int round = 0; round < 1000; ++round) {
    auto rc = testing::random_curriculum(rng, 200, 400);
    delt::TrajectoryRequest req{rc.concepts[rng() % rc.concepts.size()], testing::random_profile(rng, rc.concepts),
                                1 + static_cast<int>(rng() % 5), learner::kTheta, std::nullopt};
    if (rng() % 4 == 0) req.max_minutes = static_cast<long long>(rng() % 300);
    auto t = delt::generate_trajectory(rc.store, req);
    steps += t.steps.size();
    gaps += t.gaps.size();
    truncated += t.truncated;
    if (auto problem = oracle::check_trajectory(rc.store, req, t)) tally.fail("round " + std::to_string(round) + ": " + *problem);
    if (delt::generate_trajectory(rc.store, req) != t) tally.fail("round " + std::to_string(round) + ": nondeterministic");

    auto strong = testing::dominate(rng, req.profile, rc.concepts);
    auto weak_req = delt::required_concepts(rc.store, req.goal, req.profile);
    auto strong_req = delt::required_concepts(rc.store, req.goal, strong);
    std::set<Iri> weak_set(weak_req.begin(), weak_req.end());
    for (const auto& c : strong_req) {
      if (!weak_set.count(c)) {
        tally.fail("round " + std::to_string(round) + ": closure grew under domination");
        break;
      }
    }
  }

  // Empty profile over a one-concept-per-unit chain reproduces ce:next.
  std::size_t chain_mismatch = 0;
  for (int round = 0; round < 200; ++round) {
    kg::GraphStore s;
    int n = 1 + static_cast<int>(rng() % 60);
    std::vector<Iri> concepts, units;
    for (int i = 0; i < n; ++i) {
      std::string id = std::to_string(rng() % 1000000) + "_" + std::to_string(i);
      concepts.push_back(v::concept_iri("k" + id));
      units.push_back(v::unit("w" + id));
      s.insert(Triple{concepts[i], v::type(), v::concept_class()});
      if (i) s.insert(Triple{concepts[i], v::requires_(), concepts[i - 1]});
      s.insert(Triple{units[i], v::type(), v::learning_unit_class()});
      s.insert(Triple{units[i], v::teaches(), concepts[i]});
      s.insert(Triple{units[i], v::study_time(), Literal::integer(static_cast<long long>(rng() % 50))});
      s.insert(Triple{units[i], v::difficulty(), Literal::integer(1 + static_cast<long long>(rng() % 5))});
      s.insert(Triple{units[i], v::part_of(), v::chapter("chain")});
      if (i) s.insert(Triple{units[i - 1], v::next(), units[i]});
    }
    auto t = delt::generate_trajectory(s, {concepts.back(), {}, 3, learner::kTheta, std::nullopt});
    auto cmp = delt::compare_with_static(s, t, v::chapter("chain"));
    if (cmp.dynamic_units != cmp.static_units || cmp.static_units != units) ++chain_mismatch;
  }

  double secs = seconds_since(t0);
  Outcome o;
  o.pass = tally.failures == 0 && chain_mismatch == 0 && secs < 120.0;
  o.detail = "1000 random DAGs (" + std::to_string(steps) + " steps, " + std::to_string(gaps) + " gaps, " +
             std::to_string(truncated) + " truncated), validator failures=" + std::to_string(tally.failures) +
             "; 200 static chains, mismatches=" + std::to_string(chain_mismatch) + ", " + fmt("%.1fs", secs) +
             " (< 120s)";
  if (tally.failures) o.detail += ": " + tally.sample();
  return o;
}

Outcome learner_model() {
  std::mt19937_64 rng(31337);
  Tally tally;
  std::size_t events = 0;
  for (int stream = 0; stream < 300; ++stream) {
    auto rc = testing::random_curriculum(rng, 20, 15);
    if (rc.units.empty()) continue;
    learner::UserProfile p;
    for (int i = 0; i < 80; ++i, ++events) {
      const Iri& u = rc.units[rng() % rc.units.size()];
      learner::SessionEvent e = rng() % 25 == 0   ? learner::SessionEvent::reset()
                                : rng() % 2       ? learner::SessionEvent::view(u, static_cast<long long>(rng() % 4000))
                                                  : learner::SessionEvent::quiz(u, std::uniform_real_distribution<double>(0, 1)(rng));
      auto next = learner::apply_event(p, e, rc.store);
      for (const auto& [c, m] : next.mastery) {
        if (!(m >= 0.0 && m <= 1.0)) tally.fail("unbounded mastery");
      }
      if (e.kind != learner::EventKind::kReset) {
        double q = learner::event_quality(e, rc.store);
        for (const kg::Term& c : rc.store.objects(u, v::teaches())) {
          double before = p.mastery_of(c.iri()), after = next.mastery_of(c.iri());
          if (after < before) tally.fail("mastery decreased");
          if (q > 0 && before < 1.0 && !(after > before)) tally.fail("mastery did not increase");
        }
        for (const auto& [c, m] : next.mastery) {
          if (!rc.store.contains(Triple{u, v::teaches(), c}) && m != p.mastery_of(c)) tally.fail("untaught concept moved");
        }
      }
      p = next;
    }
  }

  // Convergence: one perfect quiz leaves m = 0.6 < theta, two give 0.84 >= theta.
  auto chain = testing::chain_corpus();
  learner::UserProfile p;
  p = learner::apply_event(p, learner::SessionEvent::quiz(v::unit("u1"), 1.0), chain.store);
  double one = p.mastery_of(v::concept_iri("a"));
  p = learner::apply_event(p, learner::SessionEvent::quiz(v::unit("u1"), 1.0), chain.store);
  double two = p.mastery_of(v::concept_iri("a"));
  double bound = std::ceil(std::log(1 - learner::kTheta) / std::log(1 - learner::kAlpha));
  bool converged = bound == 2.0 && one < learner::kTheta && two >= learner::kTheta && std::abs(two - 0.84) < 1e-12 &&
                   learner::mastered_set(p).count(v::concept_iri("a"));

  // Persistence: record round trip and a store reload are exact.
  std::size_t persistence_failures = 0;
  fs::path file = g_workdir / "acceptance_profiles.txt";
  fs::remove(file);
  std::map<std::string, learner::UserProfile> expected;
  {
    learner::ProfileStore store(file);
    for (int i = 0; i < 200; ++i) {
      auto rc = testing::random_curriculum(rng, 10, 8);
      std::string sid = "s" + std::to_string(i);
      for (int k = 0; k < 15 && !rc.units.empty(); ++k) {
        store.record_event(sid, learner::SessionEvent::quiz(rc.units[rng() % rc.units.size()],
                                                            std::uniform_real_distribution<double>(0, 1)(rng)),
                           rc.store);
      }
      auto promoted = store.promote_session(sid, "user" + std::to_string(i));
      expected.emplace("user" + std::to_string(i), promoted);
      auto back = learner::parse_profile_record(learner::format_profile_record("x", promoted));
      if (!back || back->mastery != promoted.mastery || back->event_count != promoted.event_count) {
        ++persistence_failures;
      }
    }
  }
  auto reloaded = learner::ProfileStore::load(file);
  for (const auto& [user, profile] : expected) {
    auto got = reloaded->registered_profile(user);
    if (!got || got->mastery != profile.mastery || got->event_count != profile.event_count) ++persistence_failures;
  }
  fs::remove(file);

  Outcome o;
  o.pass = tally.failures == 0 && converged && persistence_failures == 0 && reloaded->diagnostics().empty();
  o.detail = std::to_string(events) + " random events, property failures=" + std::to_string(tally.failures) +
             "; convergence m1=" + fmt("%.12g", one) + " m2=" + fmt("%.12g", two) + " bound=" + fmt("%.0f", bound) +
             "; persistence failures=" + std::to_string(persistence_failures) + " over 200 profiles";
  if (tally.failures) o.detail += ": " + tally.sample();
  return o;
}

struct RunningServer {
  service::App app;
  service::HttpServer server;
  int port = -1;
  std::thread thread;

  RunningServer(std::shared_ptr<const service::Snapshot> snap)
      : app(std::move(snap), std::make_shared<learner::ProfileStore>()), server(app) {
    port = server.bind(0);
    if (port > 0) {
      thread = std::thread([this] { server.listen_after_bind(); });
      server.wait_until_ready();
    }
  }
  ~RunningServer() {
    server.stop();
    if (thread.joinable()) thread.join();
  }
};

std::shared_ptr<const service::Snapshot> snapshot_from(const fs::path& store, const fs::path& content) {
  auto corpus = ingest::load_corpus_dir(content);
  return service::make_snapshot(kg::load_ntriples(ingest::read_file(store)), ingest::index_lessons(corpus.lessons));
}

Outcome end_to_end() {
  // Scripted loop on the chain fixture.
  fs::path dir = g_workdir / "e2e_chain";
  fs::remove_all(dir);
  testing::write_chain_corpus(dir);
  if (cli({"ingest", dir.string(), "--out", (g_workdir / "e2e_chain.nt").string()}) != 0) {
    return {false, "fixture ingest failed"};
  }
  std::vector<std::string> loop_units;
  {
    RunningServer rs(snapshot_from(g_workdir / "e2e_chain.nt", dir));
    if (rs.port <= 0) return {false, "cannot bind"};
    httplib::Client client("127.0.0.1", rs.port);
    for (int i = 0; i < 2; ++i) {
      auto r = client.Post("/api/sessions/e2e/events", R"({"kind":"quiz","unitId":"u1","score":1})", "application/json");
      if (!r || r->status != 200) return {false, "event request failed"};
    }
    auto r = client.Post("/api/trajectories", R"({"sessionId":"e2e","goal":"c"})", "application/json");
    if (!r || r->status != 200) return {false, "trajectory request failed"};
    auto body = service::Json::parse(r->body);
    for (const auto& s : body["steps"]) loop_units.push_back(s["unit"]);
  }
  bool loop_ok = loop_units == std::vector<std::string>{"u2", "u3"};

  // Latency on the default-scale corpus.
  const auto& c = scale_corpus();
  if (c.ingest_code != 0) return {false, "scale corpus unavailable"};
  auto snap = snapshot_from(c.store, c.content);
  std::vector<std::string> units, concepts, chapters, words;
  for (const auto& d : snap->index.docs()) units.push_back(service::unit_id(d.unit));
  for (const Iri& ci : snap->store.subjects(v::type(), v::concept_class())) concepts.push_back(service::concept_id(ci));
  for (const Iri& ch : snap->store.subjects(v::type(), v::chapter_class())) chapters.push_back(service::chapter_id(ch));
  for (const auto& d : snap->index.docs()) {
    for (const auto& tok : d.field_tokens[0]) words.push_back(tok);
  }
  RunningServer rs(snap);
  if (rs.port <= 0) return {false, "cannot bind"};
  httplib::Client client("127.0.0.1", rs.port);
  std::mt19937_64 rng(5150);
  std::map<std::string, std::vector<double>> by_kind;
  std::vector<double> all;
  std::size_t errors = 0;
  auto pick = [&](const std::vector<std::string>& xs) { return xs[rng() % xs.size()]; };
  for (int i = 0; i < 400; ++i) {
    std::string kind;
    auto t0 = Clock::now();
    httplib::Result r;
    std::string sid = "lat" + std::to_string(rng() % 20);
    switch (i % 8) {
      case 0:
        kind = "search";
        r = client.Get("/api/search?q=" + httplib::detail::encode_query_param(pick(words)) +
                       (rng() % 2 ? "&facet.difficulty=3&facet.difficulty=4" : ""));
        break;
      case 1:
        kind = "unit";
        r = client.Get("/api/units/" + pick(units));
        break;
      case 2:
        kind = "concept";
        r = client.Get("/api/concepts/" + pick(concepts));
        break;
      case 3:
        kind = "event";
        r = client.Post("/api/sessions/" + sid + "/events",
                        R"({"kind":"quiz","unitId":")" + pick(units) + R"(","score":0.9})", "application/json");
        break;
      case 4:
        kind = "trajectory";
        r = client.Post("/api/trajectories", R"({"sessionId":")" + sid + R"(","goal":")" + pick(concepts) + "\"}",
                        "application/json");
        break;
      case 5:
        kind = "compare";
        r = client.Get("/api/trajectories/compare?sessionId=" + sid + "&goal=" + pick(concepts) +
                       "&chapter=" + pick(chapters));
        break;
      case 6:
        kind = "profile";
        r = client.Get("/api/sessions/" + sid + "/profile");
        break;
      default:
        kind = "stats";
        r = client.Get("/api/stats");
        break;
    }
    double ms = seconds_since(t0) * 1000.0;
    if (!r || r->status != 200) ++errors;
    by_kind[kind].push_back(ms);
    all.push_back(ms);
  }
  auto median = [](std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    return xs.empty() ? 0.0 : xs[xs.size() / 2];
  };
  double med = median(all);
  std::string per_kind;
  for (const auto& [k, xs] : by_kind) per_kind += " " + k + "=" + fmt("%.2f", median(xs));

  Outcome o;
  o.pass = loop_ok && errors == 0 && med < 50.0;
  o.detail = std::string("loop trajectory [") + (loop_units.empty() ? "" : loop_units.front()) +
             (loop_units.size() > 1 ? "," + loop_units[1] : "") + "] omits u1=" + (loop_ok ? "yes" : "no") +
             "; 400 requests on " + std::to_string(units.size()) + "-unit corpus, non-200=" + std::to_string(errors) +
             ", median " + fmt("%.2fms", med) + " (< 50ms); per-endpoint median ms:" + per_kind;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::string only;
  g_workdir = fs::temp_directory_path() / ("chemdelt_acceptance_" + std::to_string(::getpid()));
  bool own_workdir = true;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = argv[++i];
    } else {
      g_workdir = a;
      own_workdir = false;
    }
  }
  fs::create_directories(g_workdir);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"corpus-shape", corpus_shape},
      {"triple-store-suite", triple_store_suite},
      {"search-oracle", search_oracle},
      {"entity-linker", entity_linker},
      {"alignment-fixture", alignment_fixture},
      {"trajectory-suite", trajectory_suite},
      {"learner-model", learner_model},
      {"end-to-end-loop", end_to_end},
  };

  int failed = 0, ran = 0;
  for (const auto& [name, check] : criteria) {
    if (!only.empty() && name != only) continue;
    ++ran;
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " [" << fmt("%.1fs", seconds_since(t0)) << "] " << o.detail
              << std::endl;
  }
  std::cout << (ran - failed) << "/" << ran << " criteria passed" << std::endl;
  if (own_workdir) fs::remove_all(g_workdir);
  return failed ? 1 : 0;
}
