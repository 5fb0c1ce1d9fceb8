#include "chemdelt/service/cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "chemdelt/delt/trajectory.h"
#include "chemdelt/ingest/convert.h"
#include "chemdelt/ingest/corpus.h"
#include "chemdelt/ingest/generator.h"
#include "chemdelt/kg/graph_queries.h"
#include "chemdelt/kg/ntriples.h"
#include "chemdelt/linker/alignment.h"
#include "chemdelt/search/index.h"
#include "chemdelt/service/app.h"
#include "chemdelt/service/http.h"
#include "chemdelt/service/json.h"

namespace chemdelt::service {

namespace fs = std::filesystem;
using kg::Iri;

namespace {

// Reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw UsageError("cannot write " + path.string());
}

std::string read_input(const std::string& path) {
  try {
    return ingest::read_file(path);
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
}

kg::GraphStore load_store(const std::string& path) {
  std::string text = read_input(path);
  std::vector<kg::LineError> errors;
  kg::GraphStore store;
  try {
    store = kg::load_ntriples(text, &errors);
  } catch (const kg::NTriplesError& e) {
    throw UsageError(path + ": " + e.what());
  }
  if (!errors.empty()) {
    throw UsageError(path + ":" + std::to_string(errors.front().line) + ": " + errors.front().message);
  }
  return store;
}

std::map<std::string, ingest::LessonDoc> load_content(const std::string& dir, std::ostream& err) {
  if (dir.empty()) return {};
  ingest::LoadedCorpus corpus;
  try {
    corpus = ingest::load_corpus_dir(dir);
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
  for (const auto& e : corpus.errors) err << "warning: " << e << "\n";
  return ingest::index_lessons(std::move(corpus.lessons));
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string format_score(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

int cmd_gen_corpus(const ingest::GeneratorParams& params, const std::string& out_dir, std::ostream& out) {
  ingest::GeneratedCorpus corpus;
  try {
    corpus = ingest::generate_corpus(params);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  auto files = corpus.files();
  for (const auto& [rel, content] : files) write_file(fs::path(out_dir) / rel, content);
  out << "wrote " << files.size() << " files (" << corpus.lessons.size() << " lessons, " << corpus.concepts.size()
      << " concepts) to " << out_dir << "\n";
  return kExitOk;
}

int cmd_ingest(const std::string& dir, const std::string& out_path, const std::string& report_path, bool link,
               std::ostream& out, std::ostream& err) {
  ingest::LoadedCorpus corpus;
  try {
    corpus = ingest::load_corpus_dir(dir);
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
  for (const auto& e : corpus.errors) err << e << "\n";

  ingest::ConversionResult result;
  try {
    result = ingest::convert_corpus(corpus.lessons, corpus.concepts, ingest::ConvertOptions{link});
  } catch (const ingest::ConversionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  result.report.files_parsed = corpus.files_parsed;
  write_file(out_path, kg::serialize_ntriples(result.store));
  if (!report_path.empty()) {
    std::string text = result.report.to_text();
    for (const auto& e : corpus.errors) text += "parse error: " + e + "\n";
    write_file(report_path, text);
  }
  auto stats = ingest::corpus_stats(result.store);
  out << "files " << corpus.files_parsed << ", triples " << result.store.size() << ", pages " << stats.pages
      << ", chapters " << stats.chapters << ", concepts " << stats.concepts << ", mentions linked "
      << result.report.mentions_linked << ", dangling refs " << result.report.dangling_refs << "\n";
  return corpus.errors.empty() ? kExitOk : kExitInvalid;
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  std::string text = read_input(path);
  std::vector<kg::LineError> errors;
  kg::GraphStore store;
  try {
    store = kg::load_ntriples(text, &errors);
  } catch (const kg::NTriplesError& e) {
    throw UsageError(path + ": " + e.what());
  }
  for (const auto& e : errors) out << "line " << e.line << "\tsyntax\t" << e.message << "\n";
  auto violations = kg::validate_schema(store);
  for (const auto& v : violations) out << v.subject.str() << "\t" << v.rule << "\t" << v.message << "\n";
  err << store.size() << " triples, " << errors.size() << " syntax errors, " << violations.size()
      << " violations\n";
  return errors.empty() && violations.empty() ? kExitOk : kExitInvalid;
}

int cmd_align(const std::string& store_path, const std::string& vocab_path, const std::string& name,
              const std::string& out_path, const std::string& report_path, std::ostream& out, std::ostream& err) {
  kg::GraphStore store = load_store(store_path);
  linker::VocabLoadResult vocab;
  try {
    vocab = linker::load_external_vocab(read_input(vocab_path), name);
  } catch (const kg::NTriplesError& e) {
    throw UsageError(vocab_path + ": " + e.what());
  }
  for (const auto& e : vocab.errors) err << vocab_path << ":" << e.line << ": " << e.message << "\n";
  auto links = linker::align(store, vocab.vocab);
  write_file(out_path, kg::serialize_ntriples(store));
  if (!report_path.empty()) write_file(report_path, linker::alignment_report_tsv(links));
  std::size_t by_id = std::count_if(links.begin(), links.end(),
                                    [](const auto& l) { return l.method == linker::AlignMethod::kIdentifier; });
  out << "aligned " << links.size() << " concepts with " << name << " (" << by_id << " by identifier, "
      << links.size() - by_id << " by label)\n";
  return kExitOk;
}

struct TrajectoryOptions {
  std::string store_path;
  std::string goal;
  std::string profile_path;
  std::string user;
  int level = delt::kDefaultLevel;
  double theta = learner::kTheta;
  std::optional<long long> max_minutes;
  std::string compare_chapter;
  bool json = false;
};

int cmd_trajectory(const TrajectoryOptions& o, std::ostream& out, std::ostream& err) {
  kg::GraphStore store = load_store(o.store_path);
  learner::UserProfile profile;
  if (!o.user.empty()) {
    if (o.profile_path.empty()) throw UsageError("--user needs --profile");
    std::unique_ptr<learner::ProfileStore> profiles;
    try {
      profiles = learner::ProfileStore::load(o.profile_path);
    } catch (const learner::ProfileError& e) {
      throw UsageError(e.what());
    }
    for (const auto& d : profiles->diagnostics()) err << "warning: " << o.profile_path << ": " << d << "\n";
    auto p = profiles->registered_profile(o.user);
    if (!p) throw UsageError("unknown user " + o.user);
    profile = *p;
  }

  Iri goal = [&] {
    try {
      return concept_ref(o.goal);
    } catch (const kg::TermError&) {
      throw UsageError("unknown concept " + o.goal);
    }
  }();
  delt::TrajectoryRequest req{goal, profile, o.level, o.theta, o.max_minutes};
  delt::Trajectory t;
  try {
    t = delt::generate_trajectory(store, req);
  } catch (const delt::UnknownConceptError&) {
    throw UsageError("unknown concept " + o.goal);
  } catch (const delt::RequestError& e) {
    throw UsageError(e.what());
  } catch (const delt::CyclicPrerequisitesError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  std::optional<delt::PathComparison> cmp;
  if (!o.compare_chapter.empty()) {
    try {
      cmp = delt::compare_with_static(store, t, chapter_ref(o.compare_chapter));
    } catch (const delt::StaticPathError& e) {
      err << "error: " << e.what() << "\n";
      return kExitInvalid;
    } catch (const kg::TermError&) {
      throw UsageError("unknown chapter " + o.compare_chapter);
    }
  }

  if (o.json) {
    Json j = trajectory_json(store, t);
    if (cmp) j["comparison"] = comparison_json(*cmp);
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  out << "step\tunit\ttitle\tminutes\tcontributes\tcumulative\n";
  long long cumulative = 0;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& s = t.steps[i];
    cumulative += s.study_time_minutes;
    std::vector<std::string> ids;
    for (const Iri& c : s.contributes) ids.push_back(concept_id(c));
    out << i + 1 << "\t" << s.unit.str() << "\t" << label_of(store, s.unit) << "\t" << s.study_time_minutes << "\t"
        << join(ids, ",") << "\t" << cumulative << "\n";
  }
  std::vector<std::string> gaps;
  for (const Iri& c : t.gaps) gaps.push_back(concept_id(c));
  out << "gaps: " << (gaps.empty() ? "-" : join(gaps, ",")) << "\n";
  out << "total minutes: " << t.total_minutes << (t.truncated ? " (truncated by budget)" : "") << "\n";
  if (cmp) {
    auto ids = [](const auto& units) {
      std::vector<std::string> v;
      for (const Iri& u : units) v.push_back(unit_id(u));
      return v.empty() ? std::string("-") : join(v, ",");
    };
    out << "static: " << ids(cmp->static_units) << "\n";
    out << "skipped: " << ids(cmp->skipped) << "\nadded: " << ids(cmp->added) << "\n";
    out << "order inversions: " << cmp->order_inversions << "\n";
  }
  return kExitOk;
}

struct SearchOptions {
  std::string store_path;
  std::string q;
  std::vector<std::string> facets;
  std::size_t page = 0;
  std::size_t size = 10;
  std::string content;
  bool json = false;
};

int cmd_search(const SearchOptions& o, std::ostream& out, std::ostream& err) {
  kg::GraphStore store = load_store(o.store_path);
  std::vector<std::pair<std::string, std::string>> facets;
  for (const auto& f : o.facets) {
    auto eq = f.find('=');
    if (eq == std::string::npos) throw UsageError("--facet expects dim=value, got " + f);
    facets.emplace_back(f.substr(0, eq), f.substr(eq + 1));
  }
  search::SearchQuery q;
  try {
    q = search::make_query(o.q, facets);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (o.size == 0) throw UsageError("--size must be positive");
  q.page = o.page;
  q.page_size = o.size;
  auto snap = make_snapshot(std::move(store), load_content(o.content, err));
  auto page = search::search(snap->index, q);
  if (o.json) {
    out << result_page_json(page).dump(2) << "\n";
    return kExitOk;
  }
  out << "total\t" << page.total << "\n";
  for (std::size_t i = 0; i < page.hits.size(); ++i) {
    const auto& h = page.hits[i];
    out << q.page * q.page_size + i + 1 << "\t" << format_score(h.score) << "\t" << unit_id(h.unit) << "\t" << h.title
        << "\n";
  }
  for (const auto& [dim, counts] : page.facet_counts) {
    for (const auto& [value, n] : counts) {
      if (n) out << "facet\t" << search::to_string(dim) << "\t" << value << "\t" << n << "\n";
    }
  }
  return kExitOk;
}

int cmd_stats(const std::string& path, bool json, std::ostream& out) {
  auto stats = ingest::corpus_stats(load_store(path));
  if (json) {
    out << stats_json(stats).dump(2) << "\n";
    return kExitOk;
  }
  out << "pages\t" << stats.pages << "\nchapters\t" << stats.chapters << "\nmediaObjects\t" << stats.media_objects
      << "\nconcepts\t" << stats.concepts << "\ntriples\t" << stats.triples << "\n";
  return kExitOk;
}

struct ServeOptions {
  std::string store_path;
  std::optional<int> port;
  std::string host = "127.0.0.1";
  std::string profiles;
  std::string content;
  std::optional<std::string> cors_origin;
};

int cmd_serve(const ServeOptions& o, std::ostream& out, std::ostream& err) {
  auto snap = make_snapshot(load_store(o.store_path), load_content(o.content, err));
  std::shared_ptr<learner::ProfileStore> profiles;
  if (o.profiles.empty()) {
    profiles = std::make_shared<learner::ProfileStore>();
  } else {
    try {
      profiles = learner::ProfileStore::load(o.profiles);
    } catch (const learner::ProfileError& e) {
      throw UsageError(e.what());
    }
    for (const auto& d : profiles->diagnostics()) err << "warning: " << o.profiles << ": " << d << "\n";
  }
  App app(snap, profiles);
  HttpServer server(app, ServerOptions{o.host, o.cors_origin});
  int port = server.bind(o.port.value_or(default_port()));
  if (port < 0) throw UsageError("cannot bind " + o.host + ":" + std::to_string(o.port.value_or(default_port())));
  out << "listening on http://" << o.host << ":" << port << "\n" << std::flush;
  return server.listen_after_bind() ? kExitOk : kExitUsage;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semantic eLearning engine: ingest, validate, align, search, trajectories, serve", "chemdelt"};
  app.require_subcommand(1);

  ingest::GeneratorParams gen;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen-corpus", "Generate a synthetic XML corpus");
  gen_cmd->add_option("--seed", gen.seed, "PRNG seed");
  gen_cmd->add_option("--chapters", gen.chapters, "Number of chapters");
  gen_cmd->add_option("--mean-pages", gen.mean_pages_per_chapter, "Mean pages per chapter");
  gen_cmd->add_option("--concepts", gen.concepts, "Number of concepts");
  gen_cmd->add_option("--density", gen.prereq_density, "Prerequisite density in [0,1]");
  gen_cmd->add_option("--out", gen_out, "Output directory")->required();

  std::string ingest_dir, ingest_out, ingest_report;
  bool no_link = false;
  auto* ingest_cmd = app.add_subcommand("ingest", "Parse, link and convert an XML corpus to N-Triples");
  ingest_cmd->add_option("dir", ingest_dir, "Corpus directory")->required();
  ingest_cmd->add_option("--out", ingest_out, "Output store")->required();
  ingest_cmd->add_option("--report", ingest_report, "Conversion report file");
  ingest_cmd->add_flag("--no-link", no_link, "Skip entity linking of body text");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a store against the schema");
  validate_cmd->add_option("store", validate_path, "Store file")->required();

  std::string align_store, align_vocab, align_name, align_out, align_report;
  auto* align_cmd = app.add_subcommand("align", "Align concepts with an external vocabulary");
  align_cmd->add_option("store", align_store, "Store file")->required();
  align_cmd->add_option("--external", align_vocab, "External vocabulary (N-Triples)")->required();
  align_cmd->add_option("--name", align_name, "Vocabulary name")->required();
  align_cmd->add_option("--out", align_out, "Aligned store")->required();
  align_cmd->add_option("--report", align_report, "Link report (TSV)");

  TrajectoryOptions traj;
  long long max_minutes = 0;
  auto* traj_cmd = app.add_subcommand("trajectory", "Generate a learning trajectory");
  traj_cmd->add_option("store", traj.store_path, "Store file")->required();
  traj_cmd->add_option("--goal", traj.goal, "Goal concept id")->required();
  traj_cmd->add_option("--profile", traj.profile_path, "Profile file");
  traj_cmd->add_option("--user", traj.user, "Registered user id");
  traj_cmd->add_option("--level", traj.level, "Difficulty level 1..5");
  traj_cmd->add_option("--theta", traj.theta, "Mastery threshold");
  auto* max_opt = traj_cmd->add_option("--max-minutes", max_minutes, "Study time budget");
  traj_cmd->add_option("--compare", traj.compare_chapter, "Compare with a chapter's static path");
  traj_cmd->add_flag("--json", traj.json, "JSON output");

  SearchOptions srch;
  auto* search_cmd = app.add_subcommand("search", "Full-text and faceted search");
  search_cmd->add_option("store", srch.store_path, "Store file")->required();
  search_cmd->add_option("--q", srch.q, "Query terms");
  search_cmd->add_option("--facet", srch.facets, "Facet filter dim=value (repeatable)");
  search_cmd->add_option("--page", srch.page, "Result page (0-based)");
  search_cmd->add_option("--size", srch.size, "Page size");
  search_cmd->add_option("--content", srch.content, "Lesson XML directory for body text");
  search_cmd->add_flag("--json", srch.json, "JSON output");

  std::string stats_path;
  bool stats_json_flag = false;
  auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics");
  stats_cmd->add_option("store", stats_path, "Store file")->required();
  stats_cmd->add_flag("--json", stats_json_flag, "JSON output");

  ServeOptions serve;
  int port = 0;
  std::string cors;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
  serve_cmd->add_option("store", serve.store_path, "Store file")->required();
  auto* port_opt = serve_cmd->add_option("--port", port, "Port (default: $CHEMDELT_PORT or 8080)");
  serve_cmd->add_option("--host", serve.host, "Bind address");
  serve_cmd->add_option("--profiles", serve.profiles, "Profile persistence file");
  serve_cmd->add_option("--content", serve.content, "Lesson XML directory for bodies and media");
  auto* cors_opt = serve_cmd->add_option("--cors-origin", cors, "Allowed cross-origin UI origin");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen_corpus(gen, gen_out, out);
    if (*ingest_cmd) return cmd_ingest(ingest_dir, ingest_out, ingest_report, !no_link, out, err);
    if (*validate_cmd) return cmd_validate(validate_path, out, err);
    if (*align_cmd) return cmd_align(align_store, align_vocab, align_name, align_out, align_report, out, err);
    if (*traj_cmd) {
      if (*max_opt) traj.max_minutes = max_minutes;
      return cmd_trajectory(traj, out, err);
    }
    if (*search_cmd) return cmd_search(srch, out, err);
    if (*stats_cmd) return cmd_stats(stats_path, stats_json_flag, out);
    if (*serve_cmd) {
      if (*port_opt) serve.port = port;
      if (*cors_opt) serve.cors_origin = cors;
      return cmd_serve(serve, out, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace chemdelt::service
