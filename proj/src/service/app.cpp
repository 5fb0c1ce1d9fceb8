#include "chemdelt/service/app.h"

#include <charconv>
#include <vector>

#include "chemdelt/delt/trajectory.h"
#include "chemdelt/ingest/corpus.h"
#include "chemdelt/kg/vocabulary.h"

namespace chemdelt::service {

namespace v = kg::vocab;
using kg::Iri;

std::shared_ptr<const Snapshot> make_snapshot(kg::GraphStore store, std::map<std::string, ingest::LessonDoc> lessons) {
  auto snap = std::make_shared<Snapshot>();
  search::BodyTexts bodies;
  for (const auto& [id, doc] : lessons) bodies.emplace(v::unit(id), ingest::body_text(doc));
  snap->index = search::Index::build(store, bodies);
  snap->lexicon = linker::build_lexicon(store);
  snap->store = std::move(store);
  snap->lessons = std::move(lessons);
  return snap;
}

Json error_json(const std::string& code, const std::string& message) {
  Json e;
  e["code"] = code;
  e["message"] = message;
  Json j;
  j["error"] = std::move(e);
  return j;
}

App::App(std::shared_ptr<const Snapshot> snapshot, std::shared_ptr<learner::ProfileStore> profiles)
    : snapshot_(std::move(snapshot)), profiles_(std::move(profiles)) {
  if (!snapshot_) snapshot_ = make_snapshot({});
  if (!profiles_) profiles_ = std::make_shared<learner::ProfileStore>();
}

std::shared_ptr<const Snapshot> App::snapshot() const {
  std::lock_guard lock(mutex_);
  return snapshot_;
}

void App::reload(std::shared_ptr<const Snapshot> snapshot) {
  std::lock_guard lock(mutex_);
  snapshot_ = std::move(snapshot);
}

namespace {

ApiError bad_request(const std::string& message) { return ApiError(400, "bad_request", message); }

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < path.size()) {
    if (path[i] == '/') {
      ++i;
      continue;
    }
    std::size_t j = path.find('/', i);
    if (j == std::string_view::npos) j = path.size();
    out.push_back(path.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<std::string> param(const QueryParams& q, const std::string& key) {
  auto it = q.find(key);
  if (it == q.end()) return std::nullopt;
  return it->second;
}

long long parse_integer(const std::string& s, const std::string& name) {
  long long n = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size()) throw bad_request(name + " must be an integer");
  return n;
}

double parse_number(const std::string& s, const std::string& name) {
  double x = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size()) throw bad_request(name + " must be a number");
  return x;
}

Json parse_body(std::string_view body, const std::string& code) {
  Json j = Json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ApiError(400, code, "request body must be a JSON object");
  return j;
}

std::optional<std::string> string_field(const Json& j, const char* key, const std::string& code) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ApiError(400, code, std::string(key) + " must be a string");
  return it->get<std::string>();
}

std::optional<long long> integer_field(const Json& j, const char* key, const std::string& code) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer()) throw ApiError(400, code, std::string(key) + " must be an integer");
  return it->get<long long>();
}

std::optional<double> number_field(const Json& j, const char* key, const std::string& code) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw ApiError(400, code, std::string(key) + " must be a number");
  return it->get<double>();
}

Iri existing_unit(const kg::GraphStore& store, const std::string& id) {
  try {
    Iri u = unit_ref(id);
    if (store.has_type(u, v::learning_unit_class())) return u;
  } catch (const kg::TermError&) {
  }
  throw ApiError(404, "unit_not_found", "unknown unit " + id);
}

Iri concept_arg(const std::string& id) {
  try {
    return concept_ref(id);
  } catch (const kg::TermError&) {
    throw ApiError(404, "concept_not_found", "unknown concept " + id);
  }
}

struct TrajectoryArgs {
  std::optional<std::string> session_id;
  std::string goal;
  std::optional<long long> level;
  std::optional<double> theta;
  std::optional<long long> max_minutes;
};

delt::Trajectory run_trajectory(const Snapshot& snap, const learner::ProfileStore& profiles, const TrajectoryArgs& a) {
  delt::TrajectoryRequest req{concept_arg(a.goal), {}, delt::kDefaultLevel, learner::kTheta, a.max_minutes};
  if (a.session_id) req.profile = profiles.session_profile(*a.session_id);
  if (a.level) {
    if (*a.level < 1 || *a.level > 5) throw bad_request("level must be in 1..5");
    req.level = static_cast<int>(*a.level);
  }
  if (a.theta) req.theta = *a.theta;
  try {
    return delt::generate_trajectory(snap.store, req);
  } catch (const delt::UnknownConceptError& e) {
    throw ApiError(404, "concept_not_found", "unknown concept " + a.goal);
  } catch (const delt::CyclicPrerequisitesError& e) {
    throw ApiError(422, "cyclic_prerequisites", e.what());
  } catch (const delt::RequestError& e) {
    throw bad_request(e.what());
  }
}

Json search_route(const Snapshot& snap, const QueryParams& query) {
  std::vector<std::pair<std::string, std::string>> facets;
  for (const auto& [k, val] : query) {
    if (k.rfind("facet.", 0) == 0) facets.emplace_back(k.substr(6), val);
  }
  search::SearchQuery q;
  try {
    q = search::make_query(param(query, "q").value_or(""), facets);
  } catch (const std::invalid_argument& e) {
    throw bad_request(e.what());
  }
  if (auto p = param(query, "page")) {
    long long n = parse_integer(*p, "page");
    if (n < 0) throw bad_request("page must be non-negative");
    q.page = static_cast<std::size_t>(n);
  }
  if (auto s = param(query, "size")) {
    long long n = parse_integer(*s, "size");
    if (n < 1) throw bad_request("size must be positive");
    q.page_size = static_cast<std::size_t>(n);
  }
  return result_page_json(search::search(snap.index, q));
}

Json event_route(const Snapshot& snap, learner::ProfileStore& profiles, const std::string& sid,
                 std::string_view body) {
  const std::string code = "bad_event";
  Json j = parse_body(body, code);
  auto kind_name = string_field(j, "kind", code);
  if (!kind_name) throw ApiError(400, code, "kind is required");
  auto kind = learner::parse_event_kind(*kind_name);
  if (!kind) throw ApiError(400, code, "unknown event kind " + *kind_name);

  learner::SessionEvent e;
  e.session_id = sid;
  e.kind = *kind;
  if (auto unit = string_field(j, "unitId", code)) e.unit = existing_unit(snap.store, *unit);
  e.dwell_seconds = integer_field(j, "dwellSeconds", code);
  e.score = number_field(j, "score", code);
  try {
    auto profile = profiles.record_event(sid, std::move(e), snap.store);
    Json out;
    out["eventCount"] = profile.event_count;
    return out;
  } catch (const learner::UnknownUnitError& ex) {
    throw ApiError(404, "unit_not_found", ex.what());
  } catch (const learner::EventError& ex) {
    throw ApiError(400, code, ex.what());
  }
}

Json register_route(learner::ProfileStore& profiles, const std::string& sid, std::string_view body) {
  Json j = parse_body(body, "bad_request");
  auto user = string_field(j, "userId", "bad_request");
  if (!user || !learner::is_valid_user_id(*user)) throw bad_request("userId must match [A-Za-z0-9_.@-]+");
  if (profiles.session_profile(sid).registered) {
    throw ApiError(409, "already_registered", "session " + sid + " is already registered");
  }
  try {
    return profile_json(profiles.promote_session(sid, *user));
  } catch (const learner::UserExistsError& e) {
    throw ApiError(409, "user_exists", e.what());
  }
}

TrajectoryArgs trajectory_body(std::string_view body) {
  const std::string code = "bad_request";
  Json j = parse_body(body, code);
  TrajectoryArgs a;
  a.session_id = string_field(j, "sessionId", code);
  auto goal = string_field(j, "goal", code);
  if (!goal) throw bad_request("goal is required");
  a.goal = *goal;
  a.level = integer_field(j, "level", code);
  a.theta = number_field(j, "theta", code);
  a.max_minutes = integer_field(j, "maxMinutes", code);
  return a;
}

Json compare_route(const Snapshot& snap, const learner::ProfileStore& profiles, const QueryParams& query) {
  TrajectoryArgs a;
  a.session_id = param(query, "sessionId");
  auto goal = param(query, "goal");
  auto chapter = param(query, "chapter");
  if (!goal || !chapter) throw bad_request("goal and chapter are required");
  a.goal = *goal;
  if (auto s = param(query, "level")) a.level = parse_integer(*s, "level");
  if (auto s = param(query, "theta")) a.theta = parse_number(*s, "theta");
  if (auto s = param(query, "maxMinutes")) a.max_minutes = parse_integer(*s, "maxMinutes");

  std::optional<Iri> ch;
  try {
    ch = chapter_ref(*chapter);
  } catch (const kg::TermError&) {
  }
  if (!ch || (!snap.store.has_type(*ch, v::chapter_class()) && snap.store.subjects(v::part_of(), *ch).empty())) {
    throw ApiError(404, "chapter_not_found", "unknown chapter " + *chapter);
  }
  auto t = run_trajectory(snap, profiles, a);
  try {
    return comparison_json(delt::compare_with_static(snap.store, t, *ch));
  } catch (const delt::StaticPathError& e) {
    throw ApiError(422, "broken_chain", e.what());
  }
}

}  // namespace

Json App::route(const Snapshot& snap, std::string_view method, std::string_view path, const QueryParams& query,
                std::string_view body) const {
  auto seg = split_path(path);
  auto not_found = [&] { return ApiError(404, "not_found", "no route for " + std::string(path)); };
  if (seg.size() < 2 || seg[0] != "api") throw not_found();
  bool get = method == "GET";
  bool post = method == "POST";
  auto require = [&](bool ok) {
    if (!ok) throw ApiError(405, "method_not_allowed", std::string(method) + " not allowed on " + std::string(path));
  };

  const std::string_view kind = seg[1];
  if (kind == "units" && seg.size() == 3) {
    require(get);
    Iri u = existing_unit(snap.store, std::string(seg[2]));
    auto doc = snap.lessons.find(unit_id(u));
    return unit_json(snap.store, u, doc == snap.lessons.end() ? nullptr : &doc->second);
  }
  if (kind == "concepts" && seg.size() == 3) {
    require(get);
    std::string id(seg[2]);
    Iri c = concept_arg(id);
    if (!snap.store.has_type(c, v::concept_class())) throw ApiError(404, "concept_not_found", "unknown concept " + id);
    return concept_json(snap.store, c);
  }
  if (kind == "search" && seg.size() == 2) {
    require(get);
    return search_route(snap, query);
  }
  if (kind == "sessions" && seg.size() == 4) {
    std::string sid(seg[2]);
    if (seg[3] == "events") {
      require(post);
      return event_route(snap, *profiles_, sid, body);
    }
    if (seg[3] == "profile") {
      require(get);
      return profile_json(profiles_->session_profile(sid));
    }
    if (seg[3] == "register") {
      require(post);
      return register_route(*profiles_, sid, body);
    }
  }
  if (kind == "trajectories" && seg.size() == 2) {
    require(post);
    return trajectory_json(snap.store, run_trajectory(snap, *profiles_, trajectory_body(body)));
  }
  if (kind == "trajectories" && seg.size() == 3 && seg[2] == "compare") {
    require(get);
    return compare_route(snap, *profiles_, query);
  }
  if (kind == "stats" && seg.size() == 2) {
    require(get);
    return stats_json(ingest::corpus_stats(snap.store));
  }
  throw not_found();
}

Response App::handle(std::string_view method, std::string_view path, const QueryParams& query,
                     std::string_view body) const {
  auto snap = snapshot();
  Response r;
  try {
    r.body = route(*snap, method, path, query, body);
  } catch (const ApiError& e) {
    r.status = e.status();
    r.body = error_json(e.code(), e.what());
  } catch (const std::exception& e) {
    r.status = 500;
    r.body = error_json("internal_error", e.what());
  }
  return r;
}

}  // namespace chemdelt::service
