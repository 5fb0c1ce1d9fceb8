#include "chemdelt/learner/profile.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "chemdelt/kg/vocabulary.h"

namespace chemdelt::learner {

namespace v = kg::vocab;

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::kView: return "view";
    case EventKind::kQuiz: return "quiz";
    case EventKind::kReset: return "reset";
  }
  return "reset";
}

std::optional<EventKind> parse_event_kind(std::string_view s) {
  for (auto k : {EventKind::kView, EventKind::kQuiz, EventKind::kReset}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

SessionEvent SessionEvent::view(kg::Iri unit, long long dwell_seconds) {
  SessionEvent e;
  e.kind = EventKind::kView;
  e.unit = std::move(unit);
  e.dwell_seconds = dwell_seconds;
  return e;
}

SessionEvent SessionEvent::quiz(kg::Iri unit, double score) {
  SessionEvent e;
  e.kind = EventKind::kQuiz;
  e.unit = std::move(unit);
  e.score = score;
  return e;
}

SessionEvent SessionEvent::reset() { return SessionEvent{}; }

void check_event(const SessionEvent& e) {
  switch (e.kind) {
    case EventKind::kView:
      if (!e.unit) throw EventError("view event needs a unit");
      if (!e.dwell_seconds) throw EventError("view event needs dwellSeconds");
      if (*e.dwell_seconds < 0) throw EventError("dwellSeconds must be non-negative");
      if (e.score) throw EventError("view event takes no score");
      break;
    case EventKind::kQuiz:
      if (!e.unit) throw EventError("quiz event needs a unit");
      if (!e.score) throw EventError("quiz event needs a score");
      if (!(*e.score >= 0.0 && *e.score <= 1.0)) throw EventError("score must be in [0, 1]");
      if (e.dwell_seconds) throw EventError("quiz event takes no dwellSeconds");
      break;
    case EventKind::kReset:
      if (e.unit || e.dwell_seconds || e.score) throw EventError("reset event takes no fields");
      break;
  }
}

double UserProfile::mastery_of(const kg::Iri& concept_iri) const {
  auto it = mastery.find(concept_iri);
  return it == mastery.end() ? 0.0 : it->second;
}

double quantize(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

double event_quality(const SessionEvent& e, const kg::GraphStore& store) {
  switch (e.kind) {
    case EventKind::kQuiz: return *e.score;
    case EventKind::kReset: return 0.0;
    case EventKind::kView: break;
  }
  long long minutes = 10;
  if (auto t = store.first_object(*e.unit, v::study_time()); t && t->is_literal()) {
    const std::string& lex = t->literal().lexical();
    long long parsed = 0;
    auto [p, ec] = std::from_chars(lex.data(), lex.data() + lex.size(), parsed);
    if (ec == std::errc() && p == lex.data() + lex.size()) minutes = parsed;
  }
  long long dwell = *e.dwell_seconds;
  if (minutes <= 0) return dwell > 0 ? 1.0 : 0.0;
  return std::clamp(static_cast<double>(dwell) / (60.0 * static_cast<double>(minutes)), 0.0, 1.0);
}

namespace {

double step_up(double m, double target) {
  double r = std::min(1.0, quantize(target));
  if (r > m) return r;
  double step = std::pow(10.0, std::floor(std::log10(m)) - 11);
  while (r <= m) r = quantize(r + step);
  return std::min(1.0, r);
}

}  // namespace

UserProfile apply_event(const UserProfile& profile, const SessionEvent& event, const kg::GraphStore& store) {
  check_event(event);
  UserProfile out = profile;
  ++out.event_count;
  if (event.kind == EventKind::kReset) {
    out.mastery.clear();
    return out;
  }
  if (!store.has_type(*event.unit, v::learning_unit_class())) {
    throw UnknownUnitError("unknown unit " + event.unit->str());
  }
  double q = event_quality(event, store);
  if (q <= 0.0) return out;
  for (const kg::Term& c : store.objects(*event.unit, v::teaches())) {
    if (!c.is_iri()) continue;
    double m = out.mastery_of(c.iri());
    if (m >= 1.0) continue;
    out.mastery[c.iri()] = step_up(m, m + kAlpha * q * (1.0 - m));
  }
  return out;
}

std::set<kg::Iri> mastered_set(const UserProfile& profile, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must be in (0, 1]");
  std::set<kg::Iri> out;
  for (const auto& [c, m] : profile.mastery) {
    if (m >= theta) out.insert(c);
  }
  return out;
}

bool is_valid_user_id(std::string_view id) noexcept {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-' || c == '.' || c == '@';
  });
}

std::string format_profile_record(const std::string& user_id, const UserProfile& profile) {
  std::string out = user_id + "\t" + std::to_string(profile.event_count) + "\t";
  bool first = true;
  for (const auto& [c, m] : profile.mastery) {
    if (c.str().find(',') != std::string::npos) throw ProfileError("concept IRI contains ',': " + c.str());
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", m);
    if (!first) out += ",";
    first = false;
    out += c.str() + "=" + buf;
  }
  return out;
}

std::optional<UserProfile> parse_profile_record(std::string_view line, std::string* error) {
  auto fail = [&](const std::string& why) -> std::optional<UserProfile> {
    if (error) *error = why;
    return std::nullopt;
  };
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  auto t1 = line.find('\t');
  auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
  if (t2 == std::string_view::npos || line.find('\t', t2 + 1) != std::string_view::npos) {
    return fail("expected 3 tab-separated fields");
  }
  std::string_view user = line.substr(0, t1);
  std::string_view count = line.substr(t1 + 1, t2 - t1 - 1);
  std::string_view rest = line.substr(t2 + 1);
  if (!is_valid_user_id(user)) return fail("invalid user id");

  UserProfile p;
  p.registered = true;
  p.user_id = std::string(user);
  auto [end, ec] = std::from_chars(count.data(), count.data() + count.size(), p.event_count);
  if (ec != std::errc() || end != count.data() + count.size() || count.empty()) return fail("invalid event count");

  while (!rest.empty()) {
    auto comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (comma != std::string_view::npos && rest.empty()) return fail("trailing ','");
    auto eq = item.rfind('=');
    if (eq == std::string_view::npos) return fail("mastery entry without '='");
    std::string iri(item.substr(0, eq));
    std::string_view num = item.substr(eq + 1);
    if (!kg::Iri::is_valid(iri)) return fail("invalid concept IRI");
    double value = 0;
    auto [e2, ec2] = std::from_chars(num.data(), num.data() + num.size(), value);
    if (ec2 != std::errc() || e2 != num.data() + num.size() || num.empty()) return fail("invalid mastery value");
    if (!(value >= 0.0 && value <= 1.0)) return fail("mastery value out of [0, 1]");
    if (!p.mastery.emplace(kg::Iri(iri), value).second) return fail("duplicate concept");
  }
  return p;
}

ProfileStore::ProfileStore(std::filesystem::path path) : path_(std::move(path)) {}

std::unique_ptr<ProfileStore> ProfileStore::load(const std::filesystem::path& path) {
  auto store = std::make_unique<ProfileStore>(path);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return store;
  std::ifstream in(path, std::ios::binary);
  if (!in || std::filesystem::is_directory(path, ec)) throw ProfileError("cannot read " + path.string());
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::string why;
    auto p = parse_profile_record(line, &why);
    if (!p) {
      store->diagnostics_.push_back("line " + std::to_string(number) + ": " + why);
      continue;
    }
    auto entry = std::make_shared<Entry>();
    entry->profile = std::move(*p);
    store->registered_[*entry->profile.user_id] = entry;
  }
  if (in.bad()) throw ProfileError("cannot read " + path.string());
  return store;
}

UserProfile ProfileStore::session_profile(const std::string& session_id) const {
  std::shared_ptr<Entry> e;
  {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) return UserProfile{};
    e = it->second;
  }
  std::lock_guard lock(e->mutex);
  return e->profile;
}

std::optional<UserProfile> ProfileStore::registered_profile(const std::string& user_id) const {
  std::shared_ptr<Entry> e;
  {
    std::lock_guard lock(mutex_);
    auto it = registered_.find(user_id);
    if (it == registered_.end()) return std::nullopt;
    e = it->second;
  }
  std::lock_guard lock(e->mutex);
  return e->profile;
}

std::vector<std::string> ProfileStore::registered_users() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, e] : registered_) out.push_back(id);
  return out;
}

std::shared_ptr<ProfileStore::Entry> ProfileStore::session_entry(const std::string& session_id) {
  std::lock_guard lock(mutex_);
  auto& slot = sessions_[session_id];
  if (!slot) slot = std::make_shared<Entry>();
  return slot;
}

void ProfileStore::append_record(const std::string& line) {
  if (!path_) return;
  std::lock_guard lock(file_mutex_);
  std::ofstream out(*path_, std::ios::binary | std::ios::app);
  out << line << '\n';
  out.flush();
  if (!out) throw ProfileError("cannot write " + path_->string());
}

UserProfile ProfileStore::record_event(const std::string& session_id, SessionEvent event,
                                       const kg::GraphStore& store) {
  // Validate before creating the session so bad requests leave no state.
  check_event(event);
  if (event.unit && !store.has_type(*event.unit, v::learning_unit_class())) {
    throw UnknownUnitError("unknown unit " + event.unit->str());
  }
  auto e = session_entry(session_id);
  std::lock_guard lock(e->mutex);
  event.session_id = session_id;
  event.sequence = e->next_sequence;
  UserProfile next = apply_event(e->profile, event, store);
  ++e->next_sequence;
  e->profile = std::move(next);
  if (e->profile.registered) append_record(format_profile_record(*e->profile.user_id, e->profile));
  return e->profile;
}

UserProfile ProfileStore::promote_session(const std::string& session_id, const std::string& user_id) {
  if (!is_valid_user_id(user_id)) throw ProfileError("invalid user id '" + user_id + "'");
  std::shared_ptr<Entry> e;
  {
    std::lock_guard lock(mutex_);
    if (registered_.contains(user_id)) throw UserExistsError("user id '" + user_id + "' already exists");
    auto& slot = sessions_[session_id];
    if (!slot) slot = std::make_shared<Entry>();
    e = slot;
    std::lock_guard entry_lock(e->mutex);
    if (e->profile.registered) throw ProfileError("session '" + session_id + "' is already registered");
    e->profile.registered = true;
    e->profile.user_id = user_id;
    registered_[user_id] = e;
  }
  std::lock_guard lock(e->mutex);
  append_record(format_profile_record(user_id, e->profile));
  return e->profile;
}

void ProfileStore::persist_profile(const std::string& user_id) {
  std::shared_ptr<Entry> e;
  {
    std::lock_guard lock(mutex_);
    auto it = registered_.find(user_id);
    if (it == registered_.end()) throw ProfileError("user '" + user_id + "' is not registered");
    e = it->second;
  }
  std::lock_guard lock(e->mutex);
  append_record(format_profile_record(user_id, e->profile));
}

}  // namespace chemdelt::learner
