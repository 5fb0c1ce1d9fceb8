#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chemdelt/kg/graph_store.h"

namespace chemdelt::learner {

inline constexpr double kAlpha = 0.6;  // learning rate
inline constexpr double kTheta = 0.7;  // mastery threshold

/// Malformed event (missing or extra fields for its kind, out-of-range values).
class EventError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Event names a unit that is not a ce:LearningUnit in the store.
class UnknownUnitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Promotion to a user id that is already registered.
class UserExistsError : public ProfileError {
 public:
  using ProfileError::ProfileError;
};

enum class EventKind { kView, kQuiz, kReset };

std::string_view to_string(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view s);

struct SessionEvent {
  std::string session_id;
  EventKind kind = EventKind::kReset;
  std::optional<kg::Iri> unit;
  std::optional<long long> dwell_seconds;  // view only
  std::optional<double> score;             // quiz only
  std::uint64_t sequence = 0;              // assigned on receipt

  static SessionEvent view(kg::Iri unit, long long dwell_seconds);
  static SessionEvent quiz(kg::Iri unit, double score);
  static SessionEvent reset();
};

/// Throws EventError unless the event carries exactly the fields for its kind
/// with in-range values.
void check_event(const SessionEvent& event);

struct UserProfile {
  std::map<kg::Iri, double> mastery;  // absent = 0
  std::uint64_t event_count = 0;
  bool registered = false;
  std::optional<std::string> user_id;

  double mastery_of(const kg::Iri& concept_iri) const;
  friend bool operator==(const UserProfile&, const UserProfile&) = default;
};

/// Rounds to 12 significant decimal digits (the persisted precision).
double quantize(double x);

/// Quality q of an event: view -> clamp(dwell / (60 * studyTime), 0, 1),
/// quiz -> score, reset -> 0. A unit without ce:studyTime uses 10 minutes; a
/// study time of 0 gives q = 1 for any positive dwell.
double event_quality(const SessionEvent& event, const kg::GraphStore& store);

/// For every concept c taught by the unit:
///   m'(c) = m(c) + alpha * q * (1 - m(c))
/// quantized to 12 significant digits, rounding up to the next such decimal
/// when q > 0 would otherwise leave m(c) < 1 unchanged. Reset clears mastery.
/// Always increments event_count. Throws EventError / UnknownUnitError.
UserProfile apply_event(const UserProfile& profile, const SessionEvent& event, const kg::GraphStore& store);

/// Concepts with mastery >= theta. Throws std::invalid_argument unless
/// 0 < theta <= 1.
std::set<kg::Iri> mastered_set(const UserProfile& profile, double theta = kTheta);

/// One persistence record: userId TAB eventCount TAB iri=value(,iri=value)*
/// with IRIs in sorted order and values printed with %.12g.
std::string format_profile_record(const std::string& user_id, const UserProfile& profile);

/// Parses a record; nullopt (with `error` filled) when the line is corrupt.
std::optional<UserProfile> parse_profile_record(std::string_view line, std::string* error = nullptr);

bool is_valid_user_id(std::string_view id) noexcept;

/// Session table plus the durable registered table. A promoted session and
/// its registered entry share one profile object. Thread-safe; events for one
/// session are applied in receipt order.
class ProfileStore {
 public:
  ProfileStore() = default;
  /// Registered profiles are appended to `path` when persisted.
  explicit ProfileStore(std::filesystem::path path);

  ProfileStore(const ProfileStore&) = delete;
  ProfileStore& operator=(const ProfileStore&) = delete;

  /// Replays `path` (missing file = empty), last record per user wins.
  /// Corrupt lines are skipped and reported in diagnostics(). Throws
  /// ProfileError if the file exists but cannot be read.
  static std::unique_ptr<ProfileStore> load(const std::filesystem::path& path);

  /// Copy of the session's profile; an unknown session yields an empty
  /// profile and is not created.
  UserProfile session_profile(const std::string& session_id) const;
  std::optional<UserProfile> registered_profile(const std::string& user_id) const;
  std::vector<std::string> registered_users() const;

  /// Assigns the next sequence number, applies the event and returns the new
  /// profile. Registered profiles are re-persisted.
  UserProfile record_event(const std::string& session_id, SessionEvent event, const kg::GraphStore& store);

  /// Marks the session registered under `user_id` and persists it. Creates
  /// the session if needed. Throws UserExistsError on a taken user id and
  /// ProfileError on an invalid id or an already registered session.
  UserProfile promote_session(const std::string& session_id, const std::string& user_id);

  /// Appends the current record. Throws ProfileError for unknown users.
  void persist_profile(const std::string& user_id);

  const std::vector<std::string>& diagnostics() const { return diagnostics_; }
  const std::optional<std::filesystem::path>& path() const { return path_; }

 private:
  struct Entry {
    std::mutex mutex;
    UserProfile profile;
    std::uint64_t next_sequence = 1;
  };

  std::shared_ptr<Entry> session_entry(const std::string& session_id);
  void append_record(const std::string& line);

  mutable std::mutex mutex_;  // guards the two tables
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::map<std::string, std::shared_ptr<Entry>> registered_;
  std::mutex file_mutex_;
  std::optional<std::filesystem::path> path_;
  std::vector<std::string> diagnostics_;
};

}  // namespace chemdelt::learner
