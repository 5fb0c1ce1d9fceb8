#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>

#include "chemdelt/ingest/clem.h"
#include "chemdelt/kg/graph_store.h"
#include "chemdelt/learner/profile.h"
#include "chemdelt/linker/lexicon.h"
#include "chemdelt/search/index.h"
#include "chemdelt/service/json.h"

namespace chemdelt::service {

/// Immutable view served to requests. The index is built from exactly this
/// store.
struct Snapshot {
  kg::GraphStore store;
  search::Index index;
  linker::Lexicon lexicon;
  std::map<std::string, ingest::LessonDoc> lessons;  // by unit id, optional
};

/// Builds index and lexicon; lesson bodies feed the body field.
std::shared_ptr<const Snapshot> make_snapshot(kg::GraphStore store,
                                              std::map<std::string, ingest::LessonDoc> lessons = {});

/// An error with a stable (status, code) pair.
class ApiError : public std::runtime_error {
 public:
  ApiError(int status, std::string code, const std::string& message)
      : std::runtime_error(message), status_(status), code_(std::move(code)) {}
  int status() const noexcept { return status_; }
  const std::string& code() const noexcept { return code_; }

 private:
  int status_;
  std::string code_;
};

struct Response {
  int status = 200;
  Json body;
};

using QueryParams = std::multimap<std::string, std::string>;

/// Request routing over a swappable snapshot and a profile store. Transport
/// independent: the HTTP server only forwards to handle().
class App {
 public:
  App(std::shared_ptr<const Snapshot> snapshot, std::shared_ptr<learner::ProfileStore> profiles);

  std::shared_ptr<const Snapshot> snapshot() const;
  /// Requests already running keep the snapshot they started with.
  void reload(std::shared_ptr<const Snapshot> snapshot);
  learner::ProfileStore& profiles() const { return *profiles_; }

  /// Errors become {error:{code,message}} with their status.
  Response handle(std::string_view method, std::string_view path, const QueryParams& query,
                  std::string_view body) const;

 private:
  Json route(const Snapshot& snap, std::string_view method, std::string_view path, const QueryParams& query,
             std::string_view body) const;

  mutable std::mutex mutex_;
  std::shared_ptr<const Snapshot> snapshot_;
  std::shared_ptr<learner::ProfileStore> profiles_;
};

Json error_json(const std::string& code, const std::string& message);

}  // namespace chemdelt::service
