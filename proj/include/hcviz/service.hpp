#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcviz/error.hpp"
#include "hcviz/explorer.hpp"

namespace hcviz {

enum class SessionStatus { pending, running, ready, failed };

const char* to_string(SessionStatus status) noexcept;

/// One analysed graph plus its interactive state. Readers take the shared
/// lock; moves take it exclusively.
struct Session {
  std::string id;
  SessionStatus status = SessionStatus::pending;
  std::string stage = "queued";
  std::optional<nlohmann::json> error;
  PipelineParams params;
  std::optional<Explorer> explorer;
  mutable std::shared_mutex mutex;
};

class SessionManager {
 public:
  /// With a data directory, sessions are written there after every change
  /// and restored from it on construction.
  explicit SessionManager(std::optional<std::filesystem::path> data_dir = std::nullopt);
  ~SessionManager();
  SessionManager(const SessionManager&) = delete;
  SessionManager& operator=(const SessionManager&) = delete;

  /// Parses the inputs immediately (errors propagate) and runs the
  /// pipeline on a worker thread, or inline when `wait` is set.
  std::string create(std::string_view edges, std::string_view attributes, const PipelineParams& params, bool wait);

  /// Throws Error(not_found) for unknown ids.
  std::shared_ptr<Session> get(const std::string& id) const;
  bool remove(const std::string& id);
  std::vector<std::string> ids() const;

  nlohmann::json status(const Session& session) const;
  /// Writes the session bundle when persistence is on. Caller holds a lock.
  void persist(const Session& session) const;
  /// Joins all pipeline threads.
  void drain();

 private:
  void run_pipeline(const std::shared_ptr<Session>& session, PreparedGraph prepared);
  void restore();

  std::optional<std::filesystem::path> data_dir_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::vector<std::thread> workers_;
};

struct ServiceOptions {
  std::string host = "127.0.0.1";
  /// 0 picks a free port.
  int port = 8080;
  std::optional<std::filesystem::path> data_dir;
  std::size_t max_upload_bytes = std::size_t{256} << 20;
};

/// The /v1 HTTP+JSON API.
class Service {
 public:
  explicit Service(ServiceOptions options);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the listening socket and returns the port.
  int bind();
  /// Serves until stop(); requires bind().
  void listen();
  /// bind() + listen() on a background thread; returns the port.
  int start();
  void stop();

  SessionManager& sessions();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// HTTP status for an error kind (400, 404 or 409).
int http_status(ErrorKind kind) noexcept;
nlohmann::json error_document(ErrorKind kind, std::string_view reason);

}  // namespace hcviz
