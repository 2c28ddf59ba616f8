#include "hcviz/service.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <httplib.h>

namespace hcviz {

using nlohmann::json;
namespace fs = std::filesystem;

const char* to_string(SessionStatus status) noexcept {
  switch (status) {
    case SessionStatus::pending: return "pending";
    case SessionStatus::running: return "running";
    case SessionStatus::ready: return "ready";
    case SessionStatus::failed: return "failed";
  }
  return "failed";
}

int http_status(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::not_found: return 404;
    case ErrorKind::no_substructure:
    case ErrorKind::significance_boundary:
    case ErrorKind::invalid_move:
    case ErrorKind::not_ready: return 409;
    case ErrorKind::parse:
    case ErrorKind::invalid_argument:
    case ErrorKind::refused: return 400;
  }
  return 400;
}

json error_document(ErrorKind kind, std::string_view reason) {
  return {{"error", {{"kind", to_string(kind)}, {"reason", reason}}}};
}

namespace {

std::string new_session_id() {
  static std::mutex mutex;
  static std::mt19937_64 engine{std::random_device{}()};
  std::lock_guard lock(mutex);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(engine()));
  return buf;
}

bool valid_session_id(const std::string& id) {
  return !id.empty() && id.size() <= 64 &&
         std::all_of(id.begin(), id.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)); });
}

}  // namespace

SessionManager::SessionManager(std::optional<fs::path> data_dir) : data_dir_(std::move(data_dir)) {
  if (data_dir_) {
    fs::create_directories(*data_dir_);
    restore();
  }
}

SessionManager::~SessionManager() { drain(); }

void SessionManager::drain() {
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(mutex_);
    workers.swap(workers_);
  }
  for (auto& t : workers) {
    if (t.joinable()) t.join();
  }
}

void SessionManager::restore() {
  for (const auto& entry : fs::directory_iterator(*data_dir_)) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path());
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.contains("session_id")) continue;
    auto session = std::make_shared<Session>();
    session->id = doc.at("session_id").get<std::string>();
    if (!valid_session_id(session->id)) continue;
    session->explorer = Explorer::from_bundle(doc);
    session->params = session->explorer->params();
    session->status = SessionStatus::ready;
    session->stage = "restored";
    sessions_[session->id] = std::move(session);
  }
}

void SessionManager::persist(const Session& session) const {
  if (!data_dir_ || !session.explorer) return;
  json doc = session.explorer->bundle(true);
  doc["session_id"] = session.id;
  const fs::path target = *data_dir_ / (session.id + ".json");
  const fs::path tmp = *data_dir_ / (session.id + ".json.tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << doc.dump();
  }
  fs::rename(tmp, target);
}

std::string SessionManager::create(std::string_view edges, std::string_view attributes, const PipelineParams& params,
                                   bool wait) {
  PreparedGraph prepared = prepare_graph(edges, attributes, params.largest_component);
  auto session = std::make_shared<Session>();
  session->params = params;
  {
    std::lock_guard lock(mutex_);
    do {
      session->id = new_session_id();
    } while (sessions_.count(session->id));
    sessions_[session->id] = session;
  }
  if (wait) {
    run_pipeline(session, std::move(prepared));
  } else {
    std::lock_guard lock(mutex_);
    workers_.emplace_back([this, session, p = std::move(prepared)]() mutable { run_pipeline(session, std::move(p)); });
  }
  return session->id;
}

void SessionManager::run_pipeline(const std::shared_ptr<Session>& session, PreparedGraph prepared) {
  {
    std::unique_lock lock(session->mutex);
    session->status = SessionStatus::running;
  }
  auto progress = [&](std::string_view stage) {
    std::unique_lock lock(session->mutex);
    session->stage = std::string(stage);
  };
  try {
    Explorer explorer = Explorer::run(std::move(prepared), session->params, progress);
    std::unique_lock lock(session->mutex);
    session->explorer = std::move(explorer);
    session->status = SessionStatus::ready;
    persist(*session);
  } catch (const Error& e) {
    std::unique_lock lock(session->mutex);
    session->status = SessionStatus::failed;
    session->error = error_document(e.kind(), e.what()).at("error");
  } catch (const std::exception& e) {
    std::unique_lock lock(session->mutex);
    session->status = SessionStatus::failed;
    session->error = error_document(ErrorKind::invalid_argument, e.what()).at("error");
  }
}

std::shared_ptr<Session> SessionManager::get(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorKind::not_found, "unknown session '" + id + "'");
  return it->second;
}

bool SessionManager::remove(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return false;
  {
    std::unique_lock session_lock(it->second->mutex);
    if (it->second->status == SessionStatus::pending || it->second->status == SessionStatus::running) {
      throw Error(ErrorKind::not_ready, "session is still running");
    }
  }
  sessions_.erase(it);
  if (data_dir_) fs::remove(*data_dir_ / (id + ".json"));
  return true;
}

std::vector<std::string> SessionManager::ids() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, s] : sessions_) out.push_back(id);
  return out;
}

json SessionManager::status(const Session& session) const {
  json doc = {{"id", session.id},
              {"status", to_string(session.status)},
              {"stage", session.stage},
              {"params", session.params.to_json()}};
  if (session.error) doc["error"] = *session.error;
  if (session.explorer) {
    doc["summary"] = session.explorer->summary();
    doc["undo_depth"] = session.explorer->undo_depth();
  }
  return doc;
}

namespace {

StatQuery query_from(const httplib::Request& req) {
  StatQuery q;
  if (req.has_param("stat")) q.attribute = req.get_param_value("stat");
  if (req.has_param("mode")) {
    q.mode = parse_stat_mode(req.get_param_value("mode"));
  } else if (!q.attribute.empty()) {
    q.mode = StatMode::p_value;
  }
  if (req.has_param("category")) q.category = req.get_param_value("category");
  return q;
}

json body_json(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json doc = json::parse(req.body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw Error(ErrorKind::parse, "request body is not a JSON object");
  return doc;
}

void send_json(httplib::Response& res, const json& doc, int status = 200) {
  res.status = status;
  res.set_content(doc.dump(), "application/json");
}

const char* content_type(ExportFormat format) {
  switch (format) {
    case ExportFormat::svg: return "image/svg+xml";
    case ExportFormat::partition_tsv:
    case ExportFormat::stats_tsv: return "text/tab-separated-values";
    default: return "application/json";
  }
}

std::optional<TreeNodeId> read_node_id(const json& body, const char* key) {
  if (!body.contains(key) || body.at(key).is_null()) return std::nullopt;
  const auto& v = body.at(key);
  if (!v.is_number_integer()) throw Error(ErrorKind::invalid_argument, std::string(key) + " must be an integer");
  return v.get<TreeNodeId>();
}

}  // namespace

struct Service::Impl {
  explicit Impl(ServiceOptions opts) : options(std::move(opts)), sessions(options.data_dir) { routes(); }

  ServiceOptions options;
  SessionManager sessions;
  httplib::Server server;
  std::thread thread;
  int port = -1;

  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  // Maps library errors onto structured error documents.
  static httplib::Server::Handler guarded(Handler fn) {
    return [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const Error& e) {
        send_json(res, error_document(e.kind(), e.what()), http_status(e.kind()));
      } catch (const json::exception& e) {
        send_json(res, error_document(ErrorKind::parse, e.what()), 400);
      } catch (const std::exception& e) {
        send_json(res, error_document(ErrorKind::invalid_argument, e.what()), 500);
      }
    };
  }

  std::shared_ptr<Session> session_of(const httplib::Request& req) const {
    return sessions.get(req.matches[1].str());
  }

  static const Explorer& ready(const Session& s) {
    if (s.status == SessionStatus::failed) throw Error(ErrorKind::not_ready, "session pipeline failed");
    if (!s.explorer) throw Error(ErrorKind::not_ready, "session is still running");
    return *s.explorer;
  }

  void create(const httplib::Request& req, httplib::Response& res) {
    std::string edges;
    std::string attributes;
    json params_doc = json::object();
    if (req.is_multipart_form_data()) {
      if (!req.has_file("edges")) throw Error(ErrorKind::invalid_argument, "multipart field 'edges' is required");
      edges = req.get_file_value("edges").content;
      if (req.has_file("attributes")) attributes = req.get_file_value("attributes").content;
      if (req.has_file("params")) {
        params_doc = json::parse(req.get_file_value("params").content, nullptr, false);
        if (params_doc.is_discarded()) throw Error(ErrorKind::parse, "params is not valid JSON");
      }
    } else {
      json body = body_json(req);
      if (!body.contains("edges")) throw Error(ErrorKind::invalid_argument, "field 'edges' is required");
      edges = body.at("edges").get<std::string>();
      attributes = body.value("attributes", std::string{});
      params_doc = body.value("params", json::object());
    }
    const PipelineParams params = PipelineParams::from_json(params_doc);
    const bool wait = req.has_param("wait") && req.get_param_value("wait") != "0";
    const std::string id = sessions.create(edges, attributes, params, wait);
    auto session = sessions.get(id);
    std::shared_lock lock(session->mutex);
    json doc = sessions.status(*session);
    send_json(res, doc, session->status == SessionStatus::ready ? 201 : 202);
  }

  template <typename Move>
  void mutate(const httplib::Request& req, httplib::Response& res, Move move) {
    auto session = session_of(req);
    const StatQuery query = query_from(req);
    std::unique_lock lock(session->mutex);
    if (!session->explorer) ready(*session);
    move(*session->explorer);
    json doc = session->explorer->view_document(query);
    sessions.persist(*session);
    send_json(res, doc);
  }

  void routes() {
    server.set_payload_max_length(options.max_upload_bytes);
    const std::string sid = "/v1/sessions/([A-Za-z0-9]+)";

    server.Get("/v1/health", [](const httplib::Request&, httplib::Response& res) {
      send_json(res, {{"status", "ok"}, {"api", "v1"}});
    });
    server.Post("/v1/sessions", guarded([this](const auto& req, auto& res) { create(req, res); }));
    server.Get("/v1/sessions", guarded([this](const auto&, auto& res) { send_json(res, {{"sessions", sessions.ids()}}); }));
    server.Get(sid + "/status", guarded([this](const auto& req, auto& res) {
                 auto s = session_of(req);
                 std::shared_lock lock(s->mutex);
                 send_json(res, sessions.status(*s));
               }));
    server.Delete(sid, guarded([this](const auto& req, auto& res) {
                    if (!sessions.remove(req.matches[1].str())) {
                      throw Error(ErrorKind::not_found, "unknown session '" + req.matches[1].str() + "'");
                    }
                    send_json(res, {{"deleted", req.matches[1].str()}});
                  }));
    server.Get(sid + "/view", guarded([this](const auto& req, auto& res) {
                 auto s = session_of(req);
                 const StatQuery query = query_from(req);
                 std::shared_lock lock(s->mutex);
                 send_json(res, ready(*s).view_document(query));
               }));
    server.Get(sid + "/hierarchy", guarded([this](const auto& req, auto& res) {
                 auto s = session_of(req);
                 std::shared_lock lock(s->mutex);
                 send_json(res, ready(*s).bundle(false));
               }));
    server.Get(sid + "/export", guarded([this](const auto& req, auto& res) {
                 auto s = session_of(req);
                 if (!req.has_param("format")) throw Error(ErrorKind::invalid_argument, "format is required");
                 const ExportFormat format = parse_export_format(req.get_param_value("format"));
                 StatQuery query = query_from(req);
                 if (format == ExportFormat::stats_tsv && req.has_param("attribute")) {
                   query.attribute = req.get_param_value("attribute");
                 }
                 std::shared_lock lock(s->mutex);
                 res.set_content(ready(*s).export_document(format, query), content_type(format));
               }));
    server.Post(sid + "/refine", guarded([this](const auto& req, auto& res) {
                  const json body = body_json(req);
                  const auto cluster = read_node_id(body, "cluster");
                  if (!cluster) throw Error(ErrorKind::invalid_argument, "field 'cluster' is required");
                  mutate(req, res, [&](Explorer& e) { e.refine(*cluster); });
                }));
    server.Post(sid + "/coarsen", guarded([this](const auto& req, auto& res) {
                  const auto target = read_node_id(body_json(req), "target");
                  mutate(req, res, [&](Explorer& e) { e.coarsen(target); });
                }));
    server.Post(sid + "/undo", guarded([this](const auto& req, auto& res) {
                  mutate(req, res, [](Explorer& e) { e.undo(); });
                }));
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) {
        const auto kind = res.status == 404 ? ErrorKind::not_found : ErrorKind::invalid_argument;
        res.set_content(error_document(kind, httplib::status_message(res.status)).dump(), "application/json");
      }
    });
  }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Service::~Service() { stop(); }

int Service::bind() {
  if (impl_->options.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(impl_->options.host);
  } else if (impl_->server.bind_to_port(impl_->options.host, impl_->options.port)) {
    impl_->port = impl_->options.port;
  } else {
    impl_->port = -1;
  }
  if (impl_->port < 0) {
    throw Error(ErrorKind::refused, "cannot bind " + impl_->options.host + ":" + std::to_string(impl_->options.port));
  }
  return impl_->port;
}

void Service::listen() { impl_->server.listen_after_bind(); }

int Service::start() {
  const int port = bind();
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void Service::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
  impl_->sessions.drain();
}

SessionManager& Service::sessions() { return impl_->sessions; }

}  // namespace hcviz
