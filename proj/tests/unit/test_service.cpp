#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <thread>

#include <unistd.h>

#include <httplib.h>

#include "fixtures.hpp"
#include "hcviz/error.hpp"
#include "hcviz/modularity.hpp"
#include "hcviz/service.hpp"

using namespace hcviz;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json fast_params() {
  return {{"trials", 50}, {"min_subgraph_trials", 20}, {"layout", {{"iterations", 50}}}};
}

json create_body() {
  return {{"edges", fixtures::read_data("planted.edges")}, {"params", fast_params()}};
}

struct Server {
  explicit Server(std::optional<fs::path> dir = std::nullopt) : service(options(dir)), port(service.start()), client("127.0.0.1", port) {
    client.set_read_timeout(60, 0);
  }

  static ServiceOptions options(std::optional<fs::path> dir) {
    ServiceOptions o;
    o.port = 0;
    o.data_dir = std::move(dir);
    return o;
  }

  json post(const std::string& path, const json& body, int expect) {
    auto res = client.Post(path, body.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == expect);
    return json::parse(res->body);
  }

  json get(const std::string& path, int expect = 200) {
    auto res = client.Get(path);
    REQUIRE(res);
    CHECK(res->status == expect);
    return json::parse(res->body);
  }

  std::string create() { return post("/v1/sessions?wait=1", create_body(), 201)["id"].get<std::string>(); }

  Service service;
  int port;
  httplib::Client client;
};

}  // namespace

TEST_SUITE("service") {
  TEST_CASE("error kinds map onto http statuses") {
    CHECK(http_status(ErrorKind::not_found) == 404);
    CHECK(http_status(ErrorKind::no_substructure) == 409);
    CHECK(http_status(ErrorKind::significance_boundary) == 409);
    CHECK(http_status(ErrorKind::invalid_move) == 409);
    CHECK(http_status(ErrorKind::not_ready) == 409);
    CHECK(http_status(ErrorKind::parse) == 400);
    CHECK(http_status(ErrorKind::invalid_argument) == 400);
    const json doc = error_document(ErrorKind::no_substructure, "no significant substructure");
    CHECK(doc["error"]["kind"] == "no_substructure");
    CHECK(doc["error"]["reason"] == "no significant substructure");
  }

  TEST_CASE("health") {
    Server s;
    const json doc = s.get("/v1/health");
    CHECK(doc["status"] == "ok");
  }

  TEST_CASE("session lifecycle") {
    Server s;
    const json created = s.post("/v1/sessions?wait=1", create_body(), 201);
    CHECK(created["status"] == "ready");
    const std::string id = created["id"];
    const json summary = created["summary"];
    CHECK(summary["clusters"] == 4);
    const double greedy = greedy_maximize(fixtures::planted()).modularity;
    CHECK(summary["q"].get<double>() == doctest::Approx(greedy).epsilon(1e-15));
    CHECK(s.get("/v1/sessions")["sessions"] == json::array({id}));

    const json view = s.get("/v1/sessions/" + id + "/view");
    CHECK(view["format"] == "hcviz-view");
    REQUIRE(view["frontier"].size() == 4);
    const std::int64_t terminal = view["frontier"][0];

    const json refused = s.post("/v1/sessions/" + id + "/refine", {{"cluster", terminal}}, 409);
    CHECK(refused["error"]["kind"] == "no_substructure");
    CHECK(refused["error"]["reason"] == "no significant substructure");
    CHECK(s.post("/v1/sessions/" + id + "/refine", json::object(), 400)["error"]["kind"] == "invalid_argument");

    const json step1 = s.post("/v1/sessions/" + id + "/coarsen", json::object(), 200);
    CHECK(step1["frontier"].size() == 3);
    CHECK(step1["undo_depth"] == 1);
    s.post("/v1/sessions/" + id + "/coarsen", json::object(), 200);
    const json boundary = s.post("/v1/sessions/" + id + "/coarsen", json::object(), 409);
    CHECK(boundary["error"]["kind"] == "significance_boundary");

    s.post("/v1/sessions/" + id + "/undo", json::object(), 200);
    const json back = s.post("/v1/sessions/" + id + "/undo", json::object(), 200);
    CHECK(back["frontier"] == view["frontier"]);
    CHECK(back["nodes"] == view["nodes"]);
    CHECK(s.post("/v1/sessions/" + id + "/undo", json::object(), 409)["error"]["kind"] == "invalid_move");

    const json hierarchy = s.get("/v1/sessions/" + id + "/hierarchy");
    CHECK(hierarchy["format"] == "hcviz-hierarchy");

    auto svg = s.client.Get("/v1/sessions/" + id + "/export?format=svg");
    REQUIRE(svg);
    CHECK(svg->status == 200);
    CHECK(svg->get_header_value("Content-Type") == "image/svg+xml");
    auto tsv = s.client.Get("/v1/sessions/" + id + "/export?format=partition-tsv");
    REQUIRE(tsv);
    CHECK(tsv->body.rfind("# clusters=4", 0) == 0);
    CHECK(s.get("/v1/sessions/" + id + "/export?format=png", 400)["error"]["kind"] == "invalid_argument");
    s.get("/v1/sessions/" + id + "/export", 400);

    auto del = s.client.Delete("/v1/sessions/" + id);
    REQUIRE(del);
    CHECK(del->status == 200);
    CHECK(s.get("/v1/sessions/" + id + "/view", 404)["error"]["kind"] == "not_found");
    auto again = s.client.Delete("/v1/sessions/" + id);
    REQUIRE(again);
    CHECK(again->status == 404);
  }

  TEST_CASE("stat query on the view") {
    Server s;
    json body = {{"edges", fixtures::read_data("barbell.edges")},
                 {"attributes", fixtures::read_data("barbell_attributes.csv")},
                 {"params", {{"trials", 10}, {"external_threshold", 0.1}, {"layout", {{"iterations", 20}}}}}};
    const std::string id = s.post("/v1/sessions?wait=1", body, 201)["id"];
    const json p = s.get("/v1/sessions/" + id + "/view?stat=orientation");
    CHECK(p["stat"]["mode"] == "p-value");
    CHECK(p["nodes"][0]["color_value"].is_number());
    const json r = s.get("/v1/sessions/" + id + "/view?stat=orientation&mode=residual&category=BM");
    CHECK(r["stat"]["scale"] == "diverging-red-blue");
    s.get("/v1/sessions/" + id + "/view?stat=missing", 404);
    auto stats = s.client.Get("/v1/sessions/" + id + "/export?format=stats-tsv&attribute=orientation");
    REQUIRE(stats);
    CHECK(stats->body.rfind("# attribute=orientation", 0) == 0);
  }

  TEST_CASE("bad uploads") {
    Server s;
    CHECK(s.post("/v1/sessions", {{"edges", "a b c\n"}}, 400)["error"]["kind"] == "parse_error");
    CHECK(s.post("/v1/sessions", {{"attributes", ""}}, 400)["error"]["kind"] == "invalid_argument");
    s.post("/v1/sessions", {{"edges", "a b\n"}, {"params", {{"alpha", 2}}}}, 400);
    auto res = s.client.Post("/v1/sessions", "{not json", "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);
    s.get("/v1/nowhere", 404);
    s.get("/v1/sessions/abc/status", 404);
  }

  TEST_CASE("multipart upload") {
    Server s;
    httplib::MultipartFormDataItems items = {
        {"edges", fixtures::read_data("planted.edges"), "planted.edges", "text/plain"},
        {"params", fast_params().dump(), "params.json", "application/json"},
    };
    auto res = s.client.Post("/v1/sessions?wait=1", items);
    REQUIRE(res);
    CHECK(res->status == 201);
    CHECK(json::parse(res->body)["summary"]["clusters"] == 4);
  }

  TEST_CASE("asynchronous pipeline reports progress") {
    Server s;
    const json created = s.post("/v1/sessions", create_body(), 202);
    const std::string id = created["id"];
    std::string status = created["status"];
    for (int i = 0; i < 600 && status != "ready" && status != "failed"; ++i) {
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
      status = s.get("/v1/sessions/" + id + "/status")["status"];
    }
    CHECK(status == "ready");
    CHECK(s.get("/v1/sessions/" + id + "/status")["stage"] == "ready");
    CHECK(s.get("/v1/sessions/" + id + "/view")["frontier"].size() == 4);
  }

  TEST_CASE("sessions persist across restarts") {
    const fs::path dir = fs::temp_directory_path() / ("hcviz_service_test_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    std::string id;
    json view;
    {
      Server s(dir);
      id = s.create();
      view = s.post("/v1/sessions/" + id + "/coarsen", json::object(), 200);
      CHECK(fs::exists(dir / (id + ".json")));
    }
    {
      Server s(dir);
      const json status = s.get("/v1/sessions/" + id + "/status");
      CHECK(status["status"] == "ready");
      CHECK(status["undo_depth"] == 1);
      CHECK(s.get("/v1/sessions/" + id + "/view") == view);
      s.post("/v1/sessions/" + id + "/undo", json::object(), 200);
      auto del = s.client.Delete("/v1/sessions/" + id);
      REQUIRE(del);
      CHECK_FALSE(fs::exists(dir / (id + ".json")));
    }
    fs::remove_all(dir);
  }
}
