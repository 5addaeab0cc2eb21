#include <doctest.h>
#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <future>
#include <json.hpp>
#include <thread>

#include "pflp/service.hpp"

using namespace pflp;
using nlohmann::json;

namespace {

// Service on a free port, served from a background thread.
struct Running {
  explicit Running(ServiceConfig cfg = {}) : service([&] {
    cfg.port = 0;
    return cfg;
  }()) {
    port = service.bind();
    thread = std::thread([this] { service.run(); });
  }
  ~Running() {
    service.stop();
    thread.join();
  }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(60, 0);
    return c;
  }

  Service service;
  int port = 0;
  std::thread thread;
};

json body_of(const httplib::Result& r) {
  REQUIRE(r);
  return json::parse(r->body);
}

std::string create_grid(httplib::Client& c, int rows, int cols) {
  const json req = {{"generator", {{"rows", rows}, {"cols", cols}, {"seed", 4}}}, {"model", 4}};
  auto r = c.Post("/sessions", req.dump(), "application/json");
  REQUIRE(r);
  REQUIRE(r->status == 201);
  return body_of(r).at("id").get<std::string>();
}

}  // namespace

TEST_SUITE("service") {
  TEST_CASE("solve, edit, update, undo") {
    Running s;
    auto c = s.client();
    const std::string id = create_grid(c, 4, 4);
    const std::string base = "/sessions/" + id;

    auto solved = c.Post(base + "/solve", R"({"algorithm": "exact", "params": {"time_limit": 5}})",
                         "application/json");
    REQUIRE(solved->status == 200);
    const json sol = body_of(solved);
    CHECK(sol["metrics"]["labeled"].get<int>() > 0);

    // No edits: the update keeps everything.
    auto upd = c.Post(base + "/update", R"({"algorithm": "exact", "epsilon": 1})", "application/json");
    REQUIRE(upd->status == 200);
    CHECK(body_of(upd)["report"]["ratio"].get<double>() == 1.0);

    auto edit = c.Post(base + "/edits", R"({"kind": "set_font_size", "feature": 0, "font_size": 18})",
                       "application/json");
    REQUIRE(edit->status == 200);
    CHECK(body_of(edit)["undo_depth"] == 1);
    CHECK(body_of(c.Get(base + "/labeling"))["stale"] == true);

    auto undo = c.Post(base + "/undo", "", "application/json");
    CHECK(undo->status == 200);
    auto again = c.Post(base + "/undo", "", "application/json");
    CHECK(again->status == 409);

    auto status = body_of(c.Get(base + "/status"));
    CHECK(status["state"] == "done");
    CHECK(status["percent"].get<double>() == 100.0);

    auto cands = c.Get(base + "/candidates?feature=2");
    REQUIRE(cands->status == 200);
    CHECK(body_of(cands).size() == 4);
    CHECK(body_of(c.Get(base + "/features")).size() == 16);
  }

  TEST_CASE("error statuses") {
    Running s;
    auto c = s.client();
    const std::string id = create_grid(c, 3, 3);
    const std::string base = "/sessions/" + id;

    auto unknown = c.Post(base + "/edits", R"({"kind": "fixate_candidate", "candidate": 4242})", "application/json");
    REQUIRE(unknown->status == 404);
    CHECK(body_of(unknown)["id"] == 4242);
    CHECK(c.Get("/sessions/nope/labeling")->status == 404);
    CHECK(c.Get(base + "/candidates?feature=99")->status == 404);
    CHECK(c.Post(base + "/edits", "{oops", "application/json")->status == 422);
    CHECK(c.Post(base + "/edits", R"({"kind": "set_font_size", "feature": 0, "font_size": -3})",
                 "application/json")
              ->status == 422);
    CHECK(c.Post(base + "/solve", R"({"algorithm": "kamis"})", "application/json")->status == 422);
    CHECK(c.Put(base + "/keep-fixed", R"({"keep_fixed": "yes"})", "application/json")->status == 422);
    CHECK(c.Post("/sessions", R"({"dataset": {"features": []}})", "application/json")->status == 422);

    // Two fixated candidates of one feature always conflict.
    c.Post(base + "/edits", R"({"kind": "fixate_candidate", "candidate": 0})", "application/json");
    c.Post(base + "/edits", R"({"kind": "fixate_candidate", "candidate": 1})", "application/json");
    auto conflict = c.Post(base + "/update", R"({"algorithm": "greedy"})", "application/json");
    REQUIRE(conflict->status == 409);
    CHECK(body_of(conflict)["pair"] == json::array({0, 1}));
  }

  TEST_CASE("drag with keep-fixed survives the update") {
    Running s;
    auto c = s.client();
    const std::string id = create_grid(c, 4, 4);
    const std::string base = "/sessions/" + id;
    c.Post(base + "/solve", R"({"algorithm": "greedy"})", "application/json");
    CHECK(body_of(c.Put(base + "/keep-fixed", "true", "application/json"))["keep_fixed"] == true);

    const json cand = body_of(c.Get(base + "/candidates?feature=5"))[0];
    const double x = cand["rect"]["x"].get<double>() + 11, y = cand["rect"]["y"].get<double>() - 6;
    const json drag = {{"kind", "drag_candidate"}, {"candidate", cand["id"]}, {"x", x}, {"y", y}};
    const json delta = body_of(c.Post(base + "/edits", drag.dump(), "application/json"));
    REQUIRE(delta["delta"]["added_vertices"].size() == 1);
    const int dragged = delta["delta"]["added_vertices"][0].get<int>();

    const json upd = body_of(c.Post(base + "/update", R"({"algorithm": "exact"})", "application/json"));
    const auto& selected = upd["labeling"]["selected"];
    CHECK(std::find(selected.begin(), selected.end(), dragged) != selected.end());
    CHECK(upd["report"].contains("ratio"));
    for (const auto& k : body_of(c.Get(base + "/candidates?feature=5"))) {
      if (k["id"] == dragged) {
        CHECK(k["rect"]["x"].get<double>() == x);
        CHECK(k["fixed"] == true);
      }
    }
  }

  TEST_CASE("one optimization per session") {
    Running s;
    auto c = s.client();
    const std::string id = create_grid(c, 30, 30);
    const std::string base = "/sessions/" + id;
    auto slow = std::async(std::launch::async, [&] {
      auto c2 = s.client();
      return c2.Post(base + "/solve", R"({"algorithm": "exact", "params": {"time_limit": 3}})",
                     "application/json")
          ->status;
    });
    json status;
    for (int i = 0; i < 200; ++i) {
      status = body_of(c.Get(base + "/status"));
      if (status["busy"] == true) break;
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    REQUIRE(status["busy"] == true);
    CHECK((status["state"] == "running" || status["state"] == "queued"));
    CHECK(c.Post(base + "/update", R"({"algorithm": "exact"})", "application/json")->status == 503);
    CHECK(c.Post(base + "/edits", R"({"kind": "delete_candidate", "candidate": 0})", "application/json")->status ==
          503);
    // Reads still work while the solve runs.
    CHECK(c.Get(base + "/labeling")->status == 200);
    CHECK(slow.get() == 200);
    CHECK(c.Post(base + "/update", R"({"algorithm": "greedy"})", "application/json")->status == 200);
  }

  TEST_CASE("snapshots restore into a new session") {
    const auto dir = std::filesystem::temp_directory_path() / "pflp_service_test";
    std::filesystem::create_directories(dir);
    ServiceConfig cfg;
    cfg.snapshot_dir = dir;
    Running s(cfg);
    auto c = s.client();
    const std::string id = create_grid(c, 3, 4);
    c.Post("/sessions/" + id + "/solve", R"({"algorithm": "falp"})", "application/json");
    c.Post("/sessions/" + id + "/edits", R"({"kind": "set_text", "feature": 1, "text": "Neu"})",
           "application/json");
    const json snap = body_of(c.Post("/sessions/" + id + "/snapshot", "{}", "application/json"));
    std::ifstream in(snap["path"].get<std::string>());
    const json saved = json::parse(in);
    auto created = c.Post("/sessions", json{{"snapshot", saved}}.dump(), "application/json");
    REQUIRE(created->status == 201);
    const std::string id2 = body_of(created)["id"];
    CHECK(body_of(c.Get("/sessions/" + id2 + "/labeling"))["labeling"] ==
          body_of(c.Get("/sessions/" + id + "/labeling"))["labeling"]);
    CHECK(c.Post("/sessions/" + id2 + "/undo", "", "application/json")->status == 200);
    CHECK(c.Post("/sessions/" + id + "/snapshot", R"({"file": "../x.json"})", "application/json")->status == 422);
    std::filesystem::remove_all(dir);
  }
}
