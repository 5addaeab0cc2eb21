#include "pflp/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>

#include "pflp/errors.hpp"
#include "pflp/io.hpp"
#include "pflp/json_io.hpp"
#include "pflp/update.hpp"

namespace pflp {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

enum class Phase { Idle, Queued, Running, Done };

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::Idle: return "idle";
    case Phase::Queued: return "queued";
    case Phase::Running: return "running";
    case Phase::Done: return "done";
  }
  return "idle";
}

// Thrown inside handlers; carries the HTTP status and an optional body.
struct HttpError {
  int status;
  json body;
};

[[noreturn]] void fail(int status, const std::string& message) { throw HttpError{status, {{"error", message}}}; }

struct Session {
  Session(std::string id_, std::string name_, Instance inst)
      : id(std::move(id_)), name(std::move(name_)), instance(std::move(inst)) {}

  const std::string id;
  const std::string name;

  // Guards everything below except the progress fields.
  std::mutex mu;
  Instance instance;
  // Last solver result; the "previous" labeling of the next update.
  Labeling solved;
  bool has_solution = false;
  std::optional<StabilityReport> last_report;
  std::size_t edits_since_solve = 0;

  // Set while an optimization is queued or running.
  std::atomic<bool> busy{false};
  std::atomic<Phase> phase{Phase::Idle};
  std::atomic<double> progress{0.0};
  std::string operation;  // under mu
};

// Labeling shown to clients: the last solution restricted to live candidates
// and thinned, heaviest first, to stay conflict-free after later edits.
Labeling current_view(const Session& s) {
  const ConflictGraph& g = s.instance.graph();
  std::vector<CandidateId> live;
  for (CandidateId c : s.solved.selected) {
    if (g.contains(c)) live.push_back(c);
  }
  std::stable_sort(live.begin(), live.end(),
                   [&](CandidateId a, CandidateId b) { return g.weight(a) > g.weight(b); });
  std::vector<CandidateId> kept;
  for (CandidateId c : live) {
    const bool clash = std::any_of(kept.begin(), kept.end(), [&](CandidateId k) { return g.has_edge(c, k); });
    if (!clash) kept.push_back(c);
  }
  return make_labeling(g, std::move(kept));
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    fail(422, std::string("malformed JSON: ") + e.what());
  }
}

Algorithm algorithm_from(const json& body, Algorithm fallback) {
  if (!body.contains("algorithm")) return fallback;
  const auto name = body.at("algorithm").get<std::string>();
  const auto a = parse_algorithm(name);
  if (!a) fail(422, "unknown algorithm '" + name + "'");
  return *a;
}

SolverOptions options_from(const json& body) {
  SolverOptions o;
  o.seed = body.value("seed", std::uint64_t{0});
  const json p = body.value("params", json::object());
  if (!p.is_object()) fail(422, "params must be an object");
  o.chain.rng_seed = o.seed;
  o.chain.max_chain_length = p.value("max_chain_length", o.chain.max_chain_length);
  if (p.contains("iteration_budget")) o.chain.iteration_budget = p.at("iteration_budget").get<std::size_t>();
  o.popmusic.chain = o.chain;
  o.popmusic.subpart_label_bound = p.value("subpart_label_bound", o.popmusic.subpart_label_bound);
  o.popmusic.tabu_tenure = p.value("tabu_tenure", o.popmusic.tabu_tenure);
  o.exact.time_limit = p.value("time_limit", o.exact.time_limit);
  o.exact.window_labels = p.value("window_labels", o.exact.window_labels);
  o.exact.window_share = p.value("window_share", o.exact.window_share);
  if (!(o.exact.time_limit > 0.0) || o.exact.time_limit > 3600.0) fail(422, "time_limit must be in (0, 3600]");
  if (o.chain.max_chain_length < 1) fail(422, "max_chain_length must be positive");
  return o;
}

json metrics_json(const Labeling& l, Algorithm a, double millis) {
  return {{"algorithm", to_string(a)},
          {"labeled", l.size()},
          {"total_weight", l.total_weight},
          {"proven_optimal", l.proven_optimal},
          {"millis", millis}};
}

json live_candidates_json(const Instance& inst, std::optional<FeatureId> feature) {
  json out = json::array();
  const auto ids = feature ? inst.live_candidates_of(*feature) : inst.live_candidates();
  for (CandidateId c : ids) out.push_back(inst.candidate(c));
  return out;
}

}  // namespace

struct Service::Impl {
  explicit Impl(ServiceConfig c) : config(std::move(c)) {}

  ServiceConfig config;
  httplib::Server server;
  int port = -1;

  std::mutex sessions_mu;
  std::map<std::string, std::shared_ptr<Session>> sessions;
  std::uint64_t next_id = 1;

  std::shared_ptr<Session> find(const std::string& id) {
    std::lock_guard lock(sessions_mu);
    const auto it = sessions.find(id);
    if (it == sessions.end()) throw HttpError{404, {{"error", "unknown session"}, {"id", id}}};
    return it->second;
  }

  std::string add(const std::string& name, Instance instance, std::optional<Labeling> labeling) {
    std::lock_guard lock(sessions_mu);
    const std::string id = "s" + std::to_string(next_id++);
    auto s = std::make_shared<Session>(id, name, std::move(instance));
    if (labeling) {
      s->solved = std::move(*labeling);
      s->has_solution = true;
    }
    sessions.emplace(id, std::move(s));
    return id;
  }

  // Runs `body` with error translation.
  template <class F>
  void guarded(httplib::Response& res, F&& body, int ok_status = 200) {
    try {
      json out = body();
      res.status = ok_status;
      res.set_content(out.dump(), "application/json");
    } catch (const HttpError& e) {
      res.status = e.status;
      res.set_content(e.body.dump(), "application/json");
    } catch (const NotFound& e) {
      res.status = 404;
      res.set_content(json{{"error", e.what()}, {"id", e.id()}}.dump(), "application/json");
    } catch (const ConflictingPair& e) {
      res.status = 409;
      res.set_content(json{{"error", e.what()}, {"pair", {e.first().value, e.second().value}}}.dump(),
                      "application/json");
    } catch (const NothingToUndo& e) {
      res.status = 409;
      res.set_content(json{{"error", e.what()}}.dump(), "application/json");
    } catch (const InvalidInput& e) {
      res.status = 422;
      res.set_content(json{{"error", e.what()}}.dump(), "application/json");
    } catch (const json::exception& e) {
      res.status = 422;
      res.set_content(json{{"error", std::string("invalid payload: ") + e.what()}}.dump(), "application/json");
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(json{{"error", e.what()}}.dump(), "application/json");
    }
  }

  // Claims the session for an optimization; the claim is released by the
  // returned guard.
  struct Claim {
    Session* s;
    ~Claim() { s->busy = false; }
  };

  // Both the claim and the idle check happen under the session lock, so an
  // edit either lands before the solver copies the graph or is refused.
  static Claim claim(Session& s, const std::string& operation) {
    std::lock_guard lock(s.mu);
    if (s.busy.exchange(true)) fail(503, "an optimization is already running for this session");
    s.phase = Phase::Queued;
    s.progress = 0.0;
    s.operation = operation;
    return Claim{&s};
  }

  // Edits and undo refuse to interleave with a running optimization, which
  // works on a copy of the graph. Call with the session lock held.
  static void require_idle(const Session& s) {
    if (s.busy) fail(503, "an optimization is running for this session");
  }

  json create(const json& body) {
    std::optional<Labeling> labeling;
    if (body.contains("snapshot")) {
      SessionSnapshot snap = session_from_json(body.at("snapshot").dump());
      Instance inst = restore_instance(snap);
      const std::string name = snap.name;
      if (!snap.labeling.selected.empty()) {
        labeling = make_labeling(inst.graph(), snap.labeling.selected);
        labeling->proven_optimal = snap.labeling.proven_optimal;
      }
      return created(add(name, std::move(inst), labeling), name);
    }

    Dataset dataset;
    json warnings = json::array();
    if (body.contains("dataset")) {
      std::optional<DatasetFormat> format;
      if (body.contains("format")) {
        format = parse_dataset_format(body.at("format").get<std::string>());
        if (!format) fail(422, "unknown dataset format");
      }
      const json& d = body.at("dataset");
      auto loaded = d.is_string() ? parse_dataset(d.get<std::string>(), format, body.value("name", "dataset"))
                                  : parse_dataset(d.dump(), format, body.value("name", "dataset"));
      dataset = std::move(loaded.dataset);
      for (auto& w : loaded.warnings) warnings.push_back(w);
    } else if (body.contains("generator")) {
      const json& g = body.at("generator");
      dataset = generate_grid_dataset(g.value("rows", 10), g.value("cols", 10), g.value("spacing", 18.0),
                                      g.value("jitter", 4.0), g.value("name_length", 8),
                                      g.value("seed", std::uint64_t{0}));
    } else {
      fail(422, "body needs 'dataset', 'generator' or 'snapshot'");
    }
    if (body.contains("zoom")) {
      dataset.zoom = body.at("zoom").get<int>();
      if (dataset.zoom < 0 || dataset.zoom > 22) fail(422, "zoom must be in [0, 22]");
    }
    if (body.contains("model")) {
      const auto model = position_model_from_int(body.at("model").get<int>());
      if (!model) fail(422, "model must be 4 or 8");
      dataset.position_model = *model;
    }
    InstanceConfig cfg = instance_config(dataset);
    cfg.keep_fixed = body.value("keep_fixed", false);
    Instance inst(dataset.features, cfg);
    json out = created(add(dataset.name, std::move(inst), std::nullopt), dataset.name);
    out["warnings"] = warnings;
    return out;
  }

  json created(const std::string& id, const std::string& name) {
    auto s = find(id);
    std::lock_guard lock(s->mu);
    const Instance& inst = s->instance;
    return {{"id", id},
            {"name", name},
            {"zoom", inst.config().zoom},
            {"model", static_cast<int>(inst.config().model)},
            {"keep_fixed", inst.config().keep_fixed},
            {"features", inst.features().size()},
            {"candidates", live_candidates_json(inst, std::nullopt)}};
  }

  json solve_session(Session& s, const json& body) {
    const Algorithm algorithm = algorithm_from(body, Algorithm::Exact);
    SolverOptions opts = options_from(body);
    const auto guard = claim(s, "solve");
    ConflictGraph graph;
    {
      std::lock_guard lock(s.mu);
      graph = s.instance.graph();
    }
    track(s, opts);
    s.phase = Phase::Running;
    const auto t0 = Clock::now();
    Labeling result;
    try {
      result = solve(graph, algorithm, opts);
    } catch (...) {
      s.phase = Phase::Idle;
      throw;
    }
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    std::lock_guard lock(s.mu);
    s.solved = result;
    s.has_solution = true;
    s.last_report.reset();
    s.edits_since_solve = 0;
    s.progress = 1.0;
    s.phase = Phase::Done;
    return {{"labeling", result}, {"metrics", metrics_json(result, algorithm, ms)}};
  }

  json update_session(Session& s, const json& body) {
    const Algorithm algorithm = algorithm_from(body, Algorithm::Exact);
    SolverOptions opts = options_from(body);
    UpdateParams params;
    params.epsilon = body.value("epsilon", params.epsilon);
    params.strict_mode = body.value("strict", params.strict_mode);
    if (!(params.epsilon >= 0.0)) fail(422, "epsilon must be non-negative");
    const auto guard = claim(s, "update");
    ConflictGraph graph;
    Labeling previous;
    {
      std::lock_guard lock(s.mu);
      graph = s.instance.graph();
      previous = s.solved;
    }
    track(s, opts);
    s.phase = Phase::Running;
    const auto t0 = Clock::now();
    UpdateResult result;
    try {
      result = update_labeling(graph, previous, algorithm, params, opts);
    } catch (...) {
      s.phase = Phase::Idle;
      throw;
    }
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    std::lock_guard lock(s.mu);
    s.solved = result.labeling;
    s.has_solution = true;
    s.last_report = result.report;
    s.edits_since_solve = 0;
    s.progress = 1.0;
    s.phase = Phase::Done;
    return {{"labeling", result.labeling},
            {"report", result.report},
            {"metrics", metrics_json(result.labeling, algorithm, ms)}};
  }

  static void track(Session& s, SolverOptions& opts) {
    auto report = [&s](double p) { s.progress = std::clamp(p, 0.0, 1.0); };
    opts.exact.progress = report;
    opts.popmusic.progress = report;
  }

  json labeling_json(Session& s) {
    std::lock_guard lock(s.mu);
    json out = {{"labeling", current_view(s)},
                {"solved", s.has_solution},
                {"stale", s.edits_since_solve > 0}};
    out["report"] = s.last_report ? json(*s.last_report) : json(nullptr);
    return out;
  }

  json status_json(Session& s) {
    std::lock_guard lock(s.mu);
    const Phase p = s.phase;
    json out = {{"state", phase_name(p)}, {"busy", s.busy.load()}};
    if (p != Phase::Idle) {
      out["operation"] = s.operation;
      out["percent"] = 100.0 * s.progress;
    }
    out["undo_depth"] = s.instance.undo_depth();
    return out;
  }

  json edit_session(Session& s, const json& body) {
    const Edit edit = edit_from_json(body);
    std::lock_guard lock(s.mu);
    require_idle(s);
    const EditDelta delta = s.instance.apply_edit(edit);
    if (!delta.empty()) ++s.edits_since_solve;
    return {{"kind", edit_kind(edit)}, {"delta", delta_summary(delta)}, {"undo_depth", s.instance.undo_depth()}};
  }

  json undo_session(Session& s) {
    std::lock_guard lock(s.mu);
    require_idle(s);
    const EditDelta delta = s.instance.undo();
    ++s.edits_since_solve;
    return {{"delta", delta_summary(delta)}, {"undo_depth", s.instance.undo_depth()}};
  }

  json snapshot_session(Session& s, const json& body) {
    std::lock_guard lock(s.mu);
    const std::string file = body.value("file", s.id + ".json");
    if (file.empty() || file.find('/') != std::string::npos || file.find("..") != std::string::npos) {
      fail(422, "file must be a plain file name");
    }
    const auto path = config.snapshot_dir / file;
    const SessionSnapshot snap = snapshot_of(s.name, s.instance, current_view(s));
    save_session(path, snap);
    return {{"path", path.string()}};
  }

  void routes() {
    using httplib::Request;
    using httplib::Response;

    server.Get("/sessions", [this](const Request&, Response& res) {
      guarded(res, [&] {
        std::lock_guard lock(sessions_mu);
        json ids = json::array();
        for (const auto& [id, s] : sessions) ids.push_back({{"id", id}, {"name", s->name}});
        return ids;
      });
    });
    server.Post("/sessions", [this](const Request& req, Response& res) {
      guarded(res, [&] { return create(parse_body(req)); }, 201);
    });
    server.Delete(R"(/sessions/([^/]+))", [this](const Request& req, Response& res) {
      guarded(res, [&] {
        auto s = find(req.matches[1]);
        std::scoped_lock lock(s->mu, sessions_mu);
        require_idle(*s);
        sessions.erase(s->id);
        return json{{"deleted", s->id}};
      });
    });
    server.Post(R"(/sessions/([^/]+)/solve)", [this](const Request& req, Response& res) {
      guarded(res, [&] {
        const json body = parse_body(req);
        return solve_session(*find(req.matches[1]), body);
      });
    });
    server.Post(R"(/sessions/([^/]+)/update)", [this](const Request& req, Response& res) {
      guarded(res, [&] {
        const json body = parse_body(req);
        return update_session(*find(req.matches[1]), body);
      });
    });
    server.Post(R"(/sessions/([^/]+)/edits)", [this](const Request& req, Response& res) {
      guarded(res, [&] {
        const json body = parse_body(req);
        return edit_session(*find(req.matches[1]), body);
      });
    });
    server.Post(R"(/sessions/([^/]+)/undo)", [this](const Request& req, Response& res) {
      guarded(res, [&] { return undo_session(*find(req.matches[1])); });
    });
    server.Post(R"(/sessions/([^/]+)/snapshot)", [this](const Request& req, Response& res) {
      guarded(res, [&] {
        const json body = parse_body(req);
        return snapshot_session(*find(req.matches[1]), body);
      });
    });
    server.Get(R"(/sessions/([^/]+)/labeling)", [this](const Request& req, Response& res) {
      guarded(res, [&] { return labeling_json(*find(req.matches[1])); });
    });
    server.Get(R"(/sessions/([^/]+)/status)", [this](const Request& req, Response& res) {
      guarded(res, [&] { return status_json(*find(req.matches[1])); });
    });
    server.Get(R"(/sessions/([^/]+)/features)", [this](const Request& req, Response& res) {
      guarded(res, [&] {
        auto s = find(req.matches[1]);
        std::lock_guard lock(s->mu);
        return json(s->instance.features());
      });
    });
    server.Get(R"(/sessions/([^/]+)/candidates)", [this](const Request& req, Response& res) {
      guarded(res, [&] {
        auto s = find(req.matches[1]);
        std::optional<FeatureId> feature;
        if (req.has_param("feature")) {
          const std::string v = req.get_param_value("feature");
          std::uint32_t id = 0;
          try {
            std::size_t used = 0;
            const unsigned long parsed = std::stoul(v, &used);
            if (used != v.size() || parsed > 0xfffffffeUL) throw std::invalid_argument(v);
            id = static_cast<std::uint32_t>(parsed);
          } catch (const std::logic_error&) {
            fail(422, "feature must be a numeric id");
          }
          feature = FeatureId(id);
        }
        std::lock_guard lock(s->mu);
        if (feature) (void)s->instance.feature(*feature);
        return live_candidates_json(s->instance, feature);
      });
    });
    server.Put(R"(/sessions/([^/]+)/keep-fixed)", [this](const Request& req, Response& res) {
      guarded(res, [&] {
        const json body = parse_body(req);
        const json& v = body.is_object() ? body.at("keep_fixed") : body;
        if (!v.is_boolean()) fail(422, "keep_fixed must be a boolean");
        auto s = find(req.matches[1]);
        std::lock_guard lock(s->mu);
        s->instance.set_keep_fixed(v.get<bool>());
        return json{{"keep_fixed", v.get<bool>()}};
      });
    });

    if (!config.static_dir.empty() && !server.set_mount_point("/", config.static_dir.string())) {
      throw std::runtime_error("static directory not found: " + config.static_dir.string());
    }
  }
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) { impl_->routes(); }

Service::~Service() { stop(); }

int Service::bind() {
  const int port = impl_->config.port == 0 ? impl_->server.bind_to_any_port(impl_->config.host)
                                            : (impl_->server.bind_to_port(impl_->config.host, impl_->config.port)
                                                   ? impl_->config.port
                                                   : -1);
  if (port < 0) {
    throw std::runtime_error("cannot bind " + impl_->config.host + ":" + std::to_string(impl_->config.port));
  }
  impl_->port = port;
  return port;
}

void Service::run() {
  if (impl_->port < 0) throw std::logic_error("Service::run before bind");
  impl_->server.listen_after_bind();
}

void Service::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace pflp
