// Command line front end: dataset generation, one-shot solves, WDIMACS export,
// simulations and the HTTP service.

#include <CLI11.hpp>

#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "pflp/errors.hpp"
#include "pflp/instance.hpp"
#include "pflp/io.hpp"
#include "pflp/json_io.hpp"
#include "pflp/pmaxsat.hpp"
#include "pflp/service.hpp"
#include "pflp/sim.hpp"

namespace {

using namespace pflp;

pflp::Service* g_service = nullptr;

void on_signal(int) {
  if (g_service) g_service->stop();
}

Algorithm algorithm_arg(const std::string& name) {
  const auto a = parse_algorithm(name);
  if (!a) throw CLI::ValidationError("algorithm", "unknown algorithm '" + name + "'");
  return *a;
}

std::optional<DatasetFormat> format_arg(const std::string& name) {
  if (name.empty() || name == "auto") return std::nullopt;
  const auto f = parse_dataset_format(name);
  if (!f) throw CLI::ValidationError("format", "unknown format '" + name + "'");
  return f;
}

Dataset load(const std::string& path, const std::string& format) {
  auto result = load_dataset(path, format_arg(format));
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  return std::move(result.dataset);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct GridArgs {
  int rows = 30;
  int cols = 30;
  double spacing = 18.0;
  double jitter = 4.0;
  int name_length = 8;
  std::uint64_t seed = 0;
};

void add_grid_options(CLI::App* cmd, GridArgs& g) {
  cmd->add_option("--rows", g.rows, "Grid rows")->check(CLI::PositiveNumber);
  cmd->add_option("--cols", g.cols, "Grid columns")->check(CLI::PositiveNumber);
  cmd->add_option("--spacing", g.spacing, "Grid spacing in pixels")->check(CLI::PositiveNumber);
  cmd->add_option("--jitter", g.jitter, "Uniform jitter in pixels")->check(CLI::NonNegativeNumber);
  cmd->add_option("--name-length", g.name_length, "Characters per generated name")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", g.seed, "Random seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point-feature label placement engine"};
  app.require_subcommand(1);

  // generate
  GridArgs gen;
  int gen_zoom = 12;
  int gen_model = 4;
  std::string gen_out = "-";
  auto* generate = app.add_subcommand("generate", "Write a jittered grid dataset as simple JSON");
  add_grid_options(generate, gen);
  generate->add_option("--zoom", gen_zoom, "Zoom level")->check(CLI::Range(0, 22));
  generate->add_option("--model", gen_model, "Position model (4 or 8)")->check(CLI::IsMember({4, 8}));
  generate->add_option("-o,--output", gen_out, "Output file, - for stdout");

  // solve
  std::string solve_in, solve_format, solve_algo = "exact", solve_out;
  std::uint64_t solve_seed = 0;
  double solve_limit = 10.0;
  auto* solve_cmd = app.add_subcommand("solve", "Label a dataset and print the metrics");
  solve_cmd->add_option("input", solve_in, "Dataset file")->required();
  solve_cmd->add_option("--format", solve_format, "geojson, simple-json or auto");
  solve_cmd->add_option("-a,--algorithm", solve_algo, "greedy, mis, falp, chain, popmusic, exact");
  solve_cmd->add_option("--seed", solve_seed, "Random seed");
  solve_cmd->add_option("--time-limit", solve_limit, "Exact solver limit in seconds")->check(CLI::PositiveNumber);
  solve_cmd->add_option("-o,--output", solve_out, "Write the labeled candidates as JSON");

  // wcnf
  std::string wcnf_in, wcnf_format, wcnf_out = "-";
  std::int64_t wcnf_scale = 1'000'000;
  auto* wcnf = app.add_subcommand("wcnf", "Export the conflict graph as weighted partial MaxSAT");
  wcnf->add_option("input", wcnf_in, "Dataset file")->required();
  wcnf->add_option("--format", wcnf_format, "geojson, simple-json or auto");
  wcnf->add_option("--scale", wcnf_scale, "Integer scale for soft clause weights")->check(CLI::PositiveNumber);
  wcnf->add_option("-o,--output", wcnf_out, "Output file, - for stdout");

  // simulate
  std::string sim_in, sim_format, sim_init = "exact", sim_csv;
  std::vector<std::string> sim_updates{"exact", "greedy"};
  GridArgs sim_grid;
  SimConfig sim;
  sim.repetitions = 10;
  double sim_limit = 10.0;
  auto* simulate = app.add_subcommand("simulate", "Run the edit simulation and compare update algorithms");
  simulate->add_option("--input", sim_in, "Dataset file; a generated grid is used when omitted");
  simulate->add_option("--format", sim_format, "geojson, simple-json or auto");
  add_grid_options(simulate, sim_grid);
  simulate->add_option("--init", sim_init, "Algorithm for round 0");
  simulate->add_option("--update", sim_updates, "Update algorithms to compare")->expected(1, -1);
  simulate->add_option("--rounds", sim.rounds, "Rounds including the initial solve")->check(CLI::PositiveNumber);
  simulate->add_option("--repetitions", sim.repetitions, "Repetitions")->check(CLI::PositiveNumber);
  simulate->add_option("--rng-seed", sim.rng_seed, "Simulation seed");
  simulate->add_option("--epsilon", sim.epsilon, "Stability bonus")->check(CLI::NonNegativeNumber);
  simulate->add_flag("--strict", sim.strict_mode, "Derive epsilon from the previous solution size");
  simulate->add_option("--time-limit", sim_limit, "Exact solver limit in seconds")->check(CLI::PositiveNumber);
  simulate->add_option("--csv", sim_csv, "Per-round CSV; the algorithm name is appended per run");

  // serve
  ServiceConfig serve_cfg;
  std::string static_dir, snapshot_dir = ".";
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--host", serve_cfg.host, "Bind address");
  serve->add_option("--port", serve_cfg.port, "Port, 0 for any free one")->check(CLI::Range(0, 65535));
  serve->add_option("--static", static_dir, "Directory served at /");
  serve->add_option("--snapshot-dir", snapshot_dir, "Directory for session snapshots");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      Dataset d = generate_grid_dataset(gen.rows, gen.cols, gen.spacing, gen.jitter, gen.name_length, gen.seed,
                                        gen_zoom);
      d.position_model = *position_model_from_int(gen_model);
      write_text(gen_out, dataset_to_json(d) + "\n");
    } else if (*solve_cmd) {
      const Dataset d = load(solve_in, solve_format);
      const Algorithm a = algorithm_arg(solve_algo);
      const auto t0 = std::chrono::steady_clock::now();
      Instance inst(d.features, instance_config(d));
      const auto t1 = std::chrono::steady_clock::now();
      SolverOptions opts;
      opts.seed = solve_seed;
      opts.chain.rng_seed = solve_seed;
      opts.popmusic.chain.rng_seed = solve_seed;
      opts.exact.time_limit = solve_limit;
      const Labeling l = solve(inst.graph(), a, opts);
      const auto t2 = std::chrono::steady_clock::now();
      auto ms = [](auto a, auto b) { return std::chrono::duration<double, std::milli>(b - a).count(); };
      std::cout << "dataset " << d.name << ": " << d.features.size() << " features, "
                << inst.graph().num_vertices() << " candidates, " << inst.graph().num_edges() << " conflicts\n"
                << "algorithm " << to_string(a) << ": labeled " << l.size() << ", weight " << l.total_weight
                << (l.proven_optimal ? " (optimal)" : "") << ", build " << ms(t0, t1) << " ms, solve "
                << ms(t1, t2) << " ms\n";
      if (!solve_out.empty()) {
        nlohmann::json out = nlohmann::json::array();
        for (CandidateId c : l.selected) out.push_back(inst.candidate(c));
        write_text(solve_out, out.dump(1) + "\n");
      }
    } else if (*wcnf) {
      const Dataset d = load(wcnf_in, wcnf_format);
      Instance inst(d.features, instance_config(d));
      write_text(wcnf_out, to_wdimacs(to_pmaxsat(inst.graph(), wcnf_scale)));
    } else if (*simulate) {
      Dataset d = sim_in.empty() ? generate_grid_dataset(sim_grid.rows, sim_grid.cols, sim_grid.spacing,
                                                         sim_grid.jitter, sim_grid.name_length, sim_grid.seed)
                                 : load(sim_in, sim_format);
      sim.init_algorithm = algorithm_arg(sim_init);
      sim.solver.exact.time_limit = sim_limit;
      std::vector<SimReport> reports;
      for (const auto& name : sim_updates) {
        SimConfig c = sim;
        c.update_algorithm = algorithm_arg(name);
        reports.push_back(run_simulation(d, c));
        if (!sim_csv.empty()) write_text(sim_csv + "." + name + ".csv", to_csv(reports.back()));
      }
      std::cout << compare_runs(reports);
    } else if (*serve) {
      if (!static_dir.empty()) serve_cfg.static_dir = static_dir;
      serve_cfg.snapshot_dir = snapshot_dir;
      Service service(serve_cfg);
      const int port = service.bind();
      g_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on " << serve_cfg.host << ':' << port << '\n';
      service.run();
      g_service = nullptr;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
