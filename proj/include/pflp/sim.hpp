#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pflp/io.hpp"
#include "pflp/solvers.hpp"

namespace pflp {

struct SimConfig {
  Algorithm init_algorithm = Algorithm::Exact;
  Algorithm update_algorithm = Algorithm::Exact;
  int rounds = 5;  // round 0 is the initial solve
  int repetitions = 50;
  std::uint64_t rng_seed = 0;
  double enlarge_pct = 0.01;
  double enlarge_size = 20.0;
  double shrink_pct = 0.03;
  double shrink_size = 5.0;
  double delete_pct = 0.01;
  double initial_font = 10.0;
  double epsilon = 1.0;
  bool strict_mode = false;
  // Per-solve options; the seed is replaced per repetition.
  SolverOptions solver;
};

struct RoundRecord {
  int repetition = 0;
  int round = 0;
  std::size_t labeled = 0;
  std::optional<double> stability;  // from round 1 on
  double weight = 0.0;
  double millis = 0.0;
  std::size_t live_features = 0;
  std::size_t enlarged = 0;
  std::size_t shrunk = 0;
  std::size_t deleted = 0;
};

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

struct RoundSummary {
  int round = 0;
  double mean_labeled = 0.0;
  Quartiles labeled;
  std::optional<double> mean_stability;
  std::optional<Quartiles> stability;
  double mean_weight = 0.0;
  double mean_millis = 0.0;
};

struct SimReport {
  std::string dataset;
  SimConfig config;
  std::vector<RoundRecord> records;
  std::vector<RoundSummary> rounds;
  double mean_build_millis = 0.0;  // instance and conflict graph construction

  // Means over rounds 1.. (the update rounds); nullopt with a single round.
  std::optional<double> mean_stability() const;
  std::optional<double> mean_update_labeled() const;
  std::optional<double> mean_update_millis() const;
  double mean_init_labeled() const;
  double mean_init_millis() const;
};

// Throws InvalidInput for an empty dataset or out-of-range settings.
SimReport run_simulation(const Dataset& dataset, const SimConfig& config);

// Type-7 (linear interpolation) quartiles; values need not be sorted.
Quartiles quartiles(std::vector<double> values);

// `repetition,round,algorithm_init,algorithm_update,labeled,stability,weight,millis`
std::string to_csv(const SimReport& report);

// One row per report with mean labeled counts, stability and runtimes.
// Reports must share the dataset and every setting except the algorithms.
std::string compare_runs(std::span<const SimReport> reports);

}  // namespace pflp
