#include "pflp/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "pflp/errors.hpp"
#include "pflp/instance.hpp"
#include "pflp/rng.hpp"
#include "pflp/update.hpp"

namespace pflp {
namespace {

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void check_config(const SimConfig& c) {
  auto pct = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!pct(c.enlarge_pct) || !pct(c.shrink_pct) || !pct(c.delete_pct)) {
    throw InvalidInput("percentages must be in [0, 1]");
  }
  if (!(c.enlarge_size > 0.0) || !(c.shrink_size > 0.0) || !(c.initial_font > 0.0)) {
    throw InvalidInput("font sizes must be positive");
  }
  if (c.rounds < 1 || c.repetitions < 1) throw InvalidInput("rounds and repetitions must be positive");
  if (!(c.epsilon >= 0.0)) throw InvalidInput("epsilon must be non-negative");
}

void check_labeling(const ConflictGraph& graph, const Labeling& labeling) {
  if (!validate_labeling(graph, labeling).empty()) throw std::logic_error("solver returned a conflicting labeling");
}

std::string fmt(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

bool same_setup(const SimConfig& a, const SimConfig& b) {
  return a.rounds == b.rounds && a.repetitions == b.repetitions && a.rng_seed == b.rng_seed &&
         a.enlarge_pct == b.enlarge_pct && a.enlarge_size == b.enlarge_size && a.shrink_pct == b.shrink_pct &&
         a.shrink_size == b.shrink_size && a.delete_pct == b.delete_pct && a.initial_font == b.initial_font &&
         a.epsilon == b.epsilon && a.strict_mode == b.strict_mode;
}

}  // namespace

Quartiles quartiles(std::vector<double> values) {
  if (values.empty()) return {};
  std::sort(values.begin(), values.end());
  auto at = [&](double p) {
    const double h = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return {at(0.25), at(0.5), at(0.75)};
}

SimReport run_simulation(const Dataset& dataset, const SimConfig& config) {
  check_config(config);
  if (dataset.features.empty()) throw InvalidInput("empty dataset");

  SimReport report;
  report.dataset = dataset.name;
  report.config = config;
  InstanceConfig icfg = instance_config(dataset);
  icfg.style.font_size = config.initial_font;
  icfg.shrink_precedence = true;
  const UpdateParams params{config.epsilon, config.strict_mode};

  double build_total = 0.0;
  for (int rep = 0; rep < config.repetitions; ++rep) {
    const std::uint64_t rep_seed = mix_seed(config.rng_seed, static_cast<std::uint64_t>(rep));
    SolverOptions opts = config.solver;
    opts.seed = rep_seed;

    const auto t_build = Clock::now();
    Instance instance(dataset.features, icfg);
    build_total += millis_since(t_build);

    const auto t0 = Clock::now();
    Labeling current = solve(instance.graph(), config.init_algorithm, opts);
    const double init_ms = millis_since(t0);
    check_labeling(instance.graph(), current);
    report.records.push_back({rep, 0, current.size(), std::nullopt, current.total_weight, init_ms,
                              instance.live_feature_count(), 0, 0, 0});

    for (int round = 1; round < config.rounds; ++round) {
      Rng rng(mix_seed(rep_seed, static_cast<std::uint64_t>(round)));
      auto live = instance.live_candidates();
      rng.shuffle(live.begin(), live.end());
      const auto count = [&](double pct) {
        return static_cast<std::size_t>(std::floor(pct * static_cast<double>(live.size())));
      };
      const std::size_t ne = std::min(count(config.enlarge_pct), live.size());
      const std::size_t ns = std::min(count(config.shrink_pct), live.size() - ne);
      const std::size_t nd = std::min(count(config.delete_pct), live.size() - ne - ns);

      // Enlarge before shrink; with shrink precedence the order does not
      // change the outcome, a shrunk feature stays small either way.
      for (std::size_t i = 0; i < ne; ++i) instance.apply_edit(SetFontSize{live[i], config.enlarge_size});
      for (std::size_t i = ne; i < ne + ns; ++i) instance.apply_edit(SetFontSize{live[i], config.shrink_size});
      for (std::size_t i = ne + ns; i < ne + ns + nd; ++i) instance.apply_edit(DeleteCandidate{live[i]});

      const auto t1 = Clock::now();
      auto updated = update_labeling(instance.graph(), current, config.update_algorithm, params, opts);
      const double ms = millis_since(t1);
      check_labeling(instance.graph(), updated.labeling);
      report.records.push_back({rep, round, updated.labeling.size(), updated.report.ratio,
                                updated.labeling.total_weight, ms, instance.live_feature_count(), ne, ns, nd});
      current = std::move(updated.labeling);
    }
  }
  report.mean_build_millis = build_total / config.repetitions;

  for (int round = 0; round < config.rounds; ++round) {
    std::vector<double> labeled, stab, weight, ms;
    for (const auto& r : report.records) {
      if (r.round != round) continue;
      labeled.push_back(static_cast<double>(r.labeled));
      if (r.stability) stab.push_back(*r.stability);
      weight.push_back(r.weight);
      ms.push_back(r.millis);
    }
    RoundSummary s;
    s.round = round;
    s.mean_labeled = mean(labeled);
    s.labeled = quartiles(labeled);
    if (!stab.empty()) {
      s.mean_stability = mean(stab);
      s.stability = quartiles(stab);
    }
    s.mean_weight = mean(weight);
    s.mean_millis = mean(ms);
    report.rounds.push_back(s);
  }
  return report;
}

namespace {

template <class F>
std::optional<double> update_mean(const SimReport& r, F&& field) {
  std::vector<double> v;
  for (const auto& rec : r.records) {
    if (rec.round > 0) v.push_back(field(rec));
  }
  if (v.empty()) return std::nullopt;
  return mean(v);
}

template <class F>
double init_mean(const SimReport& r, F&& field) {
  std::vector<double> v;
  for (const auto& rec : r.records) {
    if (rec.round == 0) v.push_back(field(rec));
  }
  return mean(v);
}

}  // namespace

std::optional<double> SimReport::mean_stability() const {
  return update_mean(*this, [](const RoundRecord& r) { return r.stability.value_or(0.0); });
}

std::optional<double> SimReport::mean_update_labeled() const {
  return update_mean(*this, [](const RoundRecord& r) { return static_cast<double>(r.labeled); });
}

std::optional<double> SimReport::mean_update_millis() const {
  return update_mean(*this, [](const RoundRecord& r) { return r.millis; });
}

double SimReport::mean_init_labeled() const {
  return init_mean(*this, [](const RoundRecord& r) { return static_cast<double>(r.labeled); });
}

double SimReport::mean_init_millis() const {
  return init_mean(*this, [](const RoundRecord& r) { return r.millis; });
}

std::string to_csv(const SimReport& report) {
  std::string out = "repetition,round,algorithm_init,algorithm_update,labeled,stability,weight,millis\n";
  const std::string init(to_string(report.config.init_algorithm));
  const std::string upd(to_string(report.config.update_algorithm));
  for (const auto& r : report.records) {
    out += std::to_string(r.repetition) + ',' + std::to_string(r.round) + ',' + init + ',' + upd + ',' +
           std::to_string(r.labeled) + ',' + (r.stability ? fmt(*r.stability, 6) : "") + ',' + fmt(r.weight, 6) +
           ',' + fmt(r.millis, 3) + '\n';
  }
  return out;
}

std::string compare_runs(std::span<const SimReport> reports) {
  if (reports.empty()) throw InvalidInput("nothing to compare");
  for (const auto& r : reports) {
    if (r.dataset != reports.front().dataset || !same_setup(r.config, reports.front().config)) {
      throw InvalidInput("reports differ in dataset or settings other than the algorithms");
    }
  }
  std::string out = "algorithm_init,algorithm_update,init_labeled,labeled,stability,init_millis,update_millis\n";
  for (const auto& r : reports) {
    auto opt = [](std::optional<double> v, int digits) { return v ? fmt(*v, digits) : std::string(); };
    out += std::string(to_string(r.config.init_algorithm)) + ',' + std::string(to_string(r.config.update_algorithm)) +
           ',' + fmt(r.mean_init_labeled(), 2) + ',' + opt(r.mean_update_labeled(), 2) + ',' +
           opt(r.mean_stability(), 4) + ',' + fmt(r.mean_init_millis(), 2) + ',' + opt(r.mean_update_millis(), 2) +
           '\n';
  }
  return out;
}

}  // namespace pflp
