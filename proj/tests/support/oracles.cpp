#include "support/oracles.hpp"

#include <algorithm>
#include <stdexcept>

#include "pflp/candgen.hpp"

namespace pflp::testing {
namespace {

struct Compact {
  std::vector<CandidateId> ids;
  std::vector<std::uint32_t> adj;  // bitmask per vertex
  std::vector<double> w;
};

Compact compact(const ConflictGraph& g) {
  Compact c;
  c.ids = g.vertices();
  if (c.ids.size() > 30) throw std::invalid_argument("brute force oracle: too many vertices");
  c.adj.assign(c.ids.size(), 0);
  c.w.resize(c.ids.size());
  for (std::size_t i = 0; i < c.ids.size(); ++i) {
    c.w[i] = g.weight(c.ids[i]);
    for (std::size_t j = 0; j < c.ids.size(); ++j) {
      if (g.has_edge(c.ids[i], c.ids[j])) c.adj[i] |= 1u << j;
    }
  }
  return c;
}

// Calls visit(mask) for every independent set.
template <class F>
void each_independent(const Compact& c, std::size_t i, std::uint32_t mask, F& visit) {
  if (i == c.ids.size()) {
    visit(mask);
    return;
  }
  each_independent(c, i + 1, mask, visit);
  if ((c.adj[i] & mask) == 0) each_independent(c, i + 1, mask | (1u << i), visit);
}

}  // namespace

BruteResult brute_mwis(const ConflictGraph& graph) {
  const Compact c = compact(graph);
  double best = -1.0;
  std::uint32_t best_mask = 0;
  auto visit = [&](std::uint32_t mask) {
    double w = 0.0;
    for (std::size_t i = 0; i < c.ids.size(); ++i) {
      if (mask >> i & 1u) w += c.w[i];
    }
    if (w > best) {
      best = w;
      best_mask = mask;
    }
  };
  each_independent(c, 0, 0, visit);
  BruteResult r;
  r.weight = std::max(best, 0.0);
  for (std::size_t i = 0; i < c.ids.size(); ++i) {
    if (best_mask >> i & 1u) r.selected.push_back(c.ids[i]);
  }
  return r;
}

LexResult brute_lexicographic(const ConflictGraph& graph, const std::vector<CandidateId>& previous) {
  const Compact c = compact(graph);
  std::uint32_t prev = 0;
  for (std::size_t i = 0; i < c.ids.size(); ++i) {
    if (std::find(previous.begin(), previous.end(), c.ids[i]) != previous.end()) prev |= 1u << i;
  }
  LexResult best{-1.0, 0};
  auto visit = [&](std::uint32_t mask) {
    double w = 0.0;
    for (std::size_t i = 0; i < c.ids.size(); ++i) {
      if (mask >> i & 1u) w += c.w[i];
    }
    const auto overlap = static_cast<std::size_t>(__builtin_popcount(mask & prev));
    // Weights in these instances are exact binary fractions, so == is safe.
    if (w > best.weight || (w == best.weight && overlap > best.overlap)) best = {w, overlap};
  };
  each_independent(c, 0, 0, visit);
  return best;
}

MaxSatResult brute_maxsat(const Wcnf& wcnf) {
  if (wcnf.num_vars > 24) throw std::invalid_argument("brute force MaxSAT: too many variables");
  MaxSatResult best;
  const std::uint32_t n = static_cast<std::uint32_t>(wcnf.num_vars);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    auto lit_true = [&](int lit) {
      const bool v = m >> (std::abs(lit) - 1) & 1u;
      return lit > 0 ? v : !v;
    };
    bool ok = true;
    std::int64_t soft = 0;
    for (const auto& cl : wcnf.clauses) {
      const bool sat = std::any_of(cl.literals.begin(), cl.literals.end(), lit_true);
      if (wcnf.is_hard(cl)) {
        if (!sat) {
          ok = false;
          break;
        }
      } else if (sat) {
        soft += cl.weight;
      }
    }
    if (ok && (!best.feasible || soft > best.soft_weight)) {
      best.feasible = true;
      best.soft_weight = soft;
      best.assignment.assign(n, false);
      for (std::uint32_t i = 0; i < n; ++i) best.assignment[i] = m >> i & 1u;
    }
  }
  return best;
}

bool exhaustively_maximal(const ConflictGraph& graph, const std::vector<CandidateId>& selected) {
  for (CandidateId v : graph.vertices()) {
    if (std::find(selected.begin(), selected.end(), v) != selected.end()) continue;
    bool blocked = false;
    for (CandidateId s : selected) {
      if (graph.has_edge(v, s)) {
        blocked = true;
        break;
      }
    }
    if (!blocked) return false;
  }
  return true;
}

double dyadic_weight(Rng& rng) { return static_cast<double>(rng.index(16) + 1) / 4.0; }

ConflictGraph random_graph(Rng& rng, int vertices, double edge_prob, bool unit_weights, int max_group) {
  ConflictGraph g;
  std::vector<std::uint32_t> feature(vertices);
  std::uint32_t f = 0;
  for (int v = 0; v < vertices;) {
    const int size = static_cast<int>(rng.index(static_cast<std::uint64_t>(max_group))) + 1;
    for (int k = 0; k < size && v < vertices; ++k, ++v) {
      feature[v] = f;
      ConflictGraph::Vertex data;
      data.feature = FeatureId(f);
      data.slot = static_cast<Slot>(k % 8);
      data.weight = unit_weights ? 1.0 : dyadic_weight(rng);
      g.add_vertex(CandidateId(static_cast<std::uint32_t>(v)), data);
    }
    ++f;
  }
  for (int a = 0; a < vertices; ++a) {
    for (int b = a + 1; b < vertices; ++b) {
      if (feature[a] == feature[b] || rng.uniform() < edge_prob) {
        g.add_edge(CandidateId(static_cast<std::uint32_t>(a)), CandidateId(static_cast<std::uint32_t>(b)));
      }
    }
  }
  return g;
}

std::vector<CandidateId> random_independent_set(Rng& rng, const ConflictGraph& graph) {
  auto order = graph.vertices();
  rng.shuffle(order.begin(), order.end());
  std::vector<CandidateId> out;
  for (CandidateId v : order) {
    if (rng.uniform() < 0.3) continue;
    const bool clash = std::any_of(out.begin(), out.end(), [&](CandidateId s) { return graph.has_edge(v, s); });
    if (!clash) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Dataset random_dataset(Rng& rng, int features, double extent_px, int zoom) {
  Dataset d;
  d.name = "random";
  d.zoom = zoom;
  const Point center = project(16.37, 48.21, zoom);
  for (int i = 0; i < features; ++i) {
    FeaturePoint p;
    p.id = FeatureId(static_cast<std::uint32_t>(i));
    p.key = std::to_string(i);
    const int len = static_cast<int>(rng.index(8)) + 3;
    for (int k = 0; k < len; ++k) p.name += static_cast<char>('A' + rng.index(26));
    const GeoPoint g = unproject({center.x + rng.uniform(0.0, extent_px), center.y + rng.uniform(0.0, extent_px)}, zoom);
    p.lon = g.lon;
    p.lat = g.lat;
    d.features.push_back(std::move(p));
  }
  return d;
}

std::optional<Edit> random_edit(Rng& rng, const Instance& instance) {
  const auto live = instance.live_candidates();
  if (live.empty()) return std::nullopt;
  const CandidateId c = live[rng.index(live.size())];
  const LabelCandidate& cand = instance.candidate(c);
  const EditTarget target = rng.index(2) == 0 ? EditTarget{c} : EditTarget{cand.feature};
  switch (rng.index(12)) {
    case 0:
    case 1: return SetFontSize{target, static_cast<double>(rng.index(27) + 4)};
    case 2: {
      std::string text;
      const auto len = rng.index(12) + 1;
      for (std::uint64_t k = 0; k < len; ++k) text += static_cast<char>('a' + rng.index(26));
      return SetText{target, text};
    }
    case 3: return SetLineBreaks{target, static_cast<int>(rng.index(3)) + 1};
    case 4: return SetPadding{target, static_cast<double>(rng.index(5))};
    case 5: return SetBoxVisibility{target, rng.index(2) == 0};
    case 6: return DeleteFeature{target};
    case 7: return DeleteCandidate{c};
    case 8: return FixateCandidate{c};
    case 9: return UnfixateCandidate{c};
    case 10: return SetCandidateWeight{c, dyadic_weight(rng)};
    default: {
      const double dx = rng.uniform(-40.0, 40.0), dy = rng.uniform(-40.0, 40.0);
      return DragCandidate{c, {cand.rect.x + dx, cand.rect.y + dy}};
    }
  }
}

}  // namespace pflp::testing
