#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pflp/conflict_graph.hpp"

namespace pflp {

// Weighted partial MaxSAT encoding of the independent set problem. Variable
// i (1-based) stands for "candidate variables[i-1] is selected".
struct PmaxsatFormula {
  struct HardClause {
    int a = 0;  // the clause is (-a or -b)
    int b = 0;
  };
  struct SoftClause {
    int var = 0;  // unit clause (var)
    double weight = 0.0;
    std::int64_t scaled = 0;
  };

  std::vector<CandidateId> variables;
  std::vector<HardClause> hard;
  std::vector<SoftClause> soft;

  int var_of(CandidateId id) const;  // 0 when absent
  std::int64_t top() const;          // sum of scaled soft weights + 1
};

PmaxsatFormula to_pmaxsat(const ConflictGraph& graph, std::int64_t weight_scale = 1'000'000);

// `p wcnf <nvars> <nclauses> <top>` followed by hard clauses (weight top),
// then soft clauses with their scaled weights. One clause per line.
std::string to_wdimacs(const PmaxsatFormula& formula);

// Generic weighted CNF as read back from WDIMACS text.
struct WcnfClause {
  std::int64_t weight = 0;
  std::vector<int> literals;
};

struct Wcnf {
  int num_vars = 0;
  std::int64_t top = 0;
  std::vector<WcnfClause> clauses;

  bool is_hard(const WcnfClause& c) const { return c.weight >= top; }
};

// Throws InvalidInput naming the line on malformed input. Comment lines
// starting with 'c' are skipped.
Wcnf parse_wdimacs(std::string_view text);

// Reads solver "v" lines (`v 1 -2 3 ...`); missing variables stay false.
std::vector<bool> parse_solver_model(std::string_view text, int num_vars);

// Candidates whose variable is true. `assignment[i]` is variable i+1.
std::vector<CandidateId> decode_assignment(const PmaxsatFormula& formula, const std::vector<bool>& assignment);

}  // namespace pflp
