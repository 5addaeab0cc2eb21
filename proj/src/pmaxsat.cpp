#include "pflp/pmaxsat.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "pflp/errors.hpp"

namespace pflp {
namespace {

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <class T>
T number(std::string_view tok, std::size_t line_no) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw InvalidInput("wcnf line " + std::to_string(line_no) + ": bad number '" + std::string(tok) + "'");
  }
  return value;
}

template <class F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = text.substr(0, nl);
    f(line, ++line_no);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
}

}  // namespace

int PmaxsatFormula::var_of(CandidateId id) const {
  auto it = std::lower_bound(variables.begin(), variables.end(), id);
  if (it == variables.end() || *it != id) return 0;
  return static_cast<int>(it - variables.begin()) + 1;
}

std::int64_t PmaxsatFormula::top() const {
  std::int64_t sum = 1;
  for (const auto& s : soft) sum += s.scaled;
  return sum;
}

PmaxsatFormula to_pmaxsat(const ConflictGraph& graph, std::int64_t weight_scale) {
  if (weight_scale <= 0) throw InvalidInput("weight_scale must be positive");
  PmaxsatFormula f;
  f.variables = graph.vertices();
  for (const auto& [u, v] : graph.edges()) f.hard.push_back({f.var_of(u), f.var_of(v)});
  for (std::size_t i = 0; i < f.variables.size(); ++i) {
    const double w = graph.weight(f.variables[i]);
    const auto scaled = std::max<std::int64_t>(1, std::llround(w * static_cast<double>(weight_scale)));
    f.soft.push_back({static_cast<int>(i) + 1, w, scaled});
  }
  return f;
}

std::string to_wdimacs(const PmaxsatFormula& formula) {
  const std::int64_t top = formula.top();
  std::ostringstream out;
  out << "p wcnf " << formula.variables.size() << ' ' << formula.hard.size() + formula.soft.size() << ' ' << top
      << '\n';
  for (const auto& h : formula.hard) out << top << ' ' << -h.a << ' ' << -h.b << " 0\n";
  for (const auto& s : formula.soft) out << s.scaled << ' ' << s.var << " 0\n";
  return out.str();
}

Wcnf parse_wdimacs(std::string_view text) {
  Wcnf cnf;
  bool have_header = false;
  std::int64_t declared = 0;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const auto tok = tokens(line);
    if (tok.empty() || tok[0] == "c") return;
    if (tok[0] == "p") {
      if (have_header || tok.size() != 5 || tok[1] != "wcnf") {
        throw InvalidInput("wcnf line " + std::to_string(line_no) + ": bad header");
      }
      cnf.num_vars = number<int>(tok[2], line_no);
      declared = number<std::int64_t>(tok[3], line_no);
      cnf.top = number<std::int64_t>(tok[4], line_no);
      have_header = true;
      return;
    }
    if (!have_header) throw InvalidInput("wcnf line " + std::to_string(line_no) + ": clause before header");
    if (tok.size() < 2 || tok.back() != "0") {
      throw InvalidInput("wcnf line " + std::to_string(line_no) + ": clause must end with 0");
    }
    WcnfClause c;
    c.weight = number<std::int64_t>(tok[0], line_no);
    if (c.weight <= 0) throw InvalidInput("wcnf line " + std::to_string(line_no) + ": weight must be positive");
    for (std::size_t i = 1; i + 1 < tok.size(); ++i) {
      const int lit = number<int>(tok[i], line_no);
      if (lit == 0 || std::abs(lit) > cnf.num_vars) {
        throw InvalidInput("wcnf line " + std::to_string(line_no) + ": literal out of range");
      }
      c.literals.push_back(lit);
    }
    cnf.clauses.push_back(std::move(c));
  });
  if (!have_header) throw InvalidInput("wcnf: missing header");
  if (static_cast<std::int64_t>(cnf.clauses.size()) != declared) {
    throw InvalidInput("wcnf: header declares " + std::to_string(declared) + " clauses, found " +
                       std::to_string(cnf.clauses.size()));
  }
  return cnf;
}

std::vector<bool> parse_solver_model(std::string_view text, int num_vars) {
  std::vector<bool> model(static_cast<std::size_t>(num_vars), false);
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const auto tok = tokens(line);
    if (tok.empty() || tok[0] != "v") return;
    for (std::size_t i = 1; i < tok.size(); ++i) {
      const int lit = number<int>(tok[i], line_no);
      if (lit == 0) continue;
      if (std::abs(lit) > num_vars) {
        throw InvalidInput("model line " + std::to_string(line_no) + ": variable out of range");
      }
      model[static_cast<std::size_t>(std::abs(lit) - 1)] = lit > 0;
    }
  });
  return model;
}

std::vector<CandidateId> decode_assignment(const PmaxsatFormula& formula, const std::vector<bool>& assignment) {
  if (assignment.size() != formula.variables.size()) {
    throw InvalidInput("assignment size does not match the variable count");
  }
  std::vector<CandidateId> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i]) out.push_back(formula.variables[i]);
  }
  return out;
}

}  // namespace pflp
