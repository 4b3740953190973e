#include "chainminer/network.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <unordered_set>

#include "chainminer/error.hpp"

namespace chainminer {

std::optional<int> Variable::state_index(const std::string& state_name) const {
  for (int i = 0; i < num_states(); ++i) {
    if (states[static_cast<std::size_t>(i)] == state_name) return i;
  }
  return std::nullopt;
}

void Assignment::set(int v, int state) {
  if (v < 0 || v >= size()) {
    throw ArgumentError("assignment: variable id " + std::to_string(v) +
                        " out of range");
  }
  if (state < 0 || state > 127) {
    throw ArgumentError("assignment: state " + std::to_string(state) +
                        " out of range");
  }
  auto& slot = values_[static_cast<std::size_t>(v)];
  if (slot < 0) ++assigned_;
  slot = static_cast<std::int8_t>(state);
}

void Assignment::unset(int v) {
  if (v < 0 || v >= size()) {
    throw ArgumentError("assignment: variable id " + std::to_string(v) +
                        " out of range");
  }
  auto& slot = values_[static_cast<std::size_t>(v)];
  if (slot >= 0) --assigned_;
  slot = -1;
}

std::vector<int> Assignment::assigned_vars() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(assigned_));
  for (int v = 0; v < size(); ++v) {
    if (contains(v)) out.push_back(v);
  }
  return out;
}

namespace {

// Finds one arc that lies on a cycle among the given leftover nodes.
std::pair<int, int> find_cycle_arc(const std::vector<Cpt>& cpts,
                                   const std::vector<char>& leftover) {
  // Walk parent links inside the leftover set until a node repeats.
  int start = 0;
  while (!leftover[static_cast<std::size_t>(start)]) ++start;
  std::vector<char> seen(leftover.size(), 0);
  int cur = start;
  while (!seen[static_cast<std::size_t>(cur)]) {
    seen[static_cast<std::size_t>(cur)] = 1;
    for (int p : cpts[static_cast<std::size_t>(cur)].parents) {
      if (leftover[static_cast<std::size_t>(p)]) {
        if (seen[static_cast<std::size_t>(p)]) return {p, cur};
        cur = p;
        break;
      }
    }
  }
  // cur is on the cycle; report the arc into it that we followed.
  for (int p : cpts[static_cast<std::size_t>(cur)].parents) {
    if (leftover[static_cast<std::size_t>(p)]) return {p, cur};
  }
  return {cur, cur};
}

}  // namespace

BayesianNetwork::BayesianNetwork(std::string name,
                                 std::vector<Variable> variables,
                                 std::vector<Cpt> cpts)
    : name_(std::move(name)),
      variables_(std::move(variables)),
      cpts_(std::move(cpts)) {
  const int n = num_variables();
  if (n == 0) throw StructureError("network has no variables");

  std::unordered_set<std::string> names;
  for (int v = 0; v < n; ++v) {
    const Variable& var = variables_[static_cast<std::size_t>(v)];
    if (var.id != v) {
      throw StructureError("variable '" + var.name + "' has id " +
                           std::to_string(var.id) + ", expected " +
                           std::to_string(v));
    }
    if (var.name.empty()) throw StructureError("variable with empty name");
    if (!names.insert(var.name).second) {
      throw StructureError("duplicate variable name '" + var.name + "'");
    }
    if (var.num_states() < 2) {
      throw StructureError("variable '" + var.name +
                           "' needs at least two states");
    }
    if (var.num_states() > 127) {
      throw StructureError("variable '" + var.name + "' has too many states");
    }
    std::unordered_set<std::string> state_names;
    for (const auto& s : var.states) {
      if (s.empty() || !state_names.insert(s).second) {
        throw StructureError("variable '" + var.name +
                             "' has empty or duplicate state names");
      }
    }
  }

  if (static_cast<int>(cpts_.size()) != n) {
    throw StructureError("expected one table per variable");
  }
  std::sort(cpts_.begin(), cpts_.end(),
            [](const Cpt& a, const Cpt& b) { return a.child < b.child; });
  for (int v = 0; v < n; ++v) {
    Cpt& c = cpts_[static_cast<std::size_t>(v)];
    const Variable& var = variables_[static_cast<std::size_t>(v)];
    if (c.child != v) {
      throw StructureError("missing or duplicate table for variable '" +
                           var.name + "'");
    }
    std::set<int> seen_parents;
    for (int p : c.parents) {
      if (p < 0 || p >= n) {
        throw StructureError("table for '" + var.name +
                             "' references an unknown parent");
      }
      if (p == v) {
        throw StructureError("variable '" + var.name + "' is its own parent");
      }
      if (!seen_parents.insert(p).second) {
        throw StructureError("table for '" + var.name +
                             "' repeats a parent");
      }
    }

    c.child_card = var.num_states();
    c.row_strides.assign(c.parents.size(), 1);
    long long rows = 1;
    for (int k = static_cast<int>(c.parents.size()) - 1; k >= 0; --k) {
      c.row_strides[static_cast<std::size_t>(k)] = static_cast<int>(rows);
      rows *= variables_[static_cast<std::size_t>(
                             c.parents[static_cast<std::size_t>(k)])]
                  .num_states();
    }
    if (static_cast<long long>(c.table.size()) != rows * c.child_card) {
      throw StructureError("table for '" + var.name + "' has " +
                           std::to_string(c.table.size()) +
                           " entries, expected " +
                           std::to_string(rows * c.child_card));
    }
    for (long long r = 0; r < rows; ++r) {
      double sum = 0.0;
      for (int s = 0; s < c.child_card; ++s) {
        const double p = c.entry(static_cast<int>(r), s);
        if (!(p >= 0.0) || p > 1.0) {
          throw StructureError("table for '" + var.name +
                               "' has an entry outside [0, 1]");
        }
        sum += p;
      }
      if (std::fabs(sum - 1.0) > kRowSumTolerance) {
        throw StructureError("table row for '" + var.name + "' sums to " +
                             std::to_string(sum));
      }
    }
  }

  children_.assign(static_cast<std::size_t>(n), {});
  for (int v = 0; v < n; ++v) {
    for (int p : cpts_[static_cast<std::size_t>(v)].parents) {
      children_[static_cast<std::size_t>(p)].push_back(v);
      arcs_.emplace_back(p, v);
    }
  }
  for (auto& ch : children_) std::sort(ch.begin(), ch.end());
  std::sort(arcs_.begin(), arcs_.end());

  // Kahn with a min-heap so equal-depth nodes come out in id order.
  std::vector<int> pending(static_cast<std::size_t>(n));
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int v = 0; v < n; ++v) {
    pending[static_cast<std::size_t>(v)] =
        static_cast<int>(cpts_[static_cast<std::size_t>(v)].parents.size());
    if (pending[static_cast<std::size_t>(v)] == 0) ready.push(v);
  }
  topo_.reserve(static_cast<std::size_t>(n));
  while (!ready.empty()) {
    const int v = ready.top();
    ready.pop();
    topo_.push_back(v);
    for (int c : children_[static_cast<std::size_t>(v)]) {
      if (--pending[static_cast<std::size_t>(c)] == 0) ready.push(c);
    }
  }
  if (static_cast<int>(topo_.size()) != n) {
    std::vector<char> leftover(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) {
      leftover[static_cast<std::size_t>(v)] =
          pending[static_cast<std::size_t>(v)] > 0;
    }
    const auto [from, to] = find_cycle_arc(cpts_, leftover);
    throw StructureError("cycle detected through arc '" +
                         variables_[static_cast<std::size_t>(from)].name +
                         "' -> '" +
                         variables_[static_cast<std::size_t>(to)].name + "'");
  }
}

void BayesianNetwork::check_variable(int v) const {
  if (v < 0 || v >= num_variables()) {
    throw ArgumentError("variable id " + std::to_string(v) + " out of range");
  }
}

const Variable& BayesianNetwork::variable(int v) const {
  check_variable(v);
  return variables_[static_cast<std::size_t>(v)];
}

const Cpt& BayesianNetwork::cpt(int v) const {
  check_variable(v);
  return cpts_[static_cast<std::size_t>(v)];
}

std::optional<int> BayesianNetwork::find_variable(
    const std::string& var_name) const {
  for (const auto& v : variables_) {
    if (v.name == var_name) return v.id;
  }
  return std::nullopt;
}

const std::vector<int>& BayesianNetwork::parents(int v) const {
  check_variable(v);
  return cpts_[static_cast<std::size_t>(v)].parents;
}

const std::vector<int>& BayesianNetwork::children(int v) const {
  check_variable(v);
  return children_[static_cast<std::size_t>(v)];
}

bool BayesianNetwork::has_directed_path(int from, int to) const {
  check_variable(from);
  check_variable(to);
  if (from == to) return true;
  std::vector<char> visited(static_cast<std::size_t>(num_variables()), 0);
  std::vector<int> stack{from};
  visited[static_cast<std::size_t>(from)] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int c : children_[static_cast<std::size_t>(v)]) {
      if (c == to) return true;
      if (!visited[static_cast<std::size_t>(c)]) {
        visited[static_cast<std::size_t>(c)] = 1;
        stack.push_back(c);
      }
    }
  }
  return false;
}

}  // namespace chainminer
