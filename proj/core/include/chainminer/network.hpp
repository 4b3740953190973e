#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace chainminer {

struct Variable {
  int id = -1;
  std::string name;
  std::vector<std::string> states;  // index order is the runtime encoding

  int num_states() const { return static_cast<int>(states.size()); }
  std::optional<int> state_index(const std::string& state_name) const;
};

// Conditional probability table of one variable. Rows are indexed by the
// parent configuration in declared parent order with the last parent varying
// fastest; each row is a distribution over the child's states.
struct Cpt {
  int child = -1;
  std::vector<int> parents;
  std::vector<double> table;  // num_rows() x child_card, row-major

  // Derived at network construction.
  std::vector<int> row_strides;
  int child_card = 0;

  int num_rows() const {
    return child_card == 0 ? 0 : static_cast<int>(table.size()) / child_card;
  }
  double entry(int row, int state) const {
    return table[static_cast<std::size_t>(row) * child_card + state];
  }
};

// Partial assignment of states to variables; unset slots read as -1.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(int num_variables)
      : values_(static_cast<std::size_t>(num_variables), -1) {}

  int size() const { return static_cast<int>(values_.size()); }
  int num_assigned() const { return assigned_; }
  bool empty() const { return assigned_ == 0; }
  bool contains(int v) const { return values_[static_cast<std::size_t>(v)] >= 0; }
  int operator[](int v) const { return values_[static_cast<std::size_t>(v)]; }

  void set(int v, int state);
  void unset(int v);

  // Assigned variable ids, ascending.
  std::vector<int> assigned_vars() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::int8_t> values_;
  int assigned_ = 0;
};

// Immutable directed graphical model over discrete variables. The
// constructor validates everything: dense ids, unique names, state lists,
// one table per variable with rows summing to 1 within 1e-9, and
// acyclicity. Instances that exist are structurally sound.
class BayesianNetwork {
 public:
  BayesianNetwork(std::string name, std::vector<Variable> variables,
                  std::vector<Cpt> cpts);

  const std::string& name() const { return name_; }
  int num_variables() const { return static_cast<int>(variables_.size()); }
  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(int v) const;
  const Cpt& cpt(int v) const;
  std::optional<int> find_variable(const std::string& var_name) const;

  const std::vector<int>& parents(int v) const;
  const std::vector<int>& children(int v) const;

  // Directed arcs (parent, child), sorted ascending.
  const std::vector<std::pair<int, int>>& arcs() const { return arcs_; }
  int num_arcs() const { return static_cast<int>(arcs_.size()); }

  // Parents always precede children; ties resolved by ascending id.
  const std::vector<int>& topological_order() const { return topo_; }

  // True when a directed path from `from` to `to` exists. Every variable
  // reaches itself.
  bool has_directed_path(int from, int to) const;

  Assignment make_assignment() const { return Assignment(num_variables()); }

 private:
  void check_variable(int v) const;

  std::string name_;
  std::vector<Variable> variables_;
  std::vector<Cpt> cpts_;  // cpts_[v].child == v
  std::vector<std::vector<int>> children_;
  std::vector<std::pair<int, int>> arcs_;
  std::vector<int> topo_;
};

// Tolerance applied to every CPT row at construction.
inline constexpr double kRowSumTolerance = 1e-9;

}  // namespace chainminer
