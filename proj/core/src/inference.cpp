#include "chainminer/inference.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <utility>

#include "chainminer/error.hpp"

namespace chainminer {

namespace {

// Table over a sorted set of variables, mixed-radix indexed with the last
// variable varying fastest. Deterministic value layout makes every
// floating-point operation order reproducible.
struct Factor {
  std::vector<int> vars;  // ascending ids
  std::vector<int> cards;
  std::vector<double> values;

  bool mentions(int v) const {
    return std::binary_search(vars.begin(), vars.end(), v);
  }
};

std::size_t table_size(const std::vector<int>& cards) {
  std::size_t n = 1;
  for (int c : cards) n *= static_cast<std::size_t>(c);
  return n;
}

// CPT of v restricted by the evidence: evidence variables leave the scope,
// their states select entries.
Factor make_cpt_factor(const BayesianNetwork& net, int v,
                       const Assignment& evidence) {
  const Cpt& c = net.cpt(v);
  std::vector<int> scope = c.parents;
  scope.push_back(v);
  std::sort(scope.begin(), scope.end());

  Factor f;
  for (int u : scope) {
    if (!evidence.contains(u)) {
      f.vars.push_back(u);
      f.cards.push_back(net.variable(u).num_states());
    }
  }
  f.values.assign(table_size(f.cards), 0.0);

  std::vector<int> state(f.vars.size(), 0);
  for (std::size_t idx = 0;; ++idx) {
    int row = 0;
    for (std::size_t k = 0; k < c.parents.size(); ++k) {
      const int p = c.parents[k];
      int s;
      if (evidence.contains(p)) {
        s = evidence[p];
      } else {
        const auto it = std::lower_bound(f.vars.begin(), f.vars.end(), p);
        s = state[static_cast<std::size_t>(it - f.vars.begin())];
      }
      row += s * c.row_strides[k];
    }
    int child_state;
    if (evidence.contains(v)) {
      child_state = evidence[v];
    } else {
      const auto it = std::lower_bound(f.vars.begin(), f.vars.end(), v);
      child_state = state[static_cast<std::size_t>(it - f.vars.begin())];
    }
    f.values[idx] = c.entry(row, child_state);

    int k = static_cast<int>(state.size()) - 1;
    while (k >= 0 && ++state[static_cast<std::size_t>(k)] ==
                         f.cards[static_cast<std::size_t>(k)]) {
      state[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return f;
}

Factor multiply(const Factor& a, const Factor& b) {
  Factor out;
  std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(),
                 std::back_inserter(out.vars));
  out.cards.reserve(out.vars.size());
  std::vector<std::size_t> stride_a(out.vars.size(), 0);
  std::vector<std::size_t> stride_b(out.vars.size(), 0);
  for (std::size_t k = 0; k < out.vars.size(); ++k) {
    const int v = out.vars[k];
    const auto ia = std::lower_bound(a.vars.begin(), a.vars.end(), v);
    const auto ib = std::lower_bound(b.vars.begin(), b.vars.end(), v);
    if (ia != a.vars.end() && *ia == v) {
      out.cards.push_back(a.cards[static_cast<std::size_t>(ia - a.vars.begin())]);
    } else {
      out.cards.push_back(b.cards[static_cast<std::size_t>(ib - b.vars.begin())]);
    }
    if (ia != a.vars.end() && *ia == v) {
      std::size_t s = 1;
      for (auto j = a.vars.end() - 1; *j != v; --j) {
        s *= static_cast<std::size_t>(
            a.cards[static_cast<std::size_t>(j - a.vars.begin())]);
      }
      stride_a[k] = s;
    }
    if (ib != b.vars.end() && *ib == v) {
      std::size_t s = 1;
      for (auto j = b.vars.end() - 1; *j != v; --j) {
        s *= static_cast<std::size_t>(
            b.cards[static_cast<std::size_t>(j - b.vars.begin())]);
      }
      stride_b[k] = s;
    }
  }

  out.values.assign(table_size(out.cards), 0.0);
  std::vector<int> state(out.vars.size(), 0);
  std::size_t ia = 0;
  std::size_t ib = 0;
  for (std::size_t idx = 0;; ++idx) {
    out.values[idx] = a.values[ia] * b.values[ib];
    int k = static_cast<int>(state.size()) - 1;
    while (k >= 0) {
      const auto ku = static_cast<std::size_t>(k);
      ++state[ku];
      ia += stride_a[ku];
      ib += stride_b[ku];
      if (state[ku] < out.cards[ku]) break;
      ia -= stride_a[ku] * static_cast<std::size_t>(out.cards[ku]);
      ib -= stride_b[ku] * static_cast<std::size_t>(out.cards[ku]);
      state[ku] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return out;
}

Factor sum_out(const Factor& f, int v) {
  const auto it = std::lower_bound(f.vars.begin(), f.vars.end(), v);
  const auto pos = static_cast<std::size_t>(it - f.vars.begin());
  Factor out;
  out.vars = f.vars;
  out.vars.erase(out.vars.begin() + static_cast<std::ptrdiff_t>(pos));
  out.cards = f.cards;
  const int card_v = f.cards[pos];
  out.cards.erase(out.cards.begin() + static_cast<std::ptrdiff_t>(pos));
  out.values.assign(table_size(out.cards), 0.0);

  std::size_t inner = 1;  // stride of v in f
  for (std::size_t k = pos + 1; k < f.cards.size(); ++k) {
    inner *= static_cast<std::size_t>(f.cards[k]);
  }
  const std::size_t block = inner * static_cast<std::size_t>(card_v);
  std::size_t src = 0;
  std::size_t dst = 0;
  while (src < f.values.size()) {
    // States below v are summed in ascending state order.
    for (std::size_t lo = 0; lo < inner; ++lo) {
      double total = 0.0;
      for (int s = 0; s < card_v; ++s) {
        total += f.values[src + lo + static_cast<std::size_t>(s) * inner];
      }
      out.values[dst + lo] = total;
    }
    src += block;
    dst += inner;
  }
  return out;
}

void check_evidence(const BayesianNetwork& net, const Assignment& evidence) {
  if (evidence.size() != net.num_variables()) {
    throw ArgumentError("evidence sized for " +
                        std::to_string(evidence.size()) + " variables, network has " +
                        std::to_string(net.num_variables()));
  }
  for (int v = 0; v < net.num_variables(); ++v) {
    if (evidence.contains(v) && evidence[v] >= net.variable(v).num_states()) {
      throw ArgumentError("state " + std::to_string(evidence[v]) +
                          " out of range for variable '" +
                          net.variable(v).name + "'");
    }
  }
}

void check_target(const BayesianNetwork& net, int target) {
  if (target < 0 || target >= net.num_variables()) {
    throw ArgumentError("target id " + std::to_string(target) +
                        " out of range");
  }
}

}  // namespace

void validate_query(const BayesianNetwork& net, const Query& q) {
  check_target(net, q.target);
  const Variable& t = net.variable(q.target);
  if (q.target_state < 0 || q.target_state >= t.num_states()) {
    throw ArgumentError("target state " + std::to_string(q.target_state) +
                        " out of range for variable '" + t.name + "'");
  }
  check_evidence(net, q.evidence);
  if (q.evidence.contains(q.target)) {
    throw ArgumentError("target variable '" + t.name +
                        "' appears in the evidence");
  }
}

double joint_probability(const BayesianNetwork& net, const Assignment& full) {
  check_evidence(net, full);
  if (full.num_assigned() != net.num_variables()) {
    throw ArgumentError("joint probability needs every variable assigned");
  }
  double p = 1.0;
  for (int v = 0; v < net.num_variables(); ++v) {
    const Cpt& c = net.cpt(v);
    int row = 0;
    for (std::size_t k = 0; k < c.parents.size(); ++k) {
      row += full[c.parents[k]] * c.row_strides[k];
    }
    p *= c.entry(row, full[v]);
  }
  return p;
}

std::vector<double> posterior(const BayesianNetwork& net, int target,
                              const Assignment& evidence) {
  check_target(net, target);
  check_evidence(net, evidence);
  if (evidence.contains(target)) {
    throw ArgumentError("target variable '" + net.variable(target).name +
                        "' appears in the evidence");
  }

  std::vector<Factor> factors;
  factors.reserve(static_cast<std::size_t>(net.num_variables()));
  for (int v = 0; v < net.num_variables(); ++v) {
    factors.push_back(make_cpt_factor(net, v, evidence));
  }

  std::set<int> pending;
  for (int v = 0; v < net.num_variables(); ++v) {
    if (v != target && !evidence.contains(v)) pending.insert(v);
  }

  while (!pending.empty()) {
    // Min-degree: fewest distinct co-occurring variables, ties by id.
    int best = -1;
    std::size_t best_degree = std::numeric_limits<std::size_t>::max();
    for (int v : pending) {
      std::set<int> neighbors;
      for (const Factor& f : factors) {
        if (f.mentions(v)) neighbors.insert(f.vars.begin(), f.vars.end());
      }
      neighbors.erase(v);
      if (neighbors.size() < best_degree) {
        best_degree = neighbors.size();
        best = v;
      }
    }

    Factor product;
    product.values.assign(1, 1.0);
    bool seeded = false;
    std::vector<Factor> rest;
    rest.reserve(factors.size());
    for (Factor& f : factors) {
      if (f.mentions(best)) {
        product = seeded ? multiply(product, f) : std::move(f);
        seeded = true;
      } else {
        rest.push_back(std::move(f));
      }
    }
    rest.push_back(sum_out(product, best));
    factors = std::move(rest);
    pending.erase(best);
  }

  Factor joint;
  joint.values.assign(1, 1.0);
  bool seeded = false;
  for (Factor& f : factors) {
    joint = seeded ? multiply(joint, f) : std::move(f);
    seeded = true;
  }

  const int card = net.variable(target).num_states();
  std::vector<double> result(static_cast<std::size_t>(card), 0.0);
  double z = 0.0;
  for (int s = 0; s < card; ++s) {
    const double v = joint.vars.empty()
                         ? joint.values[0]
                         : joint.values[static_cast<std::size_t>(s)];
    result[static_cast<std::size_t>(s)] = v;
    z += v;
  }
  if (z == 0.0) {
    throw ZeroEvidenceError("evidence has probability zero");
  }
  for (double& p : result) p /= z;
  return result;
}

double query(const BayesianNetwork& net, const Query& q) {
  validate_query(net, q);
  return posterior(net, q.target,
                   q.evidence)[static_cast<std::size_t>(q.target_state)];
}

double enumerate_query(const BayesianNetwork& net, const Query& q) {
  validate_query(net, q);
  std::vector<int> free_vars;
  for (int v = 0; v < net.num_variables(); ++v) {
    if (!q.evidence.contains(v)) free_vars.push_back(v);
  }
  Assignment full = q.evidence;
  std::vector<int> state(free_vars.size(), 0);
  for (std::size_t k = 0; k < free_vars.size(); ++k) {
    full.set(free_vars[k], 0);
  }
  double num = 0.0;
  double den = 0.0;
  for (;;) {
    const double p = joint_probability(net, full);
    den += p;
    if (full[q.target] == q.target_state) num += p;
    int k = static_cast<int>(free_vars.size()) - 1;
    while (k >= 0) {
      const auto ku = static_cast<std::size_t>(k);
      if (++state[ku] < net.variable(free_vars[ku]).num_states()) {
        full.set(free_vars[ku], state[ku]);
        break;
      }
      state[ku] = 0;
      full.set(free_vars[ku], 0);
      --k;
    }
    if (k < 0) break;
  }
  if (den == 0.0) {
    throw ZeroEvidenceError("evidence has probability zero");
  }
  return num / den;
}

Assignment ancestral_sample(const BayesianNetwork& net, RandomStream& rng) {
  Assignment a = net.make_assignment();
  for (int v : net.topological_order()) {
    const Cpt& c = net.cpt(v);
    int row = 0;
    for (std::size_t k = 0; k < c.parents.size(); ++k) {
      row += a[c.parents[k]] * c.row_strides[k];
    }
    const double u = rng.uniform();
    double cum = 0.0;
    int drawn = -1;
    int last_positive = 0;
    for (int s = 0; s < c.child_card; ++s) {
      const double p = c.entry(row, s);
      if (p > 0.0) last_positive = s;
      cum += p;
      if (u < cum) {
        drawn = s;
        break;
      }
    }
    // Row sums can fall a hair short of 1; land on the last real state.
    a.set(v, drawn >= 0 ? drawn : last_positive);
  }
  return a;
}

const std::vector<double>& PosteriorCache::fetch(int target,
                                                 const Assignment& evidence) {
  std::string key(static_cast<std::size_t>(net_->num_variables()) + 1, '\0');
  key[0] = static_cast<char>(target);
  for (int v = 0; v < net_->num_variables(); ++v) {
    key[static_cast<std::size_t>(v) + 1] =
        evidence.contains(v) ? static_cast<char>(evidence[v])
                             : static_cast<char>(0xFF);
  }
  const auto it = map_.find(key);
  if (it != map_.end()) return it->second;

  std::vector<double> result;
  try {
    result = posterior(*net_, target, evidence);
  } catch (const ZeroEvidenceError&) {
    // Empty vector marks impossible evidence.
  }
  if (map_.size() < max_entries_) {
    return map_.emplace(std::move(key), std::move(result)).first->second;
  }
  overflow_ = std::move(result);
  return overflow_;
}

double PosteriorCache::query(const Query& q) {
  validate_query(*net_, q);
  const auto& dist = fetch(q.target, q.evidence);
  if (dist.empty()) {
    throw ZeroEvidenceError("evidence has probability zero");
  }
  return dist[static_cast<std::size_t>(q.target_state)];
}

}  // namespace chainminer
