#include "ltlfsynth/mdp.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "ltlfsynth/errors.hpp"
#include "ltlfsynth/parser.hpp"

namespace ltlfsynth {

std::size_t Mdp::num_choices() const noexcept {
  std::size_t n = 0;
  for (const auto& cs : choices) n += cs.size();
  return n;
}

std::size_t Mdp::num_transitions() const noexcept {
  std::size_t n = 0;
  for (const auto& cs : choices) {
    for (const auto& c : cs) n += c.transitions.size();
  }
  return n;
}

bool Mdp::has_label(StateId s, PropId p) const {
  const auto& l = labels[s];
  return std::binary_search(l.begin(), l.end(), p);
}

std::optional<PropId> Mdp::find_prop(std::string_view name) const {
  auto it = std::find(ap.begin(), ap.end(), name);
  if (it == ap.end()) return std::nullopt;
  return static_cast<PropId>(it - ap.begin());
}

std::optional<ActionId> Mdp::find_action(std::string_view name) const {
  auto it = std::find(actions.begin(), actions.end(), name);
  if (it == actions.end()) return std::nullopt;
  return static_cast<ActionId>(it - actions.begin());
}

namespace {

std::vector<std::string> label_names(const Mdp& m, StateId s) {
  std::vector<std::string> out;
  for (auto p : m.labels[s]) out.push_back(p < m.ap.size() ? m.ap[p] : std::string());
  std::sort(out.begin(), out.end());
  return out;
}

std::string action_name(const Mdp& m, ActionId a) { return a < m.actions.size() ? m.actions[a] : std::string(); }

void check_distribution(std::vector<Violation>& out, std::size_t n, const std::vector<Transition>& ts,
                        std::optional<StateId> s, std::optional<std::size_t> c, const std::string& where) {
  if (ts.empty()) {
    out.push_back({s, c, "empty-distribution", where + " has no successors"});
    return;
  }
  double sum = 0.0;
  std::vector<StateId> targets;
  for (const auto& t : ts) {
    if (t.target >= n) {
      out.push_back({s, c, "dangling-successor", where + " targets unknown state " + std::to_string(t.target)});
    }
    if (!(t.probability > 0.0 && t.probability <= 1.0)) {
      out.push_back({s, c, "probability-range", where + " has probability outside (0, 1]"});
    }
    sum += t.probability;
    targets.push_back(t.target);
  }
  std::sort(targets.begin(), targets.end());
  if (std::adjacent_find(targets.begin(), targets.end()) != targets.end()) {
    out.push_back({s, c, "duplicate-successor", where + " lists a successor twice"});
  }
  if (!(std::abs(sum - 1.0) <= kStochasticTolerance)) {
    out.push_back({s, c, "distribution-sum", where + " sums to " + std::to_string(sum)});
  }
}

void check_labels(std::vector<Violation>& out, std::size_t ap_size, const std::vector<std::vector<PropId>>& labels,
                  std::size_t n) {
  if (labels.size() != n) {
    out.push_back({std::nullopt, std::nullopt, "label-count", "expected one label set per state"});
    return;
  }
  for (StateId s = 0; s < n; ++s) {
    const auto& l = labels[s];
    for (auto p : l) {
      if (p >= ap_size) {
        out.push_back({s, std::nullopt, "label-range", "state " + std::to_string(s) + " uses an unknown proposition"});
      }
    }
    if (!std::is_sorted(l.begin(), l.end()) || std::adjacent_find(l.begin(), l.end()) != l.end()) {
      out.push_back({s, std::nullopt, "label-order", "label set of state " + std::to_string(s) +
                                                         " is not strictly increasing"});
    }
  }
}

}  // namespace

bool operator==(const Mdp& a, const Mdp& b) {
  if (a.num_states() != b.num_states() || a.initial != b.initial || a.ap != b.ap) return false;
  if (a.variables != b.variables || a.valuations != b.valuations) return false;
  if (a.labels.size() != b.labels.size()) return false;
  for (StateId s = 0; s < a.num_states(); ++s) {
    if (label_names(a, s) != label_names(b, s)) return false;
    const auto& ca = a.choices[s];
    const auto& cb = b.choices[s];
    if (ca.size() != cb.size()) return false;
    for (std::size_t i = 0; i < ca.size(); ++i) {
      if (action_name(a, ca[i].action) != action_name(b, cb[i].action)) return false;
      if (ca[i].transitions != cb[i].transitions) return false;
    }
  }
  return true;
}

std::vector<Violation> validate(const Mdp& m) {
  std::vector<Violation> out;
  const std::size_t n = m.num_states();
  if (n == 0) {
    out.push_back({std::nullopt, std::nullopt, "empty", "MDP has no states"});
    return out;
  }
  if (m.initial >= n) out.push_back({std::nullopt, std::nullopt, "initial-range", "initial state out of range"});
  check_labels(out, m.ap.size(), m.labels, n);
  {
    auto names = m.ap;
    std::sort(names.begin(), names.end());
    if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
      out.push_back({std::nullopt, std::nullopt, "duplicate-proposition", "a proposition is declared twice"});
    }
    auto acts = m.actions;
    std::sort(acts.begin(), acts.end());
    if (std::adjacent_find(acts.begin(), acts.end()) != acts.end()) {
      out.push_back({std::nullopt, std::nullopt, "duplicate-action-name", "an action name is declared twice"});
    }
  }
  if (!m.variables.empty() && m.valuations.size() != n) {
    out.push_back({std::nullopt, std::nullopt, "valuation-count", "expected one valuation per state"});
  }
  for (StateId s = 0; s < n; ++s) {
    const auto& cs = m.choices[s];
    if (cs.empty()) {
      out.push_back({s, std::nullopt, "deadlock", "state " + std::to_string(s) + " has no enabled action"});
      continue;
    }
    std::vector<ActionId> seen;
    for (std::size_t c = 0; c < cs.size(); ++c) {
      std::string where = "state " + std::to_string(s) + " action ";
      if (cs[c].action >= m.actions.size()) {
        out.push_back({s, c, "unknown-action", where + "#" + std::to_string(cs[c].action) + " is undeclared"});
        where += "#" + std::to_string(cs[c].action);
      } else {
        where += m.actions[cs[c].action];
      }
      seen.push_back(cs[c].action);
      check_distribution(out, n, cs[c].transitions, s, c, where);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
      out.push_back({s, std::nullopt, "duplicate-action", "state " + std::to_string(s) + " enables an action twice"});
    }
    if (!m.variables.empty() && s < m.valuations.size() && m.valuations[s].size() != m.variables.size()) {
      out.push_back({s, std::nullopt, "valuation-arity", "valuation of state " + std::to_string(s) +
                                                             " has the wrong number of values"});
    }
  }
  return out;
}

std::vector<Violation> validate(const Dtmc& d) {
  std::vector<Violation> out;
  const std::size_t n = d.num_states();
  if (n == 0) {
    out.push_back({std::nullopt, std::nullopt, "empty", "DTMC has no states"});
    return out;
  }
  if (d.initial >= n) out.push_back({std::nullopt, std::nullopt, "initial-range", "initial state out of range"});
  check_labels(out, d.ap.size(), d.labels, n);
  for (StateId s = 0; s < n; ++s) check_distribution(out, n, d.rows[s], s, std::nullopt, "row " + std::to_string(s));
  return out;
}

Mdp augment(const Mdp& m) {
  if (m.find_prop(kAliveProp)) throw ReservedName("MDP already has the reserved proposition 'alive'");
  if (m.find_action(kTermAction)) throw ReservedName("MDP already has the reserved action 'a_term'");
  Mdp out = m;
  const auto s_term = static_cast<StateId>(m.num_states());
  const auto alive = static_cast<PropId>(m.ap.size());
  const auto a_term = static_cast<ActionId>(m.actions.size());
  out.ap.emplace_back(kAliveProp);
  out.actions.emplace_back(kTermAction);
  for (auto& l : out.labels) l.push_back(alive);
  out.labels.emplace_back();
  out.choices.emplace_back();
  for (auto& cs : out.choices) cs.push_back(Choice{a_term, {{s_term, 1.0}}});
  if (!out.variables.empty()) {
    // s_term gets a fresh `term` flag so valuations stay distinct.
    out.variables.emplace_back("term");
    for (auto& v : out.valuations) v.push_back(0);
    std::vector<std::int64_t> last(out.variables.size(), 0);
    last.back() = 1;
    out.valuations.push_back(std::move(last));
  }
  return out;
}

Dtmc induced_dtmc(const Mdp& m, const std::vector<ActionId>& policy) {
  if (policy.size() != m.num_states()) throw InvalidArgument("policy needs one action per state");
  Dtmc d;
  d.initial = m.initial;
  d.ap = m.ap;
  d.labels = m.labels;
  d.rows.reserve(m.num_states());
  for (StateId s = 0; s < m.num_states(); ++s) {
    const auto& cs = m.choices[s];
    auto it = std::find_if(cs.begin(), cs.end(), [&](const Choice& c) { return c.action == policy[s]; });
    if (it == cs.end()) {
      throw InvalidArgument("policy chooses an action that is not enabled in state " + std::to_string(s));
    }
    d.rows.push_back(it->transitions);
  }
  return d;
}

std::vector<double> reach_probability(const std::vector<std::vector<Transition>>& rows,
                                      const std::vector<bool>& target) {
  const std::size_t n = rows.size();
  if (target.size() != n) throw InvalidArgument("target mask size differs from state count");

  // Backward closure of the target set.
  std::vector<std::vector<StateId>> pred(n);
  for (StateId s = 0; s < n; ++s) {
    for (const auto& t : rows[s]) {
      if (t.target >= n) throw InvalidArgument("transition targets an unknown state");
      if (t.probability > 0.0) pred[t.target].push_back(s);
    }
  }
  std::vector<bool> reach(target);
  std::vector<StateId> stack;
  for (StateId s = 0; s < n; ++s) {
    if (target[s]) stack.push_back(s);
  }
  while (!stack.empty()) {
    StateId t = stack.back();
    stack.pop_back();
    for (auto s : pred[t]) {
      if (!reach[s]) {
        reach[s] = true;
        stack.push_back(s);
      }
    }
  }

  std::vector<double> value(n, 0.0);
  std::vector<std::int64_t> index(n, -1);
  std::size_t u = 0;
  for (StateId s = 0; s < n; ++s) {
    if (target[s]) {
      value[s] = 1.0;
    } else if (reach[s]) {
      index[s] = static_cast<std::int64_t>(u++);
    }
  }
  if (u == 0) return value;

  // (I - P_uu) x = P_u,target
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(u));
  Eigen::VectorXd x;
  constexpr std::size_t kDenseLimit = 2048;
  if (u <= kDenseLimit) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(u));
    for (StateId s = 0; s < n; ++s) {
      if (index[s] < 0) continue;
      for (const auto& t : rows[s]) {
        if (target[t.target]) {
          rhs(index[s]) += t.probability;
        } else if (index[t.target] >= 0) {
          a(index[s], index[t.target]) -= t.probability;
        }
      }
    }
    x = a.partialPivLu().solve(rhs);
  } else {
    std::vector<Eigen::Triplet<double>> entries;
    for (StateId s = 0; s < n; ++s) {
      if (index[s] < 0) continue;
      entries.emplace_back(index[s], index[s], 1.0);
      for (const auto& t : rows[s]) {
        if (target[t.target]) {
          rhs(index[s]) += t.probability;
        } else if (index[t.target] >= 0) {
          entries.emplace_back(index[s], index[t.target], -t.probability);
        }
      }
    }
    Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(u));
    a.setFromTriplets(entries.begin(), entries.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) throw Error("reachability system is singular");
    x = lu.solve(rhs);
  }
  for (StateId s = 0; s < n; ++s) {
    if (index[s] >= 0) value[s] = std::clamp(x(index[s]), 0.0, 1.0);
  }
  return value;
}

std::vector<double> reach_probability(const Dtmc& d, const std::vector<StateId>& targets) {
  std::vector<bool> mask(d.num_states(), false);
  for (auto t : targets) {
    if (t >= d.num_states()) throw InvalidArgument("target state out of range");
    mask[t] = true;
  }
  return reach_probability(d.rows, mask);
}

Mdp example_mdp() {
  Mdp m;
  m.initial = 0;
  m.ap = {"p1", "p2"};
  m.actions = {"a0", "a1"};
  m.labels = {{0}, {1}, {0, 1}, {}};
  m.choices = {
      {Choice{0, {{0, 1.0}}}, Choice{1, {{1, 0.5}, {2, 0.5}}}},
      {Choice{0, {{0, 1.0}}}, Choice{1, {{3, 1.0}}}},
      {Choice{0, {{0, 1.0}}}},
      {Choice{0, {{3, 1.0}}}},
  };
  return m;
}

}  // namespace ltlfsynth
