#include "ltlfsynth/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ltlfsynth/automata.hpp"
#include "ltlfsynth/errors.hpp"

namespace ltlfsynth {

namespace {

// Candidate rows per state; the policy space is their Cartesian product.
using Options = std::vector<std::vector<std::vector<Transition>>>;

double max_reach(const Options& options, const std::vector<bool>& target, StateId initial,
                 const OracleOptions& budget) {
  std::uint64_t policies = 1;
  for (const auto& o : options) {
    if (o.empty()) throw InvalidArgument("oracle state without choices");
    if (policies > budget.max_policies / o.size()) {
      throw BudgetExceeded("policy space exceeds the oracle budget of " + std::to_string(budget.max_policies));
    }
    policies *= o.size();
  }
  const std::size_t n = options.size();
  std::vector<std::size_t> digit(n, 0);
  std::vector<std::vector<Transition>> rows(n);
  for (std::size_t s = 0; s < n; ++s) rows[s] = options[s][0];
  double best = 0.0;
  for (;;) {
    best = std::max(best, reach_probability(rows, target)[initial]);
    std::size_t i = 0;
    while (i < n) {
      if (++digit[i] < options[i].size()) {
        rows[i] = options[i][digit[i]];
        break;
      }
      digit[i] = 0;
      rows[i] = options[i][0];
      ++i;
    }
    if (i == n) break;
  }
  return best;
}

void check_size(std::size_t states, const OracleOptions& budget) {
  if (states > budget.max_states) {
    throw BudgetExceeded("product has " + std::to_string(states) + " states, oracle budget is " +
                         std::to_string(budget.max_states));
  }
}

}  // namespace

double oracle_max_probability(const ProductMdp& p, const OracleOptions& budget) {
  check_size(p.num_states(), budget);
  Options options(p.num_states());
  for (StateId x = 0; x < p.num_states(); ++x) {
    if (p.accepting[x]) {
      options[x].push_back({{x, 1.0}});
      continue;
    }
    const std::size_t k = p.choice_start[x + 1] - p.choice_start[x];
    if (k > budget.max_actions) {
      throw BudgetExceeded("state has " + std::to_string(k) + " actions, oracle budget is " +
                           std::to_string(budget.max_actions));
    }
    for (auto c = p.choice_start[x]; c < p.choice_start[x + 1]; ++c) {
      std::vector<Transition> row;
      for (auto i = p.trans_start[c]; i < p.trans_start[c + 1]; ++i) {
        row.push_back({p.trans_target[i], p.trans_prob[i]});
      }
      options[x].push_back(std::move(row));
    }
  }
  return max_reach(options, p.accepting, p.initial, budget);
}

double oracle_max_probability(const Mdp& m, const Formula& f, const OracleOptions& budget) {
  return oracle_max_probability(build_product(m, compile(f)), budget);
}

Lemma1Report verify_lemma1(const Mdp& m, const Formula& f, const OracleOptions& budget) {
  const Dfa dfa = compile(f);
  Lemma1Report report;
  report.native = oracle_max_probability(build_product(m, dfa), budget);

  // Termination product over augment(m): states (s, q) for original s, plus two
  // sinks standing for s_term entered with q accepting / not accepting.
  const Mdp aug = augment(m);
  const std::vector<Assignment> letter = project_labels(aug, dfa);
  const ActionId a_term = *aug.find_action(kTermAction);
  const auto s_term = static_cast<StateId>(m.num_states());

  std::map<std::pair<StateId, StateId>, StateId> index;
  std::vector<std::pair<StateId, StateId>> states;
  auto lookup = [&](StateId s, StateId q) {
    auto [it, fresh] = index.emplace(std::pair{s, q}, static_cast<StateId>(states.size()));
    if (fresh) {
      states.emplace_back(s, q);
      check_size(states.size(), budget);
    }
    return it->second;
  };
  lookup(aug.initial, dfa.successor(dfa.initial(), letter[aug.initial]));
  struct PendingRow {
    bool terminate;
    bool accept;
    std::vector<std::pair<StateId, double>> moves;
  };
  std::vector<std::vector<PendingRow>> pending;
  for (std::size_t x = 0; x < states.size(); ++x) {
    auto [s, q] = states[x];
    pending.emplace_back();
    if (aug.choices[s].size() > budget.max_actions + 1) {
      throw BudgetExceeded("state has " + std::to_string(aug.choices[s].size()) +
                           " actions including a_term, oracle budget is " + std::to_string(budget.max_actions + 1));
    }
    for (const Choice& c : aug.choices[s]) {
      PendingRow row{c.action == a_term, dfa.is_accepting(q), {}};
      if (!row.terminate) {
        for (const auto& t : c.transitions) {
          if (t.target == s_term) throw InvalidArgument("only a_term may lead to s_term");
          row.moves.emplace_back(lookup(t.target, dfa.successor(q, letter[t.target])), t.probability);
        }
      }
      pending[x].push_back(std::move(row));
    }
  }

  const auto n = static_cast<StateId>(states.size());
  const StateId term_acc = n, term_rej = n + 1;
  Options options(n + 2);
  for (StateId x = 0; x < n; ++x) {
    for (const auto& row : pending[x]) {
      std::vector<Transition> r;
      if (row.terminate) {
        r.push_back({row.accept ? term_acc : term_rej, 1.0});
      } else {
        for (auto [y, pr] : row.moves) r.push_back({y, pr});
      }
      options[x].push_back(std::move(r));
    }
  }
  options[term_acc].push_back({{term_acc, 1.0}});
  options[term_rej].push_back({{term_rej, 1.0}});
  std::vector<bool> target(n + 2, false);
  target[term_acc] = true;
  report.augmented = max_reach(options, target, 0, budget);
  report.difference = std::abs(report.native - report.augmented);
  return report;
}

}  // namespace ltlfsynth
