#include "ltlfsynth/product.hpp"

#include <unordered_map>

#include "ltlfsynth/errors.hpp"

namespace ltlfsynth {

std::vector<Assignment> project_labels(const Mdp& m, const Dfa& a) {
  std::vector<int> dfa_index(m.ap.size(), -1);
  for (std::size_t i = 0; i < a.num_props(); ++i) {
    auto p = m.find_prop(a.props()[i]);
    if (!p) throw AlphabetMismatch("proposition '" + a.props()[i] + "' is not declared by the MDP");
    dfa_index[*p] = static_cast<int>(i);
  }
  std::vector<Assignment> letter(m.num_states(), 0);
  for (StateId s = 0; s < m.num_states(); ++s) {
    for (auto p : m.labels[s]) {
      if (dfa_index[p] >= 0) letter[s] |= Assignment{1} << dfa_index[p];
    }
  }
  return letter;
}

ProductMdp build_product(std::shared_ptr<const Mdp> m, std::shared_ptr<const Dfa> a, const ProductOptions& options) {
  const std::vector<Assignment> letter = project_labels(*m, *a);
  const std::uint64_t nq = a->num_states();
  const std::uint64_t pairs = static_cast<std::uint64_t>(m->num_states()) * nq;

  // Dense index when the pair space is modest, hash map otherwise.
  constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 26;
  std::vector<std::int32_t> dense;
  std::unordered_map<std::uint64_t, StateId> sparse;
  if (pairs <= kDenseLimit) dense.assign(pairs, -1);

  ProductMdp p;
  auto lookup = [&](StateId s, StateId q) -> StateId {
    std::uint64_t key = s * nq + q;
    if (!dense.empty()) {
      if (dense[key] >= 0) return static_cast<StateId>(dense[key]);
    } else if (auto it = sparse.find(key); it != sparse.end()) {
      return it->second;
    }
    if (p.states.size() >= options.state_cap) {
      throw ResourceLimit("product construction exceeded the state cap of " + std::to_string(options.state_cap) +
                          " states");
    }
    auto id = static_cast<StateId>(p.states.size());
    if (!dense.empty()) {
      dense[key] = static_cast<std::int32_t>(id);
    } else {
      sparse.emplace(key, id);
    }
    p.states.emplace_back(s, q);
    p.accepting.push_back(a->is_accepting(q));
    return id;
  };

  p.initial = lookup(m->initial, a->successor(a->initial(), letter[m->initial]));
  p.choice_start.push_back(0);
  p.trans_start.push_back(0);
  for (std::size_t x = 0; x < p.states.size(); ++x) {
    const auto [s, q] = p.states[x];
    for (const Choice& c : m->choices[s]) {
      p.choice_action.push_back(c.action);
      for (const Transition& t : c.transitions) {
        StateId y = lookup(t.target, a->successor(q, letter[t.target]));
        p.trans_target.push_back(y);
        p.trans_prob.push_back(t.probability);
      }
      p.trans_start.push_back(p.trans_target.size());
    }
    p.choice_start.push_back(static_cast<std::uint32_t>(p.choice_action.size()));
  }
  p.base = std::move(m);
  p.automaton = std::move(a);
  return p;
}

ProductMdp build_product(const Mdp& m, const Dfa& a, const ProductOptions& options) {
  return build_product(std::make_shared<const Mdp>(m), std::make_shared<const Dfa>(a), options);
}

}  // namespace ltlfsynth
