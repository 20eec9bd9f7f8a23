#include <unordered_map>
#include <unordered_set>

#include "bdd.hpp"
#include "ltlfsynth/automata.hpp"
#include "ltlfsynth/errors.hpp"

namespace ltlfsynth {

namespace {

using detail::BddManager;
using Ref = BddManager::Ref;

// Progression of NNF formulas into BDDs over proposition variables 0..k-1 and
// next-step obligation variables k, k+1, ... created on demand. A strong
// obligation requires a next position; a weak one is vacuous at the end of the trace.
class Progression {
 public:
  Progression(BddManager& bdd, const std::vector<std::string>& props) : bdd_(bdd), k_(props.size()) {
    for (std::size_t i = 0; i < props.size(); ++i) prop_var_.emplace(intern_atom(props[i]), i);
  }

  Ref strong(const Formula& f) { return obligation(f, false); }
  Ref weak(const Formula& f) { return obligation(f, true); }

  Ref prog(const Formula& f) {
    auto it = memo_.find(f);
    if (it != memo_.end()) return it->second;
    Ref r = BddManager::kFalse;
    switch (f.op()) {
      case Op::True: r = BddManager::kTrue; break;
      case Op::False: r = BddManager::kFalse; break;
      case Op::Atom: r = bdd_.var(prop_var_.at(f.atom_id())); break;
      case Op::Not: r = bdd_.nvar(prop_var_.at(f.child().atom_id())); break;
      case Op::And: r = bdd_.land(prog(f.left()), prog(f.right())); break;
      case Op::Or: r = bdd_.lor(prog(f.left()), prog(f.right())); break;
      case Op::Next: r = strong(f.child()); break;
      case Op::WeakNext: r = weak(f.child()); break;
      case Op::Until: r = bdd_.lor(prog(f.right()), bdd_.land(prog(f.left()), strong(f))); break;
      case Op::Release: r = bdd_.land(prog(f.right()), bdd_.lor(prog(f.left()), weak(f))); break;
      case Op::Eventually: r = bdd_.lor(prog(f.child()), strong(f)); break;
      case Op::Globally: r = bdd_.land(prog(f.child()), weak(f)); break;
      case Op::Implies:
      case Op::Equiv:
        throw InvalidArgument("progression expects a formula in negation normal form");
    }
    memo_.emplace(f, r);
    return r;
  }

  bool is_obligation(std::uint32_t v) const noexcept { return v >= k_; }
  bool is_weak(std::uint32_t v) const noexcept { return weak_flag_[v - k_]; }
  Formula body(std::uint32_t v) const { return body_[v - k_]; }
  std::size_t num_vars() const noexcept { return k_ + body_.size(); }

 private:
  Ref obligation(const Formula& f, bool weak) {
    auto& table = weak ? weak_ : strong_;
    auto it = table.find(f);
    if (it != table.end()) return bdd_.var(it->second);
    auto v = static_cast<std::uint32_t>(k_ + body_.size());
    body_.push_back(f);
    weak_flag_.push_back(weak);
    table.emplace(f, v);
    return bdd_.var(v);
  }

  BddManager& bdd_;
  std::size_t k_;
  std::unordered_map<AtomId, std::uint32_t> prop_var_;
  std::unordered_map<Formula, Ref> memo_;
  std::unordered_map<Formula, std::uint32_t> strong_;
  std::unordered_map<Formula, std::uint32_t> weak_;
  std::vector<Formula> body_;
  std::vector<bool> weak_flag_;
};

// Variables occurring in f, each once.
std::vector<std::uint32_t> support(const BddManager& bdd, Ref f) {
  std::unordered_set<Ref> seen_node;
  std::unordered_set<std::uint32_t> seen_var;
  std::vector<std::uint32_t> vars;
  std::vector<Ref> stack{f};
  while (!stack.empty()) {
    Ref r = stack.back();
    stack.pop_back();
    if (bdd.is_terminal(r) || !seen_node.insert(r).second) continue;
    if (seen_var.insert(bdd.var_of(r)).second) vars.push_back(bdd.var_of(r));
    stack.push_back(bdd.high(r));
    stack.push_back(bdd.low(r));
  }
  return vars;
}

}  // namespace

Dfa compile_unminimized(const Formula& f, const CompileOptions& options) {
  std::vector<std::string> props = propositions(f);
  if (props.size() > kMaxAlphabet) throw InvalidArgument("formula has more than 64 propositions");
  const auto k = static_cast<std::uint32_t>(props.size());

  BddManager bdd;
  Progression pr(bdd, props);
  detail::GuardPool pool;

  std::vector<Ref> states;
  std::unordered_map<Ref, StateId> index;
  auto state_of = [&](Ref s) {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    if (states.size() >= options.state_cap) {
      throw ResourceLimit("DFA construction exceeded the state cap of " + std::to_string(options.state_cap) +
                          " states");
    }
    auto id = static_cast<StateId>(states.size());
    states.push_back(s);
    index.emplace(s, id);
    return id;
  };

  state_of(pr.strong(to_nnf(f)));
  std::vector<std::int32_t> roots;
  std::vector<bool> accepting;
  for (std::size_t q = 0; q < states.size(); ++q) {
    const Ref s = states[q];
    accepting.push_back(bdd.eval(s, [&](std::uint32_t v) { return pr.is_weak(v); }));

    std::vector<Ref> subst;
    for (auto v : support(bdd, s)) {
      Ref next = pr.prog(pr.body(v));
      if (subst.size() <= v) {
        auto old = static_cast<std::uint32_t>(subst.size());
        subst.resize(v + 1);
        for (auto u = old; u <= v; ++u) subst[u] = bdd.var(u);
      }
      subst[v] = next;
    }
    const Ref t = bdd.compose(s, subst);

    std::unordered_map<Ref, std::int32_t> memo;
    auto build = [&](auto& self, Ref r) -> std::int32_t {
      if (bdd.is_terminal(r) || bdd.var_of(r) >= k) return leaf(state_of(r));
      auto it = memo.find(r);
      if (it != memo.end()) return it->second;
      std::int32_t lo = self(self, bdd.low(r));
      std::int32_t hi = self(self, bdd.high(r));
      std::int32_t id = pool.make(bdd.var_of(r), lo, hi);
      memo.emplace(r, id);
      return id;
    };
    roots.push_back(build(build, t));
  }
  return Dfa(std::move(props), 0, std::move(accepting), std::move(roots), pool.release());
}

Dfa compile(const Formula& f, const CompileOptions& options) {
  return minimize(compile_unminimized(f, options));
}

}  // namespace ltlfsynth
