#include "ltlfsynth/dfa.hpp"

#include <algorithm>
#include <functional>

#include "ltlfsynth/errors.hpp"

namespace ltlfsynth {

namespace detail {

std::int32_t GuardPool::make(std::uint32_t var, std::int32_t lo, std::int32_t hi) {
  if (lo == hi) return lo;
  GuardNode key{var, lo, hi};
  auto it = unique_.find(key);
  if (it != unique_.end()) return it->second;
  auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(key);
  unique_.emplace(key, id);
  return id;
}

}  // namespace detail

Dfa::Dfa(std::vector<std::string> props, StateId initial, std::vector<bool> accepting,
         std::vector<std::int32_t> roots, std::vector<GuardNode> nodes)
    : props_(std::move(props)),
      initial_(initial),
      accepting_(std::move(accepting)),
      roots_(std::move(roots)),
      nodes_(std::move(nodes)) {
  const std::size_t n = accepting_.size();
  if (props_.size() > kMaxAlphabet) throw InvalidArgument("DFA alphabet exceeds 64 propositions");
  if (n == 0) throw InvalidArgument("DFA needs at least one state");
  if (initial_ >= n) throw InvalidArgument("DFA initial state out of range");
  if (roots_.size() != n) throw InvalidArgument("DFA needs one guard root per state");
  auto check_child = [&](std::int32_t c, std::int64_t parent_var) {
    if (is_leaf(c)) {
      if (leaf_target(c) >= n) throw InvalidArgument("DFA transition targets an unknown state");
      return;
    }
    if (static_cast<std::size_t>(c) >= nodes_.size()) throw InvalidArgument("DFA guard refers to an unknown node");
    if (static_cast<std::int64_t>(nodes_[static_cast<std::size_t>(c)].var) <= parent_var) {
      throw InvalidArgument("DFA guard variables must strictly increase along each path");
    }
  };
  for (const auto& node : nodes_) {
    if (node.var >= props_.size()) throw InvalidArgument("DFA guard tests an unknown proposition");
    check_child(node.lo, node.var);
    check_child(node.hi, node.var);
  }
  for (auto r : roots_) check_child(r, -1);
}

Dfa Dfa::from_table(std::vector<std::string> props, StateId initial, std::vector<bool> accepting,
                    const std::vector<std::vector<StateId>>& table) {
  const std::size_t k = props.size();
  if (k > 24) throw InvalidArgument("explicit DFA tables are limited to 24 propositions");
  if (table.size() != accepting.size()) throw InvalidArgument("DFA table needs one row per state");
  detail::GuardPool pool;
  std::vector<std::int32_t> roots;
  roots.reserve(table.size());
  for (const auto& row : table) {
    if (row.size() != (std::size_t{1} << k)) throw InvalidArgument("DFA table row must cover all assignments");
    std::function<std::int32_t(std::uint32_t, Assignment)> build = [&](std::uint32_t var, Assignment a) {
      if (var == k) return leaf(row[a]);
      std::int32_t lo = build(var + 1, a);
      std::int32_t hi = build(var + 1, a | (Assignment{1} << var));
      return pool.make(var, lo, hi);
    };
    roots.push_back(build(0, 0));
  }
  return Dfa(std::move(props), initial, std::move(accepting), std::move(roots), pool.release());
}

std::vector<StateId> Dfa::accepting() const {
  std::vector<StateId> out;
  for (StateId q = 0; q < accepting_.size(); ++q) {
    if (accepting_[q]) out.push_back(q);
  }
  return out;
}

StateId Dfa::run(const Trace& trace) const {
  const auto& alphabet = trace.alphabet();
  std::vector<int> to_local(alphabet.size(), -1);
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    auto it = std::find(props_.begin(), props_.end(), alphabet[i]);
    if (it != props_.end()) to_local[i] = static_cast<int>(it - props_.begin());
  }
  StateId q = initial_;
  for (std::size_t pos = 0; pos < trace.size(); ++pos) {
    Assignment a = 0;
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
      if (!trace.holds(pos, i)) continue;
      if (to_local[i] < 0) {
        throw AlphabetMismatch("proposition '" + alphabet[i] + "' is not in the DFA alphabet");
      }
      a |= Assignment{1} << to_local[i];
    }
    q = successor(q, a);
  }
  return q;
}

bool Dfa::accepts(const Trace& trace) const { return accepting_[run(trace)]; }

std::vector<std::pair<Cube, StateId>> Dfa::edges(StateId q) const {
  std::vector<std::pair<Cube, StateId>> out;
  std::function<void(std::int32_t, Cube)> walk = [&](std::int32_t c, Cube cube) {
    if (is_leaf(c)) {
      out.emplace_back(cube, leaf_target(c));
      return;
    }
    const GuardNode& n = nodes_[static_cast<std::size_t>(c)];
    Assignment bit = Assignment{1} << n.var;
    walk(n.lo, Cube{cube.care | bit, cube.value});
    walk(n.hi, Cube{cube.care | bit, cube.value | bit});
  };
  walk(roots_[q], Cube{});
  return out;
}

Dfa Dfa::with_accepting(std::vector<bool> accepting) const {
  if (accepting.size() != accepting_.size()) throw InvalidArgument("accepting mask size differs from state count");
  return Dfa(props_, initial_, std::move(accepting), roots_, nodes_);
}

bool Dfa::all_reachable() const {
  std::vector<bool> seen(num_states(), false);
  std::vector<StateId> stack{initial_};
  seen[initial_] = true;
  while (!stack.empty()) {
    StateId q = stack.back();
    stack.pop_back();
    for (const auto& [cube, t] : edges(q)) {
      if (!seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

bool operator==(const Dfa& a, const Dfa& b) {
  if (a.props_ != b.props_ || a.initial_ != b.initial_ || a.accepting_ != b.accepting_) return false;
  std::function<bool(std::int32_t, std::int32_t)> same = [&](std::int32_t x, std::int32_t y) {
    if (is_leaf(x) || is_leaf(y)) return x == y;
    const GuardNode& nx = a.nodes_[static_cast<std::size_t>(x)];
    const GuardNode& ny = b.nodes_[static_cast<std::size_t>(y)];
    return nx.var == ny.var && same(nx.lo, ny.lo) && same(nx.hi, ny.hi);
  };
  for (std::size_t q = 0; q < a.roots_.size(); ++q) {
    if (!same(a.roots_[q], b.roots_[q])) return false;
  }
  return true;
}

std::string cube_to_string(const Cube& cube, const std::vector<std::string>& props) {
  if (cube.care == 0) return "true";
  std::string out;
  for (std::size_t i = 0; i < props.size(); ++i) {
    Assignment bit = Assignment{1} << i;
    if (!(cube.care & bit)) continue;
    if (!out.empty()) out += " & ";
    if (!(cube.value & bit)) out += '!';
    out += props[i];
  }
  return out;
}

}  // namespace ltlfsynth
