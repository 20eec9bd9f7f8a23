#include <json.hpp>

#include <sstream>

#include "ltlfsynth/automata.hpp"
#include "ltlfsynth/errors.hpp"
#include "ltlfsynth/parser.hpp"

namespace ltlfsynth {

namespace {

using Json = nlohmann::ordered_json;

enum class Tri { False, True, Unknown };

// Truth of a propositional guard under a partial assignment.
Tri eval_partial(const Formula& f, const std::vector<int>& var_of_atom, Assignment care, Assignment value) {
  switch (f.op()) {
    case Op::True: return Tri::True;
    case Op::False: return Tri::False;
    case Op::Atom: {
      Assignment bit = Assignment{1} << var_of_atom[f.atom_id()];
      if (!(care & bit)) return Tri::Unknown;
      return (value & bit) ? Tri::True : Tri::False;
    }
    case Op::Not: {
      Tri c = eval_partial(f.child(), var_of_atom, care, value);
      return c == Tri::Unknown ? c : (c == Tri::True ? Tri::False : Tri::True);
    }
    case Op::And:
    case Op::Or: {
      Tri l = eval_partial(f.left(), var_of_atom, care, value);
      Tri r = eval_partial(f.right(), var_of_atom, care, value);
      Tri absorbing = f.op() == Op::And ? Tri::False : Tri::True;
      if (l == absorbing || r == absorbing) return absorbing;
      if (l == Tri::Unknown || r == Tri::Unknown) return Tri::Unknown;
      return l;
    }
    case Op::Implies:
      return eval_partial(Formula::disj(Formula::negate(f.left()), f.right()), var_of_atom, care, value);
    case Op::Equiv: {
      Tri l = eval_partial(f.left(), var_of_atom, care, value);
      Tri r = eval_partial(f.right(), var_of_atom, care, value);
      if (l == Tri::Unknown || r == Tri::Unknown) return Tri::Unknown;
      return l == r ? Tri::True : Tri::False;
    }
    default:
      throw ModelError("DFA guards must be propositional");
  }
}

struct Edge {
  Formula guard;
  StateId to;
};

std::int32_t build_guard(detail::GuardPool& pool, const std::vector<Edge>& edges, const std::vector<int>& var_of_atom,
                         std::size_t k, std::uint32_t level, Assignment care, Assignment value, StateId from) {
  const Edge* only = nullptr;
  std::size_t live = 0;
  bool all_true = true;
  for (const auto& e : edges) {
    Tri t = eval_partial(e.guard, var_of_atom, care, value);
    if (t == Tri::False) continue;
    ++live;
    only = &e;
    if (t == Tri::Unknown) all_true = false;
  }
  if (live == 0) throw ModelError("guards of state " + std::to_string(from) + " do not cover every assignment");
  if (all_true) {
    if (live > 1) throw ModelError("guards of state " + std::to_string(from) + " overlap");
    return leaf(only->to);
  }
  if (level >= k) throw ModelError("guards of state " + std::to_string(from) + " are not propositional");
  Assignment bit = Assignment{1} << level;
  std::int32_t lo = build_guard(pool, edges, var_of_atom, k, level + 1, care | bit, value, from);
  std::int32_t hi = build_guard(pool, edges, var_of_atom, k, level + 1, care | bit, value | bit, from);
  return pool.make(level, lo, hi);
}

std::string hoa_label(const Cube& cube, std::size_t k) {
  if (cube.care == 0) return "t";
  std::string out;
  for (std::size_t i = 0; i < k; ++i) {
    Assignment bit = Assignment{1} << i;
    if (!(cube.care & bit)) continue;
    if (!out.empty()) out += '&';
    if (!(cube.value & bit)) out += '!';
    out += std::to_string(i);
  }
  return out;
}

}  // namespace

std::string export_dot(const Dfa& a) {
  std::ostringstream out;
  out << "digraph dfa {\n  rankdir=LR;\n";
  for (StateId q = 0; q < a.num_states(); ++q) {
    out << "  " << q << " [shape=" << (a.is_accepting(q) ? "doublecircle" : "circle");
    if (q == a.initial()) out << ", style=bold";
    out << "];\n";
  }
  for (StateId q = 0; q < a.num_states(); ++q) {
    for (const auto& [cube, t] : a.edges(q)) {
      out << "  " << q << " -> " << t << " [label=\"" << cube_to_string(cube, a.props()) << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string export_json(const Dfa& a) {
  Json j;
  j["props"] = a.props();
  j["states"] = a.num_states();
  j["initial"] = a.initial();
  j["accepting"] = a.accepting();
  Json edges = Json::array();
  for (StateId q = 0; q < a.num_states(); ++q) {
    for (const auto& [cube, t] : a.edges(q)) {
      edges.push_back(Json{{"from", q}, {"guard", cube_to_string(cube, a.props())}, {"to", t}});
    }
  }
  j["edges"] = std::move(edges);
  return j.dump(2) + "\n";
}

Dfa import_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed DFA JSON: ") + e.what());
  }
  try {
    auto props = j.at("props").get<std::vector<std::string>>();
    auto n = j.at("states").get<std::size_t>();
    auto initial = j.at("initial").get<StateId>();
    if (n == 0) throw ModelError("DFA JSON declares no states");
    if (initial >= n) throw ModelError("DFA JSON initial state out of range");
    std::vector<bool> accepting(n, false);
    for (auto q : j.at("accepting").get<std::vector<StateId>>()) {
      if (q >= n) throw ModelError("DFA JSON accepting state out of range");
      accepting[q] = true;
    }
    std::vector<int> var_of_atom;
    for (std::size_t i = 0; i < props.size(); ++i) {
      if (!is_identifier(props[i])) throw ModelError("invalid proposition name '" + props[i] + "'");
      AtomId id = intern_atom(props[i]);
      if (var_of_atom.size() <= id) var_of_atom.resize(id + 1, -1);
      var_of_atom[id] = static_cast<int>(i);
    }
    std::vector<std::vector<Edge>> out(n);
    for (const auto& e : j.at("edges")) {
      auto from = e.at("from").get<StateId>();
      auto to = e.at("to").get<StateId>();
      if (from >= n || to >= n) throw ModelError("DFA JSON edge refers to an unknown state");
      Formula guard;
      try {
        guard = parse(e.at("guard").get<std::string>(), ParseOptions{true});
      } catch (const ParseError& pe) {
        throw ModelError(std::string("bad guard: ") + pe.what());
      }
      for (const auto& name : propositions(guard)) {
        AtomId id = intern_atom(name);
        if (id >= var_of_atom.size() || var_of_atom[id] < 0) {
          throw ModelError("guard mentions '" + name + "', which is not a declared proposition");
        }
      }
      out[from].push_back({guard, to});
    }
    detail::GuardPool pool;
    std::vector<std::int32_t> roots;
    for (StateId q = 0; q < n; ++q) {
      roots.push_back(build_guard(pool, out[q], var_of_atom, props.size(), 0, 0, 0, q));
    }
    return Dfa(std::move(props), initial, std::move(accepting), std::move(roots), pool.release());
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed DFA JSON: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ModelError(e.what());
  }
}

std::string export_hoa(const Dfa& a) {
  std::ostringstream out;
  out << "HOA: v1\n";
  out << "/* DFA-as-HOA: run acceptance = final state in set 0 */\n";
  out << "States: " << a.num_states() << "\n";
  out << "Start: " << a.initial() << "\n";
  out << "AP: " << a.num_props();
  for (const auto& p : a.props()) out << " \"" << p << "\"";
  out << "\n";
  out << "acc-name: Buchi\n";
  out << "Acceptance: 1 Inf(0)\n";
  out << "properties: trans-labels explicit-labels state-acc deterministic complete\n";
  out << "--BODY--\n";
  for (StateId q = 0; q < a.num_states(); ++q) {
    out << "State: " << q;
    if (a.is_accepting(q)) out << " {0}";
    out << "\n";
    for (const auto& [cube, t] : a.edges(q)) out << "[" << hoa_label(cube, a.num_props()) << "] " << t << "\n";
  }
  out << "--END--\n";
  return out.str();
}

}  // namespace ltlfsynth
