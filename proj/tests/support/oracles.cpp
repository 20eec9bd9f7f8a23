#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "ltlfsynth/parser.hpp"

namespace oracle {

using ltlfsynth::Op;

namespace {

bool atom_at(const Formula& f, const std::vector<std::string>& alphabet, Assignment letter) {
  for (std::size_t p = 0; p < alphabet.size(); ++p) {
    if (alphabet[p] == f.name()) return (letter >> p) & 1U;
  }
  return false;
}

}  // namespace

bool ltlf_holds(const Formula& f, const std::vector<std::string>& alphabet, const std::vector<Assignment>& word,
                std::size_t i) {
  const std::size_t n = word.size();
  auto h = [&](const Formula& g, std::size_t j) { return ltlf_holds(g, alphabet, word, j); };
  switch (f.op()) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: return atom_at(f, alphabet, word[i]);
    case Op::Not: return !h(f.child(), i);
    case Op::And: return h(f.left(), i) && h(f.right(), i);
    case Op::Or: return h(f.left(), i) || h(f.right(), i);
    case Op::Implies: return !h(f.left(), i) || h(f.right(), i);
    case Op::Equiv: return h(f.left(), i) == h(f.right(), i);
    case Op::Next: return i + 1 < n && h(f.child(), i + 1);
    case Op::WeakNext: return i + 1 >= n || h(f.child(), i + 1);
    case Op::Eventually:
      for (std::size_t j = i; j < n; ++j) {
        if (h(f.child(), j)) return true;
      }
      return false;
    case Op::Globally:
      for (std::size_t j = i; j < n; ++j) {
        if (!h(f.child(), j)) return false;
      }
      return true;
    case Op::Until:
      for (std::size_t j = i; j < n; ++j) {
        if (h(f.right(), j)) return true;
        if (!h(f.left(), j)) return false;
      }
      return false;
    case Op::Release:
      for (std::size_t j = i; j < n; ++j) {
        if (!h(f.right(), j)) return false;
        if (h(f.left(), j)) return true;
      }
      return true;
  }
  throw std::logic_error("unknown operator");
}

bool ltl_holds(const Formula& f, const std::vector<std::string>& alphabet, const std::vector<Assignment>& prefix,
               const std::vector<Assignment>& loop, std::size_t i) {
  const std::size_t span = prefix.size() + loop.size();
  auto canon = [&](std::size_t j) { return j < span ? j : prefix.size() + (j - prefix.size()) % loop.size(); };
  auto next = [&](std::size_t j) { return canon(j + 1); };
  auto letter = [&](std::size_t j) { return j < prefix.size() ? prefix[j] : loop[j - prefix.size()]; };

  // Truth table per subformula over canonical positions, keyed by printed form.
  std::map<std::string, std::vector<bool>> memo;
  auto eval = [&](auto&& self, const Formula& g) -> std::vector<bool> {
    std::string key = ltlfsynth::to_string(g);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<bool> v(span, false);
    switch (g.op()) {
      case Op::True: v.assign(span, true); break;
      case Op::False: break;
      case Op::Atom:
        for (std::size_t j = 0; j < span; ++j) v[j] = atom_at(g, alphabet, letter(j));
        break;
      case Op::Not: {
        auto a = self(self, g.child());
        for (std::size_t j = 0; j < span; ++j) v[j] = !a[j];
        break;
      }
      case Op::And:
      case Op::Or:
      case Op::Implies:
      case Op::Equiv: {
        auto a = self(self, g.left());
        auto b = self(self, g.right());
        for (std::size_t j = 0; j < span; ++j) {
          v[j] = g.op() == Op::And       ? (a[j] && b[j])
                 : g.op() == Op::Or      ? (a[j] || b[j])
                 : g.op() == Op::Implies ? (!a[j] || b[j])
                                         : (a[j] == b[j]);
        }
        break;
      }
      case Op::Next:
      case Op::WeakNext: {
        auto a = self(self, g.child());
        for (std::size_t j = 0; j < span; ++j) v[j] = a[next(j)];
        break;
      }
      case Op::Eventually:
      case Op::Globally:
      case Op::Until:
      case Op::Release: {
        std::vector<bool> a(span, true), b;
        if (g.op() == Op::Eventually || g.op() == Op::Globally) {
          b = self(self, g.child());
        } else {
          a = self(self, g.left());
          b = self(self, g.right());
        }
        // G b == !(true U !b), a R b == !(!a U !b)
        if (g.op() == Op::Globally || g.op() == Op::Release) {
          for (std::size_t j = 0; j < span; ++j) {
            if (g.op() == Op::Release) a[j] = !a[j];
            b[j] = !b[j];
          }
        }
        // span steps along the chain visit every position reachable from j.
        for (std::size_t j = 0; j < span; ++j) {
          std::size_t x = j;
          for (std::size_t step = 0; step <= span; ++step) {
            if (b[x]) {
              v[j] = true;
              break;
            }
            if (!a[x]) break;
            x = next(x);
          }
        }
        if (g.op() == Op::Globally || g.op() == Op::Release) v.flip();
        break;
      }
    }
    memo.emplace(key, v);
    return v;
  };
  return eval(eval, f)[canon(i)];
}

std::vector<std::vector<Assignment>> all_words(std::size_t k, std::size_t n) {
  const Assignment letters = Assignment{1} << k;
  std::vector<std::vector<Assignment>> out;
  std::vector<Assignment> w(n, 0);
  for (;;) {
    out.push_back(w);
    std::size_t i = 0;
    while (i < n && ++w[i] == letters) w[i++] = 0;
    if (i == n) break;
  }
  return out;
}

std::size_t myhill_nerode_classes(const Formula& f, std::size_t prefix_len, std::size_t suffix_len) {
  const std::vector<std::string> alphabet = ltlfsynth::propositions(f);
  const std::size_t k = alphabet.size();
  std::vector<std::vector<Assignment>> prefixes, suffixes;
  for (std::size_t n = 0; n <= prefix_len; ++n) {
    for (auto& w : all_words(k, n)) prefixes.push_back(std::move(w));
  }
  for (std::size_t n = 0; n <= suffix_len; ++n) {
    for (auto& w : all_words(k, n)) suffixes.push_back(std::move(w));
  }
  std::set<std::vector<bool>> classes;
  for (const auto& u : prefixes) {
    std::vector<bool> sig;
    sig.reserve(suffixes.size());
    for (const auto& v : suffixes) {
      std::vector<Assignment> w = u;
      w.insert(w.end(), v.begin(), v.end());
      sig.push_back(!w.empty() && ltlf_holds(f, alphabet, w, 0));
    }
    classes.insert(std::move(sig));
  }
  return classes.size();
}

Formula random_formula(std::mt19937_64& rng, int max_depth, const std::vector<std::string>& props) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  if (max_depth <= 0 || pick(5) == 0) {
    std::size_t r = pick(props.size() * 4 + 1);
    if (r == 0) return pick(2) ? Formula::tt() : Formula::ff();
    return Formula::atom(props[(r - 1) % props.size()]);
  }
  auto sub = [&]() { return random_formula(rng, max_depth - 1, props); };
  const std::size_t kind = pick(10);
  if (kind == 0) return Formula::negate(sub());
  if (kind == 5) return Formula::next(sub());
  if (kind == 8) return Formula::eventually(sub());
  if (kind == 9) return Formula::globally(sub());
  // Two statements so the left operand is always drawn first.
  Formula l = sub();
  Formula r = sub();
  switch (kind) {
    case 1: return Formula::conj(l, r);
    case 2: return Formula::disj(l, r);
    case 3: return Formula::implies(l, r);
    case 4: return Formula::equiv(l, r);
    default: return Formula::until(l, r);
  }
}

ltlfsynth::Mdp random_mdp(std::mt19937_64& rng, int max_states, int max_actions,
                          const std::vector<std::string>& props) {
  using namespace ltlfsynth;
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  Mdp m;
  const std::size_t n = 1 + pick(static_cast<std::size_t>(max_states));
  m.ap = props;
  for (int a = 0; a < max_actions; ++a) m.actions.push_back("a" + std::to_string(a));
  m.labels.resize(n);
  m.choices.resize(n);
  for (StateId s = 0; s < n; ++s) {
    for (PropId p = 0; p < props.size(); ++p) {
      if (pick(2)) m.labels[s].push_back(p);
    }
    const std::size_t k = 1 + pick(static_cast<std::size_t>(max_actions));
    std::vector<ActionId> acts(static_cast<std::size_t>(max_actions));
    for (std::size_t a = 0; a < acts.size(); ++a) acts[a] = static_cast<ActionId>(a);
    std::shuffle(acts.begin(), acts.end(), rng);
    acts.resize(k);
    std::sort(acts.begin(), acts.end());
    for (ActionId a : acts) {
      // Dyadic splits keep every distribution exactly stochastic.
      static const std::vector<std::vector<double>> splits = {
          {1.0}, {0.5, 0.5}, {0.25, 0.75}, {0.25, 0.25, 0.5}};
      const auto& split = splits[pick(std::min<std::size_t>(splits.size(), n == 1 ? 1 : n == 2 ? 3 : 4))];
      std::vector<StateId> targets(n);
      for (StateId t = 0; t < n; ++t) targets[t] = t;
      std::shuffle(targets.begin(), targets.end(), rng);
      targets.resize(split.size());
      std::vector<Transition> row;
      for (std::size_t i = 0; i < split.size(); ++i) row.push_back({targets[i], split[i]});
      std::sort(row.begin(), row.end(), [](const Transition& x, const Transition& y) { return x.target < y.target; });
      m.choices[s].push_back({a, std::move(row)});
    }
  }
  return m;
}

const std::vector<CorpusEntry>& formula_corpus() {
  static const std::vector<CorpusEntry> corpus = [] {
    const char* patterns[] = {
        "true", "false", "a", "!a", "a & b", "a | b", "a -> b", "a <-> b",
        "X a", "X X a", "!X a", "X !a", "X true", "!X true", "X X true",
        "F a", "G a", "F G a", "G F a", "F !a", "G !a",
        "a U b", "!a U b", "a U (b U c)", "(a U b) U c", "a U X b", "X (a U b)",
        "F (a & X b)", "G (a -> X b)", "G (a -> F b)", "G (a -> X !a)",
        "F a & F b", "F a & F b & F c", "F a | F b", "F a -> F b",
        "G a | G b", "F (a & F (b & F c))", "F (a & F b) & G !c",
        "(F a & F b) & G !c", "F (a & !X true)", "F (b & X !X true)",
        "G (a <-> X b)", "!a U (b & X c)", "G F a & G F b", "F (a U b)",
        "G (a | b) & F c", "X G a", "G X a", "(a U b) & (!b U c)", "F a <-> G b",
    };
    std::vector<CorpusEntry> out;
    for (const char* p : patterns) out.push_back({p, ltlfsynth::parse(p)});
    std::mt19937_64 rng(20240601);
    const std::vector<std::string> props = {"a", "b", "c"};
    int added = 0;
    while (added < 20) {
      Formula f = random_formula(rng, 4, props);
      if (f.depth() > 4) continue;
      out.push_back({ltlfsynth::to_string(f), f});
      ++added;
    }
    return out;
  }();
  return corpus;
}

std::vector<double> solve_reach(const std::vector<std::vector<ltlfsynth::Transition>>& rows,
                                const std::vector<bool>& target) {
  const std::size_t n = rows.size();
  // States that can reach the target at all.
  std::vector<bool> can(target);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (can[s]) continue;
      for (const auto& t : rows[s]) {
        if (t.probability > 0 && can[t.target]) {
          can[s] = true;
          changed = true;
          break;
        }
      }
    }
  }
  std::vector<std::size_t> idx(n, n);
  std::vector<std::size_t> unknown;
  for (std::size_t s = 0; s < n; ++s) {
    if (can[s] && !target[s]) {
      idx[s] = unknown.size();
      unknown.push_back(s);
    }
  }
  const std::size_t u = unknown.size();
  // (I - P) x = b over unknown states, augmented matrix.
  std::vector<std::vector<double>> a(u, std::vector<double>(u + 1, 0.0));
  for (std::size_t r = 0; r < u; ++r) {
    a[r][r] = 1.0;
    for (const auto& t : rows[unknown[r]]) {
      if (target[t.target]) {
        a[r][u] += t.probability;
      } else if (idx[t.target] < n) {
        a[r][idx[t.target]] -= t.probability;
      }
    }
  }
  for (std::size_t c = 0; c < u; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < u; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    for (std::size_t r = 0; r < u; ++r) {
      if (r == c || a[r][c] == 0.0) continue;
      double m = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= u; ++k) a[r][k] -= m * a[c][k];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    if (target[s]) x[s] = 1.0;
  }
  for (std::size_t r = 0; r < u; ++r) x[unknown[r]] = a[r][u] / a[r][r];
  return x;
}

}  // namespace oracle
