#include "ltlfsynth/benchmarks.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "ltlfsynth/errors.hpp"

namespace ltlfsynth {

namespace {

bool in_grid(const GridSpec& g, Cell c) { return c.x >= 0 && c.y >= 0 && c.x < g.width && c.y < g.height; }

std::string cell_str(Cell c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

Formula conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::tt();
  Formula out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = Formula::conj(out, fs[i]);
  return out;
}

Formula disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::ff();
  Formula out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = Formula::disj(out, fs[i]);
  return out;
}

Formula safe() { return Formula::globally(Formula::negate(Formula::atom("bad"))); }
Formula g(int i) { return Formula::atom("g" + std::to_string(i)); }

// Fisher-Yates with an explicit generator call so the order is identical across standard libraries.
template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

void check_grid_spec(const GridSpec& g) {
  if (g.width < 1 || g.height < 1) throw InvalidArgument("grid dimensions must be positive");
  if (static_cast<long long>(g.width) * g.height > 50'000'000) throw InvalidArgument("grid is too large");
  std::set<Cell> blocked(g.obstacles.begin(), g.obstacles.end());
  for (auto c : g.obstacles) {
    if (!in_grid(g, c)) throw InvalidArgument("obstacle " + cell_str(c) + " is outside the grid");
  }
  if (!in_grid(g, g.start)) throw InvalidArgument("start cell is outside the grid");
  if (blocked.count(g.start)) throw InvalidArgument("start cell is blocked");
  std::set<std::string> names;
  for (const auto& [c, name] : g.goals) {
    if (!in_grid(g, c)) throw InvalidArgument("goal " + cell_str(c) + " is outside the grid");
    if (blocked.count(c)) throw InvalidArgument("goal " + cell_str(c) + " is blocked");
    if (!is_identifier(name) || name == "bad") throw InvalidArgument("invalid goal proposition '" + name + "'");
    names.insert(name);
  }
  for (auto c : g.avoid) {
    if (!in_grid(g, c)) throw InvalidArgument("avoid cell " + cell_str(c) + " is outside the grid");
    if (blocked.count(c)) throw InvalidArgument("avoid cell " + cell_str(c) + " is blocked");
  }
}

Mdp gen_gridworld(const GridSpec& g) {
  check_grid_spec(g);
  std::set<Cell> blocked(g.obstacles.begin(), g.obstacles.end());
  std::vector<std::int64_t> id(static_cast<std::size_t>(g.width) * static_cast<std::size_t>(g.height), -1);
  auto idx = [&](Cell c) { return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(g.width) + static_cast<std::size_t>(c.x); };

  Mdp m;
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      if (blocked.count({x, y})) continue;
      id[idx({x, y})] = static_cast<std::int64_t>(m.valuations.size());
      m.valuations.push_back({x, y});
    }
  }
  m.variables = {"x", "y"};
  const std::size_t n = m.valuations.size();

  // Goal propositions in first-mention order, then `bad`.
  std::map<std::string, PropId> prop;
  for (const auto& [c, name] : g.goals) {
    if (prop.emplace(name, static_cast<PropId>(m.ap.size())).second) m.ap.push_back(name);
  }
  const auto bad = static_cast<PropId>(m.ap.size());
  m.ap.emplace_back("bad");
  m.labels.assign(n, {});
  for (const auto& [c, name] : g.goals) m.labels[static_cast<std::size_t>(id[idx(c)])].push_back(prop.at(name));
  for (auto c : g.avoid) m.labels[static_cast<std::size_t>(id[idx(c)])].push_back(bad);
  for (auto& l : m.labels) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
  }
  m.initial = static_cast<StateId>(id[idx(g.start)]);

  m.actions = {"north", "south", "east", "west"};
  const Cell dir[4] = {{0, 1}, {0, -1}, {1, 0}, {-1, 0}};
  const int opposite[4] = {1, 0, 3, 2};
  const int lateral[4][2] = {{2, 3}, {2, 3}, {0, 1}, {0, 1}};
  m.choices.assign(n, {});
  for (StateId s = 0; s < n; ++s) {
    Cell here{static_cast<int>(m.valuations[s][0]), static_cast<int>(m.valuations[s][1])};
    auto dest = [&](int d) {
      Cell c{here.x + dir[d].x, here.y + dir[d].y};
      if (!in_grid(g, c) || blocked.count(c)) return s;
      return static_cast<StateId>(id[idx(c)]);
    };
    for (int a = 0; a < 4; ++a) {
      std::map<StateId, int> hundredths;
      hundredths[dest(a)] += 69;
      hundredths[dest(opposite[a])] += 1;
      hundredths[dest(lateral[a][0])] += 10;
      hundredths[dest(lateral[a][1])] += 10;
      hundredths[s] += 10;
      Choice c{static_cast<ActionId>(a), {}};
      for (const auto& [t, h] : hundredths) c.transitions.push_back({t, h / 100.0});
      m.choices[s].push_back(std::move(c));
    }
  }
  return m;
}

GridSpec make_grid(const GridOptions& o) {
  if (o.width < 1 || o.height < 1) throw InvalidArgument("grid dimensions must be positive");
  if (o.goals < 0 || o.avoid < 0) throw InvalidArgument("goal and avoid counts must be non-negative");
  GridSpec g;
  g.width = o.width;
  g.height = o.height;
  g.start = {0, 0};
  std::mt19937_64 rng(o.seed);

  std::set<Cell> blocked;
  if (o.layout == GridLayout::Random) {
    std::vector<Cell> cells;
    for (int y = 0; y < o.height; ++y) {
      for (int x = 0; x < o.width; ++x) {
        if (Cell{x, y} != g.start) cells.push_back({x, y});
      }
    }
    shuffle(cells, rng);
    std::size_t count = cells.size() / 5;
    blocked.insert(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(count));
  } else if (o.layout == GridLayout::Hallways) {
    for (int y = 2; y < o.height - 1; y += 3) {
      int gap = static_cast<int>(rng() % static_cast<std::uint64_t>(o.width));
      for (int x = 0; x < o.width; ++x) {
        if (x != gap) blocked.insert({x, y});
      }
    }
  }
  g.obstacles.assign(blocked.begin(), blocked.end());

  std::vector<Cell> free;
  for (int y = 0; y < o.height; ++y) {
    for (int x = 0; x < o.width; ++x) {
      Cell c{x, y};
      if (c != g.start && !blocked.count(c)) free.push_back(c);
    }
  }
  if (free.size() < static_cast<std::size_t>(o.goals + o.avoid)) {
    throw InvalidArgument("grid has too few free cells for the requested goals and avoid cells");
  }
  shuffle(free, rng);
  std::size_t k = 0;
  for (int i = 1; i <= o.goals; ++i) g.goals.emplace_back(free[k++], "g" + std::to_string(i));
  for (int i = 0; i < o.avoid; ++i) g.avoid.push_back(free[k++]);
  return g;
}

Formula gen_fn_formula(int n) {
  if (n < 1 || n > 17) throw InvalidArgument("Fn needs 1 <= n <= 17");
  std::vector<Formula> parts;
  for (int i = 1; i <= n; ++i) parts.push_back(Formula::eventually(g(i)));
  return Formula::conj(conj_all(parts), safe());
}

Formula gen_os_formula() {
  using F = Formula;
  Formula seq = F::eventually(F::conj(g(1), F::eventually(F::conj(g(2), F::eventually(g(3))))));
  return F::conj(seq, safe());
}

Formula gen_ol_formula() {
  using F = Formula;
  Formula seq = F::eventually(
      F::conj(g(1), F::eventually(F::conj(g(2), F::eventually(F::conj(g(3), F::eventually(g(4))))))));
  return F::conj(F::conj(seq, F::until(F::negate(g(3)), g(1))), safe());
}

Benchmark gen_nim(const NimSpec& spec) {
  if (spec.heap < 1) throw InvalidArgument("nim heap must be at least 1");
  if (spec.takes < 1 || spec.takes > spec.heap) throw InvalidArgument("nim needs 1 <= takes <= heap");
  for (int h : spec.targets) {
    if (h < 0 || h > spec.heap) throw InvalidArgument("nim target height " + std::to_string(h) + " is out of range");
  }
  for (int h : spec.forbidden) {
    if (h < 0 || h > spec.heap) throw InvalidArgument("nim forbidden height " + std::to_string(h) + " is out of range");
  }
  std::set<int> targets(spec.targets.begin(), spec.targets.end());
  std::set<int> forbidden(spec.forbidden.begin(), spec.forbidden.end());
  std::set<int> marked = targets;
  marked.insert(forbidden.begin(), forbidden.end());

  Mdp m;
  std::map<int, PropId> prop;
  for (int h : marked) {
    prop[h] = static_cast<PropId>(m.ap.size());
    m.ap.push_back("h_" + std::to_string(h));
  }
  const auto done = static_cast<PropId>(m.ap.size());
  m.ap.emplace_back("done");
  for (int i = 1; i <= spec.takes; ++i) m.actions.push_back("take_" + std::to_string(i));
  const auto env = static_cast<ActionId>(m.actions.size());
  m.actions.emplace_back("env");
  const auto idle = static_cast<ActionId>(m.actions.size());
  m.actions.emplace_back("idle");
  m.variables = {"h", "turn"};

  auto sid = [](int h, int turn) { return static_cast<StateId>(2 * h + turn); };
  const std::size_t n = 2 * static_cast<std::size_t>(spec.heap + 1);
  m.labels.assign(n, {});
  m.choices.assign(n, {});
  m.valuations.assign(n, {});
  for (int h = 0; h <= spec.heap; ++h) {
    for (int turn = 0; turn < 2; ++turn) {
      StateId s = sid(h, turn);
      m.valuations[s] = {h, turn};
      if (marked.count(h)) m.labels[s].push_back(prop.at(h));
      if (h == 0) m.labels[s].push_back(done);
      std::sort(m.labels[s].begin(), m.labels[s].end());
      if (h == 0) {
        m.choices[s].push_back(Choice{idle, {{s, 1.0}}});
        continue;
      }
      const int most = std::min(spec.takes, h);
      if (turn == 0) {
        for (int i = 1; i <= most; ++i) {
          m.choices[s].push_back(Choice{static_cast<ActionId>(i - 1), {{sid(h - i, 1), 1.0}}});
        }
      } else {
        Choice c{env, {}};
        for (int i = most; i >= 1; --i) c.transitions.push_back({sid(h - i, 0), 1.0 / most});
        m.choices[s].push_back(std::move(c));
      }
    }
  }
  m.initial = sid(spec.heap, 0);

  std::vector<Formula> reach, avoid;
  for (int h : targets) reach.push_back(Formula::eventually(Formula::atom("h_" + std::to_string(h))));
  for (int h : forbidden) avoid.push_back(Formula::atom("h_" + std::to_string(h)));
  Formula f;
  if (avoid.empty()) {
    f = conj_all(reach);
  } else {
    Formula safety = Formula::globally(Formula::negate(disj_all(avoid)));
    f = reach.empty() ? safety : Formula::conj(conj_all(reach), safety);
  }
  return {std::move(m), f};
}

NimSpec random_nim_spec(int heap, int takes, int n_targets, int n_forbidden, std::uint64_t seed) {
  NimSpec spec{heap, takes, {}, {}};
  std::vector<int> heights;
  for (int h = 1; h < heap; ++h) heights.push_back(h);
  std::mt19937_64 rng(seed);
  shuffle(heights, rng);
  std::size_t k = 0;
  for (int i = 0; i < n_targets && k < heights.size(); ++i) spec.targets.push_back(heights[k++]);
  for (int i = 0; i < n_forbidden && k < heights.size(); ++i) spec.forbidden.push_back(heights[k++]);
  std::sort(spec.targets.begin(), spec.targets.end());
  std::sort(spec.forbidden.begin(), spec.forbidden.end());
  return spec;
}

Benchmark gen_double_counter(const CounterSpec& spec) {
  if (spec.bits < 1 || spec.bits > 8) throw InvalidArgument("counter needs 1 <= bits <= 8");
  if (!(spec.p_env > 0.0 && spec.p_env < 1.0)) throw InvalidArgument("counter needs 0 < p_env < 1");
  const int size = 1 << spec.bits;
  auto [s0, e0] = spec.start.value_or(std::pair<int, int>{0, size / 2});
  if (s0 < 0 || s0 >= size || e0 < 0 || e0 >= size) throw InvalidArgument("counter start is out of range");

  Mdp m;
  m.ap = {"match"};
  m.actions = {"hold", "inc"};
  m.variables = {"sys", "env"};
  auto sid = [&](int sys, int env) { return static_cast<StateId>(sys * size + env); };
  const auto n = static_cast<std::size_t>(size) * static_cast<std::size_t>(size);
  m.labels.assign(n, {});
  m.choices.assign(n, {});
  m.valuations.assign(n, {});
  for (int sys = 0; sys < size; ++sys) {
    for (int env = 0; env < size; ++env) {
      StateId s = sid(sys, env);
      m.valuations[s] = {sys, env};
      if (sys == env) m.labels[s] = {0};
      for (int a = 0; a < 2; ++a) {
        int next_sys = (sys + a) % size;
        StateId stay = sid(next_sys, env);
        StateId step = sid(next_sys, (env + 1) % size);
        Choice c{static_cast<ActionId>(a), {{stay, 1.0 - spec.p_env}, {step, spec.p_env}}};
        std::sort(c.transitions.begin(), c.transitions.end(),
                  [](const Transition& x, const Transition& y) { return x.target < y.target; });
        m.choices[s].push_back(std::move(c));
      }
    }
  }
  m.initial = sid(s0, e0);
  return {std::move(m), Formula::eventually(Formula::atom("match"))};
}

}  // namespace ltlfsynth
