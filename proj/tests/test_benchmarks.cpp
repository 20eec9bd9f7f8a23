#include <doctest.h>

#include <cmath>
#include <set>

#include "ltlfsynth/automata.hpp"
#include "ltlfsynth/benchmarks.hpp"
#include "ltlfsynth/errors.hpp"
#include "ltlfsynth/oracle.hpp"
#include "ltlfsynth/parser.hpp"
#include "ltlfsynth/synthesis.hpp"

using namespace ltlfsynth;

namespace {

const Choice& choice(const Mdp& m, StateId s, const char* action) {
  ActionId a = *m.find_action(action);
  for (const Choice& c : m.choices[s]) {
    if (c.action == a) return c;
  }
  throw std::runtime_error("action not enabled");
}

double mass(const Choice& c, StateId t) {
  for (const auto& x : c.transitions) {
    if (x.target == t) return x.probability;
  }
  return 0.0;
}

GridSpec plain(int w, int h) {
  GridSpec g;
  g.width = w;
  g.height = h;
  return g;
}

}  // namespace

TEST_CASE("gridworld kernel: interior cell") {
  Mdp m = gen_gridworld(plain(3, 3));
  // (1,1) is state 4; east (2,1)=5, west (0,1)=3, north (1,2)=7, south (1,0)=1.
  const Choice& e = choice(m, 4, "east");
  CHECK(mass(e, 5) == 0.69);
  CHECK(mass(e, 3) == 0.01);
  CHECK(mass(e, 7) == 0.1);
  CHECK(mass(e, 1) == 0.1);
  CHECK(mass(e, 4) == 0.1);
  CHECK(e.transitions.size() == 5);
}

TEST_CASE("gridworld kernel: boundary redirects to staying put") {
  Mdp m = gen_gridworld(plain(2, 2));
  const Choice& n = choice(m, 0, "north");
  CHECK(mass(n, 2) == 0.69);
  CHECK(mass(n, 1) == 0.1);
  CHECK(std::abs(mass(n, 0) - 0.21) < 1e-15);
  Mdp one = gen_gridworld(plain(1, 1));
  for (const Choice& c : one.choices[0]) CHECK(c.transitions == std::vector<Transition>{{0, 1.0}});
  CHECK(one.choices[0].size() == 4);
}

TEST_CASE("gridworld obstacles, labels and validity") {
  GridSpec g = plain(3, 2);
  g.obstacles = {{1, 0}};
  g.goals = {{{2, 0}, "g1"}, {{0, 1}, "g2"}};
  g.avoid = {{2, 1}};
  Mdp m = gen_gridworld(g);
  CHECK(m.num_states() == 5);
  CHECK(validate(m).empty());
  CHECK(m.ap == std::vector<std::string>{"g1", "g2", "bad"});
  // state 0 is (0,0); east is blocked so 0.69 stays.
  const Choice& e = choice(m, 0, "east");
  CHECK(std::abs(mass(e, 0) - 0.9) < 1e-15);
  CHECK(m.valuations[1] == std::vector<std::int64_t>{2, 0});
  CHECK(m.has_label(1, 0));
  GridSpec bad = plain(2, 2);
  bad.obstacles = {{0, 0}};
  CHECK_THROWS_AS(gen_gridworld(bad), InvalidArgument);
  GridSpec out = plain(2, 2);
  out.goals = {{{5, 5}, "g1"}};
  CHECK_THROWS_AS(gen_gridworld(out), InvalidArgument);
}

TEST_CASE("grid layouts are valid, seeded and deterministic") {
  for (auto layout : {GridLayout::Plain, GridLayout::Random, GridLayout::Hallways}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      GridOptions o;
      o.layout = layout;
      o.seed = seed;
      o.goals = 4;
      GridSpec g = make_grid(o);
      Mdp m = gen_gridworld(g);
      CHECK(validate(m).empty());
      CHECK(gen_gridworld(make_grid(o)) == m);
      if (layout == GridLayout::Random) CHECK(g.obstacles.size() == 99 / 5);
      if (layout == GridLayout::Plain) CHECK(g.obstacles.empty());
      for (StateId s = 0; s < m.num_states(); ++s) {
        for (const Choice& c : m.choices[s]) {
          double sum = 0;
          for (const auto& t : c.transitions) sum += t.probability;
          CHECK(std::abs(sum - 1.0) < 1e-15);
        }
      }
    }
  }
  GridOptions a, b;
  a.layout = b.layout = GridLayout::Random;
  b.seed = 2;
  CHECK(make_grid(a).obstacles != make_grid(b).obstacles);
}

TEST_CASE("formula families") {
  CHECK(gen_fn_formula(1) == parse("F g1 & G !bad"));
  CHECK(propositions(gen_fn_formula(3)) == std::vector<std::string>{"g1", "g2", "g3", "bad"});
  CHECK_THROWS_AS(gen_fn_formula(0), InvalidArgument);
  CHECK_THROWS_AS(gen_fn_formula(18), InvalidArgument);
  CHECK(gen_os_formula() == parse("F (g1 & F (g2 & F g3)) & G !bad"));
  CHECK(gen_ol_formula() == parse("F (g1 & F (g2 & F (g3 & F g4))) & (!g3 U g1) & G !bad"));
  CHECK(compile(gen_os_formula()).num_states() == 5);
  // Frozen after the first compile.
  CHECK(compile(gen_ol_formula()).num_states() == 6);
  CHECK(language_equivalent_upto(compile(gen_ol_formula()), gen_ol_formula(), 4).equivalent);
}

TEST_CASE("nim") {
  Benchmark b = gen_nim(NimSpec{3, 3, {}, {}});
  CHECK(validate(b.mdp).empty());
  // heap=3, takes=3: the system can take all three at once.
  CHECK(b.mdp.find_action("take_3").has_value());
  const StateId start = 2 * 3;
  CHECK(b.mdp.initial == start);

  Benchmark forced = gen_nim(NimSpec{2, 1, {1}, {}});
  CHECK(synthesize(forced.mdp, forced.formula).result.optimal_value == 1.0);

  Benchmark four = gen_nim(NimSpec{4, 2, {2}, {}});
  double vi = synthesize(four.mdp, four.formula).result.optimal_value;
  CHECK(vi == 1.0);
  CHECK(oracle_max_probability(four.mdp, four.formula) == doctest::Approx(1.0).epsilon(1e-12));

  Benchmark avoid = gen_nim(NimSpec{4, 2, {}, {2}});
  CHECK(validate(avoid.mdp).empty());
  double v = synthesize(avoid.mdp, avoid.formula).result.optimal_value;
  CHECK(v == doctest::Approx(oracle_max_probability(avoid.mdp, avoid.formula)).epsilon(1e-6));

  CHECK_THROWS_AS(gen_nim(NimSpec{3, 4, {}, {}}), InvalidArgument);
  CHECK_THROWS_AS(gen_nim(NimSpec{3, 1, {9}, {}}), InvalidArgument);
  NimSpec r = random_nim_spec(200, 3, 2, 1, 5);
  CHECK(r.targets.size() == 2);
  CHECK(r.forbidden.size() == 1);
  Benchmark big = gen_nim(r);
  CHECK(validate(big.mdp).empty());
  CHECK(big.mdp.num_states() == 402);
}

TEST_CASE("double counter") {
  CounterSpec one;
  one.bits = 1;
  Benchmark c1 = gen_double_counter(one);
  CHECK(c1.mdp.num_states() == 4);
  CHECK(validate(c1.mdp).empty());
  CHECK(c1.formula == parse("F match"));
  CHECK(oracle_max_probability(c1.mdp, c1.formula) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(synthesize(c1.mdp, c1.formula).result.optimal_value == 1.0);

  CounterSpec eq;
  eq.start = std::pair{3, 3};
  Benchmark c2 = gen_double_counter(eq);
  CHECK(synthesize(c2.mdp, c2.formula).result.optimal_value == 1.0);

  Benchmark c4 = gen_double_counter(CounterSpec{});
  CHECK(c4.mdp.num_states() == 256);
  CHECK(validate(c4.mdp).empty());

  CounterSpec bad;
  bad.bits = 9;
  CHECK_THROWS_AS(gen_double_counter(bad), InvalidArgument);
  bad.bits = 2;
  bad.p_env = 1.0;
  CHECK_THROWS_AS(gen_double_counter(bad), InvalidArgument);
}
