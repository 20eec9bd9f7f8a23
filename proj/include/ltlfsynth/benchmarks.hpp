#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ltlfsynth/formula.hpp"
#include "ltlfsynth/mdp.hpp"

namespace ltlfsynth {

/// Grid cell; row 0 is the bottom row, so north is y + 1 and east is x + 1.
struct Cell {
  int x = 0;
  int y = 0;
  auto operator<=>(const Cell&) const = default;
};

struct GridSpec {
  int width = 0;
  int height = 0;
  std::vector<std::pair<Cell, std::string>> goals;
  std::vector<Cell> avoid;
  std::vector<Cell> obstacles;
  Cell start;
};

/// Throws InvalidArgument if the spec is inconsistent.
void check_grid_spec(const GridSpec& g);

/// States are the unblocked cells in row-major order (row 0 first). Actions
/// north, south, east, west are enabled everywhere: 0.69 to the intended
/// neighbour, 0.01 to the opposite one, 0.1 to each lateral one and 0.1 to
/// staying put; moves that leave the grid or hit an obstacle stay put instead.
/// Goal cells carry their proposition, avoid cells carry `bad` (always in ap).
Mdp gen_gridworld(const GridSpec& g);

enum class GridLayout { Plain, Random, Hallways };

struct GridOptions {
  int width = 10;
  int height = 10;
  int goals = 3;
  int avoid = 3;
  GridLayout layout = GridLayout::Plain;
  std::uint64_t seed = 1;
};

/// Layout generator. Random: exactly 20% of the non-start cells (rounded down)
/// are blocked, chosen by a seeded shuffle. Hallways: every row with y % 3 == 2
/// (below the top row) is a wall with one seeded gap. Goals g1..gn and avoid
/// cells are then drawn by a seeded shuffle of the remaining free cells; the
/// start is (0, 0).
GridSpec make_grid(const GridOptions& options);

/// (F g1 & ... & F gn) & G !bad
Formula gen_fn_formula(int n);
/// F(g1 & F(g2 & F g3)) & G !bad
Formula gen_os_formula();
/// F(g1 & F(g2 & F(g3 & F g4))) & (!g3 U g1) & G !bad
Formula gen_ol_formula();

struct Benchmark {
  Mdp mdp;
  Formula formula;
};

struct NimSpec {
  int heap = 0;
  int takes = 0;
  std::vector<int> targets;
  std::vector<int> forbidden;
};

/// States (h, turn) for h in 0..heap; id = 2h + turn, turn 0 = system, 1 =
/// environment; the game starts at (heap, system). The system removes 1..min(takes, h)
/// tokens (actions take_i); the environment's single action `env` removes
/// 1..min(takes, h) uniformly at random; h = 0 only has an `idle` self-loop.
/// Heights in targets/forbidden are labelled h_<k> on both turns, height 0 is
/// `done`. Formula: (&_k F h_k) & G !(|_k h_k) over targets and forbidden.
Benchmark gen_nim(const NimSpec& spec);

/// Draws `n_targets` and `n_forbidden` distinct heights from 1..heap-1 (fewer
/// if the heap is too small).
NimSpec random_nim_spec(int heap, int takes, int n_targets, int n_forbidden, std::uint64_t seed);

struct CounterSpec {
  int bits = 4;
  double p_env = 0.5;
  /// (system, environment) start values; default (0, 2^(bits-1)).
  std::optional<std::pair<int, int>> start;
};

/// State (sys, env) with id sys * 2^bits + env. Actions `hold` and `inc` move
/// the system counter by 0 or 1; the environment counter then increments with
/// probability p_env. Both wrap. `match` labels sys == env. Formula: F match.
Benchmark gen_double_counter(const CounterSpec& spec);

}  // namespace ltlfsynth
