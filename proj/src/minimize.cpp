#include <algorithm>
#include <deque>
#include <span>
#include <unordered_map>

#include "ltlfsynth/automata.hpp"
#include "ltlfsynth/errors.hpp"

namespace ltlfsynth {

namespace {

constexpr std::uint64_t kAutoExplicitBudget = std::uint64_t{1} << 22;
constexpr std::uint64_t kForcedExplicitBudget = std::uint64_t{1} << 26;

// Reachable states in BFS order; `local[q]` is the compact index or -1.
struct Reachable {
  std::vector<StateId> states;
  std::vector<std::int64_t> local;
};

Reachable reachable(const Dfa& a) {
  Reachable r;
  r.local.assign(a.num_states(), -1);
  r.local[a.initial()] = 0;
  r.states.push_back(a.initial());
  for (std::size_t i = 0; i < r.states.size(); ++i) {
    for (const auto& [cube, t] : a.edges(r.states[i])) {
      if (r.local[t] < 0) {
        r.local[t] = static_cast<std::int64_t>(r.states.size());
        r.states.push_back(t);
      }
    }
  }
  return r;
}

std::uint64_t explicit_size(std::size_t n, std::size_t k) {
  if (k >= 40) return ~std::uint64_t{0};
  return static_cast<std::uint64_t>(n) << k;
}

// Coarsest partition compatible with acceptance and the transition function,
// by Hopcroft's algorithm over letter classes (letters with identical columns).
std::vector<std::uint32_t> hopcroft(const Dfa& a, const Reachable& r) {
  const std::size_t n = r.states.size();
  const std::size_t k = a.num_props();
  const std::size_t letters = std::size_t{1} << k;

  std::vector<std::uint32_t> column(letters * n);
  for (std::size_t q = 0; q < n; ++q) {
    for (Assignment l = 0; l < letters; ++l) {
      column[l * n + q] = static_cast<std::uint32_t>(r.local[a.successor(r.states[q], l)]);
    }
  }
  struct ColumnHash {
    const std::vector<std::uint32_t>* col;
    std::size_t n;
    std::size_t operator()(std::size_t l) const noexcept {
      std::uint64_t h = 1469598103934665603ULL;
      for (std::size_t q = 0; q < n; ++q) h = (h ^ (*col)[l * n + q]) * 1099511628211ULL;
      return static_cast<std::size_t>(h);
    }
  };
  struct ColumnEq {
    const std::vector<std::uint32_t>* col;
    std::size_t n;
    bool operator()(std::size_t x, std::size_t y) const noexcept {
      return std::equal(col->begin() + static_cast<std::ptrdiff_t>(x * n),
                        col->begin() + static_cast<std::ptrdiff_t>((x + 1) * n),
                        col->begin() + static_cast<std::ptrdiff_t>(y * n));
    }
  };
  std::unordered_map<std::size_t, std::size_t, ColumnHash, ColumnEq> classes(16, ColumnHash{&column, n},
                                                                             ColumnEq{&column, n});
  std::vector<std::size_t> rep;
  for (std::size_t l = 0; l < letters; ++l) {
    if (classes.emplace(l, rep.size()).second) rep.push_back(l);
  }
  const std::size_t nc = rep.size();

  // Inverse transitions per letter class in CSR form.
  std::vector<std::vector<std::uint32_t>> pre_start(nc, std::vector<std::uint32_t>(n + 1, 0));
  std::vector<std::vector<std::uint32_t>> pre(nc, std::vector<std::uint32_t>(n));
  for (std::size_t c = 0; c < nc; ++c) {
    auto& start = pre_start[c];
    const std::uint32_t* col = &column[rep[c] * n];
    for (std::size_t q = 0; q < n; ++q) ++start[col[q] + 1];
    for (std::size_t t = 0; t < n; ++t) start[t + 1] += start[t];
    std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
    for (std::size_t q = 0; q < n; ++q) pre[c][fill[col[q]]++] = static_cast<std::uint32_t>(q);
  }
  column.clear();
  column.shrink_to_fit();

  std::vector<std::uint32_t> elems(n), pos(n), blk(n);
  std::vector<std::uint32_t> first, end, marked;
  {
    std::uint32_t i = 0;
    for (int acc = 0; acc < 2; ++acc) {
      std::uint32_t begin = i;
      for (std::size_t q = 0; q < n; ++q) {
        if (a.is_accepting(r.states[q]) == (acc == 1)) {
          elems[i] = static_cast<std::uint32_t>(q);
          pos[q] = i++;
        }
      }
      if (i > begin) {
        for (std::uint32_t j = begin; j < i; ++j) blk[elems[j]] = static_cast<std::uint32_t>(first.size());
        first.push_back(begin);
        end.push_back(i);
        marked.push_back(0);
      }
    }
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> work;
  std::vector<std::uint8_t> in_work(n * nc, 0);
  auto push = [&](std::uint32_t b, std::uint32_t c) {
    in_work[b * nc + c] = 1;
    work.emplace_back(b, c);
  };
  if (first.size() == 2) {
    std::uint32_t smaller = (end[0] - first[0]) <= (end[1] - first[1]) ? 0 : 1;
    for (std::uint32_t c = 0; c < nc; ++c) push(smaller, c);
  }

  std::vector<std::uint32_t> splitter, touched;
  while (!work.empty()) {
    auto [b, c] = work.back();
    work.pop_back();
    in_work[b * nc + c] = 0;
    splitter.assign(elems.begin() + first[b], elems.begin() + end[b]);
    touched.clear();
    for (auto t : splitter) {
      for (auto i = pre_start[c][t]; i < pre_start[c][t + 1]; ++i) {
        std::uint32_t q = pre[c][i];
        std::uint32_t y = blk[q];
        std::uint32_t boundary = first[y] + marked[y];
        if (pos[q] < boundary) continue;
        std::uint32_t other = elems[boundary];
        std::swap(elems[boundary], elems[pos[q]]);
        pos[other] = pos[q];
        pos[q] = boundary;
        if (marked[y]++ == 0) touched.push_back(y);
      }
    }
    for (auto y : touched) {
      const std::uint32_t m = marked[y];
      marked[y] = 0;
      if (m == end[y] - first[y]) continue;
      auto z = static_cast<std::uint32_t>(first.size());
      first.push_back(first[y]);
      end.push_back(first[y] + m);
      marked.push_back(0);
      first[y] += m;
      for (auto i = first[z]; i < end[z]; ++i) blk[elems[i]] = z;
      for (std::uint32_t d = 0; d < nc; ++d) {
        if (in_work[y * nc + d]) {
          push(z, d);
        } else if (end[z] - first[z] <= end[y] - first[y]) {
          push(z, d);
        } else {
          push(y, d);
        }
      }
    }
  }
  return blk;
}

// Moore-style refinement: a state's signature is its block together with its
// guard tree after replacing every successor by that successor's block.
std::vector<std::uint32_t> signature_refinement(const Dfa& a, const Reachable& r) {
  const std::size_t n = r.states.size();
  std::vector<std::uint32_t> blk(n);
  std::size_t count = 0;
  {
    bool has[2] = {false, false};
    for (std::size_t q = 0; q < n; ++q) has[a.is_accepting(r.states[q])] = true;
    for (std::size_t q = 0; q < n; ++q) {
      bool acc = a.is_accepting(r.states[q]);
      blk[q] = acc && has[0] ? 1 : 0;
    }
    count = static_cast<std::size_t>(has[0]) + static_cast<std::size_t>(has[1]);
  }
  const auto& nodes = a.nodes();
  for (;;) {
    detail::GuardPool pool;
    std::vector<std::int32_t> memo(nodes.size(), 0);
    std::vector<bool> done(nodes.size(), false);
    auto mapped = [&](auto& self, std::int32_t c) -> std::int32_t {
      if (is_leaf(c)) return leaf(blk[static_cast<std::size_t>(r.local[leaf_target(c)])]);
      auto i = static_cast<std::size_t>(c);
      if (done[i]) return memo[i];
      std::int32_t lo = self(self, nodes[i].lo);
      std::int32_t hi = self(self, nodes[i].hi);
      memo[i] = pool.make(nodes[i].var, lo, hi);
      done[i] = true;
      return memo[i];
    };
    std::unordered_map<std::uint64_t, std::uint32_t> sig;
    std::vector<std::uint32_t> next(n);
    for (std::size_t q = 0; q < n; ++q) {
      std::int32_t tree = mapped(mapped, a.roots()[r.states[q]]);
      std::uint64_t key = static_cast<std::uint64_t>(blk[q]) << 32 | static_cast<std::uint32_t>(tree);
      next[q] = sig.emplace(key, static_cast<std::uint32_t>(sig.size())).first->second;
    }
    blk = std::move(next);
    if (sig.size() == count) return blk;
    count = sig.size();
  }
}

// Quotient by `blk`, numbered breadth-first with successors in assignment order.
Dfa quotient(const Dfa& a, const Reachable& r, const std::vector<std::uint32_t>& blk) {
  const std::size_t blocks = *std::max_element(blk.begin(), blk.end()) + 1;
  std::vector<StateId> rep(blocks, 0);
  std::vector<bool> has_rep(blocks, false);
  for (std::size_t q = 0; q < r.states.size(); ++q) {
    if (!has_rep[blk[q]]) {
      has_rep[blk[q]] = true;
      rep[blk[q]] = r.states[q];
    }
  }
  auto block_of = [&](StateId q) { return blk[static_cast<std::size_t>(r.local[q])]; };

  std::vector<std::int64_t> renum(blocks, -1);
  std::vector<std::uint32_t> order;
  auto discover = [&](std::uint32_t b) {
    if (renum[b] < 0) {
      renum[b] = static_cast<std::int64_t>(order.size());
      order.push_back(b);
    }
  };
  discover(block_of(a.initial()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const auto& [cube, t] : a.edges(rep[order[i]])) discover(block_of(t));
  }

  const auto& nodes = a.nodes();
  detail::GuardPool pool;
  std::vector<std::int32_t> memo(nodes.size(), 0);
  std::vector<bool> done(nodes.size(), false);
  auto rebuild = [&](auto& self, std::int32_t c) -> std::int32_t {
    if (is_leaf(c)) return leaf(static_cast<StateId>(renum[block_of(leaf_target(c))]));
    auto i = static_cast<std::size_t>(c);
    if (done[i]) return memo[i];
    std::int32_t lo = self(self, nodes[i].lo);
    std::int32_t hi = self(self, nodes[i].hi);
    memo[i] = pool.make(nodes[i].var, lo, hi);
    done[i] = true;
    return memo[i];
  };
  std::vector<std::int32_t> roots;
  std::vector<bool> accepting;
  for (auto b : order) {
    roots.push_back(rebuild(rebuild, a.roots()[rep[b]]));
    accepting.push_back(a.is_accepting(rep[b]));
  }
  return Dfa(a.props(), 0, std::move(accepting), std::move(roots), pool.release());
}

}  // namespace

Dfa minimize(const Dfa& a, MinimizeMethod method) {
  Reachable r = reachable(a);
  const std::uint64_t size = explicit_size(r.states.size(), a.num_props());
  if (method == MinimizeMethod::Auto) {
    method = size <= kAutoExplicitBudget ? MinimizeMethod::Hopcroft : MinimizeMethod::Signature;
  }
  if (method == MinimizeMethod::Hopcroft) {
    if (size > kForcedExplicitBudget) {
      throw InvalidArgument("explicit Hopcroft minimization needs states * 2^k <= 2^26");
    }
    return quotient(a, r, hopcroft(a, r));
  }
  return quotient(a, r, signature_refinement(a, r));
}

}  // namespace ltlfsynth
