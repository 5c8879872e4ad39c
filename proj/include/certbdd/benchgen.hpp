// certbdd — proof-generating BDD engine deciding CNF unsatisfiability.
// Distributed under the MIT license; see LICENSE for the full text.
//
// Benchmark generators. Each family returns a BenchBundle holding the CNF,
// an optional variable ordering, and an optional evaluation schedule.
// Generation is deterministic: randomized families consume raw
// std::mt19937_64 outputs through our own bounded draws, so identical seeds
// give identical instances on every platform.

#ifndef CERTBDD_BENCHGEN_HPP
#define CERTBDD_BENCHGEN_HPP

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "certbdd/cnf.hpp"
#include "certbdd/common.hpp"
#include "certbdd/schedule.hpp"

namespace certbdd {

struct BenchBundle {
  Cnf cnf;
  std::vector<Lit> order;                  // level -> variable; empty = none
  Schedule schedule;                       // empty = none
  std::vector<std::string> comments;       // recorded generator parameters
};

namespace detail {

inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;  // bias is irrelevant here; determinism is what matters
}

// In-place Fisher–Yates; not std::shuffle, whose draws differ across
// standard libraries.
template <class T>
void deterministic_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[static_cast<std::size_t>(bounded_draw(rng, i))]);
}

// Appends the 4 CNF clauses of z = u XOR v (u, v may be negative literals).
inline void xor_link(Cnf& cnf, Lit u, Lit v, Lit z) {
  cnf.clauses.push_back({-u, -v, -z});
  cnf.clauses.push_back({u, v, -z});
  cnf.clauses.push_back({-u, v, z});
  cnf.clauses.push_back({u, -v, z});
}

// Appends the 2^(d-1) clauses of (e_1 XOR ... XOR e_d) = parity over the
// edge variables of one graph vertex: one clause per falsifying assignment.
inline void xor_constraint(Cnf& cnf, const std::vector<Lit>& vars, bool parity) {
  std::size_t d = vars.size();
  for (std::uint32_t bits = 0; bits < (1u << d); ++bits) {
    bool x = false;
    for (std::size_t i = 0; i < d; ++i)
      if (bits & (1u << i)) x = !x;
    if (x == parity) continue;  // satisfying pattern: nothing to forbid
    Clause c;
    c.reserve(d);
    for (std::size_t i = 0; i < d; ++i)
      c.push_back(bits & (1u << i) ? -vars[i] : vars[i]);
    cnf.clauses.push_back(std::move(c));
  }
}

}  // namespace detail

// --------------------------------------------------------------------------
// Parity: two XOR chains computing the parity of the same n inputs, one
// left-to-right, the other over a seeded random permutation with its first
// input flipped; the chain outputs are both asserted true, so one chain
// claims parity 1 and the other parity 0. 3n-2 variables (n inputs plus
// n-1 chain auxiliaries each), 8(n-1) + 2 clauses. Always unsatisfiable.
// --------------------------------------------------------------------------
inline BenchBundle gen_parity(Lit n, std::uint64_t seed) {
  if (n < 2) throw ParseError("parity needs n >= 2");
  BenchBundle b;
  b.cnf.num_vars = 3 * n - 2;
  Lit aux_a = n;      // chain A auxiliaries: n+1 .. 2n-1
  Lit aux_b = 2 * n - 1;  // chain B auxiliaries: 2n .. 3n-2

  std::vector<Lit> pi(static_cast<std::size_t>(n));
  for (Lit i = 0; i < n; ++i) pi[static_cast<std::size_t>(i)] = i + 1;
  std::mt19937_64 rng(seed);
  detail::deterministic_shuffle(pi, rng);

  Lit prev = 1;
  for (Lit i = 2; i <= n; ++i) {
    Lit z = aux_a + i - 1;
    detail::xor_link(b.cnf, prev, i, z);
    prev = z;
  }
  Lit out_a = prev;

  prev = -pi[0];  // the flip: chain B computes 1 XOR parity(x)
  for (Lit i = 2; i <= n; ++i) {
    Lit z = aux_b + i - 1;
    detail::xor_link(b.cnf, prev, pi[static_cast<std::size_t>(i - 1)], z);
    prev = z;
  }
  Lit out_b = prev;

  b.cnf.clauses.push_back({out_a});
  b.cnf.clauses.push_back({out_b});
  b.comments.push_back("parity n=" + std::to_string(n) +
                       " seed=" + std::to_string(seed));
  return b;
}

// --------------------------------------------------------------------------
// Mutilated chessboard: an n x n board with the (1,1) and (n,n) corners
// removed must be exactly covered by dominoes. Variables are edge
// indicators — x(i,j) joins square (i,j) to (i,j+1), y(i,j) joins (i,j) to
// (i+1,j) — numbered row-wise with x and y interleaved, omitting the four
// edges into the removed corners. Every remaining square gets one
// at-least-one clause plus pairwise at-most-one clauses; clauses are grouped
// by column to match the generated column-scan schedule: push a column,
// conjoin with the carried state, then quantify that column's y variables
// and the previous column's x variables.
// --------------------------------------------------------------------------
inline BenchBundle gen_chess(Lit n) {
  if (n < 4 || n % 2 != 0) throw ParseError("chess needs even n >= 4");
  BenchBundle b;
  std::map<std::pair<Lit, Lit>, Lit> xv, yv;  // (i,j) -> variable id
  Lit next = 0;
  auto x_valid = [n](Lit i, Lit j) {
    return j >= 1 && j <= n - 1 && i >= 1 && i <= n &&
           !(i == 1 && j == 1) && !(i == n && j == n - 1);
  };
  auto y_valid = [n](Lit i, Lit j) {
    return i >= 1 && i <= n - 1 && j >= 1 && j <= n &&
           !(i == 1 && j == 1) && !(i == n - 1 && j == n);
  };
  for (Lit i = 1; i <= n; ++i)
    for (Lit j = 1; j <= n; ++j) {
      if (x_valid(i, j)) xv[{i, j}] = ++next;
      if (y_valid(i, j)) yv[{i, j}] = ++next;
    }
  b.cnf.num_vars = next;

  auto removed = [n](Lit i, Lit j) {
    return (i == 1 && j == 1) || (i == n && j == n);
  };
  std::vector<std::pair<Lit, Lit>> col_range;  // [first, last] clause ids
  for (Lit j = 1; j <= n; ++j) {
    Lit first = b.cnf.num_clauses() + 1;
    for (Lit i = 1; i <= n; ++i) {
      if (removed(i, j)) continue;
      std::vector<Lit> edges;
      if (x_valid(i, j - 1)) edges.push_back(xv[{i, j - 1}]);
      if (x_valid(i, j)) edges.push_back(xv[{i, j}]);
      if (y_valid(i - 1, j)) edges.push_back(yv[{i - 1, j}]);
      if (y_valid(i, j)) edges.push_back(yv[{i, j}]);
      b.cnf.clauses.push_back(Clause(edges.begin(), edges.end()));
      for (std::size_t p = 0; p < edges.size(); ++p)
        for (std::size_t q = p + 1; q < edges.size(); ++q)
          b.cnf.clauses.push_back({-edges[p], -edges[q]});
    }
    col_range.emplace_back(first, b.cnf.num_clauses());
  }

  for (Lit j = 1; j <= n; ++j) {
    auto [first, last] = col_range[static_cast<std::size_t>(j - 1)];
    ScheduleCmd push{ScheduleCmd::Kind::Push, {}, 0};
    for (Lit id = first; id <= last; ++id) push.args.push_back(id);
    Lit k = last - first + 1;
    b.schedule.push_back(std::move(push));
    b.schedule.push_back(
        {ScheduleCmd::Kind::Conjoin, {j == 1 ? k : k + 1}, 0});
    ScheduleCmd qy{ScheduleCmd::Kind::Quantify, {}, 0};
    for (Lit i = 1; i <= n - 1; ++i)
      if (y_valid(i, j)) qy.args.push_back(yv[{i, j}]);
    if (!qy.args.empty()) b.schedule.push_back(std::move(qy));
    if (j >= 2) {
      ScheduleCmd qx{ScheduleCmd::Kind::Quantify, {}, 0};
      for (Lit i = 1; i <= n; ++i)
        if (x_valid(i, j - 1)) qx.args.push_back(xv[{i, j - 1}]);
      if (!qx.args.empty()) b.schedule.push_back(std::move(qx));
    }
  }
  b.comments.push_back("chess n=" + std::to_string(n));
  return b;
}

// --------------------------------------------------------------------------
// Pigeonhole, Sinz signal-chain encoding: n+1 pigeons into n holes. p(i,j)
// puts pigeon j into hole i; s(i,j) signals that some pigeon <= j occupies
// hole i. Per pigeon one at-least-one clause; per hole the 3n-1
// Generate/Propagate/Suppress clauses. Variables interleave p and s first by
// hole, then by pigeon; clauses are grouped by pigeon for the column-scan
// schedule, which quantifies P_j then S_(j-1) after absorbing pigeon j.
// --------------------------------------------------------------------------
inline BenchBundle gen_pigeon_sinz(Lit n) {
  if (n < 2) throw ParseError("pigeon-sinz needs n >= 2");
  BenchBundle b;
  auto p = [n](Lit i, Lit j) { return (i - 1) * (2 * n + 1) + 2 * j - 1; };
  auto s = [n](Lit i, Lit j) { return (i - 1) * (2 * n + 1) + 2 * j; };
  b.cnf.num_vars = n * (2 * n + 1);

  std::vector<std::pair<Lit, Lit>> group_range;
  for (Lit j = 1; j <= n + 1; ++j) {
    Lit first = b.cnf.num_clauses() + 1;
    Clause alo;
    for (Lit i = 1; i <= n; ++i) alo.push_back(p(i, j));
    b.cnf.clauses.push_back(std::move(alo));
    for (Lit i = 1; i <= n; ++i) {
      if (j <= n) b.cnf.clauses.push_back({-p(i, j), s(i, j)});          // generate
      if (j >= 2 && j <= n)
        b.cnf.clauses.push_back({-s(i, j - 1), s(i, j)});                // propagate
      if (j >= 2) b.cnf.clauses.push_back({-p(i, j), -s(i, j - 1)});     // suppress
    }
    group_range.emplace_back(first, b.cnf.num_clauses());
  }

  for (Lit j = 1; j <= n + 1; ++j) {
    auto [first, last] = group_range[static_cast<std::size_t>(j - 1)];
    ScheduleCmd push{ScheduleCmd::Kind::Push, {}, 0};
    for (Lit id = first; id <= last; ++id) push.args.push_back(id);
    Lit k = last - first + 1;
    b.schedule.push_back(std::move(push));
    b.schedule.push_back(
        {ScheduleCmd::Kind::Conjoin, {j == 1 ? k : k + 1}, 0});
    if (j <= n + 1) {
      ScheduleCmd qp{ScheduleCmd::Kind::Quantify, {}, 0};
      for (Lit i = 1; i <= n; ++i) qp.args.push_back(p(i, j));
      b.schedule.push_back(std::move(qp));
    }
    if (j >= 2) {
      ScheduleCmd qs{ScheduleCmd::Kind::Quantify, {}, 0};
      for (Lit i = 1; i <= n; ++i) qs.args.push_back(s(i, j - 1));
      b.schedule.push_back(std::move(qs));
    }
  }
  b.comments.push_back("pigeon-sinz n=" + std::to_string(n));
  return b;
}

// --------------------------------------------------------------------------
// Pigeonhole, direct encoding: per pigeon one at-least-one clause, per hole
// pairwise at-most-one clauses. Ships without a schedule — no known
// evaluation plan scales on this encoding, which is exactly what makes it
// useful as a negative control next to the Sinz encoding.
// --------------------------------------------------------------------------
inline BenchBundle gen_pigeon_direct(Lit n) {
  if (n < 1) throw ParseError("pigeon-direct needs n >= 1");
  BenchBundle b;
  auto p = [n](Lit i, Lit j) { return (i - 1) * (n + 1) + j; };
  b.cnf.num_vars = n * (n + 1);
  for (Lit j = 1; j <= n + 1; ++j) {
    Clause alo;
    for (Lit i = 1; i <= n; ++i) alo.push_back(p(i, j));
    b.cnf.clauses.push_back(std::move(alo));
  }
  for (Lit i = 1; i <= n; ++i)
    for (Lit j = 1; j <= n + 1; ++j)
      for (Lit k = j + 1; k <= n + 1; ++k)
        b.cnf.clauses.push_back({-p(i, j), -p(i, k)});
  b.comments.push_back("pigeon-direct n=" + std::to_string(n));
  return b;
}

// --------------------------------------------------------------------------
// Urquhart parity formulas over bipartite degree-<=5 graphs on
// |L| = |R| = m^2 vertices. One variable per edge; each vertex contributes
// the direct CNF expansion of (XOR of incident edges) = polarity, with
// exactly one vertex (the first left vertex) given polarity 1. The polarity
// sum is odd while every edge is counted twice, so every instance is
// unsatisfiable. The Li variant uses the explicit Margulis expander over
// Z_m x Z_m; the Simon variant takes the union of five seeded random
// perfect matchings. Parallel edges are collapsed.
// --------------------------------------------------------------------------
namespace detail {

struct BipartiteGraph {
  Lit m2 = 0;                                   // vertices per side
  std::map<std::pair<Lit, Lit>, Lit> edge_var;  // (left, right) -> variable
  std::vector<std::vector<Lit>> left_inc, right_inc;
};

inline void add_edge(BipartiteGraph& g, Lit l, Lit r) {
  auto [it, inserted] = g.edge_var.emplace(std::pair{l, r}, 0);
  if (!inserted) return;  // parallel edge: collapsed
  it->second = static_cast<Lit>(g.edge_var.size());
  g.left_inc[static_cast<std::size_t>(l)].push_back(it->second);
  g.right_inc[static_cast<std::size_t>(r)].push_back(it->second);
}

inline BenchBundle graph_to_bundle(const BipartiteGraph& g, std::string params) {
  BenchBundle b;
  b.cnf.num_vars = static_cast<Lit>(g.edge_var.size());
  for (Lit v = 0; v < g.m2; ++v)
    xor_constraint(b.cnf, g.left_inc[static_cast<std::size_t>(v)], v == 0);
  for (Lit v = 0; v < g.m2; ++v)
    xor_constraint(b.cnf, g.right_inc[static_cast<std::size_t>(v)], false);
  b.comments.push_back(std::move(params));
  return b;
}

}  // namespace detail

inline BenchBundle gen_urquhart_li(Lit m) {
  if (m < 3) throw ParseError("urquhart-li needs m >= 3");
  detail::BipartiteGraph g;
  g.m2 = m * m;
  g.left_inc.resize(static_cast<std::size_t>(g.m2));
  g.right_inc.resize(static_cast<std::size_t>(g.m2));
  auto vid = [m](Lit a, Lit b) { return a * m + b; };
  for (Lit a = 0; a < m; ++a)
    for (Lit b = 0; b < m; ++b) {
      Lit l = vid(a, b);
      detail::add_edge(g, l, vid(a, b));
      detail::add_edge(g, l, vid((a + b) % m, b));
      detail::add_edge(g, l, vid((a + b + 1) % m, b));
      detail::add_edge(g, l, vid(a, (a + b) % m));
      detail::add_edge(g, l, vid(a, (a + b + 1) % m));
    }
  return detail::graph_to_bundle(g, "urquhart-li m=" + std::to_string(m));
}

inline BenchBundle gen_urquhart_simon(Lit m, std::uint64_t seed) {
  if (m < 3) throw ParseError("urquhart-simon needs m >= 3");
  detail::BipartiteGraph g;
  g.m2 = m * m;
  g.left_inc.resize(static_cast<std::size_t>(g.m2));
  g.right_inc.resize(static_cast<std::size_t>(g.m2));
  std::mt19937_64 rng(seed);
  std::vector<Lit> perm(static_cast<std::size_t>(g.m2));
  for (int round = 0; round < 5; ++round) {
    for (Lit v = 0; v < g.m2; ++v) perm[static_cast<std::size_t>(v)] = v;
    detail::deterministic_shuffle(perm, rng);
    for (Lit v = 0; v < g.m2; ++v)
      detail::add_edge(g, v, perm[static_cast<std::size_t>(v)]);
  }
  return detail::graph_to_bundle(
      g, "urquhart-simon m=" + std::to_string(m) + " seed=" + std::to_string(seed));
}

}  // namespace certbdd

#endif  // CERTBDD_BENCHGEN_HPP
