// certbdd — proof-generating BDD engine deciding CNF unsatisfiability.
// Distributed under the MIT license; see LICENSE for the full text.

#ifndef CERTBDD_CNF_HPP
#define CERTBDD_CNF_HPP

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "certbdd/common.hpp"

namespace certbdd {

// A literal is a signed nonzero integer in DIMACS convention: +v is the
// positive literal of variable v, -v the negative one. Variables 1..n are
// the input variables of a formula; extension variables introduced by the
// BDD engine continue the numbering upward.
using Lit = std::int64_t;
using Clause = std::vector<Lit>;

inline Lit var_of(Lit l) { return l < 0 ? -l : l; }
inline bool is_pos(Lit l) { return l > 0; }
inline Lit negate(Lit l) { return -l; }

struct Cnf {
  Lit num_vars = 0;
  std::vector<Clause> clauses;

  std::size_t num_clauses() const { return clauses.size(); }
};

// True iff the clause contains both a literal and its negation.
inline bool clause_tautological(const Clause& c) {
  Clause sorted = c;
  std::sort(sorted.begin(), sorted.end(),
            [](Lit a, Lit b) { return var_of(a) != var_of(b) ? var_of(a) < var_of(b) : a < b; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] == -sorted[i - 1]) return true;
  return false;
}

// Copy of the clause with duplicate literals removed (input order kept).
inline Clause clause_deduped(const Clause& c) {
  Clause out;
  out.reserve(c.size());
  for (Lit l : c)
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  return out;
}

}  // namespace certbdd

#endif  // CERTBDD_CNF_HPP
