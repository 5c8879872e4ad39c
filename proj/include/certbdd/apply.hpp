// certbdd — proof-generating BDD engine deciding CNF unsatisfiability.
// Distributed under the MIT license; see LICENSE for the full text.
//
// Out-of-class definitions of the Manager's proof-emitting operations.
// Include either this header or bdd.hpp; each pulls in the other.

#ifndef CERTBDD_APPLY_HPP
#define CERTBDD_APPLY_HPP

#include <algorithm>
#include <utility>

#include "certbdd/bdd.hpp"

namespace certbdd {

// ------------------------------------------------------------------------
// RUP antecedent filter. Asserts the negation of every target literal, then
// walks the candidates in order keeping exactly those that are unit (their
// forced literal is assigned) or conflicting under the accumulated
// assignment. Returns true iff a conflict was reached; the kept step ids are
// then a valid strict-RUP hint sequence for the target.
// ------------------------------------------------------------------------
inline bool Manager::filter_rup(const Clause& target,
                                const std::vector<Cand>& cands,
                                std::vector<StepId>& hints_out) {
  hints_out.clear();
  std::vector<std::pair<Lit, bool>> val;  // (variable, value)
  auto lookup = [&val](Lit l) -> int {
    for (const auto& p : val)
      if (p.first == var_of(l)) return p.second == is_pos(l) ? 1 : 0;
    return -1;  // unassigned
  };
  for (Lit l : target) {
    int v = lookup(l);
    CERTBDD_REQUIRE(v != 1, "justification target is tautological");
    if (v == -1) val.emplace_back(var_of(l), !is_pos(l));
  }
  for (const Cand& c : cands) {
    bool satisfied = false;
    int unassigned = 0;
    Lit unit = 0;
    for (Lit l : c.lits) {
      int v = lookup(l);
      if (v == 1) {
        satisfied = true;
        break;
      }
      if (v == -1) {
        ++unassigned;
        unit = l;
        if (unassigned > 1) break;
      }
    }
    if (satisfied || unassigned > 1) continue;  // contributes nothing: skip
    hints_out.push_back(c.id);
    if (unassigned == 1)
      val.emplace_back(var_of(unit), is_pos(unit));
    else
      return true;  // conflict closes the proof
  }
  return false;
}

// ------------------------------------------------------------------------
// Justification strategy shared by conjunction and implication steps.
//
// `high`/`low` are the candidate antecedents from the hi/lo cofactors, in
// canonical order and already stripped of tautologies. When the hi-side
// recursive step is tautological a one-step proof over high++low is
// attempted first (symmetrically for the lo side); otherwise the standard
// two-step proof derives (-x or target) from the high side, then the target
// from that intermediate plus the low side. The intermediate clause is
// deleted immediately after its single use.
// ------------------------------------------------------------------------
inline StepId Manager::justify(const Clause& target, Lit x_ext,
                               std::vector<Cand> high, std::vector<Cand> low,
                               bool high_taut, bool low_taut) {
  std::vector<StepId> hints;
  if (high_taut) {
    std::vector<Cand> cands = high;
    cands.insert(cands.end(), low.begin(), low.end());
    if (filter_rup(target, cands, hints)) return trace_.emit_rup(target, hints);
  }
  if (low_taut) {
    std::vector<Cand> cands = low;
    cands.insert(cands.end(), high.begin(), high.end());
    if (filter_rup(target, cands, hints)) return trace_.emit_rup(target, hints);
  }

  Clause weak;
  weak.reserve(target.size() + 1);
  weak.push_back(-x_ext);
  weak.insert(weak.end(), target.begin(), target.end());
  bool ok = filter_rup(weak, high, hints);
  CERTBDD_REQUIRE(ok, "hi-side justification step did not reach a conflict");
  StepId weak_id = trace_.emit_rup(weak, hints);

  std::vector<Cand> second;
  second.reserve(low.size() + 1);
  second.push_back({weak_id, weak});
  second.insert(second.end(), low.begin(), low.end());
  ok = filter_rup(target, second, hints);
  CERTBDD_REQUIRE(ok, "lo-side justification step did not reach a conflict");
  StepId step = trace_.emit_rup(target, hints);
  trace_.emit_delete({weak_id});  // its only use was the step above
  return step;
}

// ------------------------------------------------------------------------
// Clause -> linear BDD, plus one RUP step proving the unit clause of the
// root extension variable from the node defining clauses and the input
// clause. Antecedents run root-down: HU before LU for a positive literal,
// LU before HU for a negative one (absent ones skipped), input clause last.
// ------------------------------------------------------------------------
inline JustifiedNode Manager::clause_to_bdd(const Clause& clause, StepId input_step) {
  maybe_gc();
  trace_.flush_deferred();
  CERTBDD_REQUIRE(!clause.empty(), "empty clause has no BDD; emit it directly");
  Clause lits = clause_deduped(clause);
  CERTBDD_REQUIRE(!clause_tautological(lits), "tautological clause has no clause BDD");

  std::vector<std::pair<std::int32_t, Lit>> items;
  items.reserve(lits.size());
  for (Lit l : lits) items.emplace_back(level_of_ext(var_of(l)), l);
  std::sort(items.begin(), items.end());

  std::vector<NodeRef> chain(items.size());
  NodeRef cur = LEAF0;
  for (std::size_t i = items.size(); i-- > 0;) {
    auto [lev, l] = items[i];
    cur = is_pos(l) ? get_node(lev, LEAF1, cur) : get_node(lev, cur, LEAF1);
    chain[i] = cur;
  }

  std::vector<StepId> hints;
  for (std::size_t i = 0; i < items.size(); ++i) {
    NodeRef nd = chain[i];
    Def first = is_pos(items[i].second) ? Def::HU : Def::LU;
    Def second = is_pos(items[i].second) ? Def::LU : Def::HU;
    if (StepId s = defining_step(nd, first); s != 0) hints.push_back(s);
    if (StepId s = defining_step(nd, second); s != 0) hints.push_back(s);
  }
  hints.push_back(input_step);
  StepId step = trace_.emit_rup(Clause{ext_of(chain[0])}, hints);
  return {chain[0], step};
}

// ------------------------------------------------------------------------
// Proof-generating conjunction.
// ------------------------------------------------------------------------
inline JustifiedNode Manager::and_apply(NodeRef u, NodeRef v) {
  RefGuard gu(*this, u), gv(*this, v);
  maybe_gc();
  trace_.flush_deferred();
  return and_rec(u, v);
}

inline JustifiedNode Manager::and_rec(NodeRef u, NodeRef v) {
  if (u == v) return {u, 0};
  if (u == LEAF0 || v == LEAF0) return {LEAF0, 0};
  if (u == LEAF1) return {v, 0};
  if (v == LEAF1) return {u, 0};

  std::uint32_t a = std::min(u.idx, v.idx), b = std::max(u.idx, v.idx);
  NodeRef w;
  StepId s;
  if (cache_get(Op::And, a, b, w, s)) return {w, s};

  std::int32_t x = std::min(level_of(u), level_of(v));
  bool split_u = level_of(u) == x, split_v = level_of(v) == x;
  NodeRef u1 = split_u ? hi(u) : u, u0 = split_u ? lo(u) : u;
  NodeRef v1 = split_v ? hi(v) : v, v0 = split_v ? lo(v) : v;

  auto [w1, s1] = and_rec(u1, v1);
  auto [w0, s0] = and_rec(u0, v0);
  w = (w1 == w0) ? w1 : get_node(x, w1, w0);
  ++stats_.and_steps;

  if (w == u || w == v) {
    s = 0;  // contract clause (-u, -v, w) is tautological
  } else {
    Clause target{-ext_of(u), -ext_of(v)};
    if (w != LEAF0) target.push_back(ext_of(w));

    auto add_def = [this](std::vector<Cand>& dst, NodeRef n, Def d) {
      if (StepId id = defining_step(n, d); id != 0)
        dst.push_back({id, defining_clause(n, d)});
    };
    bool w_new = (w1 != w0);
    std::vector<Cand> high, low;
    if (split_u) add_def(high, u, Def::HD);
    if (split_v) add_def(high, v, Def::HD);
    if (w_new) add_def(high, w, Def::HU);
    if (s1 != 0) {
      Clause ch{-ext_of(u1), -ext_of(v1)};
      if (w1 != LEAF0) ch.push_back(ext_of(w1));
      high.push_back({s1, std::move(ch)});
    }
    if (split_u) add_def(low, u, Def::LD);
    if (split_v) add_def(low, v, Def::LD);
    if (w_new) add_def(low, w, Def::LU);
    if (s0 != 0) {
      Clause cl{-ext_of(u0), -ext_of(v0)};
      if (w0 != LEAF0) cl.push_back(ext_of(w0));
      low.push_back({s0, std::move(cl)});
    }
    s = justify(target, ext_at_level(x), std::move(high), std::move(low),
                s1 == 0, s0 == 0);
  }
  cache_put(Op::And, a, b, w, s);
  return {w, s};
}

// ------------------------------------------------------------------------
// Implication check: proves clause (-u, v) or dies trying. Returns the step
// id, or 0 when the clause is tautological under the terminal rules. The
// memo key is NOT symmetric, unlike conjunction.
// ------------------------------------------------------------------------
inline StepId Manager::imply_check(NodeRef u, NodeRef v) {
  RefGuard gu(*this, u), gv(*this, v);
  maybe_gc();
  trace_.flush_deferred();
  return imply_rec(u, v);
}

inline StepId Manager::imply_rec(NodeRef u, NodeRef v) {
  if (u == v || u == LEAF0 || v == LEAF1) return 0;
  CERTBDD_REQUIRE(u != LEAF1, "implication check failed: true operand cannot imply " +
                                  std::to_string(v.idx));
  CERTBDD_REQUIRE(v != LEAF0, "implication check failed: nonzero operand implies false");

  NodeRef dummy;
  StepId s;
  if (cache_get(Op::Imply, u.idx, v.idx, dummy, s)) return s;

  std::int32_t x = std::min(level_of(u), level_of(v));
  bool split_u = level_of(u) == x, split_v = level_of(v) == x;
  NodeRef u1 = split_u ? hi(u) : u, u0 = split_u ? lo(u) : u;
  NodeRef v1 = split_v ? hi(v) : v, v0 = split_v ? lo(v) : v;

  StepId s1 = imply_rec(u1, v1);
  StepId s0 = imply_rec(u0, v0);
  ++stats_.imply_steps;

  Clause target{-ext_of(u), ext_of(v)};
  auto add_def = [this](std::vector<Cand>& dst, NodeRef n, Def d) {
    if (StepId id = defining_step(n, d); id != 0)
      dst.push_back({id, defining_clause(n, d)});
  };
  std::vector<Cand> high, low;
  if (split_u) add_def(high, u, Def::HD);
  if (split_v) add_def(high, v, Def::HU);
  if (s1 != 0) high.push_back({s1, Clause{-ext_of(u1), ext_of(v1)}});
  if (split_u) add_def(low, u, Def::LD);
  if (split_v) add_def(low, v, Def::LU);
  if (s0 != 0) low.push_back({s0, Clause{-ext_of(u0), ext_of(v0)}});

  StepId step = justify(target, ext_at_level(x), std::move(high), std::move(low),
                        s1 == 0, s0 == 0);
  cache_put(Op::Imply, u.idx, v.idx, NodeRef{}, step);
  return step;
}

// ------------------------------------------------------------------------
// Existential quantification over a set of external variables. Emits no
// justification steps itself (node creation still emits defining clauses);
// callers certify the result with imply_check. Quantifier sets are interned
// so the memo key is (node, set id).
// ------------------------------------------------------------------------
inline NodeRef Manager::exists(NodeRef u, const std::vector<Lit>& ext_vars) {
  RefGuard gu(*this, u);
  maybe_gc();
  trace_.flush_deferred();
  std::vector<std::int32_t> levels;
  levels.reserve(ext_vars.size());
  for (Lit v : ext_vars) levels.push_back(level_of_ext(v));
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (levels.empty()) return u;
  return exists_rec(u, intern_qset(std::move(levels)));
}

inline std::uint32_t Manager::intern_qset(std::vector<std::int32_t> levels) {
  auto it = qset_ids_.find(levels);
  if (it != qset_ids_.end()) return it->second;
  auto id = static_cast<std::uint32_t>(qsets_.size());
  qset_ids_.emplace(levels, id);
  qsets_.push_back(std::move(levels));
  return id;
}

inline NodeRef Manager::exists_rec(NodeRef u, std::uint32_t setid) {
  if (is_leaf(u)) return u;
  const std::vector<std::int32_t>& levels = qsets_[setid];
  if (level_of(u) > levels.back()) return u;  // wholly below the set

  NodeRef w;
  StepId s;
  if (cache_get(Op::Exists, u.idx, setid, w, s)) return w;

  NodeRef w1 = exists_rec(hi(u), setid);
  NodeRef w0 = exists_rec(lo(u), setid);
  if (std::binary_search(levels.begin(), levels.end(), level_of(u)))
    w = or_rec(w1, w0);
  else
    w = (w1 == w0) ? w1 : get_node(level_of(u), w1, w0);
  cache_put(Op::Exists, u.idx, setid, w, 0);
  return w;
}

inline NodeRef Manager::or_node(NodeRef u, NodeRef v) {
  RefGuard gu(*this, u), gv(*this, v);
  maybe_gc();
  trace_.flush_deferred();
  return or_rec(u, v);
}

inline NodeRef Manager::or_rec(NodeRef u, NodeRef v) {
  if (u == v) return u;
  if (u == LEAF1 || v == LEAF1) return LEAF1;
  if (u == LEAF0) return v;
  if (v == LEAF0) return u;

  std::uint32_t a = std::min(u.idx, v.idx), b = std::max(u.idx, v.idx);
  NodeRef w;
  StepId s;
  if (cache_get(Op::Or, a, b, w, s)) return w;

  std::int32_t x = std::min(level_of(u), level_of(v));
  bool split_u = level_of(u) == x, split_v = level_of(v) == x;
  NodeRef w1 = or_rec(split_u ? hi(u) : u, split_v ? hi(v) : v);
  NodeRef w0 = or_rec(split_u ? lo(u) : u, split_v ? lo(v) : v);
  w = (w1 == w0) ? w1 : get_node(x, w1, w0);
  cache_put(Op::Or, a, b, w, 0);
  return w;
}

}  // namespace certbdd

#endif  // CERTBDD_APPLY_HPP
