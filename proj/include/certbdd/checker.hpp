// certbdd — proof-generating BDD engine deciding CNF unsatisfiability.
// Distributed under the MIT license; see LICENSE for the full text.
//
// Independent streaming LRAT checker. Shares no state with the solver: it
// reads the original CNF plus a proof stream and verifies every addition
// before admitting it to the live clause set.
//
// Addition lines are verified three ways:
//   - hints present, all positive      -> strict RUP (each hint unit, the
//                                         last one conflicting)
//   - hints present, negatives among   -> RAT on the first literal: a RUP
//     them                                prefix, then one hint group per
//                                         live clause containing the negated
//                                         pivot (compat dialect)
//   - no hints                         -> blocked-clause check on the first
//                                         literal: every live clause with
//                                         the negated pivot must resolve to
//                                         a tautology (extension additions
//                                         in the default dialect)
// Deletion lines must name live clauses. The checker accepts as soon as a
// verified empty clause is added.

#ifndef CERTBDD_CHECKER_HPP
#define CERTBDD_CHECKER_HPP

#include <algorithm>
#include <cstdint>
#include <istream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "certbdd/cnf.hpp"
#include "certbdd/common.hpp"
#include "certbdd/lrat.hpp"

namespace certbdd {

enum class RejectReason {
  None,
  ParseError,    // malformed proof text
  BadId,         // addition id not strictly increasing
  BadHint,       // dead/unknown hint, or hint neither unit nor conflicting
  NoConflict,    // hint sequence (or empty-clause addition) closes no conflict
  NotBlocked,    // hintless addition is not a blocked clause
  DeadDelete,    // deletion of a clause that is not live
  NoEmptyClause  // proof ended without adding the empty clause
};

inline const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::None: return "none";
    case RejectReason::ParseError: return "parse-error";
    case RejectReason::BadId: return "bad-id";
    case RejectReason::BadHint: return "bad-hint";
    case RejectReason::NoConflict: return "no-conflict";
    case RejectReason::NotBlocked: return "not-blocked";
    case RejectReason::DeadDelete: return "dead-delete";
    case RejectReason::NoEmptyClause: return "no-empty-clause";
  }
  return "unknown";
}

struct CheckResult {
  bool accepted = false;
  RejectReason reason = RejectReason::None;
  std::string detail;           // human-readable diagnostic
  std::uint64_t additions = 0;  // verified proof additions (inputs excluded)
  std::uint64_t max_live = 0;   // peak live clauses, input clauses included
  std::uint64_t live_end = 0;
  StepId empty_step = 0;
};

class LratChecker {
 public:
  explicit LratChecker(const Cnf& cnf) {
    ensure_var(cnf.num_vars);
    for (Lit id = 1; id <= cnf.num_clauses(); ++id)
      add_clause(id, cnf.clauses[static_cast<std::size_t>(id - 1)]);
    last_id_ = cnf.num_clauses();
    live_ = static_cast<std::uint64_t>(cnf.num_clauses());
    max_live_ = live_;
  }

  CheckResult run(std::istream& proof) {
    LratReader reader(proof);
    LratStep step;
    while (true) {
      try {
        if (!reader.next(step)) break;
      } catch (const ParseError& e) {
        return reject(RejectReason::ParseError, e.what());
      }
      if (step.is_delete) {
        for (StepId id : step.deleted) {
          if (clauses_.erase(id) == 0)
            return reject(RejectReason::DeadDelete,
                          "deletion of dead clause " + std::to_string(id));
          --live_;
        }
        continue;
      }
      if (step.id <= last_id_)
        return reject(RejectReason::BadId,
                      "addition id " + std::to_string(step.id) +
                          " not above previous id " + std::to_string(last_id_));
      if (!verify(step)) return reject(reason_, detail_);
      last_id_ = step.id;
      ++additions_;
      add_clause(step.id, step.lits);
      ++live_;
      max_live_ = std::max(max_live_, live_);
      if (step.lits.empty()) {
        CheckResult r = stats_result();
        r.accepted = true;
        r.empty_step = step.id;
        return r;
      }
    }
    return reject(RejectReason::NoEmptyClause,
                  "proof ended without an empty clause");
  }

 private:
  // ------------------------------------------------------------ clause db --
  void add_clause(StepId id, const Clause& lits) {
    clauses_.emplace(id, lits);
    for (Lit l : lits) {
      ensure_var(var_of(l));
      occurs_[l].push_back(id);
    }
  }

  void ensure_var(Lit v) {
    if (static_cast<std::size_t>(v) >= val_.size())
      val_.resize(static_cast<std::size_t>(v) + 1, 0);
  }

  // Live clause ids containing `l`, compacting the lazy index in passing.
  std::vector<StepId> live_with(Lit l) {
    auto it = occurs_.find(l);
    if (it == occurs_.end()) return {};
    std::vector<StepId>& idx = it->second;
    std::vector<StepId> out;
    out.reserve(idx.size());
    for (StepId id : idx)
      if (clauses_.count(id)) out.push_back(id);
    idx = out;
    return out;
  }

  // --------------------------------------------------------- assignment ---
  int value(Lit l) const {
    int v = val_[static_cast<std::size_t>(var_of(l))];
    return is_pos(l) ? v : -v;
  }

  // Makes `l` false. Returns false on contradiction (l already true).
  bool assert_false(Lit l) {
    ensure_var(var_of(l));
    int v = value(l);
    if (v > 0) return false;
    if (v == 0) {
      val_[static_cast<std::size_t>(var_of(l))] = is_pos(l) ? -1 : 1;
      trail_.push_back(var_of(l));
    }
    return true;
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      val_[static_cast<std::size_t>(trail_.back())] = 0;
      trail_.pop_back();
    }
  }

  // Processes one positive hint under the current assignment. Returns
  // +1 conflict, 0 unit consumed, -1 error (reason_/detail_ set).
  int consume_hint(StepId hid, StepId step_id) {
    auto it = clauses_.find(hid);
    if (it == clauses_.end()) {
      fail(RejectReason::BadHint, step_id,
           "hint " + std::to_string(hid) + " is not a live clause");
      return -1;
    }
    int unassigned = 0;
    Lit unit = 0;
    for (Lit l : it->second) {
      int v = value(l);
      if (v > 0) {
        fail(RejectReason::BadHint, step_id,
             "hint " + std::to_string(hid) + " is satisfied");
        return -1;
      }
      if (v == 0) {
        ++unassigned;
        unit = l;
        if (unassigned > 1) break;
      }
    }
    if (unassigned == 0) return 1;
    if (unassigned > 1) {
      fail(RejectReason::BadHint, step_id,
           "hint " + std::to_string(hid) + " is neither unit nor conflicting");
      return -1;
    }
    val_[static_cast<std::size_t>(var_of(unit))] = is_pos(unit) ? 1 : -1;
    trail_.push_back(var_of(unit));
    return 0;
  }

  // ---------------------------------------------------------- verifiers ---
  bool verify(const LratStep& step) {
    bool has_negative = false;
    for (StepId h : step.hints)
      if (h < 0) {
        has_negative = true;
        break;
      }
    if (step.hints.empty()) return blocked_verify(step);
    if (has_negative) return rat_verify(step);
    return rup_verify(step);
  }

  // Strict RUP: negate the clause, then every hint must be unit except the
  // last, which must conflict.
  bool rup_verify(const LratStep& step) {
    std::size_t mark = trail_.size();
    for (Lit l : step.lits)
      if (!assert_false(l)) {
        undo_to(mark);  // tautological addition: vacuously valid
        return true;
      }
    bool ok = run_rup(step.hints, 0, step.hints.size(), step.id);
    undo_to(mark);
    return ok;
  }

  // Runs hints [from, to) as strict RUP under the current assignment.
  bool run_rup(const std::vector<StepId>& hints, std::size_t from,
               std::size_t to, StepId step_id) {
    for (std::size_t i = from; i < to; ++i) {
      int r = consume_hint(hints[i], step_id);
      if (r < 0) return false;
      if (r > 0) {
        if (i + 1 != to) {
          fail(RejectReason::BadHint, step_id, "hints continue past a conflict");
          return false;
        }
        return true;
      }
    }
    fail(RejectReason::NoConflict, step_id, "hint sequence closes no conflict");
    return false;
  }

  // Blocked-clause check (hintless addition): on pivot = first literal,
  // every live clause containing the negated pivot must resolve with this
  // clause to a tautology.
  bool blocked_verify(const LratStep& step) {
    if (step.lits.empty()) {
      fail(RejectReason::NoConflict, step.id, "empty clause added without hints");
      return false;
    }
    std::size_t mark = trail_.size();
    for (Lit l : step.lits)
      if (!assert_false(l)) {
        undo_to(mark);
        return true;  // tautological addition
      }
    undo_to(mark);

    Lit pivot = step.lits[0];
    for (StepId cid : live_with(-pivot)) {
      if (!resolvent_tautological(step.lits, clauses_.at(cid), pivot)) {
        fail(RejectReason::NotBlocked, step.id,
             "resolvent with clause " + std::to_string(cid) +
                 " on pivot " + std::to_string(pivot) + " is not tautological");
        return false;
      }
    }
    return true;
  }

  bool resolvent_tautological(const Clause& added, const Clause& other,
                              Lit pivot) const {
    for (Lit a : added) {
      if (a == pivot) continue;
      for (Lit b : other)
        if (b == -a) return true;
    }
    return false;
  }

  // Compatibility RAT line: positive prefix as RUP; then one group per live
  // clause containing the negated pivot, opened by the negative id of that
  // clause and followed by the positive hints proving the resolvent (none
  // needed when the resolvent is tautological).
  bool rat_verify(const LratStep& step) {
    if (step.lits.empty()) {
      fail(RejectReason::BadHint, step.id, "RAT line with an empty clause");
      return false;
    }
    Lit pivot = step.lits[0];
    std::size_t mark = trail_.size();
    for (Lit l : step.lits)
      if (!assert_false(l)) {
        undo_to(mark);
        return true;  // tautological addition
      }

    std::size_t i = 0;
    const std::vector<StepId>& hints = step.hints;
    while (i < hints.size() && hints[i] > 0) {
      int r = consume_hint(hints[i], step.id);
      if (r < 0) {
        undo_to(mark);
        return false;
      }
      if (r > 0) {
        undo_to(mark);  // the prefix alone already proves the clause
        return true;
      }
      ++i;
    }

    std::vector<StepId> pending = live_with(-pivot);
    std::size_t prefix_mark = trail_.size();
    while (i < hints.size()) {
      StepId d = -hints[i];
      ++i;
      auto it = clauses_.find(d);
      if (it == clauses_.end()) {
        fail(RejectReason::BadHint, step.id,
             "negative hint names dead clause " + std::to_string(d));
        undo_to(mark);
        return false;
      }
      const Clause& other = it->second;
      if (std::find(other.begin(), other.end(), -pivot) == other.end()) {
        fail(RejectReason::BadHint, step.id,
             "negative hint " + std::to_string(d) +
                 " does not contain the negated pivot");
        undo_to(mark);
        return false;
      }
      pending.erase(std::remove(pending.begin(), pending.end(), d), pending.end());

      bool contradiction = false;
      for (Lit l : other) {
        if (l == -pivot) continue;
        if (!assert_false(l)) {
          contradiction = true;  // tautological resolvent
          break;
        }
      }
      std::size_t group_end = i;
      while (group_end < hints.size() && hints[group_end] > 0) ++group_end;
      if (!contradiction) {
        if (!run_rup(hints, i, group_end, step.id)) {
          undo_to(mark);
          return false;
        }
      }
      i = group_end;
      undo_to(prefix_mark);
    }
    undo_to(mark);
    if (!pending.empty()) {
      fail(RejectReason::NotBlocked, step.id,
           "live clause " + std::to_string(pending.front()) +
               " with the negated pivot is not covered by negative hints");
      return false;
    }
    return true;
  }

  // ------------------------------------------------------------- results --
  void fail(RejectReason r, StepId step_id, const std::string& what) {
    reason_ = r;
    detail_ = "step " + std::to_string(step_id) + ": " + what;
  }

  CheckResult reject(RejectReason r, std::string detail) {
    CheckResult res = stats_result();
    res.accepted = false;
    res.reason = r;
    res.detail = std::move(detail);
    return res;
  }

  CheckResult stats_result() const {
    CheckResult r;
    r.additions = additions_;
    r.max_live = max_live_;
    r.live_end = live_;
    return r;
  }

  std::unordered_map<StepId, Clause> clauses_;
  std::unordered_map<Lit, std::vector<StepId>> occurs_;
  std::vector<signed char> val_;
  std::vector<Lit> trail_;
  StepId last_id_ = 0;
  std::uint64_t live_ = 0;
  std::uint64_t max_live_ = 0;
  std::uint64_t additions_ = 0;
  RejectReason reason_ = RejectReason::None;
  std::string detail_;
};

inline CheckResult check_lrat(const Cnf& cnf, std::istream& proof) {
  LratChecker checker(cnf);
  return checker.run(proof);
}

}  // namespace certbdd

#endif  // CERTBDD_CHECKER_HPP
