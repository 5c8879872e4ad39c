// certbdd — proof-generating BDD engine deciding CNF unsatisfiability.
// Distributed under the MIT license; see LICENSE for the full text.
//
// Evaluation orchestrator. All three modes maintain the proof invariant
// that for every live root r the trace proves the unit clause of r's
// extension variable, so the moment two roots conjoin to constant false the
// empty clause follows by one RUP step.

#ifndef CERTBDD_SOLVER_HPP
#define CERTBDD_SOLVER_HPP

#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "certbdd/bdd.hpp"
#include "certbdd/cnf.hpp"
#include "certbdd/common.hpp"
#include "certbdd/schedule.hpp"
#include "certbdd/trace.hpp"

namespace certbdd {

enum class Status { Sat, Unsat, Unknown };

struct Verdict {
  Status status = Status::Unknown;
  StepId empty_step = 0;      // UNSAT: trace id of the empty clause
  std::vector<bool> witness;  // SAT: values indexed by variable, slot 0 unused
  std::string reason;         // UNKNOWN: which resource limit was hit
};

struct SolveOptions {
  std::vector<Lit> level_to_ext;  // variable ordering; empty = identity
  std::uint64_t max_nodes = 0;    // BDD node ceiling; 0 = unlimited
  std::uint64_t max_steps = 0;    // proof step ceiling; 0 = unlimited
  std::uint64_t gc_interval = 262144;
  bool delete_inputs = false;  // delete each input clause after its last use
};

// A live root: a BDD node plus the trace step proving the unit clause of
// its extension variable (0 when the node is a leaf — LEAF1 needs no unit,
// and for LEAF0 the field carries the empty-clause step instead).
struct Root {
  NodeRef node{};
  StepId unit_step = 0;
};

class Solver {
 public:
  Solver(const Cnf& cnf, Trace& trace, SolveOptions opt = {})
      : cnf_(cnf), trace_(trace), opt_(std::move(opt)) {
    trace_.set_max_steps(opt_.max_steps);
    trace_.load_inputs(cnf_);
    ManagerConfig mc;
    mc.max_nodes = opt_.max_nodes;
    mc.gc_interval = opt_.gc_interval;
    mgr_.emplace(cnf_.num_vars, opt_.level_to_ext, trace_, mc);
  }

  Manager& manager() { return *mgr_; }

  // ------------------------------------------------------------- modes ----
  // Each solver instance runs exactly one solve. A resource ceiling turns
  // into the UNKNOWN verdict; any proof text already written stays written
  // (callers discard the file on non-UNSAT outcomes).

  // FIFO queue of clause BDDs: repeatedly dequeue two, conjoin, enqueue.
  Verdict solve_linear() {
    return guarded([&] {
      std::deque<Root> queue;
      if (auto v = intake([&](Root r) { queue.push_back(r); })) return *v;
      while (queue.size() > 1) {
        Root a = queue.front();
        queue.pop_front();
        Root b = queue.front();
        queue.pop_front();
        Root c = combine_roots(a, b);
        if (c.node == LEAF0) return unsat(c.unit_step);
        queue.push_back(c);
      }
      return make_sat(queue.empty() ? Root{LEAF1, 0} : queue.front());
    });
  }

  // Bucket elimination: clause BDDs grouped by topmost level; buckets are
  // processed lowest to highest, conjoining pairwise until one root remains,
  // which is then existentially quantified on the bucket's variable and
  // re-bucketed. Empty buckets are skipped.
  Verdict solve_bucket() {
    return guarded([&] {
      std::vector<std::deque<Root>> buckets(
          static_cast<std::size_t>(cnf_.num_vars) + 1);
      auto place = [&](Root r) {
        buckets[static_cast<std::size_t>(mgr_->level_of(r.node))].push_back(r);
      };
      if (auto v = intake(place)) return *v;

      for (std::int32_t lev = 1; lev <= cnf_.num_vars; ++lev) {
        auto& q = buckets[static_cast<std::size_t>(lev)];
        while (q.size() > 1) {
          Root a = q.front();
          q.pop_front();
          Root b = q.front();
          q.pop_front();
          Root c = combine_roots(a, b);
          if (c.node == LEAF0) return unsat(c.unit_step);
          q.push_back(c);
        }
        if (q.empty()) continue;
        Root g = q.front();
        q.pop_front();
        // Conjoining can collapse past the bucket variable; quantify only
        // when it is still the topmost level.
        if (!is_leaf(g.node) && mgr_->level_of(g.node) == lev)
          g = quantify_root(g, {mgr_->ext_at_level(lev)});
        if (g.node == LEAF1) continue;
        place(g);  // strictly above lev: forward progress
      }
      return make_sat(Root{LEAF1, 0});
    });
  }

  // Stack machine driven by a schedule (see schedule.hpp). The schedule is
  // validated up front; after the program any remaining roots are conjoined
  // FIFO-style.
  Verdict solve_scheduled(const Schedule& sched) {
    validate_schedule(sched, cnf_);
    return guarded([&] {
      if (opt_.delete_inputs) plan_deletions(sched);
      std::vector<Root> stack;
      for (const ScheduleCmd& cmd : sched) {
        switch (cmd.kind) {
          case ScheduleCmd::Kind::Push:
            for (Lit id : cmd.args) {
              const Clause& c = cnf_.clauses[static_cast<std::size_t>(id - 1)];
              if (c.empty()) return unsat(trace_.emit_rup({}, {id}));
              if (clause_tautological(c))
                stack.push_back(Root{LEAF1, 0});  // keeps stack arithmetic intact
              else
                stack.push_back(clause_root(id));
            }
            break;
          case ScheduleCmd::Kind::Conjoin: {
            std::size_t m = static_cast<std::size_t>(cmd.args[0]);
            std::size_t base = stack.size() - m;
            Root acc = stack[base];
            for (std::size_t i = base + 1; i < stack.size(); ++i) {
              acc = combine_roots(acc, stack[i]);
              if (acc.node == LEAF0) return unsat(acc.unit_step);
            }
            stack.resize(base);
            stack.push_back(acc);
            break;
          }
          case ScheduleCmd::Kind::Quantify:
            stack.back() = quantify_root(stack.back(), cmd.args);
            break;
        }
      }
      std::deque<Root> queue(stack.begin(), stack.end());
      while (queue.size() > 1) {
        Root a = queue.front();
        queue.pop_front();
        Root b = queue.front();
        queue.pop_front();
        Root c = combine_roots(a, b);
        if (c.node == LEAF0) return unsat(c.unit_step);
        queue.push_back(c);
      }
      return make_sat(queue.empty() ? Root{LEAF1, 0} : queue.front());
    });
  }

  // ------------------------------------------------------ root plumbing ---
  // Exposed for targeted tests; normal callers use the solve_* entry points.

  // Conjoins two live roots. A LEAF1 operand is absorbed silently; when the
  // result is constant false the empty clause is emitted (returned in the
  // unit_step field of a LEAF0 root); when the result equals an operand that
  // operand's root is reused and the other released. Otherwise the result's
  // unit clause follows from [a.unit, b.unit, and-step], tautological hints
  // omitted, and both operands are released.
  Root combine_roots(Root a, Root b) {
    if (a.node == LEAF1) return b;
    if (b.node == LEAF1) return a;
    JustifiedNode w = mgr_->and_apply(a.node, b.node);
    if (w.node == LEAF0) {
      StepId es = trace_.emit_rup({}, nonzero({a.unit_step, b.unit_step, w.step}));
      return Root{LEAF0, es};
    }
    if (w.node == a.node) {
      release(b);
      return a;
    }
    if (w.node == b.node) {
      release(a);
      return b;
    }
    mgr_->addref(w.node);
    StepId us = trace_.emit_rup(Clause{mgr_->ext_of(w.node)},
                                nonzero({a.unit_step, b.unit_step, w.step}));
    release(a);
    release(b);
    return Root{w.node, us};
  }

  // Existentially quantifies `vars` on a live root and certifies the result
  // with an implication check: the new unit clause follows from
  // [a.unit, implication step]. Quantifying variables absent from the root
  // returns it unchanged with no proof traffic. The pre-quantification BDD
  // is retained (referenced) for witness reconstruction.
  Root quantify_root(Root a, const std::vector<Lit>& vars) {
    if (a.node == LEAF1) return a;
    NodeRef w = mgr_->exists(a.node, vars);
    if (w == a.node) return a;
    CERTBDD_REQUIRE(w != LEAF0,
                    "existential quantification produced constant false from a "
                    "satisfiable root");
    mgr_->addref(a.node);
    quant_log_.push_back(QuantRecord{vars, a.node});
    if (w == LEAF1) {
      release(a);
      return Root{LEAF1, 0};
    }
    mgr_->addref(w);
    StepId imp = mgr_->imply_check(a.node, w);
    StepId us =
        trace_.emit_rup(Clause{mgr_->ext_of(w)}, nonzero({a.unit_step, imp}));
    release(a);
    return Root{w, us};
  }

 private:
  struct QuantRecord {
    std::vector<Lit> vars;  // quantified variables (free during replay)
    NodeRef pre;            // referenced pre-quantification BDD
  };

  template <class F>
  Verdict guarded(F&& body) {
    CERTBDD_REQUIRE(!used_, "a Solver instance runs exactly one solve");
    used_ = true;
    try {
      return body();
    } catch (const LimitExceeded& e) {
      return Verdict{Status::Unknown, 0, {}, e.what()};
    }
  }

  static Verdict unsat(StepId empty_step) {
    return Verdict{Status::Unsat, empty_step, {}, {}};
  }

  static std::vector<StepId> nonzero(std::initializer_list<StepId> ids) {
    std::vector<StepId> out;
    for (StepId s : ids)
      if (s != 0) out.push_back(s);
    return out;
  }

  // Feeds every input clause through clause_to_bdd in id order. Returns a
  // verdict early when an input clause is empty; tautological clauses are
  // skipped (they constrain nothing).
  template <class Place>
  std::optional<Verdict> intake(Place place) {
    for (Lit id = 1; id <= cnf_.num_clauses(); ++id) {
      const Clause& c = cnf_.clauses[static_cast<std::size_t>(id - 1)];
      if (c.empty()) return unsat(trace_.emit_rup({}, {id}));
      if (clause_tautological(c)) {
        if (opt_.delete_inputs) trace_.emit_delete({id});
        continue;
      }
      place(clause_root(id));
    }
    return std::nullopt;
  }

  Root clause_root(Lit id) {
    const Clause& c = cnf_.clauses[static_cast<std::size_t>(id - 1)];
    JustifiedNode jn = mgr_->clause_to_bdd(c, id);
    mgr_->addref(jn.node);
    if (opt_.delete_inputs) {
      auto it = pushes_left_.find(id);
      if (it == pushes_left_.end() || --it->second == 0) trace_.emit_delete({id});
    }
    return Root{jn.node, jn.step};
  }

  void release(Root r) {
    if (!is_leaf(r.node)) mgr_->delref(r.node);
    if (r.unit_step != 0) trace_.emit_delete({r.unit_step});
  }

  // For scheduled mode with aggressive input deletion: count how many times
  // each clause is pushed so it is deleted exactly after its last use;
  // clauses the schedule never touches are deleted immediately.
  void plan_deletions(const Schedule& sched) {
    pushes_left_.clear();
    for (const ScheduleCmd& cmd : sched)
      if (cmd.kind == ScheduleCmd::Kind::Push)
        for (Lit id : cmd.args) ++pushes_left_[id];
    std::vector<StepId> unused;
    for (Lit id = 1; id <= cnf_.num_clauses(); ++id)
      if (!pushes_left_.count(id) &&
          !cnf_.clauses[static_cast<std::size_t>(id - 1)].empty())
        unused.push_back(id);
    if (!unused.empty()) trace_.emit_delete(unused);
  }

  // ------------------------------------------------- witness extraction ---
  // A SAT verdict starts from any satisfying path of the final root (low
  // branch preferred, remaining variables false) and then replays the
  // quantification log in reverse: for each record the current assignment
  // satisfies the post-quantification BDD, hence it extends over the
  // quantified variables to a satisfying path of the pre-quantification BDD.
  // The finished witness is verified against every input clause.
  Verdict make_sat(Root final_root) {
    std::vector<bool> value(static_cast<std::size_t>(cnf_.num_vars) + 1, false);
    walk_path(final_root.node, value);
    for (auto it = quant_log_.rbegin(); it != quant_log_.rend(); ++it)
      extend_through(*it, value);
    verify_witness(value);
    return Verdict{Status::Sat, 0, std::move(value), {}};
  }

  void walk_path(NodeRef r, std::vector<bool>& value) {
    while (!is_leaf(r)) {
      Lit x = mgr_->ext_at_level(mgr_->level_of(r));
      if (mgr_->lo(r) != LEAF0) {
        value[static_cast<std::size_t>(x)] = false;
        r = mgr_->lo(r);
      } else {
        value[static_cast<std::size_t>(x)] = true;
        r = mgr_->hi(r);
      }
    }
    CERTBDD_REQUIRE(r == LEAF1, "satisfying-path walk reached constant false");
  }

  void extend_through(const QuantRecord& rec, std::vector<bool>& value) {
    std::vector<char> free_var(static_cast<std::size_t>(cnf_.num_vars) + 1, 0);
    for (Lit v : rec.vars) free_var[static_cast<std::size_t>(v)] = 1;

    // Bottom-up satisfiability of each reachable node under the current
    // assignment, quantified variables free (iterative postorder).
    std::unordered_map<std::uint32_t, bool> sat;
    sat[LEAF0.idx] = false;
    sat[LEAF1.idx] = true;
    std::vector<std::pair<NodeRef, bool>> stack{{rec.pre, false}};
    while (!stack.empty()) {
      auto [n, expanded] = stack.back();
      stack.pop_back();
      if (sat.count(n.idx)) continue;
      if (!expanded) {
        stack.push_back({n, true});
        stack.push_back({mgr_->hi(n), false});
        stack.push_back({mgr_->lo(n), false});
        continue;
      }
      Lit x = mgr_->ext_at_level(mgr_->level_of(n));
      bool h = sat.at(mgr_->hi(n).idx), l = sat.at(mgr_->lo(n).idx);
      sat[n.idx] = free_var[static_cast<std::size_t>(x)]
                       ? (h || l)
                       : (value[static_cast<std::size_t>(x)] ? h : l);
    }
    if (!sat.at(rec.pre.idx))
      throw std::runtime_error(
          "cannot extend the satisfying assignment through quantified "
          "variables; the schedule quantified variables still constrained by "
          "other roots");

    NodeRef r = rec.pre;
    while (!is_leaf(r)) {
      Lit x = mgr_->ext_at_level(mgr_->level_of(r));
      if (free_var[static_cast<std::size_t>(x)]) {
        bool pick_low = sat.at(mgr_->lo(r).idx);
        value[static_cast<std::size_t>(x)] = !pick_low;
        r = pick_low ? mgr_->lo(r) : mgr_->hi(r);
      } else {
        r = value[static_cast<std::size_t>(x)] ? mgr_->hi(r) : mgr_->lo(r);
      }
    }
    CERTBDD_REQUIRE(r == LEAF1, "replay walk through quantified BDD failed");
  }

  void verify_witness(const std::vector<bool>& value) const {
    for (Lit id = 1; id <= cnf_.num_clauses(); ++id) {
      const Clause& c = cnf_.clauses[static_cast<std::size_t>(id - 1)];
      bool ok = false;
      for (Lit l : c)
        if (value[static_cast<std::size_t>(var_of(l))] == is_pos(l)) {
          ok = true;
          break;
        }
      if (!ok)
        throw std::runtime_error("computed witness fails input clause " +
                                 std::to_string(id));
    }
  }

  const Cnf& cnf_;
  Trace& trace_;
  SolveOptions opt_;
  std::optional<Manager> mgr_;
  std::vector<QuantRecord> quant_log_;
  std::unordered_map<Lit, std::uint32_t> pushes_left_;
  bool used_ = false;
};

}  // namespace certbdd

#endif  // CERTBDD_SOLVER_HPP
