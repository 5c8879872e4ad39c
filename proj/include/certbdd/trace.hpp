// certbdd — proof-generating BDD engine deciding CNF unsatisfiability.
// Distributed under the MIT license; see LICENSE for the full text.

#ifndef CERTBDD_TRACE_HPP
#define CERTBDD_TRACE_HPP

#include <charconv>
#include <cstring>
#include <ostream>
#include <unordered_map>
#include <vector>

#include "certbdd/cnf.hpp"
#include "certbdd/common.hpp"

namespace certbdd {

// Which LRAT dialect extension (defining) clauses are written in.
//
// EmptyHints: `id lits 0 0` — the checker recognizes an empty hint list as
//   "verify this as a blocked clause on the first literal".
// Compat:     `id lits 0 -d1 -d2 ... 0` — the ids of every live clause
//   containing the negated pivot are listed explicitly, as strict LRAT RAT
//   steps expect. For a defining clause those candidates are always the same
//   node's earlier defining clauses, so emission needs no occurrence index.
enum class LratDialect { EmptyHints, Compat };

// Append-only proof trace. Input clauses occupy step ids 1..m and are never
// restated in the output; every emitted step gets the next consecutive id.
// The trace streams lines to a sink immediately — nothing is buffered beyond
// one line — and keeps only per-step liveness plus counters, so its memory
// footprint is independent of proof length. Clause bodies are retained only
// when recording or self-checking is switched on (test/debug configurations).
class Trace {
 public:
  struct ExtensionClause {
    Clause lits;                 // first literal is the blocked pivot
    std::vector<int> rat_refs;   // indices of earlier clauses in this batch
                                 // that contain the negated pivot
  };

  struct Recorded {
    StepId id = 0;
    bool is_delete = false;
    bool is_extension = false;
    Clause lits;
    std::vector<StepId> hints;
    std::vector<StepId> deleted;
  };

  struct Summary {
    std::uint64_t additions = 0;  // emitted proof clauses (inputs excluded)
    std::uint64_t max_live = 0;   // peak live clauses (inputs included)
    std::uint64_t live = 0;
    StepId empty_step = 0;        // id of the empty clause, 0 if none
  };

  explicit Trace(std::ostream* sink = nullptr,
                 LratDialect dialect = LratDialect::EmptyHints)
      : sink_(sink), dialect_(dialect) {}

  // Debug mode: every emit_rup is re-verified by unit propagation over the
  // live clause set before it is written. Off by default (it forces clause
  // bodies to be retained). Must be enabled before load_inputs.
  void set_self_check(bool on) { self_check_ = on; }

  // Test mode: keep an in-memory log of every emitted step, mirroring the
  // bytes written to the sink. Must be enabled before load_inputs.
  void set_record(bool on) { record_ = on; }

  // Optional ceiling on emitted proof clauses; exceeding it throws
  // LimitExceeded (mapped to verdict UNKNOWN by the solver). 0 = unlimited.
  void set_max_steps(std::uint64_t m) { max_steps_ = m; }

  // Registers the input clauses as steps 1..m. Emits nothing.
  void load_inputs(const Cnf& cnf) {
    CERTBDD_REQUIRE(next_id_ == 1, "load_inputs must run on a fresh trace");
    num_inputs_ = cnf.clauses.size();
    alive_.assign(num_inputs_ + 1, true);
    alive_[0] = false;  // step 0 is the tautology sentinel, not a clause
    if (keep_bodies()) {
      bodies_.assign(num_inputs_ + 1, Clause{});
      for (std::size_t i = 0; i < num_inputs_; ++i) bodies_[i + 1] = cnf.clauses[i];
    }
    next_id_ = static_cast<StepId>(num_inputs_) + 1;
    live_ = max_live_ = num_inputs_;
  }

  // Emits one RUP addition. `hints` are antecedent step ids in propagation
  // order; each must be a live step. Returns the new step id.
  StepId emit_rup(const Clause& lits, const std::vector<StepId>& hints) {
    for (StepId h : hints)
      CERTBDD_REQUIRE(is_alive(h), "RUP hint references a dead or unknown step");
    if (self_check_) self_check_rup(lits, hints);
    StepId id = allocate(lits);
    write_addition(id, lits, hints, {});
    if (record_) {
      Recorded r;
      r.id = id;
      r.lits = lits;
      r.hints = hints;
      records_.push_back(std::move(r));
    }
    if (lits.empty() && empty_step_ == 0) empty_step_ = id;
    return id;
  }

  // Emits a batch of extension (defining) clauses with consecutive ids and
  // returns those ids. Each clause's first literal must be over the fresh
  // extension variable (the blocked pivot).
  std::vector<StepId> emit_extension(const std::vector<ExtensionClause>& batch) {
    std::vector<StepId> ids;
    ids.reserve(batch.size());
    for (const auto& ext : batch) {
      CERTBDD_REQUIRE(!ext.lits.empty(), "extension clause cannot be empty");
      StepId id = allocate(ext.lits);
      std::vector<StepId> rat_hints;
      if (dialect_ == LratDialect::Compat) {
        rat_hints.reserve(ext.rat_refs.size());
        for (int ref : ext.rat_refs) {
          CERTBDD_REQUIRE(ref >= 0 && static_cast<std::size_t>(ref) < ids.size(),
                          "rat_refs must point at earlier clauses in the batch");
          rat_hints.push_back(-ids[static_cast<std::size_t>(ref)]);
        }
      }
      write_addition(id, ext.lits, {}, rat_hints);
      if (record_) {
        Recorded r;
        r.id = id;
        r.is_extension = true;
        r.lits = ext.lits;
        r.hints = rat_hints;
        records_.push_back(std::move(r));
      }
      ids.push_back(id);
    }
    return ids;
  }

  // Emits one deletion line covering `ids` (skipped when empty). Every id
  // must currently be live; deleting a step twice is an internal error.
  void emit_delete(const std::vector<StepId>& ids) {
    if (ids.empty()) return;
    for (StepId id : ids) {
      CERTBDD_REQUIRE(is_alive(id), "deleting a dead or unknown step");
      alive_[static_cast<std::size_t>(id)] = false;
      if (keep_bodies()) bodies_[static_cast<std::size_t>(id)].clear();
    }
    live_ -= ids.size();
    write_deletion(ids);
    if (record_) {
      Recorded r;
      r.is_delete = true;
      r.id = last_line_id();
      r.deleted = ids;
      records_.push_back(std::move(r));
    }
  }

  // Deferred deletion: steps whose cache entries were evicted mid-operation
  // are queued here and deleted at the next safe point, so a step that is a
  // pending antecedent of a not-yet-emitted step is never deleted early.
  void defer_delete(StepId id) {
    if (id != 0) deferred_.push_back(id);
  }
  void flush_deferred() {
    if (deferred_.empty()) return;
    std::vector<StepId> batch;
    batch.swap(deferred_);
    emit_delete(batch);
  }
  std::size_t deferred_count() const { return deferred_.size(); }

  bool is_alive(StepId id) const {
    return id > 0 && static_cast<std::size_t>(id) < alive_.size() &&
           alive_[static_cast<std::size_t>(id)];
  }

  StepId next_id() const { return next_id_; }
  std::uint64_t num_inputs() const { return num_inputs_; }
  std::uint64_t additions() const { return additions_; }
  std::uint64_t live() const { return live_; }
  std::uint64_t max_live() const { return max_live_; }
  StepId empty_step() const { return empty_step_; }
  LratDialect dialect() const { return dialect_; }
  const std::vector<Recorded>& records() const { return records_; }

  // Flushes the sink and returns the final accounting.
  Summary finalize() {
    if (sink_) sink_->flush();
    return Summary{additions_, max_live_, live_, empty_step_};
  }

 private:
  bool keep_bodies() const { return self_check_ || record_; }

  StepId allocate(const Clause& lits) {
    if (max_steps_ != 0 && additions_ >= max_steps_)
      throw LimitExceeded("proof step ceiling of " + std::to_string(max_steps_) +
                          " clauses exceeded");
    StepId id = next_id_++;
    alive_.push_back(true);
    CERTBDD_REQUIRE(static_cast<std::size_t>(id) + 1 == alive_.size(),
                    "liveness table out of sync");
    if (keep_bodies()) bodies_.push_back(lits);
    ++additions_;
    ++live_;
    if (live_ > max_live_) max_live_ = live_;
    return id;
  }

  // Id written on deletion lines: the most recently added clause (or the
  // last input id if nothing has been added yet).
  StepId last_line_id() const { return next_id_ - 1; }

  void write_addition(StepId id, const Clause& lits,
                      const std::vector<StepId>& hints,
                      const std::vector<StepId>& rat_hints) {
    if (!sink_) return;
    line_.clear();
    append_int(id);
    for (Lit l : lits) append_int(l);
    append_int(0);
    for (StepId h : hints) append_int(h);
    for (StepId h : rat_hints) append_int(h);
    append_int(0);
    finish_line();
  }

  void write_deletion(const std::vector<StepId>& ids) {
    if (!sink_) return;
    line_.clear();
    append_int(last_line_id());
    line_ += "d ";
    for (StepId v : ids) append_int(v);
    append_int(0);
    finish_line();
  }

  void append_int(std::int64_t v) {
    char buf[24];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    line_.append(buf, end);
    line_ += ' ';
  }

  void finish_line() {
    line_.back() = '\n';  // replace the trailing space
    sink_->write(line_.data(), static_cast<std::streamsize>(line_.size()));
  }

  // Debug verification of a RUP step: asserting the negation of every target
  // literal and walking the hints in order must make each hint unit or
  // conflicting, with a conflict on the last hint.
  void self_check_rup(const Clause& lits, const std::vector<StepId>& hints) {
    std::unordered_map<Lit, bool> val;  // var -> value
    bool conflict = false;
    for (Lit l : lits) {
      auto it = val.find(var_of(l));
      if (it == val.end())
        val.emplace(var_of(l), !is_pos(l));
      else if (it->second == is_pos(l))
        conflict = true;  // tautological target: trivially fine
    }
    for (std::size_t i = 0; i < hints.size() && !conflict; ++i) {
      const Clause& body = bodies_[static_cast<std::size_t>(hints[i])];
      Lit unit = 0;
      bool satisfied = false;
      int unassigned = 0;
      for (Lit l : body) {
        auto it = val.find(var_of(l));
        if (it == val.end()) {
          ++unassigned;
          unit = l;
        } else if (it->second == is_pos(l)) {
          satisfied = true;
          break;
        }
      }
      if (satisfied || unassigned > 1)
        throw InternalError("self-check: hint " + std::to_string(hints[i]) +
                            " is neither unit nor conflicting");
      if (unassigned == 1)
        val.emplace(var_of(unit), is_pos(unit));
      else
        conflict = true;
    }
    if (!conflict)
      throw InternalError("self-check: RUP step does not close with a conflict");
  }

  std::ostream* sink_;
  LratDialect dialect_;
  bool self_check_ = false;
  bool record_ = false;
  std::uint64_t max_steps_ = 0;

  StepId next_id_ = 1;
  std::uint64_t num_inputs_ = 0;
  std::uint64_t additions_ = 0;
  std::uint64_t live_ = 0;
  std::uint64_t max_live_ = 0;
  StepId empty_step_ = 0;

  std::vector<bool> alive_{false};  // index 0 = sentinel
  std::vector<Clause> bodies_;      // only when recording/self-checking
  std::vector<StepId> deferred_;
  std::vector<Recorded> records_;
  std::string line_;
};

}  // namespace certbdd

#endif  // CERTBDD_TRACE_HPP
