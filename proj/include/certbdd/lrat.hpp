// certbdd — proof-generating BDD engine deciding CNF unsatisfiability.
// Distributed under the MIT license; see LICENSE for the full text.

#ifndef CERTBDD_LRAT_HPP
#define CERTBDD_LRAT_HPP

#include <cctype>
#include <istream>
#include <vector>

#include "certbdd/cnf.hpp"
#include "certbdd/common.hpp"

namespace certbdd {

// One parsed LRAT proof line.
//
// Addition:  `id lit* 0 hint* 0`  — lits are the clause, hints the RUP
//            antecedent ids. Empty hints mean "blocked-clause step". In the
//            strict-compat dialect, hints may contain negative ids naming
//            resolvent candidates.
// Deletion:  `id d id* 0`         — `id` is bookkeeping only (this library
//            emits the id of the most recently added clause).
struct LratStep {
  StepId id = 0;
  bool is_delete = false;
  Clause lits;                 // additions only
  std::vector<StepId> hints;   // additions only (may contain negatives)
  std::vector<StepId> deleted; // deletions only
};

// Streaming whitespace-tolerant LRAT tokenizer/parser. Throws ParseError
// (with the 1-based line) on malformed input.
class LratReader {
 public:
  explicit LratReader(std::istream& in) : in_(in) {}

  long line() const { return line_; }

  // Reads the next step into `out`. Returns false on clean end of input.
  bool next(LratStep& out) {
    StepId id;
    if (!read_int(id)) return false;
    if (id <= 0) throw ParseError("step id must be positive", line_);
    out = LratStep{};
    out.id = id;

    skip_blanks();
    if (in_.peek() == 'd') {
      in_.get();
      int after = in_.peek();
      if (after != EOF && !std::isspace(after))
        throw ParseError("malformed token after deletion marker", line_);
      out.is_delete = true;
      for (;;) {
        StepId v;
        if (!read_int(v)) throw ParseError("unterminated deletion line", line_);
        if (v == 0) break;
        if (v < 0) throw ParseError("negative id in deletion line", line_);
        out.deleted.push_back(v);
      }
      return true;
    }

    for (;;) {  // clause literals
      StepId v;
      if (!read_int(v)) throw ParseError("unterminated clause in addition line", line_);
      if (v == 0) break;
      out.lits.push_back(static_cast<Lit>(v));
    }
    for (;;) {  // hints
      StepId v;
      if (!read_int(v)) throw ParseError("unterminated hint list in addition line", line_);
      if (v == 0) break;
      out.hints.push_back(v);
    }
    return true;
  }

 private:
  void skip_blanks() {
    for (;;) {
      int c = in_.peek();
      if (c == '\n') ++line_;
      if (c == EOF || !std::isspace(c)) return;
      in_.get();
    }
  }

  bool read_int(StepId& out) {
    skip_blanks();
    int c = in_.peek();
    if (c == EOF) return false;
    bool neg = false;
    if (c == '-') {
      in_.get();
      neg = true;
      c = in_.peek();
    }
    if (c == EOF || !std::isdigit(c))
      throw ParseError("expected integer token", line_);
    StepId v = 0;
    while (std::isdigit(in_.peek())) {
      v = v * 10 + (in_.get() - '0');
      if (v < 0) throw ParseError("integer overflow in token", line_);
    }
    c = in_.peek();
    if (c != EOF && !std::isspace(c))
      throw ParseError("malformed integer token", line_);
    out = neg ? -v : v;
    return true;
  }

  std::istream& in_;
  long line_ = 1;
};

// Offline statistics replay: scans an LRAT stream and recomputes the clause
// accounting from scratch. `num_inputs` clauses are live before the first
// proof line. Used to cross-check the statistics the solver reports.
struct LratReplayStats {
  std::uint64_t additions = 0;   // proof clauses added (inputs excluded)
  std::uint64_t max_live = 0;    // peak live clauses (inputs included)
  std::uint64_t live_end = 0;
  bool has_empty = false;
};

inline LratReplayStats replay_lrat_stats(std::uint64_t num_inputs, std::istream& in) {
  LratReplayStats st;
  st.max_live = st.live_end = num_inputs;
  LratReader reader(in);
  LratStep step;
  while (reader.next(step)) {
    if (step.is_delete) {
      CERTBDD_REQUIRE(st.live_end >= step.deleted.size(), "deletion underflow in replay");
      st.live_end -= step.deleted.size();
    } else {
      ++st.additions;
      ++st.live_end;
      if (st.live_end > st.max_live) st.max_live = st.live_end;
      if (step.lits.empty()) st.has_empty = true;
    }
  }
  return st;
}

}  // namespace certbdd

#endif  // CERTBDD_LRAT_HPP
