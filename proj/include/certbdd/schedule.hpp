// certbdd — proof-generating BDD engine deciding CNF unsatisfiability.
// Distributed under the MIT license; see LICENSE for the full text.
//
// Stack-machine schedules driving scheduled evaluation. The textual format
// is line-oriented:
//
//   c <id>...     push the BDDs of the given input clauses (1-based ids)
//   a <m>         conjoin the top m stack entries (m >= 2)
//   q <var>...    existentially quantify the given variables on the top entry
//
// Blank lines and lines starting with '#' are ignored.

#ifndef CERTBDD_SCHEDULE_HPP
#define CERTBDD_SCHEDULE_HPP

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "certbdd/cnf.hpp"
#include "certbdd/common.hpp"

namespace certbdd {

struct ScheduleCmd {
  enum class Kind { Push, Conjoin, Quantify };
  Kind kind{};
  std::vector<Lit> args;  // Push: clause ids; Conjoin: {m}; Quantify: variables
  long line = 0;          // 1-based source line, for diagnostics
};

using Schedule = std::vector<ScheduleCmd>;

// Parses the textual schedule format. Grammar errors (unknown command
// letter, non-positive integers, arity violations) raise ParseError with the
// offending line number; semantic validity is checked separately.
inline Schedule parse_schedule(std::istream& in) {
  Schedule cmds;
  std::string raw;
  long lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::istringstream line(raw);
    std::string head;
    if (!(line >> head) || head[0] == '#') continue;

    ScheduleCmd cmd;
    cmd.line = lineno;
    if (head == "c")
      cmd.kind = ScheduleCmd::Kind::Push;
    else if (head == "a")
      cmd.kind = ScheduleCmd::Kind::Conjoin;
    else if (head == "q")
      cmd.kind = ScheduleCmd::Kind::Quantify;
    else
      throw ParseError("unknown schedule command '" + head + "'", lineno);

    std::string tok;
    while (line >> tok) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size())
        throw ParseError("malformed schedule argument '" + tok + "'", lineno);
      if (v <= 0)
        throw ParseError("schedule arguments must be positive integers", lineno);
      cmd.args.push_back(static_cast<Lit>(v));
    }
    if (cmd.args.empty())
      throw ParseError("schedule command '" + head + "' needs at least one argument",
                       lineno);
    if (cmd.kind == ScheduleCmd::Kind::Conjoin) {
      if (cmd.args.size() != 1)
        throw ParseError("conjoin takes exactly one count argument", lineno);
      if (cmd.args[0] < 2)
        throw ParseError("conjoin count must be at least 2", lineno);
    }
    cmds.push_back(std::move(cmd));
  }
  return cmds;
}

// Semantic validation against a concrete instance: clause ids within
// 1..num_clauses, variables within 1..num_vars, and every conjoin count
// covered by the simulated stack depth. Raises ParseError with the command's
// line number so malformed schedules are rejected before any solving.
inline void validate_schedule(const Schedule& cmds, const Cnf& cnf) {
  long long depth = 0;
  for (const ScheduleCmd& cmd : cmds) {
    switch (cmd.kind) {
      case ScheduleCmd::Kind::Push:
        for (Lit id : cmd.args)
          if (id > cnf.num_clauses())
            throw ParseError("clause id " + std::to_string(id) +
                                 " out of range (instance has " +
                                 std::to_string(cnf.num_clauses()) + " clauses)",
                             cmd.line);
        depth += static_cast<long long>(cmd.args.size());
        break;
      case ScheduleCmd::Kind::Conjoin:
        if (cmd.args[0] > depth)
          throw ParseError("conjoin of " + std::to_string(cmd.args[0]) +
                               " exceeds stack depth " + std::to_string(depth),
                           cmd.line);
        depth -= cmd.args[0] - 1;
        break;
      case ScheduleCmd::Kind::Quantify:
        if (depth == 0)
          throw ParseError("quantify on an empty stack", cmd.line);
        for (Lit v : cmd.args)
          if (v > cnf.num_vars)
            throw ParseError("variable " + std::to_string(v) +
                                 " out of range (instance has " +
                                 std::to_string(cnf.num_vars) + " variables)",
                             cmd.line);
        break;
    }
  }
}

// Serializes a schedule back to its textual form (used by the generators).
inline void write_schedule(std::ostream& out, const Schedule& cmds) {
  for (const ScheduleCmd& cmd : cmds) {
    switch (cmd.kind) {
      case ScheduleCmd::Kind::Push:
        out << 'c';
        break;
      case ScheduleCmd::Kind::Conjoin:
        out << 'a';
        break;
      case ScheduleCmd::Kind::Quantify:
        out << 'q';
        break;
    }
    for (Lit a : cmd.args) out << ' ' << a;
    out << '\n';
  }
}

}  // namespace certbdd

#endif  // CERTBDD_SCHEDULE_HPP
