// certbdd — proof-generating BDD engine deciding CNF unsatisfiability.
// Distributed under the MIT license; see LICENSE for the full text.

#ifndef CERTBDD_DIMACS_HPP
#define CERTBDD_DIMACS_HPP

#include <istream>
#include <ostream>
#include <string>

#include "certbdd/cnf.hpp"
#include "certbdd/common.hpp"

namespace certbdd {

// Parses DIMACS CNF. Comment lines (`c ...`) and blank lines are permitted
// anywhere, including before the header. The clause count and variable
// bound in the header are enforced: a mismatch is a ParseError carrying the
// offending line number.
inline Cnf parse_dimacs(std::istream& in) {
  Cnf cnf;
  long line_no = 0;
  bool have_header = false;
  long declared_clauses = 0;
  Clause current;
  bool in_clause = false;
  long clause_start_line = 0;

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == 'c') continue;
    if (line[pos] == 'p') {
      if (have_header) throw ParseError("duplicate DIMACS header", line_no);
      std::istringstream hs(line.substr(pos + 1));
      std::string fmt;
      long long nv = -1, nc = -1;
      if (!(hs >> fmt >> nv >> nc) || fmt != "cnf" || nv < 0 || nc < 0)
        throw ParseError("malformed DIMACS header (expected `p cnf <vars> <clauses>`)",
                         line_no);
      std::string extra;
      if (hs >> extra) throw ParseError("trailing tokens after DIMACS header", line_no);
      cnf.num_vars = nv;
      declared_clauses = nc;
      have_header = true;
      continue;
    }
    if (!have_header)
      throw ParseError("clause data before DIMACS header", line_no);

    std::istringstream ls(line);
    long long tok;
    while (ls >> tok) {
      if (tok == 0) {
        if (static_cast<long>(cnf.clauses.size()) >= declared_clauses)
          throw ParseError("more clauses than the header declares", line_no);
        cnf.clauses.push_back(current);
        current.clear();
        in_clause = false;
      } else {
        if (var_of(tok) > cnf.num_vars)
          throw ParseError("literal " + std::to_string(tok) +
                               " exceeds declared variable count",
                           line_no);
        if (!in_clause) {
          in_clause = true;
          clause_start_line = line_no;
        }
        current.push_back(tok);
      }
    }
    if (!ls.eof()) throw ParseError("unreadable token in clause data", line_no);
  }
  if (!have_header) throw ParseError("missing DIMACS header");
  if (in_clause)
    throw ParseError("unterminated clause (missing trailing 0)", clause_start_line);
  if (static_cast<long>(cnf.clauses.size()) != declared_clauses)
    throw ParseError("header declares " + std::to_string(declared_clauses) +
                     " clauses but " + std::to_string(cnf.clauses.size()) +
                     " were given");
  return cnf;
}

// Writes DIMACS CNF, one clause per line, with optional leading comments.
inline void write_dimacs(std::ostream& out, const Cnf& cnf,
                         const std::vector<std::string>& comments = {}) {
  for (const auto& c : comments) out << "c " << c << '\n';
  out << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& clause : cnf.clauses) {
    for (Lit l : clause) out << l << ' ';
    out << "0\n";
  }
}

}  // namespace certbdd

#endif  // CERTBDD_DIMACS_HPP
