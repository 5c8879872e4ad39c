// certbdd — proof-generating BDD engine deciding CNF unsatisfiability.
// Distributed under the MIT license; see LICENSE for the full text.

#ifndef CERTBDD_COMMON_HPP
#define CERTBDD_COMMON_HPP

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace certbdd {

// Proof step identifier. Step 0 is reserved as the "tautology" sentinel: it
// is never written to a proof and marks justifications that were not needed.
using StepId = std::int64_t;

// Raised when an input file (DIMACS, schedule, order, LRAT) is malformed.
// `line` is 1-based; 0 means "no specific line".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string what, long line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                    : what),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

// Raised when a configured resource ceiling (node or step count) is hit.
// The solver maps this to the UNKNOWN verdict.
class LimitExceeded : public std::runtime_error {
 public:
  explicit LimitExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Internal invariant violations (ordering violations, refcount underflow,
// dead hint ids, ...) indicate a bug in this library, never bad user input.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

namespace detail {
[[noreturn]] inline void fail_require(const char* cond, const char* file,
                                      int line, const std::string& msg) {
  std::ostringstream os;
  os << "internal invariant violated: " << cond << " at " << file << ":" << line;
  if (!msg.empty()) os << " (" << msg << ")";
  throw InternalError(os.str());
}
}  // namespace detail

#define CERTBDD_REQUIRE(cond, msg)                                       \
  do {                                                                   \
    if (!(cond)) ::certbdd::detail::fail_require(#cond, __FILE__, __LINE__, (msg)); \
  } while (0)

}  // namespace certbdd

#endif  // CERTBDD_COMMON_HPP
