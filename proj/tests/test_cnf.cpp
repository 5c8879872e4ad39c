#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "certbdd/cnf.hpp"
#include "certbdd/dimacs.hpp"
#include "support/oracle.hpp"

using namespace certbdd;

static Cnf parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_dimacs(in);
}

TEST_CASE("dimacs: minimal instance parses", "[cnf]") {
  Cnf cnf = parse_text("p cnf 2 2\n1 0\n-1 0\n");
  CHECK(cnf.num_vars == 2);
  REQUIRE(cnf.num_clauses() == 2);
  CHECK(cnf.clauses[0] == Clause{1});
  CHECK(cnf.clauses[1] == Clause{-1});
}

TEST_CASE("dimacs: comments and blank lines are ignored anywhere", "[cnf]") {
  Cnf cnf = parse_text(
      "c leading comment\n"
      "\n"
      "p cnf 3 2\n"
      "c between clauses\n"
      "1 -2 0\n"
      "\n"
      "c one more\n"
      "2 3 0\n"
      "c trailing\n");
  REQUIRE(cnf.num_clauses() == 2);
  CHECK(cnf.clauses[0] == Clause{1, -2});
  CHECK(cnf.clauses[1] == Clause{2, 3});
}

TEST_CASE("dimacs: clauses may span lines and share lines", "[cnf]") {
  Cnf cnf = parse_text("p cnf 4 3\n1 2\n3 0 -1\n-2 0 4 0\n");
  REQUIRE(cnf.num_clauses() == 3);
  CHECK(cnf.clauses[0] == Clause{1, 2, 3});
  CHECK(cnf.clauses[1] == Clause{-1, -2});
  CHECK(cnf.clauses[2] == Clause{4});
}

TEST_CASE("dimacs: empty clause and zero-clause formula", "[cnf]") {
  Cnf a = parse_text("p cnf 2 1\n0\n");
  REQUIRE(a.num_clauses() == 1);
  CHECK(a.clauses[0].empty());

  Cnf b = parse_text("p cnf 5 0\n");
  CHECK(b.num_vars == 5);
  CHECK(b.num_clauses() == 0);
}

TEST_CASE("dimacs: malformed inputs raise ParseError with a line number", "[cnf]") {
  auto line_of = [](const std::string& text) -> long {
    try {
      std::istringstream in(text);
      parse_dimacs(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };

  SECTION("missing header") {
    CHECK_THROWS_AS(parse_text(""), ParseError);
  }
  SECTION("clause data before header") {
    CHECK(line_of("1 0\np cnf 1 1\n") == 1);
  }
  SECTION("duplicate header") {
    CHECK(line_of("p cnf 1 1\np cnf 1 1\n1 0\n") == 2);
  }
  SECTION("malformed header") {
    CHECK(line_of("p dnf 1 1\n1 0\n") == 1);
    CHECK(line_of("p cnf -1 1\n") == 1);
    CHECK(line_of("p cnf 1\n") == 1);
  }
  SECTION("trailing tokens after header") {
    CHECK(line_of("p cnf 1 1 junk\n1 0\n") == 1);
  }
  SECTION("literal exceeds declared variables") {
    CHECK(line_of("p cnf 2 1\n3 0\n") == 2);
  }
  SECTION("more clauses than declared") {
    CHECK(line_of("p cnf 1 1\n1 0\n-1 0\n") == 3);
  }
  SECTION("fewer clauses than declared") {
    CHECK_THROWS_AS(parse_text("p cnf 1 2\n1 0\n"), ParseError);
  }
  SECTION("unterminated clause reports the line it started on") {
    CHECK(line_of("p cnf 3 1\n1 2\n") == 2);
  }
  SECTION("unreadable token") {
    CHECK(line_of("p cnf 2 1\n1 x 0\n") == 2);
  }
}

TEST_CASE("clause_tautological and clause_deduped", "[cnf]") {
  CHECK(clause_tautological({1, -1}));
  CHECK(clause_tautological({2, 5, -3, 1, 3}));
  CHECK_FALSE(clause_tautological({1, 2, 3}));
  CHECK_FALSE(clause_tautological({}));
  CHECK_FALSE(clause_tautological({1, 1}));

  CHECK(clause_deduped({3, 1, 3, -2, 1}) == Clause{3, 1, -2});
  CHECK(clause_deduped({}) == Clause{});
}

TEST_CASE("dimacs: write/parse round trip on random formulas", "[cnf]") {
  std::mt19937_64 rng(20260816);
  for (int iter = 0; iter < 50; ++iter) {
    Cnf cnf = testsupport::random_cnf(rng);
    std::ostringstream out;
    write_dimacs(out, cnf, {"generated round-trip case"});
    Cnf back = parse_text(out.str());
    CHECK(back.num_vars == cnf.num_vars);
    REQUIRE(back.num_clauses() == cnf.num_clauses());
    CHECK(back.clauses == cnf.clauses);
  }
}
