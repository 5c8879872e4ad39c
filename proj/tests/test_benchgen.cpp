#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>
#include <utility>

#include "certbdd/benchgen.hpp"
#include "certbdd/dimacs.hpp"
#include "support/oracle.hpp"

using namespace certbdd;
using namespace testsupport;

namespace {

std::string dimacs_bytes(const Cnf& cnf) {
  std::ostringstream out;
  write_dimacs(out, cnf);
  return out.str();
}

}  // namespace

TEST_CASE("benchgen: parity sizes and unsatisfiability", "[benchgen]") {
  for (Lit n : {2, 3, 5, 8, 13}) {
    BenchBundle b = gen_parity(n, 1);
    CAPTURE(n);
    CHECK(b.cnf.num_vars == 3 * n - 2);
    CHECK(b.cnf.num_clauses() == static_cast<std::size_t>(8 * (n - 1) + 2));
    CHECK(b.order.empty());     // ordering comes from the solver, not the family
    CHECK(b.schedule.empty());  // bucket elimination is the intended mode
  }
  // Small instances are exhaustively unsatisfiable, for several seeds.
  for (std::uint64_t seed : {0ull, 1ull, 17ull})
    for (Lit n : {2, 3}) {
      CAPTURE(n, seed);
      CHECK_FALSE(cnf_satisfiable(gen_parity(n, seed).cnf));
    }
}

TEST_CASE("benchgen: parity determinism", "[benchgen]") {
  CHECK(dimacs_bytes(gen_parity(9, 42).cnf) == dimacs_bytes(gen_parity(9, 42).cnf));
  CHECK(dimacs_bytes(gen_parity(9, 42).cnf) != dimacs_bytes(gen_parity(9, 43).cnf));
}

TEST_CASE("benchgen: chessboard structure", "[benchgen]") {
  for (Lit n : {4, 6, 8}) {
    BenchBundle b = gen_chess(n);
    CAPTURE(n);
    CHECK(b.cnf.num_vars == 2 * n * (n - 1) - 4);

    // Independent clause-count recomputation from the board geometry:
    // each surviving square yields one cover clause plus one conflict
    // clause per pair of incident edges.
    auto x_valid = [n](Lit i, Lit j) {
      return j >= 1 && j <= n - 1 && i >= 1 && i <= n && !(i == 1 && j == 1) &&
             !(i == n && j == n - 1);
    };
    auto y_valid = [n](Lit i, Lit j) {
      return i >= 1 && i <= n - 1 && j >= 1 && j <= n && !(i == 1 && j == 1) &&
             !(i == n - 1 && j == n);
    };
    std::size_t expect = 0, alo = 0;
    for (Lit i = 1; i <= n; ++i)
      for (Lit j = 1; j <= n; ++j) {
        if ((i == 1 && j == 1) || (i == n && j == n)) continue;
        std::size_t deg = 0;
        deg += x_valid(i, j - 1);
        deg += x_valid(i, j);
        deg += y_valid(i - 1, j);
        deg += y_valid(i, j);
        REQUIRE(deg >= 1);
        ++alo;
        expect += 1 + deg * (deg - 1) / 2;
      }
    CHECK(alo == static_cast<std::size_t>(n) * n - 2);
    CHECK(b.cnf.num_clauses() == expect);

    // The bundled schedule must be executable on the instance.
    CHECK_NOTHROW(validate_schedule(b.schedule, b.cnf));
    CHECK(!b.schedule.empty());
  }
}

TEST_CASE("benchgen: chessboard instances refute under their schedule", "[benchgen]") {
  BenchBundle b = gen_chess(4);
  SolveOutcome r = run_solver(b.cnf, ModeSel::Scheduled, {}, &b.schedule);
  REQUIRE(r.verdict.status == Status::Unsat);
  CHECK(check_proof(b.cnf, r.proof).accepted);
}

TEST_CASE("benchgen: sinz pigeonhole structure", "[benchgen]") {
  for (Lit n : {2, 3, 5, 9}) {
    BenchBundle b = gen_pigeon_sinz(n);
    CAPTURE(n);
    CHECK(b.cnf.num_vars == 2 * n * n + n);
    CHECK(b.cnf.num_clauses() == static_cast<std::size_t>(3 * n * n + 1));
    CHECK_NOTHROW(validate_schedule(b.schedule, b.cnf));
  }
  // Spot-check the clause families for n = 2: pigeons 1..3, holes 1..2.
  BenchBundle b = gen_pigeon_sinz(2);
  auto p = [](Lit i, Lit j) { return (i - 1) * 5 + 2 * j - 1; };
  auto s = [](Lit i, Lit j) { return (i - 1) * 5 + 2 * j; };
  const auto& cs = b.cnf.clauses;
  CHECK(cs[0] == Clause{p(1, 1), p(2, 1)});            // pigeon 1 somewhere
  CHECK(cs[1] == Clause{-p(1, 1), s(1, 1)});           // generate
  CHECK(cs[2] == Clause{-p(2, 1), s(2, 1)});
  // pigeon 2 group: ALO, then generate/propagate/suppress per hole
  CHECK(cs[3] == Clause{p(1, 2), p(2, 2)});
  CHECK(cs[4] == Clause{-p(1, 2), s(1, 2)});
  CHECK(cs[5] == Clause{-s(1, 1), s(1, 2)});
  CHECK(cs[6] == Clause{-p(1, 2), -s(1, 1)});
}

TEST_CASE("benchgen: sinz pigeonhole refutes under its schedule", "[benchgen]") {
  for (Lit n : {2, 3}) {
    BenchBundle b = gen_pigeon_sinz(n);
    SolveOutcome r = run_solver(b.cnf, ModeSel::Scheduled, {}, &b.schedule);
    CAPTURE(n);
    REQUIRE(r.verdict.status == Status::Unsat);
    CHECK(check_proof(b.cnf, r.proof).accepted);
  }
}

TEST_CASE("benchgen: direct pigeonhole", "[benchgen]") {
  for (Lit n : {1, 2, 3, 7}) {
    BenchBundle b = gen_pigeon_direct(n);
    CAPTURE(n);
    CHECK(b.cnf.num_vars == n * (n + 1));
    CHECK(b.cnf.num_clauses() ==
          static_cast<std::size_t>((n + 1) + n * ((n + 1) * n) / 2));
    CHECK(b.schedule.empty());
  }
  for (Lit n : {1, 2, 3}) {
    CAPTURE(n);
    CHECK_FALSE(cnf_satisfiable(gen_pigeon_direct(n).cnf));
  }
}

TEST_CASE("benchgen: urquhart families", "[benchgen]") {
  SECTION("explicit expander variant") {
    BenchBundle b = gen_urquhart_li(3);

    // Variables are exactly the deduplicated edges of the Margulis-style
    // graph, recomputed here independently.
    std::set<std::pair<Lit, Lit>> edges;
    Lit m = 3;
    auto vid = [m](Lit a, Lit r) { return a * m + r; };
    for (Lit a = 0; a < m; ++a)
      for (Lit c = 0; c < m; ++c) {
        Lit l = vid(a, c);
        edges.insert({l, vid(a, c)});
        edges.insert({l, vid((a + c) % m, c)});
        edges.insert({l, vid((a + c + 1) % m, c)});
        edges.insert({l, vid(a, (a + c) % m)});
        edges.insert({l, vid(a, (a + c + 1) % m)});
      }
    CHECK(b.cnf.num_vars == static_cast<Lit>(edges.size()));

    // Degree <= 5 per vertex: every clause is a XOR expansion row, width
    // equal to the vertex degree.
    std::size_t width_total = 0;
    for (const Clause& c : b.cnf.clauses) {
      REQUIRE(c.size() >= 1);
      REQUIRE(c.size() <= 5);
      width_total += c.size();
    }
    CHECK(width_total > 0);
  }

  SECTION("random matchings variant") {
    BenchBundle b = gen_urquhart_simon(3, 11);
    CHECK(b.cnf.num_vars >= 9);    // at least one matching survives dedup
    CHECK(b.cnf.num_vars <= 45);   // at most five disjoint matchings
    for (const Clause& c : b.cnf.clauses) REQUIRE(c.size() <= 5);

    CHECK(dimacs_bytes(gen_urquhart_simon(3, 11).cnf) == dimacs_bytes(b.cnf));
    CHECK(dimacs_bytes(gen_urquhart_simon(3, 12).cnf) != dimacs_bytes(b.cnf));
  }

  SECTION("refutation of the smallest expander instance") {
    BenchBundle b = gen_urquhart_li(3);
    std::mt19937_64 rng(3);
    SolveOptions opt;
    opt.level_to_ext = random_order(b.cnf.num_vars, rng);
    SolveOutcome r = run_solver(b.cnf, ModeSel::Bucket, opt);
    REQUIRE(r.verdict.status == Status::Unsat);
    CHECK(check_proof(b.cnf, r.proof).accepted);
  }
}

TEST_CASE("benchgen: reference instance sizes", "[benchgen]") {
  // The sizes used in the scaling experiments, fixed here so accidental
  // encoding drift is caught immediately.
  BenchBundle chess = gen_chess(340);
  CHECK(chess.cnf.num_vars == 230516);
  CHECK(chess.cnf.num_clauses() == 805112u);

  BenchBundle sinz = gen_pigeon_sinz(210);
  CHECK(sinz.cnf.num_vars == 88410);
  CHECK(sinz.cnf.num_clauses() == 132301u);

  BenchBundle par = gen_parity(100, 7);
  CHECK(par.cnf.num_vars == 298);
  CHECK(par.cnf.num_clauses() == 794u);
}

TEST_CASE("benchgen: parameter validation", "[benchgen]") {
  CHECK_THROWS_AS(gen_parity(1, 0), ParseError);
  CHECK_THROWS_AS(gen_chess(3), ParseError);   // odd
  CHECK_THROWS_AS(gen_chess(2), ParseError);   // too small
  CHECK_THROWS_AS(gen_pigeon_sinz(1), ParseError);
  CHECK_THROWS_AS(gen_pigeon_direct(0), ParseError);
  CHECK_THROWS_AS(gen_urquhart_li(2), ParseError);
  CHECK_THROWS_AS(gen_urquhart_simon(2, 0), ParseError);
}
