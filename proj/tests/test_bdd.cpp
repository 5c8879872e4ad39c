#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>
#include <sstream>

#include "certbdd/bdd.hpp"
#include "support/oracle.hpp"

using namespace certbdd;

namespace {

// A trace pre-loaded with a clause-free formula of `nv` variables, for tests
// that exercise the node store without any input clauses.
struct Fixture {
  std::ostringstream sink;
  Trace trace;
  Fixture(Lit nv, bool record = false) : trace(&sink) {
    if (record) trace.set_record(true);
    Cnf cnf;
    cnf.num_vars = nv;
    trace.load_inputs(cnf);
  }
};

// Collects every node reachable from `roots` (leaves excluded).
std::set<std::uint32_t> reachable(const Manager& mgr, std::vector<NodeRef> roots) {
  std::set<std::uint32_t> seen;
  while (!roots.empty()) {
    NodeRef r = roots.back();
    roots.pop_back();
    if (is_leaf(r) || seen.count(r.idx)) continue;
    seen.insert(r.idx);
    roots.push_back(mgr.hi(r));
    roots.push_back(mgr.lo(r));
  }
  return seen;
}

}  // namespace

TEST_CASE("bdd: leaves and var nodes", "[bdd]") {
  Fixture fx(3);
  Manager mgr(3, {}, fx.trace);

  CHECK(is_leaf(LEAF0));
  CHECK(is_leaf(LEAF1));
  CHECK(LEAF0 != LEAF1);

  NodeRef x2 = mgr.var_node(2);
  CHECK_FALSE(is_leaf(x2));
  CHECK(mgr.level_of(x2) == 2);
  CHECK(mgr.hi(x2) == LEAF1);
  CHECK(mgr.lo(x2) == LEAF0);
  CHECK(mgr.ext_of(x2) == 4);  // extension numbering continues after inputs

  std::vector<bool> val(4, false);
  val[2] = true;
  CHECK(mgr.eval(x2, val));
  val[2] = false;
  CHECK_FALSE(mgr.eval(x2, val));
  CHECK(mgr.eval(LEAF1, val));
  CHECK_FALSE(mgr.eval(LEAF0, val));

  CHECK_THROWS_AS(mgr.var_node(0), InternalError);
  CHECK_THROWS_AS(mgr.var_node(4), InternalError);
}

TEST_CASE("bdd: get_node is canonical", "[bdd]") {
  Fixture fx(3);
  Manager mgr(3, {}, fx.trace);

  NodeRef a = mgr.var_node(3);
  NodeRef n1 = mgr.get_node(1, a, LEAF0);
  NodeRef n2 = mgr.get_node(1, a, LEAF0);
  CHECK(n1 == n2);
  CHECK(mgr.stats().nodes_created == 2);  // a and n1 only

  SECTION("equal children collapse to the child") {
    CHECK(mgr.get_node(1, a, a) == a);
    CHECK(mgr.get_node(2, LEAF1, LEAF1) == LEAF1);
    CHECK(mgr.stats().nodes_created == 2);  // nothing new was built
  }
  SECTION("ordering violations are fatal") {
    CHECK_THROWS_AS(mgr.get_node(3, a, LEAF0), InternalError);   // not below
    CHECK_THROWS_AS(mgr.get_node(0, a, LEAF0), InternalError);   // bad level
    CHECK_THROWS_AS(mgr.get_node(4, LEAF1, LEAF0), InternalError);
    NodeRef top = mgr.get_node(2, LEAF1, a);
    CHECK_THROWS_AS(mgr.get_node(2, top, LEAF0), InternalError);  // same level
  }
}

TEST_CASE("bdd: variable orderings permute levels", "[bdd]") {
  Fixture fx(3);
  Manager mgr(3, {3, 1, 2}, fx.trace);

  CHECK(mgr.ext_at_level(1) == 3);
  CHECK(mgr.ext_at_level(2) == 1);
  CHECK(mgr.ext_at_level(3) == 2);
  CHECK(mgr.level_of_ext(3) == 1);
  CHECK(mgr.level_of_ext(1) == 2);
  CHECK(mgr.level_of_ext(2) == 3);

  NodeRef n3 = mgr.var_node(3);
  CHECK(mgr.level_of(n3) == 1);
  std::vector<bool> val(4, false);
  val[3] = true;
  CHECK(mgr.eval(n3, val));

  SECTION("non-permutations are rejected") {
    Fixture fy(3);
    CHECK_THROWS_AS(Manager(3, {1, 2}, fy.trace), InternalError);
    CHECK_THROWS_AS(Manager(3, {1, 2, 2}, fy.trace), InternalError);
    CHECK_THROWS_AS(Manager(3, {1, 2, 4}, fy.trace), InternalError);
    CHECK_THROWS_AS(Manager(3, {0, 1, 2}, fy.trace), InternalError);
  }
}

TEST_CASE("bdd: defining clauses follow the HD/LD/HU/LU scheme", "[bdd]") {
  Fixture fx(3, true);
  Manager mgr(3, {}, fx.trace);

  SECTION("a var node has only LD and HU") {
    NodeRef x = mgr.var_node(1);
    Lit u = mgr.ext_of(x);
    CHECK(mgr.defining_step(x, Def::HD) == 0);  // hi = LEAF1: tautological
    CHECK(mgr.defining_step(x, Def::LU) == 0);  // lo = LEAF0: tautological
    CHECK(mgr.defining_clause(x, Def::LD) == Clause{-u, 1});
    CHECK(mgr.defining_clause(x, Def::HU) == Clause{u, -1});
    CHECK_THROWS_AS(mgr.defining_clause(x, Def::HD), InternalError);
  }

  SECTION("an inner node with nonterminal children has all four, in order") {
    NodeRef b = mgr.var_node(2);
    NodeRef c = mgr.var_node(3);
    NodeRef n = mgr.get_node(1, b, c);
    Lit u = mgr.ext_of(n), eb = mgr.ext_of(b), ec = mgr.ext_of(c);
    StepId hd = mgr.defining_step(n, Def::HD);
    CHECK(mgr.defining_step(n, Def::LD) == hd + 1);
    CHECK(mgr.defining_step(n, Def::HU) == hd + 2);
    CHECK(mgr.defining_step(n, Def::LU) == hd + 3);
    CHECK(mgr.defining_clause(n, Def::HD) == Clause{-u, -1, eb});
    CHECK(mgr.defining_clause(n, Def::LD) == Clause{-u, 1, ec});
    CHECK(mgr.defining_clause(n, Def::HU) == Clause{u, -1, -eb});
    CHECK(mgr.defining_clause(n, Def::LU) == Clause{u, 1, -ec});

    // The recorded emission matches the reconstruction byte for byte.
    for (const auto& rec : fx.trace.records()) {
      if (rec.id == hd) CHECK(rec.lits == mgr.defining_clause(n, Def::HD));
      if (rec.id == hd + 3) CHECK(rec.lits == mgr.defining_clause(n, Def::LU));
      if (!rec.is_delete) CHECK(rec.is_extension);
    }
  }

  SECTION("LEAF0 children drop the down clause, LEAF1 the up clause") {
    NodeRef n = mgr.get_node(2, LEAF0, LEAF1);  // negation of var at level 2
    Lit u = mgr.ext_of(n);
    CHECK(mgr.defining_step(n, Def::LD) == 0);
    CHECK(mgr.defining_step(n, Def::HU) == 0);
    CHECK(mgr.defining_clause(n, Def::HD) == Clause{-u, -2});
    CHECK(mgr.defining_clause(n, Def::LU) == Clause{u, 2});
  }
}

TEST_CASE("bdd: defining clauses are sound under the function semantics", "[bdd]") {
  // Build a random layered DAG, then check that interpreting every extension
  // variable as its node's function satisfies every emitted defining clause,
  // for every assignment of the inputs.
  const Lit nv = 4;
  Fixture fx(nv, true);
  Manager mgr(nv, {}, fx.trace);
  std::mt19937_64 rng(20260816);

  std::vector<NodeRef> pool = {LEAF0, LEAF1};
  for (std::int32_t lev = nv; lev >= 1; --lev) {
    std::vector<NodeRef> here;
    for (int k = 0; k < 6; ++k) {
      NodeRef hi = pool[rng() % pool.size()];
      NodeRef lo = pool[rng() % pool.size()];
      if (hi == lo) continue;
      here.push_back(mgr.get_node(lev, hi, lo));
    }
    pool.insert(pool.end(), here.begin(), here.end());
  }

  auto nodes = reachable(mgr, pool);
  REQUIRE(!nodes.empty());
  Lit max_ext = nv;
  for (std::uint32_t idx : nodes) max_ext = std::max(max_ext, mgr.ext_of(NodeRef{idx}));

  for (std::uint32_t mask = 0; mask < (1u << nv); ++mask) {
    std::vector<bool> inputs(static_cast<std::size_t>(nv) + 1, false);
    for (Lit v = 1; v <= nv; ++v) inputs[static_cast<std::size_t>(v)] = (mask >> (v - 1)) & 1;
    std::vector<bool> full(static_cast<std::size_t>(max_ext) + 1, false);
    for (Lit v = 1; v <= nv; ++v) full[static_cast<std::size_t>(v)] = inputs[static_cast<std::size_t>(v)];
    for (std::uint32_t idx : nodes)
      full[static_cast<std::size_t>(mgr.ext_of(NodeRef{idx}))] = mgr.eval(NodeRef{idx}, inputs);

    for (const auto& rec : fx.trace.records()) {
      if (!rec.is_extension) continue;
      INFO("assignment mask " << mask << ", step " << rec.id);
      CHECK(testsupport::clause_satisfied(rec.lits, full));
    }
  }
}

TEST_CASE("bdd: eval matches the ITE semantics", "[bdd]") {
  Fixture fx(3);
  Manager mgr(3, {}, fx.trace);
  // f = (x1 AND x2) OR (NOT x1 AND x3), built by hand.
  NodeRef n2 = mgr.var_node(2);
  NodeRef n3 = mgr.var_node(3);
  NodeRef f = mgr.get_node(1, n2, n3);
  for (std::uint32_t mask = 0; mask < 8; ++mask) {
    std::vector<bool> val(4);
    for (Lit v = 1; v <= 3; ++v) val[static_cast<std::size_t>(v)] = (mask >> (v - 1)) & 1;
    bool expect = val[1] ? val[2] : val[3];
    CHECK(mgr.eval(f, val) == expect);
  }
  CHECK(mgr.bdd_size(f) == 3);
  CHECK(mgr.bdd_size(LEAF1) == 0);
  CHECK(mgr.bdd_size(n3) == 1);
}

TEST_CASE("bdd: refcounts guard against underflow", "[bdd]") {
  Fixture fx(2);
  Manager mgr(2, {}, fx.trace);
  NodeRef x = mgr.var_node(1);
  mgr.addref(x);
  mgr.addref(LEAF0);  // leaves ignore refcounting
  mgr.delref(LEAF1);
  mgr.delref(x);
  CHECK_THROWS_AS(mgr.delref(x), InternalError);
}

TEST_CASE("bdd: garbage collection reclaims unreachable nodes only", "[bdd]") {
  Fixture fx(4);
  Manager mgr(4, {}, fx.trace);

  NodeRef keep_child = mgr.var_node(4);
  NodeRef keep = mgr.get_node(2, keep_child, LEAF1);
  mgr.addref(keep);
  NodeRef junk1 = mgr.get_node(3, keep_child, LEAF0);
  NodeRef junk2 = mgr.get_node(1, junk1, keep);
  StepId junk1_ld = mgr.defining_step(junk1, Def::LD);
  StepId junk2_ld = mgr.defining_step(junk2, Def::LD);
  StepId keep_hd = mgr.defining_step(keep, Def::HD);
  StepId child_ld = mgr.defining_step(keep_child, Def::LD);
  REQUIRE(fx.trace.is_alive(junk1_ld));

  mgr.gc();

  CHECK(mgr.stats().gc_runs == 1);
  CHECK(mgr.stats().nodes_reclaimed == 2);
  CHECK(mgr.live_nodes() == 2);
  CHECK_FALSE(fx.trace.is_alive(junk1_ld));
  CHECK_FALSE(fx.trace.is_alive(junk2_ld));
  CHECK(fx.trace.is_alive(keep_hd));     // referenced root survives
  CHECK(fx.trace.is_alive(child_ld));    // and so do its descendants
  CHECK(mgr.level_of(keep) == 2);
  CHECK(mgr.hi(keep) == keep_child);

  // The unique table was rebuilt: live nodes are still canonical, and the
  // reclaimed slots are reused for new nodes.
  CHECK(mgr.get_node(2, keep_child, LEAF1) == keep);
  NodeRef fresh = mgr.get_node(3, keep_child, LEAF0);
  CHECK((fresh == junk1 || fresh == junk2));  // recycled slot
  CHECK(mgr.defining_step(fresh, Def::LD) != junk1_ld);  // new clauses
  CHECK(fx.trace.is_alive(mgr.defining_step(fresh, Def::LD)));
}

TEST_CASE("bdd: node ceiling raises LimitExceeded", "[bdd]") {
  Fixture fx(8);
  ManagerConfig cfg;
  cfg.max_nodes = 3;
  Manager mgr(8, {}, fx.trace, cfg);
  mgr.var_node(1);
  mgr.var_node(2);
  mgr.var_node(3);
  CHECK_THROWS_AS(mgr.var_node(4), LimitExceeded);
  CHECK(mgr.var_node(3) == mgr.var_node(3));  // lookups still work at the cap
}

TEST_CASE("bdd: unique table growth preserves canonicity", "[bdd]") {
  const Lit nv = 14;
  Fixture fx(nv);
  Manager mgr(nv, {}, fx.trace);
  std::mt19937_64 rng(99);

  // Push well past the initial 4096-slot table's growth threshold.
  std::vector<NodeRef> pool = {LEAF0, LEAF1};
  std::vector<NodeRef> all;
  for (std::int32_t lev = nv; lev >= 1 && all.size() < 6000; --lev) {
    std::size_t before = pool.size();
    for (int k = 0; k < 900 && all.size() < 6000; ++k) {
      NodeRef hi = pool[rng() % before];
      NodeRef lo = pool[rng() % before];
      if (hi == lo) continue;
      NodeRef n = mgr.get_node(lev, hi, lo);
      all.push_back(n);
    }
    pool.insert(pool.end(), all.end() - std::min<std::size_t>(all.size(), 400), all.end());
  }
  REQUIRE(all.size() >= 5000);

  // Every handle still resolves to the same canonical node.
  std::mt19937_64 rng2(99);
  pool = {LEAF0, LEAF1};
  std::size_t i = 0;
  for (std::int32_t lev = nv; lev >= 1 && i < all.size(); --lev) {
    std::size_t before = pool.size();
    for (int k = 0; k < 900 && i < all.size(); ++k) {
      NodeRef hi = pool[rng2() % before];
      NodeRef lo = pool[rng2() % before];
      if (hi == lo) continue;
      CHECK(mgr.get_node(lev, hi, lo) == all[i]);
      ++i;
    }
    pool.insert(pool.end(), all.begin() + static_cast<long>(i) - std::min<std::size_t>(i, 400),
                all.begin() + static_cast<long>(i));
  }
}
