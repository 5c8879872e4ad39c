// certbdd — proof-generating BDD engine deciding CNF unsatisfiability.
// Distributed under the MIT license; see LICENSE for the full text.

#ifndef CERTBDD_BDD_HPP
#define CERTBDD_BDD_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "certbdd/cnf.hpp"
#include "certbdd/common.hpp"
#include "certbdd/trace.hpp"

namespace certbdd {

// Handle into the manager's node store. Indices 0 and 1 are the constant
// leaves; handles stay valid while the node is reachable from a referenced
// root (garbage collection never moves live nodes).
struct NodeRef {
  std::uint32_t idx = 0;
  friend bool operator==(NodeRef a, NodeRef b) { return a.idx == b.idx; }
  friend bool operator!=(NodeRef a, NodeRef b) { return a.idx != b.idx; }
};

inline constexpr NodeRef LEAF0{0};
inline constexpr NodeRef LEAF1{1};
inline bool is_leaf(NodeRef r) { return r.idx <= 1; }

// The four defining clauses of a node u = ITE(x, hi, lo), in emission order.
// With the extension literal written first (it is the blocked pivot):
//   HD: (-u, -x, ext(hi))   "x and u imply hi"     absent iff hi = LEAF1
//   LD: (-u,  x, ext(lo))                          absent iff lo = LEAF1
//   HU: ( u, -x, -ext(hi))  "x and hi imply u"     absent iff hi = LEAF0
//   LU: ( u,  x, -ext(lo))                         absent iff lo = LEAF0
// Leaf children drop their literal instead (LEAF0 in HD/LD, LEAF1 in HU/LU).
enum class Def : int { HD = 0, LD = 1, HU = 2, LU = 3 };

struct JustifiedNode {
  NodeRef node{};
  StepId step = 0;  // 0 = tautology sentinel (no justification needed)
};

struct ManagerConfig {
  std::uint64_t max_nodes = 0;     // ceiling on created nodes; 0 = unlimited
  std::uint64_t gc_interval = 262144;  // auto-GC after this many new nodes; 0 = off
};

struct ManagerStats {
  std::uint64_t nodes_created = 0;  // total get_node allocations (leaves excluded)
  std::uint64_t gc_runs = 0;
  std::uint64_t nodes_reclaimed = 0;
  std::uint64_t and_steps = 0;      // cache-missing nonterminal AND recursions
  std::uint64_t imply_steps = 0;
  std::uint64_t cache_hits = 0;
};

// Reduced ordered BDD manager with proof emission.
//
// Every nonterminal node carries a fresh extension variable together with
// the trace ids of its defining clauses, so operation results can be
// justified by RUP steps over those clauses. The unique table and the
// operation cache are open-addressed; the cache is lossy (a colliding
// insert overwrites, deferring deletion of the evicted justification to the
// next safe point). Garbage collection is mark-and-sweep from refcounted
// roots and deletes the defining clauses of reclaimed nodes.
class Manager {
 public:
  // `level_to_ext` maps each level 1..n to the external variable sitting
  // there (a permutation of 1..n); empty means the identity ordering.
  Manager(Lit num_vars, std::vector<Lit> level_to_ext, Trace& trace,
          ManagerConfig cfg = {})
      : trace_(trace), cfg_(cfg), nvars_(num_vars) {
    if (level_to_ext.empty()) {
      level_to_ext.resize(static_cast<std::size_t>(num_vars));
      for (Lit i = 0; i < num_vars; ++i) level_to_ext[static_cast<std::size_t>(i)] = i + 1;
    }
    CERTBDD_REQUIRE(static_cast<Lit>(level_to_ext.size()) == num_vars,
                    "ordering must be a permutation of 1..num_vars");
    ext_at_level_ = std::move(level_to_ext);
    level_of_ext_.assign(static_cast<std::size_t>(num_vars) + 1, 0);
    for (Lit lev = 1; lev <= num_vars; ++lev) {
      Lit ext = ext_at_level_[static_cast<std::size_t>(lev - 1)];
      CERTBDD_REQUIRE(ext >= 1 && ext <= num_vars && level_of_ext_[static_cast<std::size_t>(ext)] == 0,
                      "ordering must be a permutation of 1..num_vars");
      level_of_ext_[static_cast<std::size_t>(ext)] = static_cast<std::int32_t>(lev);
    }
    nodes_.resize(2);
    nodes_[0] = Node{kLeafLevel, LEAF0, LEAF0, 0, {0, 0, 0, 0}, 0};
    nodes_[1] = Node{kLeafLevel, LEAF1, LEAF1, 0, {0, 0, 0, 0}, 0};
    next_ext_ = num_vars + 1;
    table_.assign(kInitialTable, 0);
    cache_.assign(kInitialTable, CacheEntry{});
  }

  Manager(const Manager&) = delete;
  Manager& operator=(const Manager&) = delete;

  // ----------------------------------------------------------- node info --
  Lit num_vars() const { return nvars_; }
  std::int32_t level_of(NodeRef r) const { return node(r).level; }
  Lit ext_of(NodeRef r) const { return node(r).ext; }
  NodeRef hi(NodeRef r) const { return node(r).hi; }
  NodeRef lo(NodeRef r) const { return node(r).lo; }
  Lit ext_at_level(std::int32_t lev) const {
    return ext_at_level_[static_cast<std::size_t>(lev - 1)];
  }
  std::int32_t level_of_ext(Lit ext) const {
    CERTBDD_REQUIRE(ext >= 1 && ext <= nvars_, "external variable out of range");
    return level_of_ext_[static_cast<std::size_t>(ext)];
  }
  StepId defining_step(NodeRef r, Def which) const {
    return node(r).defining[static_cast<std::size_t>(which)];
  }

  // Reconstructs the body of a defining clause from the node fields.
  // Valid only when the corresponding step id is nonzero.
  Clause defining_clause(NodeRef r, Def which) const {
    const Node& n = node(r);
    CERTBDD_REQUIRE(n.defining[static_cast<std::size_t>(which)] != 0,
                    "requested defining clause is tautological/absent");
    Lit u = n.ext;
    Lit x = ext_at_level(n.level);
    Clause c;
    switch (which) {
      case Def::HD:
        c = {-u, -x};
        if (!is_leaf(n.hi)) c.push_back(ext_of(n.hi));
        break;
      case Def::LD:
        c = {-u, x};
        if (!is_leaf(n.lo)) c.push_back(ext_of(n.lo));
        break;
      case Def::HU:
        c = {u, -x};
        if (!is_leaf(n.hi)) c.push_back(-ext_of(n.hi));
        break;
      case Def::LU:
        c = {u, x};
        if (!is_leaf(n.lo)) c.push_back(-ext_of(n.lo));
        break;
    }
    return c;
  }

  // ----------------------------------------------------------- node ctor --
  // Returns the unique reduced node ITE(var-at-level, hi, lo). A brand-new
  // node receives a fresh extension variable and its defining clauses are
  // emitted immediately (HD, LD, HU, LU order; tautologies skipped).
  NodeRef get_node(std::int32_t level, NodeRef hi_ref, NodeRef lo_ref) {
    CERTBDD_REQUIRE(level >= 1 && level <= nvars_, "level out of range");
    CERTBDD_REQUIRE(level < level_of(hi_ref) && level < level_of(lo_ref),
                    "ordering violation: child level not below node level");
    if (hi_ref == lo_ref) return hi_ref;

    std::uint64_t h = node_hash(level, hi_ref, lo_ref);
    std::size_t mask = table_.size() - 1;
    std::size_t slot = static_cast<std::size_t>(h) & mask;
    while (table_[slot] != 0) {
      const Node& cand = nodes_[table_[slot]];
      if (cand.level == level && cand.hi == hi_ref && cand.lo == lo_ref)
        return NodeRef{table_[slot]};
      slot = (slot + 1) & mask;
    }

    if (cfg_.max_nodes != 0 && stats_.nodes_created >= cfg_.max_nodes)
      throw LimitExceeded("BDD node ceiling of " + std::to_string(cfg_.max_nodes) +
                          " nodes exceeded");

    std::uint32_t idx;
    if (!free_.empty()) {
      idx = free_.back();
      free_.pop_back();
    } else {
      idx = static_cast<std::uint32_t>(nodes_.size());
      nodes_.emplace_back();
    }
    Node& n = nodes_[idx];
    n = Node{level, hi_ref, lo_ref, next_ext_++, {0, 0, 0, 0}, 0};

    emit_defining(n);
    ++stats_.nodes_created;
    ++created_since_gc_;
    ++live_nodes_;

    table_[slot] = idx;
    ++table_count_;
    if (table_count_ * 10 >= table_.size() * 7) grow_table();
    return NodeRef{idx};
  }

  // BDD of a single positive variable.
  NodeRef var_node(Lit ext) {
    CERTBDD_REQUIRE(ext >= 1 && ext <= nvars_, "variable out of range");
    return get_node(level_of_ext(ext), LEAF1, LEAF0);
  }

  // ------------------------------------------------------------ refcounts --
  void addref(NodeRef r) {
    if (is_leaf(r)) return;
    ++nodes_[r.idx].refcount;
  }
  void delref(NodeRef r) {
    if (is_leaf(r)) return;
    CERTBDD_REQUIRE(nodes_[r.idx].refcount > 0, "refcount underflow");
    --nodes_[r.idx].refcount;
  }

  // -------------------------------------------------------------- GC -----
  // Mark-and-sweep from refcounted roots. Clears the whole operation cache
  // (deleting the justification steps it owned) and deletes the defining
  // clauses of every reclaimed node. Must only run at safe points: no
  // operation in flight, every root the caller needs refcounted.
  void gc() {
    trace_.flush_deferred();
    std::vector<StepId> dead_steps;
    for (CacheEntry& e : cache_) {
      if (e.used && e.step != 0) dead_steps.push_back(e.step);
      e = CacheEntry{};
    }

    std::vector<bool> mark(nodes_.size(), false);
    mark[0] = mark[1] = true;
    std::vector<std::uint32_t> stack;
    for (std::uint32_t i = 2; i < nodes_.size(); ++i)
      if (nodes_[i].level != kFreeLevel && nodes_[i].refcount > 0) stack.push_back(i);
    while (!stack.empty()) {
      std::uint32_t i = stack.back();
      stack.pop_back();
      if (mark[i]) continue;
      mark[i] = true;
      if (!mark[nodes_[i].hi.idx]) stack.push_back(nodes_[i].hi.idx);
      if (!mark[nodes_[i].lo.idx]) stack.push_back(nodes_[i].lo.idx);
    }

    for (std::uint32_t i = 2; i < nodes_.size(); ++i) {
      Node& n = nodes_[i];
      if (n.level == kFreeLevel || mark[i]) continue;
      for (StepId d : n.defining)
        if (d != 0) dead_steps.push_back(d);
      n.level = kFreeLevel;
      free_.push_back(i);
      --live_nodes_;
      ++stats_.nodes_reclaimed;
    }
    trace_.emit_delete(dead_steps);
    rebuild_table();
    created_since_gc_ = 0;
    ++stats_.gc_runs;
  }

  void maybe_gc() {
    if (cfg_.gc_interval != 0 && created_since_gc_ >= cfg_.gc_interval) gc();
  }

  // --------------------------------------------------------------- stats --
  const ManagerStats& stats() const { return stats_; }
  std::uint64_t live_nodes() const { return live_nodes_; }
  Trace& trace() { return trace_; }

  // Number of nonterminal nodes in the subgraph rooted at r (test helper).
  std::size_t bdd_size(NodeRef r) const {
    if (is_leaf(r)) return 0;
    std::vector<std::uint32_t> stack{r.idx};
    std::vector<bool> seen(nodes_.size(), false);
    std::size_t count = 0;
    while (!stack.empty()) {
      std::uint32_t i = stack.back();
      stack.pop_back();
      if (i <= 1 || seen[i]) continue;
      seen[i] = true;
      ++count;
      stack.push_back(nodes_[i].hi.idx);
      stack.push_back(nodes_[i].lo.idx);
    }
    return count;
  }

  // Evaluates the function under a total assignment of the external
  // variables (`value[v]` for v in 1..num_vars; index 0 unused).
  bool eval(NodeRef r, const std::vector<bool>& value) const {
    while (!is_leaf(r)) {
      const Node& n = node(r);
      r = value[static_cast<std::size_t>(ext_at_level(n.level))] ? n.hi : n.lo;
    }
    return r == LEAF1;
  }

  // ------------------------------------------------- proof-emitting ops --
  // Defined in apply.hpp.
  JustifiedNode clause_to_bdd(const Clause& clause, StepId input_step);
  JustifiedNode and_apply(NodeRef u, NodeRef v);
  StepId imply_check(NodeRef u, NodeRef v);
  NodeRef exists(NodeRef u, const std::vector<Lit>& ext_vars);
  NodeRef or_node(NodeRef u, NodeRef v);  // proof-free (used by exists)

 private:
  friend struct ManagerTestPeek;

  static constexpr std::int32_t kLeafLevel = std::numeric_limits<std::int32_t>::max();
  static constexpr std::int32_t kFreeLevel = -1;
  static constexpr std::size_t kInitialTable = 1u << 12;

  struct Node {
    std::int32_t level = kFreeLevel;
    NodeRef hi{}, lo{};
    Lit ext = 0;
    std::array<StepId, 4> defining{0, 0, 0, 0};
    std::uint32_t refcount = 0;
  };

  enum class Op : std::uint8_t { And = 1, Or = 2, Imply = 3, Exists = 4 };

  struct CacheEntry {
    std::uint8_t op = 0;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    NodeRef result{};
    StepId step = 0;
    bool used = false;
  };

  const Node& node(NodeRef r) const { return nodes_[r.idx]; }
  Node& node(NodeRef r) { return nodes_[r.idx]; }

  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }
  static std::uint64_t node_hash(std::int32_t level, NodeRef hi_ref, NodeRef lo_ref) {
    std::uint64_t h = mix(static_cast<std::uint64_t>(level));
    h = mix(h ^ (static_cast<std::uint64_t>(hi_ref.idx) << 1));
    h = mix(h ^ (static_cast<std::uint64_t>(lo_ref.idx) << 1 | 1));
    return h;
  }
  static std::uint64_t cache_hash(Op op, std::uint32_t a, std::uint32_t b) {
    std::uint64_t h = mix(static_cast<std::uint64_t>(op) * 0x100000001b3ULL);
    h = mix(h ^ a);
    h = mix(h ^ (static_cast<std::uint64_t>(b) << 16));
    return h;
  }

  void grow_table() {
    std::vector<std::uint32_t> old;
    old.swap(table_);
    table_.assign(old.size() * 2, 0);
    table_count_ = 0;
    for (std::uint32_t idx : old)
      if (idx != 0) reinsert(idx);
    if (cache_.size() < table_.size()) grow_cache();
  }

  void rebuild_table() {
    std::fill(table_.begin(), table_.end(), 0);
    table_count_ = 0;
    for (std::uint32_t i = 2; i < nodes_.size(); ++i)
      if (nodes_[i].level != kFreeLevel) reinsert(i);
  }

  void reinsert(std::uint32_t idx) {
    const Node& n = nodes_[idx];
    std::size_t mask = table_.size() - 1;
    std::size_t slot = static_cast<std::size_t>(node_hash(n.level, n.hi, n.lo)) & mask;
    while (table_[slot] != 0) slot = (slot + 1) & mask;
    table_[slot] = idx;
    ++table_count_;
  }

  void grow_cache() {
    std::vector<CacheEntry> old;
    old.swap(cache_);
    cache_.assign(old.size() * 2, CacheEntry{});
    for (const CacheEntry& e : old) {
      if (!e.used) continue;
      CacheEntry& slot = cache_slot(static_cast<Op>(e.op), e.a, e.b);
      if (slot.used && slot.step != 0) trace_.defer_delete(slot.step);
      slot = e;
    }
  }

  CacheEntry& cache_slot(Op op, std::uint32_t a, std::uint32_t b) {
    std::size_t mask = cache_.size() - 1;
    return cache_[static_cast<std::size_t>(cache_hash(op, a, b)) & mask];
  }

  bool cache_get(Op op, std::uint32_t a, std::uint32_t b, NodeRef& result,
                 StepId& step) {
    const CacheEntry& e = cache_slot(op, a, b);
    if (!e.used || e.op != static_cast<std::uint8_t>(op) || e.a != a || e.b != b)
      return false;
    result = e.result;
    step = e.step;
    ++stats_.cache_hits;
    return true;
  }

  void cache_put(Op op, std::uint32_t a, std::uint32_t b, NodeRef result,
                 StepId step) {
    CacheEntry& e = cache_slot(op, a, b);
    if (e.used && e.step != 0 && e.step != step) trace_.defer_delete(e.step);
    e = CacheEntry{static_cast<std::uint8_t>(op), a, b, result, step, true};
  }

  // Emits the (up to four) defining clauses of a fresh node in HD, LD, HU,
  // LU order, extension literal first. HU and LU name the already-added
  // HD/LD as their resolvent candidates so the strict-compat dialect can
  // list them as negative hints.
  void emit_defining(Node& n) {
    Lit u = n.ext;
    Lit x = ext_at_level(n.level);
    std::vector<Trace::ExtensionClause> batch;
    batch.reserve(4);
    std::array<int, 4> batch_pos{-1, -1, -1, -1};
    std::vector<int> down_refs;  // batch indices of HD/LD

    if (n.hi != LEAF1) {
      Clause c{-u, -x};
      if (!is_leaf(n.hi)) c.push_back(ext_of(n.hi));
      batch_pos[0] = static_cast<int>(batch.size());
      down_refs.push_back(batch_pos[0]);
      batch.push_back({std::move(c), {}});
    }
    if (n.lo != LEAF1) {
      Clause c{-u, x};
      if (!is_leaf(n.lo)) c.push_back(ext_of(n.lo));
      batch_pos[1] = static_cast<int>(batch.size());
      down_refs.push_back(batch_pos[1]);
      batch.push_back({std::move(c), {}});
    }
    if (n.hi != LEAF0) {
      Clause c{u, -x};
      if (!is_leaf(n.hi)) c.push_back(-ext_of(n.hi));
      batch_pos[2] = static_cast<int>(batch.size());
      batch.push_back({std::move(c), down_refs});
    }
    if (n.lo != LEAF0) {
      Clause c{u, x};
      if (!is_leaf(n.lo)) c.push_back(-ext_of(n.lo));
      batch_pos[3] = static_cast<int>(batch.size());
      batch.push_back({std::move(c), down_refs});
    }

    std::vector<StepId> ids = trace_.emit_extension(batch);
    for (int k = 0; k < 4; ++k)
      n.defining[static_cast<std::size_t>(k)] =
          batch_pos[static_cast<std::size_t>(k)] >= 0
              ? ids[static_cast<std::size_t>(batch_pos[static_cast<std::size_t>(k)])]
              : 0;
  }

  // ------------------------------------------------ justification helpers --
  // (bodies in apply.hpp)
  struct Cand {
    StepId id;
    Clause lits;
  };
  JustifiedNode and_rec(NodeRef u, NodeRef v);
  StepId imply_rec(NodeRef u, NodeRef v);
  NodeRef or_rec(NodeRef u, NodeRef v);
  NodeRef exists_rec(NodeRef u, std::uint32_t setid);
  StepId justify(const Clause& target, Lit x_ext, std::vector<Cand> high,
                 std::vector<Cand> low, bool high_taut, bool low_taut);
  static bool filter_rup(const Clause& target, const std::vector<Cand>& cands,
                         std::vector<StepId>& hints_out);
  std::uint32_t intern_qset(std::vector<std::int32_t> levels);

  struct RefGuard {
    Manager& m;
    NodeRef r;
    RefGuard(Manager& mgr, NodeRef ref) : m(mgr), r(ref) { m.addref(r); }
    ~RefGuard() { m.delref(r); }
  };

  Trace& trace_;
  ManagerConfig cfg_;
  Lit nvars_;
  std::vector<Lit> ext_at_level_;
  std::vector<std::int32_t> level_of_ext_;
  Lit next_ext_ = 0;

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> free_;
  std::vector<std::uint32_t> table_;
  std::size_t table_count_ = 0;
  std::vector<CacheEntry> cache_;

  std::vector<std::vector<std::int32_t>> qsets_;
  std::map<std::vector<std::int32_t>, std::uint32_t> qset_ids_;

  std::uint64_t created_since_gc_ = 0;
  std::uint64_t live_nodes_ = 0;
  ManagerStats stats_;
};

}  // namespace certbdd

#include "certbdd/apply.hpp"

#endif  // CERTBDD_BDD_HPP
