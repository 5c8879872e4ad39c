// certbdd — proof-generating BDD engine deciding CNF unsatisfiability.
// Distributed under the MIT license; see LICENSE for the full text.
//
// Command-line front end.
//
//   certbdd solve [--mode linear|bucket|scheduled] [--proof FILE] ... CNF
//   certbdd check CNF PROOF
//   certbdd gen FAMILY -n SIZE [--seed N] [-o BASE]
//
// solve exits 20 on UNSAT (writing an LRAT proof when --proof is given),
// 10 on SAT, 30 when a resource ceiling was hit, and 1 on errors. check
// exits 0 on Accept and 1 on Reject. Statistics are printed as
// machine-parseable key=value lines.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "certbdd/benchgen.hpp"
#include "certbdd/checker.hpp"
#include "certbdd/dimacs.hpp"
#include "certbdd/lrat.hpp"
#include "certbdd/schedule.hpp"
#include "certbdd/solver.hpp"

namespace {

using namespace certbdd;

Cnf load_cnf(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_dimacs(in);
}

// Reads a variable-order file: one variable id per line, a permutation of
// 1..num_vars (validated by the manager).
std::vector<Lit> load_order(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<Lit> order;
  Lit v;
  while (in >> v) order.push_back(v);
  return order;
}

std::vector<Lit> random_order(Lit num_vars, std::uint64_t seed) {
  std::vector<Lit> order(static_cast<std::size_t>(num_vars));
  for (Lit i = 0; i < num_vars; ++i) order[static_cast<std::size_t>(i)] = i + 1;
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng() % i]);
  return order;
}

int run_solve(const std::string& cnf_path, const std::string& mode,
              const std::string& proof_path, const std::string& order_path,
              bool have_seed, std::uint64_t seed, const std::string& sched_path,
              std::uint64_t max_nodes, std::uint64_t max_steps,
              const std::string& dialect, bool delete_inputs, bool verbose) {
  Cnf cnf = load_cnf(cnf_path);

  SolveOptions opt;
  opt.max_nodes = max_nodes;
  opt.max_steps = max_steps;
  opt.delete_inputs = delete_inputs;
  if (!order_path.empty())
    opt.level_to_ext = load_order(order_path);
  else if (have_seed)
    opt.level_to_ext = random_order(cnf.num_vars, seed);

  Schedule sched;
  if (mode == "scheduled") {
    if (sched_path.empty())
      throw std::runtime_error("scheduled mode requires --schedule FILE");
    std::ifstream in(sched_path);
    if (!in) throw std::runtime_error("cannot open '" + sched_path + "'");
    sched = parse_schedule(in);
    validate_schedule(sched, cnf);
  }

  std::ofstream proof_file;
  std::ostream* sink = nullptr;
  if (!proof_path.empty()) {
    proof_file.open(proof_path);
    if (!proof_file) throw std::runtime_error("cannot open '" + proof_path + "'");
    sink = &proof_file;
  }

  Trace trace(sink, dialect == "compat" ? LratDialect::Compat
                                        : LratDialect::EmptyHints);
  Solver solver(cnf, trace, opt);

  auto t0 = std::chrono::steady_clock::now();
  Verdict verdict;
  if (mode == "linear")
    verdict = solver.solve_linear();
  else if (mode == "bucket")
    verdict = solver.solve_bucket();
  else if (mode == "scheduled")
    verdict = solver.solve_scheduled(sched);
  else
    throw std::runtime_error("unknown mode '" + mode + "'");
  std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;

  Trace::Summary sum = trace.finalize();
  if (sink) {
    proof_file.close();
    if (verdict.status != Status::Unsat)
      std::remove(proof_path.c_str());  // proofs only certify UNSAT
  }

  const ManagerStats& ms = solver.manager().stats();
  switch (verdict.status) {
    case Status::Unsat:
      std::cout << "verdict=UNSAT\n";
      break;
    case Status::Sat:
      std::cout << "verdict=SAT\n";
      break;
    case Status::Unknown:
      std::cout << "verdict=UNKNOWN\n";
      std::cout << "reason=" << verdict.reason << "\n";
      break;
  }
  std::cout << "variables=" << cnf.num_vars << "\n";
  std::cout << "clauses=" << cnf.num_clauses() << "\n";
  std::cout << "total-proof-clauses=" << sum.additions << "\n";
  std::cout << "max-live-clauses=" << sum.max_live << "\n";
  std::cout << "total-bdd-nodes=" << ms.nodes_created << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", dt.count());
  std::cout << "solve-seconds=" << buf << "\n";
  if (verbose) {
    std::cout << "gc-runs=" << ms.gc_runs << "\n";
    std::cout << "nodes-reclaimed=" << ms.nodes_reclaimed << "\n";
    std::cout << "cache-hits=" << ms.cache_hits << "\n";
    std::cout << "live-clauses-end=" << sum.live << "\n";
  }
  if (verdict.status == Status::Sat) {
    std::cout << "v";
    for (Lit v = 1; v <= cnf.num_vars; ++v) {
      std::cout << ' '
                << (verdict.witness[static_cast<std::size_t>(v)] ? v : -v);
      if (v % 20 == 0 && v != cnf.num_vars) std::cout << "\nv";
    }
    std::cout << " 0\n";
  }
  switch (verdict.status) {
    case Status::Unsat: return 20;
    case Status::Sat: return 10;
    case Status::Unknown: return 30;
  }
  return 1;
}

int run_check(const std::string& cnf_path, const std::string& proof_path) {
  Cnf cnf = load_cnf(cnf_path);
  std::ifstream proof(proof_path);
  if (!proof) throw std::runtime_error("cannot open '" + proof_path + "'");
  CheckResult r = check_lrat(cnf, proof);
  std::cout << "result=" << (r.accepted ? "Accept" : "Reject") << "\n";
  if (!r.accepted) {
    std::cout << "reason=" << to_string(r.reason) << "\n";
    if (!r.detail.empty()) std::cout << "detail=" << r.detail << "\n";
  }
  std::cout << "checked-additions=" << r.additions << "\n";
  std::cout << "max-live-clauses=" << r.max_live << "\n";
  return r.accepted ? 0 : 1;
}

int run_gen(const std::string& family, Lit n, std::uint64_t seed,
            std::string out_base) {
  BenchBundle b;
  if (family == "parity")
    b = gen_parity(n, seed);
  else if (family == "chess")
    b = gen_chess(n);
  else if (family == "pigeon-sinz")
    b = gen_pigeon_sinz(n);
  else if (family == "pigeon-direct")
    b = gen_pigeon_direct(n);
  else if (family == "urquhart-li")
    b = gen_urquhart_li(n);
  else if (family == "urquhart-simon")
    b = gen_urquhart_simon(n, seed);
  else
    throw std::runtime_error("unknown family '" + family + "'");

  if (out_base.empty()) out_base = family + "-" + std::to_string(n);
  {
    std::ofstream out(out_base + ".cnf");
    if (!out) throw std::runtime_error("cannot open '" + out_base + ".cnf'");
    write_dimacs(out, b.cnf, b.comments);
    std::cout << "cnf=" << out_base << ".cnf\n";
  }
  if (!b.schedule.empty()) {
    std::ofstream out(out_base + ".sched");
    if (!out) throw std::runtime_error("cannot open '" + out_base + ".sched'");
    write_schedule(out, b.schedule);
    std::cout << "schedule=" << out_base << ".sched\n";
  }
  if (!b.order.empty()) {
    std::ofstream out(out_base + ".order");
    if (!out) throw std::runtime_error("cannot open '" + out_base + ".order'");
    for (Lit v : b.order) out << v << "\n";
    std::cout << "order=" << out_base << ".order\n";
  }
  std::cout << "variables=" << b.cnf.num_vars << "\n";
  std::cout << "clauses=" << b.cnf.num_clauses() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BDD-based (un)satisfiability solver with LRAT proof output"};
  app.require_subcommand(1);

  // ----- solve -----
  std::string s_cnf, s_mode = "bucket", s_proof, s_order, s_sched;
  std::string s_dialect = "empty-hints";
  std::uint64_t s_seed = 0, s_max_nodes = 0, s_max_steps = 0;
  bool s_delete_inputs = false, s_verbose = false;
  CLI::App* solve = app.add_subcommand("solve", "decide a DIMACS CNF instance");
  solve->add_option("cnf", s_cnf, "DIMACS CNF input")->required();
  solve->add_option("--mode", s_mode, "evaluation mode")
      ->check(CLI::IsMember({"linear", "bucket", "scheduled"}));
  solve->add_option("--proof", s_proof, "LRAT output path (written on UNSAT)");
  auto* order_opt =
      solve->add_option("--order", s_order, "variable-order file (permutation)");
  auto* seed_opt =
      solve->add_option("--seed", s_seed, "random variable order from this seed");
  seed_opt->excludes(order_opt);
  solve->add_option("--schedule", s_sched, "schedule file for scheduled mode");
  solve->add_option("--max-nodes", s_max_nodes, "BDD node ceiling (0 = off)");
  solve->add_option("--max-steps", s_max_steps, "proof step ceiling (0 = off)");
  solve->add_option("--lrat-dialect", s_dialect,
                    "extension-clause hint style")
      ->check(CLI::IsMember({"empty-hints", "compat"}));
  solve->add_flag("--delete-inputs", s_delete_inputs,
                  "delete input clauses from the proof after their last use");
  solve->add_flag("-v,--verbose", s_verbose, "extra statistics");

  // ----- check -----
  std::string c_cnf, c_proof;
  CLI::App* check = app.add_subcommand("check", "verify an LRAT proof");
  check->add_option("cnf", c_cnf, "DIMACS CNF input")->required();
  check->add_option("proof", c_proof, "LRAT proof file")->required();

  // ----- gen -----
  std::string g_family, g_out;
  Lit g_n = 0;
  std::uint64_t g_seed = 0;
  CLI::App* gen = app.add_subcommand("gen", "generate a benchmark instance");
  gen->add_option("family", g_family,
                  "parity | chess | pigeon-sinz | pigeon-direct | "
                  "urquhart-li | urquhart-simon")
      ->required();
  gen->add_option("-n,--size", g_n, "instance size parameter")->required();
  gen->add_option("--seed", g_seed, "seed for randomized families");
  gen->add_option("-o,--output", g_out, "output base name");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed())
      return run_solve(s_cnf, s_mode, s_proof, s_order,
                       seed_opt->count() > 0, s_seed, s_sched, s_max_nodes,
                       s_max_steps, s_dialect, s_delete_inputs, s_verbose);
    if (check->parsed()) return run_check(c_cnf, c_proof);
    if (gen->parsed()) return run_gen(g_family, g_n, g_seed, g_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
