// wrcomm: iterated wreath products of cyclic groups as tree portraits,
// derived-subgroup membership by parity criteria, and constructive
// single-commutator witnesses, cross-checked against a brute-force oracle.
//
// Exit codes: 0 success, 1 negative verdict, 2 input error, 3 internal
// invariant violation.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wrcomm/wrcomm.hpp"

namespace {

using namespace wrcomm;

constexpr int exit_ok = 0;
constexpr int exit_negative = 1;
constexpr int exit_input = 2;
constexpr int exit_internal = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgumentError("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgumentError("cannot open output file: " + path);
  out << content;
}

uint64_t guard_from_env() {
  if (const char* e = std::getenv("WRCOMM_GUARD")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(e, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
    std::cerr << "warning: ignoring malformed WRCOMM_GUARD\n";
  }
  return default_enumeration_guard;
}

groups::GroupKind parse_group(const std::string& name, bool& binary_only) {
  binary_only = false;
  if (name == "wreath") return groups::GroupKind::FullWreath;
  if (name == "sylow-s") {
    binary_only = true;  // Syl_2 S_{2^k} is the full binary tower
    return groups::GroupKind::FullWreath;
  }
  if (name == "sylow-a") return groups::GroupKind::SylowAlt;
  if (name == "derived-wreath") return groups::GroupKind::DerivedFullWreath;
  if (name == "derived-sylow-a") return groups::GroupKind::DerivedSylowAlt;
  throw InvalidArgumentError("unknown group kind: " + name);
}

// Signature resolution: header and flag must agree when both are present.
AritySignature resolve_signature(
    const std::optional<AritySignature>& flag,
    const std::vector<std::optional<AritySignature>>& headers) {
  std::optional<AritySignature> sig = flag;
  for (const auto& h : headers) {
    if (!h) continue;
    if (sig && *sig != *h)
      throw InvalidArgumentError("conflicting signatures: (" +
                                 sig->to_string() + ") vs file header (" +
                                 h->to_string() + ")");
    if (!sig) sig = h;
  }
  if (!sig)
    throw InvalidArgumentError(
        "no signature given: pass --sig or add a 'sig:' header line");
  return *sig;
}

struct LoadedElement {
  TreeAut elem;
  std::optional<AritySignature> header;
};

TreeAut load_element(const std::string& path,
                     const std::optional<AritySignature>& flag_sig) {
  const wrformat::ElementDocument doc =
      wrformat::split_element_document(read_file(path));
  const AritySignature sig = resolve_signature(flag_sig, {doc.sig});
  return wrformat::parse_element(doc.body, sig);
}

void print_profile(std::ostream& os, const TreeAut& g, bool verbose) {
  const LevelIndexProfile prof = level_index_profile(g);
  const AritySignature& sig = g.signature();
  os << std::setw(5) << "level" << std::setw(7) << "arity" << std::setw(10)
     << "vertices" << std::setw(7) << "index";
  if (verbose) os << "  per level-1 subtree";
  os << "\n";
  for (uint32_t l = 0; l < sig.depth(); ++l) {
    os << std::setw(5) << l << std::setw(7) << sig.arity(l) << std::setw(10)
       << sig.vertices_at(l) << std::setw(7) << prof.counts[l];
    if (verbose && l >= 1) {
      os << "  [";
      for (size_t i = 0; i < prof.per_subtree[l].size(); ++i)
        os << (i ? " " : "") << prof.per_subtree[l][i];
      os << "]";
    }
    os << "\n";
  }
}

int run_mul(const std::vector<std::string>& inputs, const std::string& out,
            const std::optional<AritySignature>& flag_sig, bool verbose) {
  std::vector<wrformat::ElementDocument> docs;
  for (const auto& p : inputs)
    docs.push_back(wrformat::split_element_document(read_file(p)));
  const AritySignature sig =
      resolve_signature(flag_sig, {docs[0].sig, docs[1].sig});
  const TreeAut g = wrformat::parse_element(docs[0].body, sig);
  const TreeAut h = wrformat::parse_element(docs[1].body, sig);
  const TreeAut prod = multiply(g, h);
  if (verbose && sig.leaf_count() <= 4096) {
    const auto pg = oracle::to_leaf_perm(g);
    const auto ph = oracle::to_leaf_perm(h);
    const auto composed = oracle::compose(pg, ph);
    const auto direct = oracle::to_leaf_perm(prod);
    std::cerr << "leaf action of product:  " << oracle::cycle_notation(direct)
              << "\n"
              << "oracle composition:      " << oracle::cycle_notation(composed)
              << "\n";
    if (direct != composed)
      throw VerificationError("product disagrees with oracle composition");
  }
  write_output(out, wrformat::format_element_document(prod));
  return exit_ok;
}

int run_check(const std::string& input, const std::string& group,
              const std::optional<AritySignature>& flag_sig, bool verbose) {
  bool binary_only = false;
  const groups::GroupKind kind = parse_group(group, binary_only);
  const TreeAut g = load_element(input, flag_sig);
  const AritySignature& sig = g.signature();
  if ((binary_only || kind == groups::GroupKind::SylowAlt ||
       kind == groups::GroupKind::DerivedSylowAlt) &&
      !sig.all_binary())
    throw InvalidArgumentError("group '" + group +
                               "' requires an all-binary signature");
  std::cout << "signature: " << sig.to_string() << "\n";
  print_profile(std::cout, g, verbose);

  bool member = true;
  std::cout << "criteria:\n";
  auto show = [](const char* name, bool ok) {
    std::cout << "  " << name << ": " << (ok ? "member" : "NOT a member")
              << "\n";
  };
  switch (kind) {
    case groups::GroupKind::FullWreath:
      show("portrait over the signature", true);
      break;
    case groups::GroupKind::SylowAlt: {
      const auto v = groups::gk_verdicts(g);
      show(v.first_name, v.first);
      show(v.second_name, v.second);
      member = groups::is_in_Gk(g);
      break;
    }
    case groups::GroupKind::DerivedFullWreath: {
      if (sig.all_binary()) {
        const auto v = groups::bk_derived_verdicts(g);
        show(v.first_name, v.first);
        show(v.second_name, v.second);
        if (v.first != v.second)
          throw VerificationError("derived criteria disagree");
        member = v.first;
        if (!member) {
          const auto rep = groups::check_Bk_derived(g);
          std::cout << "  first failure: " << rep.reason << "\n";
        }
      } else {
        const auto rep = groups::check_wreath_derived(g);
        show("wreath recursion (ordered section product)", rep.member);
        if (!rep.member) std::cout << "  first failure: " << rep.reason << "\n";
        member = rep.member;
      }
      break;
    }
    case groups::GroupKind::DerivedSylowAlt: {
      const auto v = groups::gk_derived_verdicts(g);
      show(v.first_name, v.first);
      show(v.second_name, v.second);
      const auto rep = groups::check_Gk_derived(g);
      member = rep.member;
      if (!member) std::cout << "  first failure: " << rep.reason << "\n";
      break;
    }
  }
  std::cout << "verdict: " << (member ? "member" : "not a member") << " of "
            << group << "\n";
  return member ? exit_ok : exit_negative;
}

int run_solve(const std::string& input, const std::string& group,
              const std::string& out,
              const std::optional<AritySignature>& flag_sig) {
  bool binary_only = false;
  const groups::GroupKind kind = parse_group(group, binary_only);
  const TreeAut w = load_element(input, flag_sig);
  solver::CommutatorWitness wit;
  if (kind == groups::GroupKind::DerivedSylowAlt) {
    wit = solver::solve_Gk_derived(w);
  } else if (kind == groups::GroupKind::DerivedFullWreath) {
    wit = w.signature().all_binary() ? solver::solve_Bk_derived(w)
                                     : solver::solve_cyclic_tower(w);
  } else {
    throw InvalidArgumentError(
        "solve needs a derived group kind (derived-wreath or "
        "derived-sylow-a)");
  }
  std::cerr << "recursion depth: " << wit.recursion_depth << "\n"
            << "a in sylow-alt:  " << (wit.a_in_sylow_alt ? "true" : "false")
            << "\n"
            << "b in sylow-alt:  " << (wit.b_in_sylow_alt ? "true" : "false")
            << "\n";
  write_output(out, wrformat::export_witness(wit));
  return exit_ok;
}

struct SuiteResult {
  int checks = 0, failures = 0;
  void note(const std::string& what, bool ok) {
    ++checks;
    if (!ok) ++failures;
    std::cout << "  [" << (ok ? "ok" : "FAIL") << "] " << what << "\n";
  }
};

int run_oracle_verify(const std::string& sig_csv, const std::string& group,
                      const std::string& suite, uint64_t guard) {
  const AritySignature sig = wrformat::parse_signature_csv(sig_csv);
  bool binary_only = false;
  groups::GroupKind kind = parse_group(group, binary_only);
  if (kind != groups::GroupKind::FullWreath &&
      kind != groups::GroupKind::SylowAlt)
    throw InvalidArgumentError(
        "oracle-verify takes the base group (wreath, sylow-s or sylow-a)");
  const groups::GroupId id(kind, sig);
  const bool sylow = kind == groups::GroupKind::SylowAlt;
  const auto want = [&suite](const char* s) {
    return suite == "all" || suite == s;
  };
  SuiteResult res;

  std::vector<TreeAut> elems = oracle::enumerate_group(id, guard);
  if (want("enum")) {
    std::cout << "group order: " << elems.size() << "\n";
    const auto expect = groups::group_order(id);
    res.note("order matches the closed formula",
             expect && *expect == elems.size());
    if (sylow) {
      bool parity_ok = true;
      for (const TreeAut& g : elems)
        parity_ok &= oracle::permutation_parity(oracle::to_leaf_perm(g)) ==
                     oracle::Parity::Even;
      res.note("every element acts evenly on the leaves", parity_ok);
    }
  }

  const std::vector<TreeAut> derived =
      oracle::derived_subgroup_closure(groups::standard_generators(id, guard),
                                       guard);
  std::cout << "derived subgroup order: " << derived.size() << "\n";
  if (derived.size() <= 16) {
    std::cout << "derived subgroup elements:\n";
    std::vector<std::string> names;
    for (const TreeAut& w : derived)
      names.push_back(oracle::cycle_notation(oracle::to_leaf_perm(w)));
    std::sort(names.begin(), names.end());
    for (const auto& n : names) std::cout << "  " << n << "\n";
  }

  if (want("criteria")) {
    oracle::TreeAutSet in_derived(derived.begin(), derived.end());
    bool agree = true;
    const groups::GroupId did(sylow ? groups::GroupKind::DerivedSylowAlt
                                    : groups::GroupKind::DerivedFullWreath,
                              sig);
    for (const TreeAut& g : elems)
      agree &= groups::is_member(did, g) == (in_derived.count(g) != 0);
    res.note("membership criteria agree with the closure on every element",
             agree);
  }

  if (want("commutators")) {
    try {
      const std::vector<TreeAut> cs = oracle::commutator_set(elems);
      res.note("commutator set equals the derived subgroup", cs == derived);
    } catch (const PairCapExceededError& e) {
      std::cout << "  [skip] commutator set: " << e.what() << "\n";
    }
  }

  if (want("solve")) {
    size_t solved = 0;
    bool ok = true;
    for (const TreeAut& w : derived) {
      solver::CommutatorWitness wit;
      if (sylow) wit = solver::solve_Gk_derived(w);
      else if (sig.all_binary()) wit = solver::solve_Bk_derived(w);
      else wit = solver::solve_cyclic_tower(w);
      ok &= commutator(wit.a, wit.b) == w;
      if (sylow) ok &= wit.a_in_sylow_alt && wit.b_in_sylow_alt;
      else if (sig.all_binary()) ok &= wit.a_in_sylow_alt;
      ++solved;
    }
    res.note("solver produced a verified witness for all " +
                 std::to_string(solved) + " derived elements",
             ok);
  }

  std::cout << (res.failures == 0 ? "suite ok" : "suite FAILED") << " ("
            << res.checks << " checks)\n";
  return res.failures == 0 ? exit_ok : exit_negative;
}

int run_bench(const std::string& sig_csv, const std::string& suite, int reps,
              const std::string& csv_path, uint64_t seed) {
  const AritySignature sig = wrformat::parse_signature_csv(sig_csv);
  std::ostringstream csv;
  csv << bench::csv_header() << "\n";
  if (reps <= 0) {  // empty table
    write_output(csv_path, csv.str());
    return exit_ok;
  }
  std::mt19937_64 rng(seed);
  const auto want = [&suite](const char* s) {
    return suite == "all" || suite == s;
  };
  if (want("multiply")) {
    TreeAut g = random_element(sig, rng), h = random_element(sig, rng);
    TreeAut out(sig);
    MulScratch s;
    const auto t =
        bench::time_op(reps, [&] { multiply_into(out, g, h, s); });
    csv << bench::csv_row("multiply", sig.to_string(), t) << "\n";
  }
  if (want("inverse")) {
    TreeAut g = random_element(sig, rng);
    TreeAut out(sig);
    MulScratch s;
    const auto t = bench::time_op(reps, [&] { inverse_into(out, g, s); });
    csv << bench::csv_row("inverse", sig.to_string(), t) << "\n";
  }
  if (want("solve")) {
    const groups::GroupId id(groups::GroupKind::DerivedFullWreath, sig);
    std::vector<TreeAut> targets;
    for (int i = 0; i < std::max(reps, 0); ++i)
      targets.push_back(groups::sample_derived(id, rng));
    int i = 0;
    const auto t = bench::time_op(reps, [&] {
      const TreeAut& w = targets[i++];
      const solver::CommutatorWitness wit =
          sig.all_binary() ? solver::solve_Bk_derived(w)
                           : solver::solve_cyclic_tower(w);
      if (commutator(wit.a, wit.b) != w)
        throw VerificationError("bench: witness failed");
    });
    csv << bench::csv_row("solve", sig.to_string(), t) << "\n";
  }
  write_output(csv_path, csv.str());
  return exit_ok;
}

int run_example_a8() {
  const AritySignature sig = AritySignature::binary(3);
  const groups::GroupId g3(groups::GroupKind::SylowAlt, sig);
  const std::vector<TreeAut> elems = oracle::enumerate_group(g3);
  std::cout << "|Syl2 A8| = " << elems.size() << "\n";

  const std::vector<TreeAut> derived =
      oracle::derived_subgroup_closure(groups::standard_generators(g3));
  std::vector<std::string> names;
  for (const TreeAut& w : derived)
    names.push_back(oracle::cycle_notation(oracle::to_leaf_perm(w)));
  std::sort(names.begin(), names.end());
  std::cout << "derived subgroup, order " << derived.size() << ":\n";
  for (const auto& n : names) std::cout << "  " << n << "\n";

  // the known element list of (Syl2 A8)'
  std::vector<std::string> expected = {
      "()",
      "(13)(24)(57)(68)",
      "(12)(34)",
      "(14)(23)(57)(68)",
      "(56)(78)",
      "(13)(24)(58)(67)",
      "(12)(34)(56)(78)",
      "(14)(23)(58)(67)",
  };
  std::sort(expected.begin(), expected.end());

  bool ok = true;
  if (names != expected) {
    ok = false;
    std::cout << "MISMATCH against the reference list:\n";
    for (const auto& n : expected)
      if (!std::binary_search(names.begin(), names.end(), n))
        std::cout << "  missing:    " << n << "\n";
    for (const auto& n : names)
      if (!std::binary_search(expected.begin(), expected.end(), n))
        std::cout << "  unexpected: " << n << "\n";
  }

  bool elem_abelian = derived.size() == 8;
  for (const TreeAut& a : derived) {
    elem_abelian &= multiply(a, a).is_identity();
    for (const TreeAut& b : derived)
      elem_abelian &= multiply(a, b) == multiply(b, a);
  }
  std::cout << "elementary abelian of order 8: "
            << (elem_abelian ? "yes" : "NO") << "\n";
  ok &= elem_abelian;

  size_t solved = 0;
  for (const TreeAut& w : derived) {
    const auto wit = solver::solve_Gk_derived(w);
    if (commutator(wit.a, wit.b) == w && wit.a_in_sylow_alt &&
        wit.b_in_sylow_alt)
      ++solved;
  }
  std::cout << "verified single-commutator witnesses in Syl2 A8: " << solved
            << "/" << derived.size() << "\n";
  ok &= solved == derived.size();

  std::cout << (ok ? "match: exact" : "match: FAILED") << "\n";
  return ok ? exit_ok : exit_negative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "iterated wreath products of cyclic groups: portrait arithmetic, "
      "derived-subgroup criteria, single-commutator witnesses, brute-force "
      "oracle"};
  app.require_subcommand(1);

  std::string sig_csv, group = "wreath", in_single, out_path = "-";
  std::vector<std::string> in_files;
  std::string suite = "all", csv_path = "-";
  uint64_t seed = 0;
  uint64_t guard = guard_from_env();
  int reps = 5;
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "print extra detail");

  auto* mul = app.add_subcommand("mul", "multiply two elements");
  mul->add_option("--in", in_files, "two element files")
      ->expected(2)
      ->required();
  mul->add_option("--out", out_path, "output file ('-' = stdout)");
  mul->add_option("--sig", sig_csv, "signature, e.g. 2,2,2");

  auto* check = app.add_subcommand("check", "membership report");
  check->add_option("--in", in_single, "element file")->required();
  check->add_option("--group", group,
                    "wreath|sylow-s|sylow-a|derived-wreath|derived-sylow-a");
  check->add_option("--sig", sig_csv, "signature");

  auto* solve = app.add_subcommand("solve", "single-commutator witness");
  solve->add_option("--in", in_single, "element file")->required();
  solve->add_option("--group", group, "derived-wreath|derived-sylow-a");
  solve->add_option("--out", out_path, "witness file ('-' = stdout)");
  solve->add_option("--sig", sig_csv, "signature");

  auto* overify =
      app.add_subcommand("oracle-verify", "exhaustive oracle suites");
  overify->add_option("--sig", sig_csv, "signature")->required();
  overify->add_option("--group", group, "wreath|sylow-s|sylow-a");
  overify->add_option("--suite", suite,
                      "all|enum|derived|criteria|commutators|solve");
  overify->add_option("--guard", guard, "enumeration guard (elements)");

  auto* bench_cmd = app.add_subcommand("bench", "timing table (CSV)");
  bench_cmd->add_option("--sig", sig_csv, "signature")->required();
  bench_cmd->add_option("--suite", suite, "all|multiply|inverse|solve");
  bench_cmd->add_option("--reps", reps, "repetitions (0 = header only)");
  bench_cmd->add_option("--csv", csv_path, "CSV output path ('-' = stdout)");
  bench_cmd->add_option("--seed", seed, "rng seed");

  auto* a8 = app.add_subcommand(
      "example-a8", "reproduce the derived subgroup of Syl2 A8 end to end");
  (void)a8;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_input;
  }

  try {
    std::optional<AritySignature> flag_sig;
    if (!sig_csv.empty()) flag_sig = wrformat::parse_signature_csv(sig_csv);
    if (mul->parsed()) return run_mul(in_files, out_path, flag_sig, verbose);
    if (check->parsed()) return run_check(in_single, group, flag_sig, verbose);
    if (solve->parsed())
      return run_solve(in_single, group, out_path, flag_sig);
    if (overify->parsed())
      return run_oracle_verify(sig_csv, group, suite, guard);
    if (bench_cmd->parsed())
      return run_bench(sig_csv, suite, reps, csv_path, seed);
    if (a8->parsed()) return run_example_a8();
  } catch (const MembershipError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_negative;
  } catch (const VerificationError& e) {
    std::cerr << "internal invariant violation: " << e.what() << "\n";
    return exit_internal;
  } catch (const GuardExceededError& e) {
    std::cerr << "error: " << e.what() << "\n"
              << "hint: beyond the guard, fall back to solver-based "
                 "verification: sample derived elements and 'solve' them\n";
    return exit_input;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  }
  return exit_input;
}
