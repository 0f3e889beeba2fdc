#include "doctest.h"

#include "domcheck/bench.hpp"
#include "domcheck/engine.hpp"
#include "domcheck/lower.hpp"
#include "domcheck/oracle.hpp"
#include "program_gen.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include <unistd.h>

using namespace domcheck;
namespace fs = std::filesystem;

namespace {

std::set<std::string> names_of(const Cfa& cfa, const Precision& p) {
  std::set<std::string> out;
  for (std::size_t v = 0; v < p.size(); ++v)
    if (p[v]) out.insert(cfa.variables[v].name);
  return out;
}

EngineOptions options(Config c) {
  EngineOptions o;
  o.config = c;
  o.limits.cpu_seconds = 20;
  o.limits.max_nodes = 4'000'000;
  return o;
}

// A trace is a connected edge path from the entry into an error location.
bool valid_trace(const Cfa& cfa, const std::vector<int>& trace) {
  if (trace.empty()) return false;
  LocId at = cfa.entry;
  for (int e : trace) {
    if (e < 0 || e >= static_cast<int>(cfa.edges.size())) return false;
    if (cfa.edges[e].source != at) return false;
    at = cfa.edges[e].target;
  }
  return cfa.is_error[at];
}

std::optional<Outcome> expectation(const std::string& name) {
  return read_expectation(testutil::corpus_path(name));
}

std::vector<std::string> corpus_programs() {
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(DOMCHECK_CORPUS_DIR))
    if (e.path().extension() == ".mc") out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

Outcome from_oracle(OracleVerdict v) {
  return v == OracleVerdict::Unsafe ? Outcome::False
         : v == OracleVerdict::Safe ? Outcome::True
                                    : Outcome::Unknown;
}

// Composite states reached on generated programs, grouped by location.
struct Harvest {
  Cfa cfa;
  DomainTyping typing;
  std::unique_ptr<Engine> engine;
};

// Width 8 keeps relations between two Full variables tractable.
Harvest harvest(const std::string& src, Config c) {
  Harvest h{build_cfa(src), {}, nullptr};
  h.typing = infer(h.cfa);
  EngineOptions o = options(c);
  o.bv_width = 8;
  h.engine = std::make_unique<Engine>(h.cfa, h.typing, o);
  h.engine->run();
  return h;
}

}  // namespace

TEST_CASE("build_assignment on the three-type example") {
  Cfa cfa = build_cfa(testutil::read_corpus("three_types.mc"));
  DomainTyping t = infer(cfa);

  auto bb = build_assignment(t, Config::BddBool);
  CHECK(names_of(cfa, bb.bdd_vars) == std::set<std::string>{"enabled"});
  CHECK(names_of(cfa, bb.explicit_vars) == std::set<std::string>{"a", "b"});

  auto ei = build_assignment(t, Config::ExplicitInt);
  CHECK(names_of(cfa, ei.bdd_vars).empty());
  CHECK(names_of(cfa, ei.explicit_vars).size() == 3);

  auto bi = build_assignment(t, Config::BddInt);
  CHECK(names_of(cfa, bi.explicit_vars).empty());
  CHECK(names_of(cfa, bi.bdd_vars).size() == 3);

  auto be = build_assignment(t, Config::BddIntEq);
  CHECK(names_of(cfa, be.bdd_vars) == std::set<std::string>{"enabled"});
  auto ba = build_assignment(t, Config::BddIntEqAdd);
  CHECK(names_of(cfa, ba.bdd_vars) == std::set<std::string>{"enabled", "a"});
}

TEST_CASE("config names round-trip") {
  for (Config c : all_configs()) CHECK(parse_config(to_string(c)) == c);
  CHECK(all_configs().size() == 5);
  CHECK_FALSE(parse_config("bdd-float"));
  CHECK(bdd_threshold(Config::ExplicitInt) == std::nullopt);
  CHECK(bdd_threshold(Config::BddIntEq) == DomainType::IntEq);
}

TEST_CASE("composite transfer routes each variable to its component") {
  Cfa cfa = build_cfa(testutil::read_corpus("three_types.mc"));
  DomainTyping t = infer(cfa);
  NodeStore store;
  CompositeDomain d(cfa, t, build_assignment(t, Config::BddBool), store);
  VarId en = cfa.find_variable("enabled"), a = cfa.find_variable("a"), b = cfa.find_variable("b");

  auto at = [&](const CompositeState& s, CfaEdge::Kind k, VarId v) {
    for (int e : cfa.out[s.loc])
      if (cfa.edges[e].kind == k && (v == kNoVar || cfa.edges[e].var == v)) return e;
    return -1;
  };

  CompositeState s = d.initial();
  CHECK(s.loc == cfa.entry);
  // run the straight-line prefix up to the first branch
  while (cfa.out[s.loc].size() == 1) {
    auto n = d.transfer(s, cfa.edges[cfa.out[s.loc][0]]);
    REQUIRE(n);
    s = *n;
  }
  CHECK(s.expl.get(b) == 20);
  CHECK_FALSE(s.expl.get(a));
  CHECK(s.bdd == kTrue);
  CHECK(at(s, CfaEdge::Kind::Assume, kNoVar) >= 0);

  // a > 5 reads a foreign unknown value, so neither branch is pruned
  int taken = 0;
  for (int e : cfa.out[s.loc]) {
    auto n = d.transfer(s, cfa.edges[e]);
    if (n) ++taken;
  }
  CHECK(taken == 2);

  // with a known, the BDD side sees the foreign constant
  CompositeState k = s;
  k.expl.set(a, 0);
  for (int e : cfa.out[s.loc]) {
    auto n = d.transfer(k, cfa.edges[e]);
    REQUIRE(n);
    NodeRef en_true = d.bdd().equals_constant(en, 1);
    if (cfa.edges[e].polarity) CHECK(store.entails(n->bdd, en_true));
    else CHECK(store.entails(n->bdd, store.negate(en_true)));
    CHECK(n->expl == k.expl);
  }
}

TEST_CASE("merge and stop contracts") {
  Cfa cfa = build_cfa("int main() { int f = nondet(); int x = 1; assert(x == 1); return 0; }");
  DomainTyping t = infer(cfa);
  NodeStore store;
  CompositeDomain d(cfa, t, build_assignment(t, Config::BddBool), store);
  VarId f = cfa.find_variable("f"), x = cfa.find_variable("x");
  REQUIRE(d.assignment().bdd_vars[f]);
  REQUIRE(d.assignment().explicit_vars[x]);

  NodeRef p = d.bdd().equals_constant(f, 1);
  CompositeState s1{1, {}, p}, s2{1, {}, store.negate(p)};
  s1.expl.set(x, 1);
  s2.expl.set(x, 1);
  auto m = d.merge(s1, s2);
  REQUIRE(m);
  CHECK(m->bdd == kTrue);
  CHECK(m->expl == s1.expl);

  CompositeState s3 = s2;
  s3.expl.set(x, 2);
  CHECK_FALSE(d.merge(s1, s3));

  CHECK(d.covered(s1, *m));
  CHECK_FALSE(d.covered(*m, s1));
  CompositeState weaker{1, {}, kTrue};
  CHECK(d.covered(s3, weaker));
  CHECK_FALSE(d.covered(weaker, s3));
  CompositeState other_loc = weaker;
  other_loc.loc = 2;
  CHECK_FALSE(d.covered(s1, other_loc));
}

TEST_CASE("composite invariants on generated programs") {
  testutil::GenOptions go;
  go.allow_mul = false;
  std::size_t pairs = 0, states = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    std::string src = testutil::ProgramGen(seed + 700, go).program();
    for (Config c : all_configs()) {
      Harvest h = harvest(src, c);
      CompositeDomain& d = h.engine->domain();
      const auto& asg = d.assignment();
      // partition: disjoint and covering
      for (std::size_t v = 0; v < h.cfa.num_vars(); ++v) CHECK(asg.explicit_vars[v] != asg.bdd_vars[v]);

      std::map<LocId, std::vector<const CompositeState*>> by_loc;
      for (const auto& r : h.engine->reached()) {
        const CompositeState& s = r.state;
        ++states;
        for (auto [v, val] : s.expl.bindings()) CHECK(asg.explicit_vars[v]);
        for (std::uint32_t bit : h.engine->store().support(s.bdd)) {
          VarId o = d.bdd().owner(bit);
          REQUIRE(o != kNoVar);
          CHECK(asg.bdd_vars[o]);
          CHECK_FALSE(d.bdd().is_primed(bit));
        }
        by_loc[s.loc].push_back(&s);
      }
      for (auto& [loc, v] : by_loc) {
        std::size_t n = std::min<std::size_t>(v.size(), 25);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            const CompositeState& a = *v[i];
            const CompositeState& b = *v[j];
            ++pairs;
            auto m = d.merge(a, b);
            CHECK(m.has_value() == (a.expl == b.expl));
            if (m) {
              CHECK(d.covered(a, *m));
              CHECK(d.covered(b, *m));
            }
            CHECK(d.covered(a, a));
            if (d.covered(a, b) && d.covered(b, a)) CHECK(a.expl == b.expl);
          }
        }
      }
    }
  }
  CHECK(pairs >= 1000);
  CHECK(states >= 1000);
}

TEST_CASE("verification is deterministic") {
  for (const char* name : {"three_types.mc", "locks_bug.mc", "automaton.mc"}) {
    Cfa cfa = build_cfa(testutil::read_corpus(name));
    for (Config c : all_configs()) {
      Verdict v1 = verify(cfa, options(c));
      Verdict v2 = verify(cfa, options(c));
      CHECK(v1.outcome == v2.outcome);
      CHECK(v1.reached_states == v2.reached_states);
      CHECK(v1.trace == v2.trace);
      CHECK(v1.confirmed == v2.confirmed);
    }
  }
}

TEST_CASE("traces run from the entry into an error location") {
  for (const std::string& name : corpus_programs()) {
    if (expectation(name) != Outcome::False) continue;
    Cfa cfa = build_cfa(testutil::read_corpus(name));
    for (Config c : all_configs()) {
      Verdict v = verify(cfa, options(c));
      if (v.outcome != Outcome::False) continue;
      INFO(name << " " << to_string(c));
      CHECK(valid_trace(cfa, v.trace));
    }
  }
}

TEST_CASE("three-type example is FALSE with a confirmed trace under every config") {
  Cfa cfa = build_cfa(testutil::read_corpus("three_types.mc"));
  for (Config c : all_configs()) {
    Verdict v = verify(cfa, options(c));
    INFO(to_string(c));
    CHECK(v.outcome == Outcome::False);
    CHECK(v.confirmed);
  }
}

TEST_CASE("oracle examples") {
  Cfa cfa = build_cfa("int main() { int x = nondet(); assert(x != 3); return 0; }");
  OracleOptions o;
  o.nondet_values = {0, 1, 2, 3, 4, 5};
  OracleResult r = oracle_interpret(cfa, o);
  CHECK(r.verdict == OracleVerdict::Unsafe);
  CHECK(valid_trace(cfa, r.error_trace));
  o.nondet_values = {0, 1, 2};
  CHECK(oracle_interpret(cfa, o).verdict == OracleVerdict::Safe);
  CHECK(oracle_interpret(cfa, o).paths == 3);

  Cfa loop = build_cfa("int main() { int x = 0; while (1) { x = x + 1; } return 0; }");
  CHECK(oracle_interpret(loop).verdict == OracleVerdict::Inconclusive);
  o.work_limit = 10'000;
  CHECK(oracle_search(loop, o) == OracleVerdict::Inconclusive);
  Cfa spin = build_cfa("int main() { int x = nondet(); while (1) { x = 1 - x; assert(x != 4); } return 0; }");
  o.nondet_values = {0, 1, 2};
  CHECK(oracle_interpret(spin, o).verdict == OracleVerdict::Inconclusive);
  CHECK(oracle_search(spin, o) == OracleVerdict::Safe);
  o.nondet_values = {-3};
  CHECK(oracle_search(spin, o) == OracleVerdict::Unsafe);

  CHECK(wrap_to_width(255, 8) == -1);
  CHECK(wrap_to_width(128, 8) == -128);
  CHECK(wrap_to_width(-129, 8) == 127);
  CHECK(wrap_to_width(std::int64_t{1} << 31, 32) == INT32_MIN);
}

TEST_CASE("a trivial assertion holds under every config") {
  Cfa cfa = build_cfa("int main() { int x = 0; assert(x == 0); return 0; }");
  for (Config c : all_configs()) {
    Verdict v = verify(cfa, options(c));
    CHECK(v.outcome == Outcome::True);
    CHECK(v.trace.empty());
  }
}

TEST_CASE("branches that agree re-converge into one stored state") {
  Cfa cfa = build_cfa(R"(
int main() {
  int x = 1;
  int y = nondet();
  if (y > 0) { x = 2; } else { x = 2; }
  assert(x == 2);
  return 0;
})");
  DomainTyping t = infer(cfa);
  for (Config c : {Config::ExplicitInt, Config::BddInt}) {
    Engine e(cfa, t, options(c));
    Verdict v = e.run();
    CHECK(v.outcome == Outcome::True);
    std::map<LocId, int> per_loc;
    for (const auto& r : e.reached()) ++per_loc[r.state.loc];
    for (auto [loc, n] : per_loc) CHECK(n == 1);
  }
}

TEST_CASE("corpus agrees with the oracle") {
  auto programs = corpus_programs();
  CHECK(programs.size() >= 20);
  for (const std::string& name : programs) {
    std::string src = testutil::read_corpus(name);
    Cfa cfa = build_cfa(src);
    OracleOptions o;
    o.nondet_values = testutil::nondet_range(src);
    OracleVerdict ov = oracle_interpret(cfa, o).verdict;
    if (ov == OracleVerdict::Inconclusive) ov = oracle_search(cfa, o);
    Outcome oracle = from_oracle(ov);
    auto expect = expectation(name);
    INFO(name);
    REQUIRE(expect);
    CHECK(oracle == *expect);
    for (Config c : all_configs()) {
      INFO(to_string(c));
      Verdict v = verify(cfa, options(c));
      // soundness: never TRUE on a program the oracle shows unsafe
      if (oracle == Outcome::False) CHECK(v.outcome != Outcome::True);
      if (c == Config::ExplicitInt || c == Config::BddInt) CHECK(v.outcome == *expect);
    }
  }
}

TEST_CASE("analyses are sound against the oracle on generated programs") {
  testutil::GenOptions go;
  int unsafe = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    std::string src = testutil::ProgramGen(seed + 9100, go).program();
    Cfa cfa = build_cfa(src);
    OracleOptions oo;
    oo.width = 8;
    OracleResult r = oracle_interpret(cfa, oo);
    if (r.verdict != OracleVerdict::Unsafe) continue;
    ++unsafe;
    for (Config c : all_configs()) {
      EngineOptions o = options(c);
      o.bv_width = 8;
      o.limits.cpu_seconds = 5;
      Verdict v = verify(cfa, o);
      INFO(src << to_string(c));
      CHECK(v.outcome != Outcome::True);
      if (v.outcome == Outcome::False) CHECK(valid_trace(cfa, v.trace));
    }
  }
  CHECK(unsafe >= 50);
}

TEST_CASE("state limit gives UNKNOWN") {
  Cfa cfa = build_cfa(generate_locks(8));
  EngineOptions o = options(Config::ExplicitInt);
  o.limits.max_states = 50;
  Verdict v = verify(cfa, o);
  CHECK(v.outcome == Outcome::Unknown);
  CHECK(v.limit_hit == "states");
}

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("domcheck_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return (path / name).string();
  }
};

}  // namespace

TEST_CASE("quantile keeps correct runs in ascending order") {
  std::vector<RunRecord> rs(4);
  double times[] = {1, 5, 2, 3};
  for (int i = 0; i < 4; ++i) {
    rs[i].config = "bdd-bool";
    rs[i].cpu_seconds = times[i];
    rs[i].correct = i != 3;
  }
  rs.push_back(rs[0]);
  rs.back().config = "explicit-int";
  CHECK(quantile(rs, "bdd-bool") == std::vector<double>{1, 2, 5});
  CHECK(quantile(rs, "explicit-int") == std::vector<double>{1});
  CHECK(quantile(rs, "bdd-int").empty());
}

TEST_CASE("bench records one row per task and config") {
  TempDir dir;
  dir.write("a.mc", testutil::read_corpus("three_types.mc"));
  dir.write("a.expect", "FALSE\n");
  dir.write("b.mc", testutil::read_corpus("shared_values.mc"));
  dir.write("b.expect", "TRUE\n");
  dir.write("c.mc", "int main() { int x = 0; assert(x == 0); return 0; }");
  dir.write("d.mc", "int main() { int x = ; }");

  auto tasks = list_tasks(dir.path.string());
  REQUIRE(tasks.size() == 4);
  CHECK(fs::path(tasks[0]).filename() == "a.mc");
  CHECK(read_expectation(tasks[0]) == Outcome::False);
  CHECK(read_expectation(tasks[2]) == std::nullopt);

  BenchOptions opt;
  opt.timeout = 10;
  opt.jobs = 2;
  auto rs = run_bench(tasks, opt);
  REQUIRE(rs.size() == tasks.size() * opt.configs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    CHECK(rs[i].config == to_string(opt.configs[i % opt.configs.size()]));
    const std::string task = fs::path(rs[i].task).stem().string();
    if (task == "a" || task == "b") CHECK(rs[i].correct);
    if (task == "c") {
      CHECK(rs[i].outcome == Outcome::True);
      CHECK_FALSE(rs[i].correct);
    }
    if (task == "d") {
      CHECK(rs[i].outcome == Outcome::Unknown);
      CHECK_FALSE(rs[i].error.empty());
      CHECK_FALSE(rs[i].correct);
    }
  }

  std::string csv = (dir.path / "results.csv").string();
  write_results_csv(csv, rs);
  std::ifstream in(csv);
  std::size_t lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  CHECK(lines == rs.size() + 1);
}

TEST_CASE("bench timeout gives UNKNOWN") {
  TempDir dir;
  std::string task = dir.write("slow.mc", generate_locks(22));
  dir.write("slow.expect", "TRUE\n");
  BenchOptions opt;
  opt.timeout = 0.3;
  opt.limits.max_states = 100'000'000;
  RunRecord r = run_task(task, Config::ExplicitInt, opt);
  CHECK(r.outcome == Outcome::Unknown);
  CHECK(r.limits_hit == "cpu");
  CHECK_FALSE(r.correct);
  CHECK(r.cpu_seconds < 0.3 + 1.0);
}
