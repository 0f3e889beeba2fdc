// domcheck: domain-type guided model checker for MiniC programs.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "domcheck/bench.hpp"
#include "domcheck/domtype.hpp"
#include "domcheck/engine.hpp"
#include "domcheck/errors.hpp"
#include "domcheck/lower.hpp"
#include "json.hpp"

using namespace domcheck;
using json = nlohmann::json;

namespace {

constexpr int kExitUsage = 3;
constexpr int kExitInput = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::True: return 0;
    case Outcome::False: return 1;
    case Outcome::Unknown: return 2;
  }
  return 2;
}

std::string join_values(const std::vector<std::int32_t>& vs, const char* sep) {
  std::ostringstream os;
  for (std::size_t i = 0; i < vs.size(); ++i) os << (i ? sep : "") << vs[i];
  return os.str();
}

std::vector<VarId> custom_order(const Cfa& cfa, const std::string& spec) {
  if (spec == "declared") return {};
  const std::string prefix = "custom:";
  if (spec.rfind(prefix, 0) != 0) throw UsageError("--bdd-order expects declared or custom:FILE");
  std::istringstream in(read_file(spec.substr(prefix.size())));
  std::vector<VarId> order;
  std::vector<bool> listed(cfa.num_vars(), false);
  std::string name;
  while (in >> name) {
    VarId v = cfa.find_variable(name);
    if (v == kNoVar) throw UsageError("--bdd-order: unknown variable " + name);
    if (!listed[v]) order.push_back(v);
    listed[v] = true;
  }
  for (VarId v = 0; v < static_cast<VarId>(cfa.num_vars()); ++v)
    if (!listed[v]) order.push_back(v);
  return order;
}

struct VerifyArgs {
  std::string file;
  std::string config = "explicit-int";
  double timeout = 900;
  std::string waitlist = "dfs";
  unsigned bv_width = 32;
  std::string bdd_order = "declared";
  std::string json_path;
  bool stats = false;
  std::string dump_bdd;
};

int cmd_verify(const VerifyArgs& a) {
  auto config = parse_config(a.config);
  if (!config) throw UsageError("unknown config '" + a.config +
                                "' (expected explicit-int, bdd-bool, bdd-inteq, bdd-inteqadd, bdd-int)");
  if (!a.dump_bdd.empty() && a.dump_bdd != "dot") throw UsageError("--dump-bdd supports only dot");
  Cfa cfa = build_cfa(read_file(a.file));
  DomainTyping typing = infer(cfa);

  EngineOptions eo;
  eo.config = *config;
  eo.waitlist = a.waitlist == "bfs" ? WaitlistOrder::Bfs : WaitlistOrder::Dfs;
  eo.limits.cpu_seconds = a.timeout;
  eo.bv_width = a.bv_width;
  eo.bdd_order = custom_order(cfa, a.bdd_order);
  Engine engine(cfa, typing, eo);
  Verdict v = engine.run();

  std::cout << "Verification result: " << to_string(v.outcome);
  if (v.outcome == Outcome::False) std::cout << (v.confirmed ? " (confirmed)" : " (unconfirmed)");
  if (!v.diagnostic.empty()) std::cout << " [" << v.diagnostic << "]";
  std::cout << "\n";
  std::cout << "  config: " << a.config << ", reached states: " << v.reached_states
            << ", cpu: " << std::fixed << std::setprecision(3) << v.cpu_seconds << " s\n";
  std::vector<int> lines;
  for (int e : v.trace) lines.push_back(cfa.edges[e].line);
  if (v.outcome == Outcome::False) {
    auto names = cfa.variable_names();
    std::cout << "Counterexample:\n";
    for (int e : v.trace) {
      if (cfa.edges[e].kind == CfaEdge::Kind::Skip) continue;
      std::cout << "  line " << cfa.edges[e].line << ": " << to_string(cfa.edges[e], names) << "\n";
    }
  }

  if (a.stats) {
    BddDomain& bdd = engine.domain().bdd();
    std::cout << "BDD layout:\n";
    for (VarId x = 0; x < static_cast<VarId>(cfa.num_vars()); ++x) {
      const auto& l = bdd.layout(x);
      if (!l) continue;
      std::cout << "  " << cfa.variables[x].name << ": " << to_string(l->kind) << ", " << l->num_bits()
                << " bits\n";
    }
    NodeRef all = kFalse;
    for (const auto& r : engine.reached()) all = engine.store().lor(all, r.state.bdd);
    std::cout << "  total BDD bits: " << bdd.total_bits() << "\n";
    std::cout << "  final nodes: " << engine.store().dag_size(all) << "\n";
    std::cout << "  peak nodes: " << v.bdd_peak_nodes << "\n";
    std::cout << "  waitlist peak: " << v.waitlist_peak << "\n";
  }

  if (a.dump_bdd == "dot") {
    NodeRef all = kFalse;
    for (const auto& r : engine.reached()) all = engine.store().lor(all, r.state.bdd);
    engine.domain().bdd().write_dot(std::cout, all, "reached");
  }

  if (!a.json_path.empty()) {
    json j;
    j["outcome"] = to_string(v.outcome);
    j["confirmed"] = v.confirmed;
    j["cpu_seconds"] = v.cpu_seconds;
    j["reached_states"] = v.reached_states;
    j["bdd_peak_nodes"] = v.bdd_peak_nodes;
    j["trace"] = lines;
    if (!v.limit_hit.empty()) j["limit_hit"] = v.limit_hit;
    std::ofstream out(a.json_path);
    if (!out) throw UsageError("cannot write " + a.json_path);
    out << j.dump(2) << "\n";
  }
  return exit_code(v.outcome);
}

int cmd_types(const std::string& file, const std::string& format) {
  Cfa cfa = build_cfa(read_file(file));
  DomainTyping t = infer(cfa);
  auto hist = histogram(t);
  if (format == "csv") {
    std::cout << "variable,type,valueset_size,values,witness_line\n";
    for (std::size_t v = 0; v < t.size(); ++v)
      std::cout << cfa.variables[v].name << ',' << to_string(t.type_of[v]) << ',' << t.value_set[v].size()
                << ',' << join_values(t.value_set[v], ";") << ',' << t.witness_line[v] << '\n';
  } else if (format == "json") {
    json j;
    j["variables"] = json::array();
    for (std::size_t v = 0; v < t.size(); ++v)
      j["variables"].push_back({{"variable", cfa.variables[v].name},
                                {"type", to_string(t.type_of[v])},
                                {"values", t.value_set[v]},
                                {"witness_line", t.witness_line[v]}});
    j["histogram"] = {{"Bool", hist[0]}, {"IntEq", hist[1]}, {"IntEqAdd", hist[2]}, {"Int", hist[3]}};
    std::cout << j.dump(2) << "\n";
  } else if (format == "table") {
    std::size_t width = 8;
    for (const auto& var : cfa.variables) width = std::max(width, var.name.size());
    std::cout << std::left << std::setw(static_cast<int>(width) + 2) << "variable" << std::setw(10) << "type"
              << "values\n";
    for (std::size_t v = 0; v < t.size(); ++v) {
      std::cout << std::setw(static_cast<int>(width) + 2) << cfa.variables[v].name << std::setw(10)
                << to_string(t.type_of[v]);
      if (!t.value_set[v].empty()) std::cout << '{' << join_values(t.value_set[v], ", ") << '}';
      std::cout << '\n';
    }
    std::cout << "histogram (Bool, IntEq, IntEqAdd, Int): (" << hist[0] << ", " << hist[1] << ", "
              << hist[2] << ", " << hist[3] << ")\n";
  } else {
    throw UsageError("unknown format " + format);
  }
  return 0;
}

int cmd_bench(const std::string& dir, const std::string& configs, double timeout, std::size_t jobs,
              bool isolate, const std::string& out_dir) {
  BenchOptions opt;
  opt.timeout = timeout;
  opt.jobs = jobs;
  opt.isolate = isolate;
  if (!configs.empty() && configs != "all") {
    opt.configs.clear();
    std::istringstream in(configs);
    std::string name;
    while (std::getline(in, name, ',')) {
      auto c = parse_config(name);
      if (!c) throw UsageError("unknown config '" + name + "'");
      opt.configs.push_back(*c);
    }
  }
  if (!std::filesystem::is_directory(dir)) throw UsageError(dir + " is not a directory");
  auto tasks = list_tasks(dir);
  auto records = run_bench(tasks, opt);
  std::filesystem::create_directories(out_dir);
  write_results_csv(out_dir + "/results.csv", records);
  for (Config c : opt.configs)
    write_quantile_csv(out_dir + "/quantile_" + to_string(c) + ".csv", quantile(records, to_string(c)));
  std::size_t correct = 0;
  for (const auto& r : records) correct += r.correct;
  std::cout << tasks.size() << " tasks x " << opt.configs.size() << " configs: " << correct
            << " correct; results in " << out_dir << "/results.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"domcheck: domain-type guided model checking for MiniC"};
  app.require_subcommand(1);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "check reachability of error locations");
  verify->add_option("file", va.file, "MiniC source")->required();
  verify->add_option("--config", va.config, "explicit-int|bdd-bool|bdd-inteq|bdd-inteqadd|bdd-int");
  verify->add_option("--timeout", va.timeout, "CPU seconds")->check(CLI::PositiveNumber);
  verify->add_option("--waitlist", va.waitlist, "dfs|bfs")->check(CLI::IsMember({"dfs", "bfs"}));
  verify->add_option("--bv-width", va.bv_width, "bit width of integer layouts (testing)")->check(CLI::Range(1, 32));
  verify->add_option("--bdd-order", va.bdd_order, "declared|custom:FILE");
  verify->add_option("--json", va.json_path, "write the verdict as JSON");
  verify->add_flag("--stats", va.stats, "print BDD statistics");
  verify->add_option("--dump-bdd", va.dump_bdd, "dump the reached BDD (dot)");

  std::string types_file, types_format = "table";
  auto* types = app.add_subcommand("types", "print the domain type of every variable");
  types->add_option("file", types_file, "MiniC source")->required();
  types->add_option("--format", types_format, "table|csv|json")->check(CLI::IsMember({"table", "csv", "json"}));

  std::string bench_dir, bench_configs = "all", bench_out = ".";
  double bench_timeout = 900;
  std::size_t bench_jobs = 1;
  bool bench_isolate = false;
  auto* bench = app.add_subcommand("bench", "run every .mc file of a directory under several configs");
  bench->add_option("dir", bench_dir, "suite directory")->required();
  bench->add_option("--configs", bench_configs, "comma-separated configs or all");
  bench->add_option("--timeout", bench_timeout, "CPU seconds per run")->check(CLI::PositiveNumber);
  bench->add_option("--jobs", bench_jobs, "parallel runs")->check(CLI::PositiveNumber);
  bench->add_flag("--isolate", bench_isolate, "run each task in a child process");
  bench->add_option("--out", bench_out, "output directory");

  int locks_k = 0;
  std::string locks_out;
  auto* locks = app.add_subcommand("gen-locks", "emit the locks-family program");
  locks->add_option("--k", locks_k, "number of lock/flag pairs")->required()->check(CLI::Range(1, 1000));
  locks->add_option("-o,--output", locks_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*verify) return cmd_verify(va);
    if (*types) return cmd_types(types_file, types_format);
    if (*bench) return cmd_bench(bench_dir, bench_configs, bench_timeout, bench_jobs, bench_isolate, bench_out);
    if (*locks) {
      std::string text = generate_locks(locks_k);
      if (locks_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(locks_out);
        if (!out) throw UsageError("cannot write " + locks_out);
        out << text;
      }
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const FrontendError& e) {
    std::cerr << e.line() << ":" << e.col() << ": " << to_string(e.kind()) << ": " << e.message() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}
