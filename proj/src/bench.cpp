#include "domcheck/bench.hpp"

#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "domcheck/errors.hpp"
#include "domcheck/lower.hpp"

namespace domcheck {

namespace fs = std::filesystem;

std::vector<std::string> list_tasks(const std::string& dir) {
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".mc") out.push_back(entry.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Outcome> read_expectation(const std::string& task_path) {
  fs::path p(task_path);
  p.replace_extension(".expect");
  std::ifstream in(p);
  if (!in) return std::nullopt;
  std::string word;
  in >> word;
  if (word == "TRUE") return Outcome::True;
  if (word == "FALSE") return Outcome::False;
  return std::nullopt;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void finish_record(RunRecord& r) {
  r.correct = r.expected && r.outcome != Outcome::Unknown && *r.expected == r.outcome;
}

RunRecord run_in_process(const std::string& path, Config config, const BenchOptions& opt) {
  RunRecord r;
  r.task = fs::path(path).filename().string();
  r.config = to_string(config);
  r.expected = read_expectation(path);
  const double start = thread_cpu_seconds();
  try {
    Cfa cfa = build_cfa(read_file(path));
    EngineOptions eo;
    eo.config = config;
    eo.waitlist = opt.waitlist;
    eo.bv_width = opt.bv_width;
    eo.limits = opt.limits;
    eo.limits.cpu_seconds = opt.timeout;
    Verdict v = verify(cfa, eo);
    r.outcome = v.outcome;
    r.reached_states = v.reached_states;
    r.bdd_peak_nodes = v.bdd_peak_nodes;
    r.limits_hit = v.limit_hit;
    r.error = v.limit_hit.empty() ? v.diagnostic : "";
  } catch (const std::exception& e) {
    r.outcome = Outcome::Unknown;
    r.error = e.what();
  }
  r.cpu_seconds = thread_cpu_seconds() - start;
  finish_record(r);
  return r;
}

std::string encode(const RunRecord& r) {
  std::ostringstream os;
  os << static_cast<int>(r.outcome) << '\t' << std::setprecision(17) << r.cpu_seconds << '\t'
     << r.reached_states << '\t' << r.bdd_peak_nodes << '\t' << r.limits_hit << '\t';
  for (char c : r.error) os << (c == '\n' || c == '\t' ? ' ' : c);
  return os.str();
}

void decode(const std::string& line, RunRecord& r) {
  std::istringstream is(line);
  std::string field;
  std::getline(is, field, '\t');
  r.outcome = static_cast<Outcome>(std::stoi(field));
  std::getline(is, field, '\t');
  r.cpu_seconds = std::stod(field);
  std::getline(is, field, '\t');
  r.reached_states = std::stoull(field);
  std::getline(is, field, '\t');
  r.bdd_peak_nodes = std::stoull(field);
  std::getline(is, r.limits_hit, '\t');
  std::getline(is, r.error);
}

RunRecord run_isolated(const std::string& path, Config config, const BenchOptions& opt) {
  RunRecord r;
  r.task = fs::path(path).filename().string();
  r.config = to_string(config);
  r.expected = read_expectation(path);
  int fds[2];
  if (pipe(fds) != 0) return run_in_process(path, config, opt);
  pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    return run_in_process(path, config, opt);
  }
  if (pid == 0) {
    close(fds[0]);
    // hard stop one second after the soft budget
    rlimit lim{};
    lim.rlim_cur = static_cast<rlim_t>(std::ceil(opt.timeout)) + 1;
    lim.rlim_max = lim.rlim_cur + 1;
    setrlimit(RLIMIT_CPU, &lim);
    std::string line = encode(run_in_process(path, config, opt)) + "\n";
    ssize_t off = 0;
    while (off < static_cast<ssize_t>(line.size())) {
      ssize_t n = write(fds[1], line.data() + off, line.size() - off);
      if (n <= 0) break;
      off += n;
    }
    close(fds[1]);
    _exit(0);
  }
  close(fds[1]);
  std::string line;
  char buf[512];
  ssize_t n;
  while ((n = read(fds[0], buf, sizeof buf)) > 0) line.append(buf, static_cast<std::size_t>(n));
  close(fds[0]);
  int status = 0;
  rusage usage{};
  wait4(pid, &status, 0, &usage);
  const double child_cpu = static_cast<double>(usage.ru_utime.tv_sec + usage.ru_stime.tv_sec) +
                           static_cast<double>(usage.ru_utime.tv_usec + usage.ru_stime.tv_usec) * 1e-6;
  if (WIFEXITED(status) && WEXITSTATUS(status) == 0 && !line.empty()) {
    decode(line.substr(0, line.find('\n')), r);
  } else {
    r.outcome = Outcome::Unknown;
    r.cpu_seconds = std::min(child_cpu, opt.timeout);
    bool cpu_kill = WIFSIGNALED(status) && (WTERMSIG(status) == SIGXCPU || WTERMSIG(status) == SIGKILL);
    r.limits_hit = cpu_kill ? "cpu" : "crash";
    r.error = "child terminated abnormally";
  }
  finish_record(r);
  return r;
}

std::string format_seconds(double s) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << s;
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

RunRecord run_task(const std::string& path, Config config, const BenchOptions& opt) {
  return opt.isolate ? run_isolated(path, config, opt) : run_in_process(path, config, opt);
}

std::vector<RunRecord> run_bench(const std::vector<std::string>& tasks, const BenchOptions& opt) {
  const std::size_t n = tasks.size() * opt.configs.size();
  std::vector<RunRecord> records(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const auto& task = tasks[i / opt.configs.size()];
      records[i] = run_task(task, opt.configs[i % opt.configs.size()], opt);
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(opt.jobs, n));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return records;
}

void write_results_csv(const std::string& path, const std::vector<RunRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  out << "task,config,outcome,expected,correct,cpu_seconds,reached_states,bdd_peak_nodes\n";
  for (const auto& r : records) {
    out << csv_field(r.task) << ',' << r.config << ',' << to_string(r.outcome) << ','
        << (r.expected ? to_string(*r.expected) : "") << ',' << (r.correct ? "true" : "false") << ','
        << format_seconds(r.cpu_seconds) << ',' << r.reached_states << ',' << r.bdd_peak_nodes << '\n';
  }
}

std::vector<double> quantile(const std::vector<RunRecord>& records, const std::string& config) {
  std::vector<double> times;
  for (const auto& r : records)
    if (r.config == config && r.correct) times.push_back(r.cpu_seconds);
  std::sort(times.begin(), times.end());
  return times;
}

void write_quantile_csv(const std::string& path, const std::vector<double>& times) {
  std::ofstream out(path, std::ios::binary);
  out << "rank,cpu_seconds\n";
  for (std::size_t i = 0; i < times.size(); ++i) out << i + 1 << ',' << format_seconds(times[i]) << '\n';
}

std::string generate_locks(int k) {
  std::ostringstream os;
  os << "int main() {\n";
  for (int i = 1; i <= k; ++i) {
    os << "  int p" << i << " = __VERIFIER_nondet_int();\n";
    os << "  int lk" << i << ";\n";
  }
  os << "  int cond;\n";
  os << "  while (1) {\n";
  os << "    cond = __VERIFIER_nondet_int();\n";
  os << "    if (cond == 0) goto out;\n";
  for (int i = 1; i <= k; ++i) os << "    lk" << i << " = 0;\n";
  for (int i = 1; i <= k; ++i) os << "    if (p" << i << " != 0) {\n      lk" << i << " = 1;\n    }\n";
  for (int i = 1; i <= k; ++i)
    os << "    if (lk" << i << " == 0) {\n      if (p" << i << " != 0) __VERIFIER_error();\n    }\n";
  os << "  }\n";
  os << "  out:\n";
  os << "  return 0;\n";
  os << "}\n";
  return os.str();
}

}  // namespace domcheck
