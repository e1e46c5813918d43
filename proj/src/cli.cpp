#include "qbdst/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "qbdst/audit.hpp"
#include "qbdst/engine.hpp"
#include "qbdst/gen.hpp"
#include "qbdst/instance.hpp"
#include "qbdst/oracle.hpp"
#include "qbdst/trace_io.hpp"

namespace qbdst::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct SolveFlags {
  std::string path;
  std::string trace_path;
  bool baseline = false;
  bool audit = false;
  bool oracle = false;
  bool decimal = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Parses, normalizes and validates. Returns nullopt after reporting on err.
std::optional<Instance> load_checked(const std::string& path, std::ostream& err) {
  try {
    Instance inst = normalize_parallel(parse_instance(read_file(path)));
    auto violations = validate(inst);
    if (violations.empty()) return inst;
    for (const auto& v : violations) err << path << ": " << v.kind << ": " << v.detail << '\n';
  } catch (const std::exception& e) {
    err << path << ": " << e.what() << '\n';
  }
  return std::nullopt;
}

// Exact optimum when either oracle accepts the instance.
std::optional<OptResult> try_oracle(const Instance& inst) {
  try {
    return exact_opt_dp(inst);
  } catch (const OracleGuard&) {
  }
  try {
    return exact_opt_brute(inst);
  } catch (const OracleGuard&) {
  }
  return std::nullopt;
}

json rational_field(const Rational& q) { return to_string(q); }

json arcs_json(const std::vector<ArcId>& arcs) {
  json out = json::array();
  for (ArcId a : arcs) out.push_back(a.index);
  return out;
}

int cmd_solve(const SolveFlags& f, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  auto inst = load_checked(f.path, err);
  if (!inst) return kValidationFailure;

  SolveResult run;
  try {
    run = f.baseline ? solve_standard_baseline(*inst) : solve(*inst);
  } catch (const std::exception& e) {
    err << f.path << ": " << e.what() << '\n';
    return kValidationFailure;
  }
  const Solution& sol = run.solution;

  std::optional<OptResult> opt;
  bool guard_hit = false;
  if (f.oracle) {
    opt = try_oracle(*inst);
    guard_hit = !opt;
  }
  std::optional<Rational> opt_cost;
  if (opt) opt_cost = opt->opt_cost;

  json rec;
  rec["command"] = f.baseline ? "solve --baseline" : "solve";
  rec["instance_hash"] = instance_hash(*inst);
  rec["algorithm"] = to_string(run.trace.algorithm);
  rec["iterations"] = run.trace.iterations.size();
  rec["cost"] = rational_field(sol.total_cost);
  rec["lower_bound"] = rational_field(sol.lower_bound);
  rec["dual_total"] = rational_field(sol.dual_total);
  const RatioReport ratios = ratio_report(*inst, sol, opt_cost);
  rec["ratio_vs_lb"] = ratios.ratio_vs_lb ? json(to_string(*ratios.ratio_vs_lb)) : json(nullptr);
  rec["final_arcs"] = arcs_json(sol.final_arcs);
  if (f.oracle) {
    rec["opt"] = opt ? json(to_string(opt->opt_cost)) : json(nullptr);
    rec["ratio_vs_opt"] = ratios.ratio_vs_opt ? json(to_string(*ratios.ratio_vs_opt)) : json(nullptr);
  }
  if (f.decimal) {
    rec["inexact"] = {{"cost", to_decimal(sol.total_cost)},
                      {"lower_bound", to_decimal(sol.lower_bound)},
                      {"dual_total", to_decimal(sol.dual_total)}};
  }

  int code = kOk;
  if (f.audit) {
    const AuditReport report = audit_run(*inst, run.trace, sol, opt_cost);
    rec["audit"] = json::parse(to_json(report));
    if (!report.all_ok()) code = kAuditBreach;
  }
  if (code == kOk && guard_hit) code = kOracleGuard;

  if (!f.trace_path.empty()) {
    std::ofstream tout(f.trace_path);
    if (!tout) {
      err << "cannot write " << f.trace_path << '\n';
      return kValidationFailure;
    }
    write_trace(tout, run.trace);
  }

  const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
  rec["wall_ms"] = std::round(elapsed.count() * 1000.0) / 1000.0;
  out << rec.dump() << '\n';
  if (guard_hit) err << f.path << ": oracle guard exceeded\n";
  return code;
}

int cmd_oracle(const std::string& path, const std::string& method, std::ostream& out, std::ostream& err) {
  auto inst = load_checked(path, err);
  if (!inst) return kValidationFailure;
  try {
    OptResult r = method == "brute" ? exact_opt_brute(*inst) : exact_opt_dp(*inst);
    json rec;
    rec["command"] = "oracle";
    rec["instance_hash"] = instance_hash(*inst);
    rec["method"] = r.method == OptResult::Method::SubsetDp ? "subset_dp" : "brute_subsets";
    rec["opt"] = to_string(r.opt_cost);
    rec["opt_arcs"] = arcs_json(r.opt_arcs);
    out << rec.dump() << '\n';
    return kOk;
  } catch (const OracleGuard& e) {
    err << path << ": " << e.what() << '\n';
    return kOracleGuard;
  } catch (const std::exception& e) {
    err << path << ": " << e.what() << '\n';
    return kValidationFailure;
  }
}

int cmd_audit(const std::string& inst_path, const std::string& trace_path, std::ostream& out, std::ostream& err) {
  auto inst = load_checked(inst_path, err);
  if (!inst) return kValidationFailure;
  try {
    std::ifstream tin(trace_path);
    if (!tin) throw std::runtime_error("cannot read " + trace_path);
    GrowthTrace trace = read_trace(tin);
    if (trace.instance_hash != instance_hash(*inst)) {
      err << trace_path << ": trace was recorded for a different instance\n";
      return kValidationFailure;
    }
    Solution sol = reverse_delete(*inst, trace);
    AuditReport report = audit_run(*inst, trace, sol);
    out << to_json(report) << '\n';
    return report.all_ok() ? kOk : kAuditBreach;
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kValidationFailure;
  }
}

struct BenchRow {
  std::string file;
  std::string error;
  std::optional<Rational> cost, lower_bound, ratio_vs_lb, ratio_vs_opt;
  bool audit_ok = false;
  bool breach = false;
};

BenchRow bench_one(const fs::path& file, bool with_oracle) {
  BenchRow row;
  row.file = file.filename().string();
  std::ostringstream err;
  auto inst = load_checked(file.string(), err);
  if (!inst) {
    row.error = err.str();
    if (!row.error.empty() && row.error.back() == '\n') row.error.pop_back();
    return row;
  }
  try {
    SolveResult run = solve(*inst);
    std::optional<Rational> opt;
    if (with_oracle) {
      if (auto r = try_oracle(*inst)) opt = r->opt_cost;
    }
    AuditReport rep = audit_run(*inst, run.trace, run.solution, opt);
    row.cost = run.solution.total_cost;
    row.lower_bound = run.solution.lower_bound;
    row.ratio_vs_lb = rep.ratio.ratio_vs_lb;
    row.ratio_vs_opt = rep.ratio.ratio_vs_opt;
    row.audit_ok = rep.all_ok();
    row.breach = !rep.all_ok();
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

int cmd_bench(const std::string& dir, unsigned jobs, bool with_oracle, std::ostream& out, std::ostream& err) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  if (ec) {
    err << dir << ": " << ec.message() << '\n';
    return kValidationFailure;
  }
  std::sort(files.begin(), files.end());

  std::vector<BenchRow> rows(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < files.size();) rows[i] = bench_one(files[i], with_oracle);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::max(1u, jobs); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  auto cell = [](const std::optional<Rational>& q) { return q ? to_string(*q) : std::string("-"); };
  out << std::left << std::setw(28) << "file" << std::setw(12) << "cost" << std::setw(12) << "lower_bound"
      << std::setw(12) << "ratio_lb" << std::setw(12) << "ratio_opt" << "status\n";
  std::size_t breaches = 0, errors = 0;
  std::optional<Rational> max_ratio;
  for (const auto& r : rows) {
    std::string status = !r.error.empty() ? "error: " + r.error : (r.breach ? "BREACH" : "ok");
    out << std::left << std::setw(28) << r.file << std::setw(12) << cell(r.cost) << std::setw(12)
        << cell(r.lower_bound) << std::setw(12) << cell(r.ratio_vs_lb) << std::setw(12) << cell(r.ratio_vs_opt)
        << status << '\n';
    if (!r.error.empty()) ++errors;
    if (r.breach) ++breaches;
    if (r.ratio_vs_lb && (!max_ratio || *r.ratio_vs_lb > *max_ratio)) max_ratio = r.ratio_vs_lb;
  }
  out << "instances " << rows.size() << ", errors " << errors << ", breaches " << breaches << ", max ratio_vs_lb "
      << cell(max_ratio) << '\n';
  return breaches ? kAuditBreach : kOk;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Primal-dual approximation for quasi-bipartite directed Steiner tree"};
  app.require_subcommand(1);

  SolveFlags solve_flags;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance file");
  solve_cmd->add_option("path", solve_flags.path, "Instance file")->required();
  solve_cmd->add_option("--trace", solve_flags.trace_path, "Write the growth trace (JSON Lines)");
  solve_cmd->add_flag("--baseline", solve_flags.baseline, "Use the standard single-bucket primal-dual");
  solve_cmd->add_flag("--audit", solve_flags.audit, "Verify dual certificate and counting bounds");
  solve_cmd->add_flag("--oracle", solve_flags.oracle, "Attach the exact optimum when small enough");
  solve_cmd->add_flag("--decimal", solve_flags.decimal, "Also print inexact decimal approximations");

  auto* gen_cmd = app.add_subcommand("gen", "Generate an instance file on stdout");
  gen_cmd->require_subcommand(1);
  int bad_k = 3;
  std::string bad_eps = "1/100";
  auto* bad_cmd = gen_cmd->add_subcommand("badexample", "Adversarial family for the standard primal-dual");
  bad_cmd->add_option("--k", bad_k, "Number of w/z pairs (>= 2)");
  bad_cmd->add_option("--eps", bad_eps, "Small arc cost");

  GridParams grid;
  std::string steiner_prob = "1/2", keep_prob = "4/5";
  auto* grid_cmd = gen_cmd->add_subcommand("grid", "Random planar quasi-bipartite grid instance");
  grid_cmd->add_option("--width", grid.width);
  grid_cmd->add_option("--height", grid.height);
  grid_cmd->add_option("--steiner-prob", steiner_prob);
  grid_cmd->add_option("--keep-prob", keep_prob);
  grid_cmd->add_option("--cost-min", grid.cost_min);
  grid_cmd->add_option("--cost-max", grid.cost_max);
  grid_cmd->add_option("--seed", grid.seed);

  std::string reduce_path;
  bool planar = false;
  auto* reduce_cmd = gen_cmd->add_subcommand("reduce", "Connected vertex cover to Steiner tree reduction");
  reduce_cmd->add_option("path", reduce_path, "Undirected graph file (NODES / EDGE / END)")->required();
  reduce_cmd->add_flag("--planar", planar, "Tag the output as planar bipartite");

  std::string bench_dir;
  unsigned jobs = 1;
  bool bench_oracle = false;
  auto* bench_cmd = app.add_subcommand("bench", "Solve and audit every instance in a directory");
  bench_cmd->add_option("dir", bench_dir)->required();
  bench_cmd->add_option("--jobs", jobs, "Worker threads");
  bench_cmd->add_flag("--oracle", bench_oracle, "Compare against the exact optimum where possible");

  std::string oracle_path, oracle_method = "dp";
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact optimum of a small instance");
  oracle_cmd->add_option("path", oracle_path)->required();
  oracle_cmd->add_option("--method", oracle_method)->check(CLI::IsMember({"dp", "brute"}));

  std::string audit_inst, audit_trace;
  auto* audit_cmd = app.add_subcommand("audit", "Audit a recorded trace against its instance");
  audit_cmd->add_option("instance", audit_inst)->required();
  audit_cmd->add_option("trace", audit_trace)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*solve_cmd) return cmd_solve(solve_flags, out, err);
    if (*bad_cmd) {
      out << serialize_instance(gen_bad_example(bad_k, parse_rational(bad_eps)));
      return kOk;
    }
    if (*grid_cmd) {
      grid.steiner_prob = parse_rational(steiner_prob);
      grid.keep_prob = parse_rational(keep_prob);
      out << serialize_instance(gen_grid(grid));
      return kOk;
    }
    if (*reduce_cmd) {
      out << serialize_instance(reduce_cvc(parse_undirected(read_file(reduce_path)), planar));
      return kOk;
    }
    if (*bench_cmd) return cmd_bench(bench_dir, jobs, bench_oracle, out, err);
    if (*oracle_cmd) return cmd_oracle(oracle_path, oracle_method, out, err);
    if (*audit_cmd) return cmd_audit(audit_inst, audit_trace, out, err);
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kValidationFailure;
  }
  return kOk;
}

}  // namespace qbdst::cli
