#include "cbpa/cli.hpp"

#include "cbpa/baselines.hpp"
#include "cbpa/engine.hpp"
#include "cbpa/metrics.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <numeric>
#include <stdexcept>

namespace cbpa::cli {

namespace fs = std::filesystem;

namespace {

AllocationResult allocate(const Scenario& s, const std::string& algo, int max_rounds)
{
  if (algo == "aoa") return run_auction(s, max_rounds);
  EngineOptions opt;
  opt.max_rounds = max_rounds;
  if (algo == "cbba") return run_cbba_single(s, opt);
  if (algo == "cbpa") return run_dynamic(s, opt);
  throw std::invalid_argument("unknown allocator '" + algo + "' (expected cbpa, aoa or cbba)");
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer)
{
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  writer(f);
  if (!f) throw std::runtime_error("error writing " + path.string());
}

Scalar total_gain(const AllocationResult& r, const Scenario& s)
{
  const GainParams params = GainParams::from(s.constants);
  Scalar total = 0.0;
  for (Index j = 0; j < s.num_tasks(); ++j) total += result_task_gain(r, s, static_cast<TaskId>(j), params);
  return total;
}

void mean_std(const std::vector<Scalar>& xs, Scalar& mean, Scalar& sd)
{
  mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<Scalar>(xs.size());
  Scalar ss = 0.0;
  for (Scalar x : xs) ss += (x - mean) * (x - mean);
  sd = xs.size() > 1 ? std::sqrt(ss / static_cast<Scalar>(xs.size() - 1)) : 0.0;
}

} // namespace

std::pair<int, int> parse_range(const std::string& text)
{
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw std::invalid_argument("range must look like lo..hi: " + text);
  std::size_t used = 0;
  const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
  const int lo = std::stoi(a, &used);
  if (used != a.size()) throw std::invalid_argument("bad range start: " + a);
  const int hi = std::stoi(b, &used);
  if (used != b.size()) throw std::invalid_argument("bad range end: " + b);
  if (lo < 1 || hi > 100 || lo > hi) throw std::invalid_argument("range must satisfy 1 <= lo <= hi <= 100");
  return {lo, hi};
}

std::uint64_t sweep_instance_seed(std::uint64_t seed, int n, int r)
{
  return seed + 1000u * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(r);
}

SweepRow sweep_group(int n_tasks, int repeats, std::uint64_t seed, int max_rounds)
{
  if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  struct Outcome
  {
    Scalar cbpa, cbba;
    bool converged;
  };
  std::vector<std::future<Outcome>> jobs;
  for (int r = 0; r < repeats; ++r)
    jobs.push_back(std::async(std::launch::async, [=] {
      const Scenario s = case2_scenario(n_tasks, sweep_instance_seed(seed, n_tasks, r));
      EngineOptions opt;
      opt.max_rounds = max_rounds;
      const AllocationResult a = run_dynamic(s, opt);
      const AllocationResult b = run_cbba_single(s, opt);
      return Outcome{total_gain(a, s), total_gain(b, s), a.converged && b.converged};
    }));
  // collected in repeat order, whatever the finishing order
  std::vector<Scalar> cbpa, cbba;
  SweepRow row;
  row.n_tasks = n_tasks;
  for (auto& job : jobs) {
    const Outcome o = job.get();
    cbpa.push_back(o.cbpa);
    cbba.push_back(o.cbba);
    if (!o.converged) ++row.unconverged;
  }
  mean_std(cbpa, row.mean_gain_cbpa, row.std_gain_cbpa);
  mean_std(cbba, row.mean_gain_cbba, row.std_gain_cbba);
  return row;
}

int cmd_run(const RunArgs& args, std::ostream& log, std::ostream& err)
{
  Scenario s;
  AllocationResult result;
  try {
    if (args.preset.has_value() == args.scenario_path.has_value())
      throw std::invalid_argument("give exactly one of --preset or --scenario");
    s = args.preset ? preset_scenario(*args.preset, args.seed, args.n_tasks) : load_scenario_file(*args.scenario_path);
    result = allocate(s, args.algo, args.max_rounds);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    const fs::path out(args.out);
    fs::create_directories(out);
    const GainParams params = GainParams::from(s.constants);
    write_file(out / "result.csv", [&](std::ostream& f) { write_result_csv(f, result, s, params); });
    write_file(out / "paths.csv", [&](std::ostream& f) { write_paths_csv(f, result, s); });
    write_file(out / "summary.csv",
               [&](std::ostream& f) { write_summary_csv(f, {report(args.algo, result, s, params)}); });
    write_file(out / "schedule.svg", [&](std::ostream& f) { write_schedule_svg(f, result, s); });
    write_file(out / "paths.svg", [&](std::ostream& f) { write_paths_svg(f, result, s); });
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  log << args.algo << ": " << (result.converged ? "converged" : "did not converge") << " after "
      << result.rounds_to_converge << " iterations, " << result.unassigned.size() << " unassigned\n";
  return result.converged ? kExitOk : kExitNotConverged;
}

int cmd_sweep(const SweepArgs& args, std::ostream& log, std::ostream& err)
{
  std::vector<SweepRow> rows;
  try {
    if (args.lo < 1 || args.hi > 100 || args.lo > args.hi)
      throw std::invalid_argument("range must satisfy 1 <= lo <= hi <= 100");
    for (int n = args.lo; n <= args.hi; ++n) {
      rows.push_back(sweep_group(n, args.repeats, args.seed, args.max_rounds));
      log << "n=" << n << " cbpa=" << format_number(rows.back().mean_gain_cbpa)
          << " cbba=" << format_number(rows.back().mean_gain_cbba) << '\n';
    }
    const fs::path out(args.out);
    fs::create_directories(out);
    write_file(out / "sweep.csv", [&](std::ostream& f) { write_sweep_csv(f, rows); });
    write_file(out / "gains.svg", [&](std::ostream& f) { write_gains_svg(f, rows); });
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  for (const SweepRow& r : rows)
    if (r.unconverged > 0) return kExitNotConverged;
  return kExitOk;
}

int main(int argc, char** argv)
{
  CLI::App app{"Coalition task allocation with partial payloads"};
  app.require_subcommand(1);

  RunArgs run;
  std::string preset, scenario;
  auto* run_cmd = app.add_subcommand("run", "Allocate one scenario and write reports");
  auto* p = run_cmd->add_option("--preset", preset, "case1, case1-dynamic or case2");
  auto* sc = run_cmd->add_option("--scenario", scenario, "Scenario JSON file");
  p->excludes(sc);
  run_cmd->add_option("--algo", run.algo, "cbpa, aoa or cbba")->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Seed for generated presets")->capture_default_str();
  run_cmd->add_option("--out", run.out, "Output directory")->capture_default_str();
  run_cmd->add_option("--max-rounds", run.max_rounds, "Round limit (0: scenario bound)")->capture_default_str();
  run_cmd->add_option("--tasks", run.n_tasks, "Task count for case2")->capture_default_str();

  SweepArgs sweep;
  std::string range = "10..20";
  auto* sweep_cmd = app.add_subcommand("sweep", "Case 2 gain sweep, CBPA against single-robot CBBA");
  sweep_cmd->add_option("--sweep", range, "Task counts lo..hi")->capture_default_str();
  sweep_cmd->add_option("--repeats", sweep.repeats, "Instances per task count")->capture_default_str();
  sweep_cmd->add_option("--seed", sweep.seed, "Base seed")->capture_default_str();
  sweep_cmd->add_option("--out", sweep.out, "Output directory")->capture_default_str();
  sweep_cmd->add_option("--max-rounds", sweep.max_rounds, "Round limit (0: scenario bound)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (*run_cmd) {
    if (*p) run.preset = preset;
    if (*sc) run.scenario_path = scenario;
    return cmd_run(run, std::cout, std::cerr);
  }
  try {
    std::tie(sweep.lo, sweep.hi) = parse_range(range);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return cmd_sweep(sweep, std::cout, std::cerr);
}

} // namespace cbpa::cli
