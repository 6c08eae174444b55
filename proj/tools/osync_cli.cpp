// Command-line front end: instance generation, solving, certification,
// landscape diagnostics and the phase-transition harness.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "osync/certify.hpp"
#include "osync/errors.hpp"
#include "osync/experiment.hpp"
#include "osync/io.hpp"
#include "osync/landscape.hpp"
#include "osync/model.hpp"
#include "osync/solver.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using osync::StiefelTuple;
using osync::SyncProblem;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out_dir = ".";
};

struct InstanceArgs {
  int n = 100;
  int d = 3;
  std::optional<double> sigma;
  std::optional<double> kappa;
  std::string problem_path;
};

void add_instance_options(CLI::App* cmd, InstanceArgs& args) {
  cmd->add_option("--n", args.n, "Number of nodes")->check(CLI::Range(2, 1 << 20));
  cmd->add_option("--d", args.d, "Group dimension")->check(CLI::Range(1, 1 << 10));
  auto* sigma = cmd->add_option("--sigma", args.sigma, "Noise level")->check(CLI::NonNegativeNumber);
  cmd->add_option("--kappa", args.kappa, "Noise level as sigma = kappa sqrt(n/d)")
      ->check(CLI::NonNegativeNumber)
      ->excludes(sigma);
}

SyncProblem make_instance(const InstanceArgs& args, std::uint64_t seed) {
  if (!args.problem_path.empty()) return osync::load_problem(args.problem_path);
  double sigma = 0.0;
  if (args.sigma) sigma = *args.sigma;
  if (args.kappa) sigma = osync::sigma_from_kappa(*args.kappa, args.n, args.d);
  return osync::generate_gaussian(args.n, args.d, sigma, seed);
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json certificate_json(const osync::Certificate& c) {
  json out;
  out["verdict"] = osync::to_string(c.verdict);
  out["residual"] = c.residual;
  out["gap"] = c.gap();
  out["low_spectrum"] = vector_json(c.low_spectrum);
  out["residual_tol"] = c.tolerances.residual_tol;
  out["gap_tol"] = c.tolerances.gap_tol;
  return out;
}

json bound_json(const osync::BoundReport& r) {
  json out;
  out["lhs"] = r.lhs;
  out["proximity_term"] = r.proximity_term;
  out["cross_term"] = r.cross_term;
  out["alignment_term"] = r.alignment_term;
  out["noise_term"] = r.noise_term;
  out["rhs"] = r.rhs();
  out["delta"] = r.delta;
  if (r.gamma) out["gamma"] = *r.gamma;
  out["satisfied"] = r.satisfied;
  out["margin"] = r.margin;
  return out;
}

fs::path output_path(const Globals& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return fs::path(g.out_dir) / name;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

int run_generate(const Globals& g, const InstanceArgs& args, const std::string& name) {
  const SyncProblem problem = make_instance(args, g.seed);
  const fs::path path = output_path(g, name);
  osync::save_problem(problem, path.string());
  json out;
  out["problem"] = path.string();
  out["n"] = problem.n();
  out["d"] = problem.d();
  out["sigma"] = problem.sigma();
  out["seed"] = problem.seed();
  out["noise_kind"] = osync::to_string(problem.noise_kind());
  std::cout << out.dump(2) << '\n';
  return 0;
}

struct SolveArgs {
  int p = 0;
  std::string init = "ground-truth";
  osync::SolverConfig config;
  std::string trace_path;
  std::string candidate_name = "candidate.csv";
};

int run_solve(const Globals& g, const InstanceArgs& args, SolveArgs& sa) {
  const SyncProblem problem = make_instance(args, g.seed);
  sa.config.p = sa.p;
  sa.config.init = osync::init_kind_from_string(sa.init);
  sa.config.seed = g.seed;
  const auto [s, trace] = osync::solve(problem, sa.config);

  const fs::path candidate = output_path(g, sa.candidate_name);
  osync::save_tuple(s, candidate.string());
  if (!sa.trace_path.empty()) {
    std::ofstream out(output_path(g, sa.trace_path), std::ios::binary);
    out << "iter,objective,residual\n";
    char buf[96];
    for (size_t t = 0; t < trace.objective.size(); ++t) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", t + 1, trace.objective[t], trace.residual[t]);
      out << buf;
    }
  }

  const osync::Certificate cert =
      osync::certify(problem, s, {sa.config.residual_tol, sa.config.gap_tol});
  json out;
  out["n"] = problem.n();
  out["d"] = problem.d();
  out["p"] = s.p();
  out["sigma"] = problem.sigma();
  out["init"] = sa.init;
  out["iterations"] = trace.iterations;
  out["reason"] = osync::to_string(trace.reason);
  out["objective"] = osync::objective(problem, s);
  out["distance_to_truth"] = osync::distance_to_sync(s, problem.truth_or_canonical());
  out["certificate"] = certificate_json(cert);
  out["candidate"] = candidate.string();
  std::cout << out.dump(2) << '\n';
  return 0;
}

int run_certify(const std::string& problem_path, const std::string& candidate_path,
                const osync::CertifyTolerances& tol) {
  const SyncProblem problem = osync::load_problem(problem_path);
  const StiefelTuple s = osync::load_tuple(candidate_path);
  const osync::Certificate cert = osync::certify(problem, s, tol);
  const osync::BlockMatrix noise = problem.noise();
  const StiefelTuple truth = problem.truth_or_canonical();
  json out = certificate_json(cert);
  out["bound_cvx"] = bound_json(osync::bound_cvx(noise, truth));
  const int p_bm = std::max(s.p(), 2 * s.d() + 1);
  json bm = bound_json(*osync::bound_bm(noise, truth, p_bm));
  bm["p"] = p_bm;
  out["bound_bm"] = bm;
  std::cout << out.dump(2) << '\n';
  return cert.verdict == osync::Verdict::CertifiedUniqueRankD ? 0 : 1;
}

int run_landscape(const Globals& g, const std::string& problem_path,
                  const std::string& candidate_path, int directions) {
  const SyncProblem problem = osync::load_problem(problem_path);
  const StiefelTuple s = osync::load_tuple(candidate_path);
  const osync::SocpReport r = osync::sample_socp_test(problem, s, directions, g.seed);
  json out;
  out["grad_norm"] = r.grad_norm;
  out["min_hessian_quadform"] = r.min_hessian_quadform;
  out["max_hessian_quadform"] = r.max_hessian_quadform;
  out["num_directions"] = r.num_directions;
  out["min_lambda_block"] = r.lambda_min_blocks.minCoeff();
  out["is_socp_numerically"] = r.is_socp_numerically;
  try {
    const osync::AuditReport a = osync::bm_inequality_audit(problem, s);
    out["second_order_margin"] = a.second_order_margin();
    out["first_order_margin"] = a.first_order_margin();
  } catch (const osync::InputError& e) {
    out["audit_skipped"] = e.what();
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

struct PhaseArgs {
  std::string regime = "sdp";
  int d = 3;
  int p = 0;
  int trials = 10;
  int max_iters = 500;
  std::string kappas;
  std::string ns;
  bool full_grid = false;
};

int run_phase(const Globals& g, const PhaseArgs& pa) {
  osync::ExperimentGrid grid = pa.full_grid ? osync::ExperimentGrid::full(pa.d)
                                            : osync::ExperimentGrid::desk(pa.d);
  grid.regime = osync::regime_from_string(pa.regime);
  grid.p = pa.p > 0 ? pa.p : (grid.regime == osync::Regime::BurerMonteiro ? 2 * pa.d : pa.d);
  if (!pa.full_grid) grid.trials = pa.trials;
  grid.max_iters = pa.max_iters;
  grid.base_seed = g.seed;
  if (!pa.kappas.empty()) {
    grid.kappa_values.clear();
    for (const auto& k : split(pa.kappas)) grid.kappa_values.push_back(std::stod(k));
  }
  if (!pa.ns.empty()) {
    grid.n_values.clear();
    for (const auto& n : split(pa.ns)) grid.n_values.push_back(std::stoi(n));
  }

  const auto results = osync::run_phase_transition(grid, g.threads, [](const osync::CellResult& c) {
    std::fprintf(stderr, "kappa=%g n=%d: %d/%d certified\n", c.kappa, c.n, c.successes, c.trials);
  });

  const fs::path phase = output_path(g, "phase_transition.csv");
  const fs::path timing = output_path(g, "timing.csv");
  const fs::path heat = output_path(g, "heatmap.csv");
  const fs::path pgm = output_path(g, "heatmap.pgm");
  {
    std::ofstream out(phase, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + phase.string() + "' for writing");
    osync::write_phase_csv(results, out);
  }
  {
    std::ofstream out(timing, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + timing.string() + "' for writing");
    osync::write_timing_csv(results, out);
  }
  osync::emit_heatmap(results, heat.string(), pgm.string());

  json out;
  out["regime"] = osync::to_string(grid.regime);
  out["d"] = grid.d;
  out["p"] = grid.regime == osync::Regime::SdpCandidate ? grid.d : grid.p;
  out["trials"] = grid.trials;
  out["cells"] = results.size();
  out["phase_csv"] = phase.string();
  out["timing_csv"] = timing.string();
  out["heatmap_csv"] = heat.string();
  out["heatmap_pgm"] = pgm.string();
  std::cout << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonal group synchronization: projected power method and certificates"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Base random seed");
  app.add_option("--threads", g.threads, "Worker threads for the experiment grid")
      ->check(CLI::Range(1, 1024));
  app.add_option("--out-dir", g.out_dir, "Directory for written files");

  InstanceArgs gen_args;
  std::string gen_name = "problem.csv";
  auto* gen = app.add_subcommand("generate", "Sample A = Z Z^T + sigma W and write it");
  add_instance_options(gen, gen_args);
  gen->add_option("--name", gen_name, "File name inside --out-dir");

  InstanceArgs solve_args;
  SolveArgs sa;
  auto* sol = app.add_subcommand("solve", "Run the projected power method");
  add_instance_options(sol, solve_args);
  sol->add_option("--problem", solve_args.problem_path, "Read the instance from a block CSV");
  sol->add_option("--p", sa.p, "Factorization rank (default d)");
  sol->add_option("--init", sa.init, "Initialization")
      ->check(CLI::IsMember({"ground-truth", "random"}));
  sol->add_option("--max-iters", sa.config.max_iters)->check(CLI::PositiveNumber);
  sol->add_option("--residual-tol", sa.config.residual_tol)->check(CLI::PositiveNumber);
  sol->add_option("--gap-tol", sa.config.gap_tol)->check(CLI::PositiveNumber);
  sol->add_option("--trace", sa.trace_path, "Write iter,objective,residual CSV inside --out-dir");
  sol->add_option("--candidate-name", sa.candidate_name, "File name of the written iterate");

  std::string cert_problem, cert_candidate;
  osync::CertifyTolerances cert_tol;
  auto* cer = app.add_subcommand("certify", "Check the dual certificate of a candidate");
  cer->add_option("--problem", cert_problem)->required();
  cer->add_option("--candidate", cert_candidate)->required();
  cer->add_option("--residual-tol", cert_tol.residual_tol)->check(CLI::PositiveNumber);
  cer->add_option("--gap-tol", cert_tol.gap_tol)->check(CLI::PositiveNumber);

  std::string land_problem, land_candidate;
  int directions = 100;
  auto* land = app.add_subcommand("landscape-check", "Sampled second-order test and inequality audit");
  land->add_option("--problem", land_problem)->required();
  land->add_option("--candidate", land_candidate)->required();
  land->add_option("--directions", directions)->check(CLI::NonNegativeNumber);

  PhaseArgs pa;
  auto* ph = app.add_subcommand("phase-transition", "Success rates over a (kappa, n) grid");
  ph->add_option("--regime", pa.regime)->check(CLI::IsMember({"sdp", "bm"}));
  ph->add_option("--d", pa.d)->check(CLI::PositiveNumber);
  ph->add_option("--p", pa.p, "Rank for the bm regime (default 2d)");
  ph->add_option("--trials", pa.trials)->check(CLI::PositiveNumber);
  ph->add_option("--max-iters", pa.max_iters)->check(CLI::PositiveNumber);
  ph->add_option("--kappas", pa.kappas, "Comma-separated kappa values");
  ph->add_option("--ns", pa.ns, "Comma-separated n values");
  ph->add_flag("--full-grid", pa.full_grid, "kappa 0..0.6 step 0.05, n 100..1000, 20 trials");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return run_generate(g, gen_args, gen_name);
    if (*sol) return run_solve(g, solve_args, sa);
    if (*cer) return run_certify(cert_problem, cert_candidate, cert_tol);
    if (*land) return run_landscape(g, land_problem, land_candidate, directions);
    if (*ph) return run_phase(g, pa);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
