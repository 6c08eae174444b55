#include "osync/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "osync/errors.hpp"
#include "osync/model.hpp"
#include "osync/rng.hpp"
#include "osync/solver.hpp"

namespace osync {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

struct Table {
  std::vector<double> kappas;  // descending
  std::vector<int> ns;         // ascending
  std::map<std::pair<double, int>, double> fraction;
};

Table tabulate(const std::vector<CellResult>& results) {
  if (results.empty()) throw InputError("heatmap: no results");
  Table t;
  for (const auto& r : results) {
    t.kappas.push_back(r.kappa);
    t.ns.push_back(r.n);
    t.fraction[{r.kappa, r.n}] = r.fraction();
  }
  std::sort(t.kappas.begin(), t.kappas.end(), std::greater<>());
  t.kappas.erase(std::unique(t.kappas.begin(), t.kappas.end()), t.kappas.end());
  std::sort(t.ns.begin(), t.ns.end());
  t.ns.erase(std::unique(t.ns.begin(), t.ns.end()), t.ns.end());
  return t;
}

}  // namespace

std::string to_string(Regime regime) {
  return regime == Regime::SdpCandidate ? "sdp" : "bm";
}

Regime regime_from_string(const std::string& name) {
  if (name == "sdp") return Regime::SdpCandidate;
  if (name == "bm") return Regime::BurerMonteiro;
  throw InputError("unknown regime '" + name + "' (expected sdp or bm)");
}

ExperimentGrid ExperimentGrid::desk(int d) {
  ExperimentGrid g;
  g.kappa_values = {0.0, 0.2, 0.35, 0.5};
  g.n_values = {100, 200};
  g.d = d;
  g.p = d;
  g.trials = 10;
  return g;
}

ExperimentGrid ExperimentGrid::full(int d) {
  ExperimentGrid g;
  for (int k = 0; k <= 12; ++k) g.kappa_values.push_back(0.05 * k);
  for (int n = 100; n <= 1000; n += 100) g.n_values.push_back(n);
  g.d = d;
  g.p = d;
  g.trials = 20;
  return g;
}

void ExperimentGrid::validate() const {
  if (kappa_values.empty() || n_values.empty()) throw InputError("grid: empty kappa or n list");
  for (double k : kappa_values) {
    if (!(k >= 0.0)) throw InputError("grid: kappa must be nonnegative");
  }
  for (int n : n_values) {
    if (n < 2) throw InputError("grid: n must be at least 2");
  }
  if (d < 1) throw InputError("grid: d must be positive");
  if (regime == Regime::BurerMonteiro && p < d) throw InputError("grid: p must be at least d");
  if (trials < 1) throw InputError("grid: trials must be at least 1");
  if (max_iters < 1) throw InputError("grid: max_iters must be at least 1");
}

std::uint64_t trial_seed(const ExperimentGrid& grid, int n, int kappa_index, int trial) {
  return derive_stream({grid.base_seed, static_cast<std::uint64_t>(n),
                        static_cast<std::uint64_t>(grid.d), static_cast<std::uint64_t>(kappa_index),
                        static_cast<std::uint64_t>(trial)});
}

CellResult run_cell(const ExperimentGrid& grid, int kappa_index, int n) {
  const double kappa = grid.kappa_values.at(static_cast<size_t>(kappa_index));
  CellResult cell;
  cell.kappa = kappa;
  cell.n = n;
  cell.trials = grid.trials;
  long total_iters = 0;
  double total_seconds = 0.0;
  for (int t = 0; t < grid.trials; ++t) {
    const std::uint64_t seed = trial_seed(grid, n, kappa_index, t);
    const auto start = std::chrono::steady_clock::now();
    const SyncProblem problem = generate_gaussian(n, grid.d, sigma_from_kappa(kappa, n, grid.d), seed);
    SolverConfig config;
    config.max_iters = grid.max_iters;
    if (grid.regime == Regime::SdpCandidate) {
      config.init = InitKind::GroundTruth;
      config.p = grid.d;
    } else {
      config.init = InitKind::Random;
      config.p = grid.p;
      config.seed = mix64(seed);
    }
    const auto [s, trace] = solve(problem, config);
    total_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    total_iters += trace.iterations;
    if (trace.reason == StopReason::CertifiedStop) ++cell.successes;
    if (trace.reason == StopReason::MaxIters) ++cell.timeouts;
  }
  cell.mean_iters = static_cast<double>(total_iters) / grid.trials;
  cell.mean_seconds = total_seconds / grid.trials;
  return cell;
}

std::vector<CellResult> run_phase_transition(const ExperimentGrid& grid, int threads,
                                             const std::function<void(const CellResult&)>& on_cell) {
  grid.validate();
  const size_t nk = grid.kappa_values.size();
  const size_t nn = grid.n_values.size();
  const size_t cells = nk * nn;
  std::vector<CellResult> results(cells);
  std::atomic<size_t> next{0};
  std::mutex report_mutex;
  std::exception_ptr failure;

  auto worker = [&] {
    for (size_t idx = next++; idx < cells; idx = next++) {
      try {
        results[idx] = run_cell(grid, static_cast<int>(idx / nn), grid.n_values[idx % nn]);
        if (on_cell) {
          std::lock_guard<std::mutex> lock(report_mutex);
          on_cell(results[idx]);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(report_mutex);
        if (!failure) failure = std::current_exception();
        next = cells;
      }
    }
  };

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(cells)));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

void write_phase_csv(const std::vector<CellResult>& results, std::ostream& out) {
  out << "kappa,n,successes,trials,timeouts,mean_iters\n";
  for (const auto& r : results) {
    out << fmt("%g", r.kappa) << ',' << r.n << ',' << r.successes << ',' << r.trials << ','
        << r.timeouts << ',' << fmt("%.4f", r.mean_iters) << '\n';
  }
}

void write_timing_csv(const std::vector<CellResult>& results, std::ostream& out) {
  out << "kappa,n,mean_seconds\n";
  for (const auto& r : results) {
    out << fmt("%g", r.kappa) << ',' << r.n << ',' << fmt("%.6f", r.mean_seconds) << '\n';
  }
}

void write_heatmap_csv(const std::vector<CellResult>& results, std::ostream& out) {
  const Table t = tabulate(results);
  out << "kappa";
  for (int n : t.ns) out << ',' << n;
  out << '\n';
  for (double k : t.kappas) {
    out << fmt("%g", k);
    for (int n : t.ns) {
      out << ',';
      const auto it = t.fraction.find({k, n});
      if (it != t.fraction.end()) out << fmt("%.4f", it->second);
    }
    out << '\n';
  }
}

void write_heatmap_pgm(const std::vector<CellResult>& results, std::ostream& out) {
  const Table t = tabulate(results);
  out << "P2\n" << t.ns.size() << ' ' << t.kappas.size() << "\n255\n";
  for (double k : t.kappas) {
    for (size_t c = 0; c < t.ns.size(); ++c) {
      const auto it = t.fraction.find({k, t.ns[c]});
      const double f = it != t.fraction.end() ? it->second : 0.0;
      if (c > 0) out << ' ';
      out << static_cast<int>(std::lround(255.0 * f));
    }
    out << '\n';
  }
}

void emit_heatmap(const std::vector<CellResult>& results, const std::string& csv_path,
                  const std::string& pgm_path) {
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + csv_path + "' for writing");
    write_heatmap_csv(results, out);
    if (!out) throw std::runtime_error("write failed for '" + csv_path + "'");
  }
  if (!pgm_path.empty()) {
    std::ofstream out(pgm_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + pgm_path + "' for writing");
    write_heatmap_pgm(results, out);
    if (!out) throw std::runtime_error("write failed for '" + pgm_path + "'");
  }
}

}  // namespace osync
