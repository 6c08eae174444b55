#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace osync {

enum class Regime { SdpCandidate, BurerMonteiro };

std::string to_string(Regime regime);
Regime regime_from_string(const std::string& name);

struct ExperimentGrid {
  std::vector<double> kappa_values;
  std::vector<int> n_values;
  int d = 3;
  // Factorization rank; ignored (p = d) in the SdpCandidate regime.
  int p = 3;
  int trials = 10;
  Regime regime = Regime::SdpCandidate;
  std::uint64_t base_seed = 1;
  int max_iters = 500;

  // kappa in {0, 0.2, 0.35, 0.5}, n in {100, 200}, 10 trials.
  static ExperimentGrid desk(int d = 3);
  // kappa = 0, 0.05, ..., 0.6; n = 100, 200, ..., 1000; 20 trials.
  static ExperimentGrid full(int d = 3);

  void validate() const;
};

struct CellResult {
  double kappa = 0.0;
  int n = 0;
  int successes = 0;
  int trials = 0;
  // Runs that hit max_iters; already counted as failures.
  int timeouts = 0;
  double mean_iters = 0.0;
  double mean_seconds = 0.0;

  double fraction() const { return trials > 0 ? static_cast<double>(successes) / trials : 0.0; }
};

// Seed of one trial: hash of (base_seed, n, d, kappa index, trial index).
std::uint64_t trial_seed(const ExperimentGrid& grid, int n, int kappa_index, int trial);

// Runs one cell; trials are sequential.
CellResult run_cell(const ExperimentGrid& grid, int kappa_index, int n);

// Every (kappa, n) cell, spread over `threads` workers. Results are ordered
// kappa-major, then n, as listed in the grid, regardless of scheduling.
std::vector<CellResult> run_phase_transition(
    const ExperimentGrid& grid, int threads = 1,
    const std::function<void(const CellResult&)>& on_cell = {});

// kappa,n,successes,trials,timeouts,mean_iters
void write_phase_csv(const std::vector<CellResult>& results, std::ostream& out);
// kappa,n,mean_seconds
void write_timing_csv(const std::vector<CellResult>& results, std::ostream& out);

// Success fractions as a kappa x n table, kappa descending down the rows.
// Header "kappa,<n_1>,<n_2>,...".
void write_heatmap_csv(const std::vector<CellResult>& results, std::ostream& out);
// Plain (P2) graymap of the same table, level = round(255 * fraction).
void write_heatmap_pgm(const std::vector<CellResult>& results, std::ostream& out);

// Writes <path> as CSV and, when pgm_path is non-empty, the graymap.
void emit_heatmap(const std::vector<CellResult>& results, const std::string& csv_path,
                  const std::string& pgm_path = {});

}  // namespace osync
