#pragma once

#include <vector>

#include "osync/manifold.hpp"
#include "osync/model.hpp"

namespace osync {

// Exhaustive search over sign vectors for d = 1.
struct EnumResult {
  // s_0 = +1; the optimum is only defined up to a global sign.
  std::vector<int> best_signs;
  double best_objective = 0.0;
  double second_best_objective = 0.0;
  // Another sign class attains best_objective up to 1e-12 relative.
  bool ties = false;
};

// Maximizes sum_ij A_ij s_i s_j over s in {-1, +1}^n with s_0 fixed to +1,
// visiting all 2^(n-1) classes. Requires d = 1 and 2 <= n <= 20.
EnumResult brute_force_z2(const SyncProblem& problem);

// sqrt(2 (nd - ||Z^T S||_*)), with the nuclear norm taken from a one-sided
// Jacobi SVD written independently of the manifold module.
double brute_force_nuclear_distance(const StiefelTuple& s);

// Singular values of a small dense matrix by one-sided Jacobi rotations,
// descending.
std::vector<double> jacobi_singular_values(const Eigen::MatrixXd& m);

}  // namespace osync
