#include "osync/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

#include "osync/errors.hpp"

namespace osync {

EnumResult brute_force_z2(const SyncProblem& problem) {
  if (problem.d() != 1) throw InputError("brute_force_z2: requires d = 1");
  const int n = problem.n();
  if (n < 2 || n > 20) throw InputError("brute_force_z2: requires 2 <= n <= 20");

  std::vector<std::vector<double>> a(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = problem.data().dense()(i, j);
  }

  const std::uint32_t classes = 1u << (n - 1);
  double best = -std::numeric_limits<double>::infinity();
  double second = -std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = 0;
  std::vector<int> s(static_cast<size_t>(n));
  for (std::uint32_t mask = 0; mask < classes; ++mask) {
    s[0] = 1;
    for (int i = 1; i < n; ++i) s[i] = (mask >> (i - 1)) & 1u ? -1 : 1;
    double value = 0.0;
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int j = 0; j < n; ++j) row += a[i][j] * s[j];
      value += s[i] * row;
    }
    if (value > best) {
      second = best;
      best = value;
      best_mask = mask;
    } else if (value > second) {
      second = value;
    }
  }

  EnumResult r;
  r.best_objective = best;
  r.second_best_objective = second;
  r.ties = best - second <= 1e-12 * std::max(1.0, std::abs(best));
  r.best_signs.assign(static_cast<size_t>(n), 1);
  for (int i = 1; i < n; ++i) r.best_signs[i] = (best_mask >> (i - 1)) & 1u ? -1 : 1;
  return r;
}

std::vector<double> jacobi_singular_values(const Eigen::MatrixXd& m) {
  // Work on columns; a wide matrix is transposed first.
  const bool wide = m.cols() > m.rows();
  const int rows = static_cast<int>(wide ? m.cols() : m.rows());
  const int cols = static_cast<int>(wide ? m.rows() : m.cols());
  std::vector<std::vector<double>> u(static_cast<size_t>(cols), std::vector<double>(static_cast<size_t>(rows)));
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) u[c][r] = wide ? m(c, r) : m(r, c);
  }

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int a = 0; a < cols - 1; ++a) {
      for (int b = a + 1; b < cols; ++b) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (int r = 0; r < rows; ++r) {
          alpha += u[a][r] * u[a][r];
          beta += u[b][r] * u[b][r];
          gamma += u[a][r] * u[b][r];
        }
        if (gamma == 0.0) continue;
        const double scale = std::sqrt(alpha * beta);
        if (scale == 0.0) continue;
        off = std::max(off, std::abs(gamma) / scale);
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int r = 0; r < rows; ++r) {
          const double x = u[a][r];
          const double y = u[b][r];
          u[a][r] = c * x - s * y;
          u[b][r] = s * x + c * y;
        }
      }
    }
    if (off < 1e-15) break;
  }

  std::vector<double> sv(static_cast<size_t>(cols));
  for (int c = 0; c < cols; ++c) {
    double sq = 0.0;
    for (int r = 0; r < rows; ++r) sq += u[c][r] * u[c][r];
    sv[c] = std::sqrt(sq);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

double brute_force_nuclear_distance(const StiefelTuple& s) {
  const int n = s.n();
  const int d = s.d();
  Eigen::MatrixXd zts = Eigen::MatrixXd::Zero(d, s.p());
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) {
      for (int l = 0; l < s.p(); ++l) zts(k, l) += s.stacked()(i * d + k, l);
    }
  }
  double nuclear = 0.0;
  for (double v : jacobi_singular_values(zts)) nuclear += v;
  return std::sqrt(std::max(0.0, 2.0 * (static_cast<double>(n) * d - nuclear)));
}

}  // namespace osync
