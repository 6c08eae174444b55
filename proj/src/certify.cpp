#include "osync/certify.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "osync/errors.hpp"

namespace osync {

using Eigen::MatrixXd;

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::CertifiedUniqueRankD: return "certified_unique_rank_d";
    case Verdict::FirstOrderOnly: return "first_order_only";
    case Verdict::Failed: return "failed";
  }
  return "unknown";
}

namespace {

void check_dims(const SyncProblem& problem, const StiefelTuple& s) {
  if (s.n() != problem.n() || s.d() != problem.d()) {
    throw InputError("candidate dimensions do not match the instance");
  }
}

BoundReport evaluate_bound(const BlockMatrix& delta, const StiefelTuple& g, double del) {
  const int n = delta.n();
  const int d = delta.d();
  if (g.n() != n || g.d() != d || g.p() != d) {
    throw InputError("bound: ground truth must be n blocks of d x d orthogonal matrices");
  }
  const double norm = operator_norm(delta);
  const MatrixXd dg = delta.dense() * g.stacked();
  double max_row = 0.0;
  double max_align = 0.0;
  for (int i = 0; i < n; ++i) {
    max_row = std::max(max_row, operator_norm(delta.block_row(i)));
    max_align = std::max(max_align, operator_norm(dg.middleRows(i * d, d)));
  }
  BoundReport r;
  r.lhs = n;
  r.delta = del;
  r.proximity_term = 3.0 * del * del * d * norm * norm / (2.0 * n);
  r.cross_term = del * std::sqrt(static_cast<double>(d) / n) * norm * max_row;
  r.alignment_term = max_align;
  r.noise_term = norm;
  r.margin = r.lhs - r.rhs();
  r.satisfied = r.margin >= 0.0;
  return r;
}

}  // namespace

BlockDiagonal compute_lambda(const StiefelTuple& s, const MatrixXd& as) {
  if (as.rows() != s.stacked().rows() || as.cols() != s.p()) {
    throw InputError("compute_lambda: A S has the wrong shape");
  }
  const int d = s.d();
  std::vector<MatrixXd> blocks;
  blocks.reserve(static_cast<size_t>(s.n()));
  for (int i = 0; i < s.n(); ++i) {
    const MatrixXd sm = s.block(i) * as.middleRows(i * d, d).transpose();
    blocks.emplace_back(0.5 * (sm + sm.transpose()));
  }
  return BlockDiagonal(s.n(), d, std::move(blocks));
}

BlockDiagonal compute_lambda(const SyncProblem& problem, const StiefelTuple& s) {
  check_dims(problem, s);
  return compute_lambda(s, problem.data().dense() * s.stacked());
}

BlockMatrix certificate_matrix(const SyncProblem& problem, const BlockDiagonal& lambda) {
  if (lambda.n() != problem.n() || lambda.d() != problem.d()) {
    throw InputError("certificate_matrix: Lambda dimensions do not match the instance");
  }
  return BlockMatrix(problem.n(), problem.d(), lambda.to_dense() - problem.data().dense());
}

double certificate_residual(const StiefelTuple& s, const BlockDiagonal& lambda,
                            const MatrixXd& as) {
  const int d = s.d();
  MatrixXd r = -as;
  for (int i = 0; i < s.n(); ++i) r.middleRows(i * d, d) += lambda.block(i) * s.block(i);
  return operator_norm(r);
}

Certificate certify(const SyncProblem& problem, const StiefelTuple& s,
                    const CertifyTolerances& tolerances, const SpectralOptions& spectral) {
  check_dims(problem, s);
  const MatrixXd as = problem.data().dense() * s.stacked();
  Certificate cert{compute_lambda(s, as), 0.0, {}, Verdict::Failed, tolerances};
  cert.residual = certificate_residual(s, cert.lambda, as);
  const int k = std::min(problem.d() + 1, problem.n() * problem.d());
  cert.low_spectrum = eigen_low(certificate_matrix(problem, cert.lambda), k, spectral);
  if (cert.residual < tolerances.residual_tol) {
    const bool gap_ok = cert.gap() > tolerances.gap_tol;
    const bool psd_ok = cert.low_spectrum(0) >= -tolerances.residual_tol;
    cert.verdict = gap_ok && psd_ok ? Verdict::CertifiedUniqueRankD : Verdict::FirstOrderOnly;
  }
  return cert;
}

BoundReport bound_cvx(const BlockMatrix& delta, const StiefelTuple& ground_truth) {
  return evaluate_bound(delta, ground_truth, 4.0);
}

double anisotropy_gamma(const BlockMatrix& delta) {
  const double norm = operator_norm(delta);
  if (norm == 0.0) return 1.0;
  return std::max(operator_norm(partial_trace(delta)) / norm, 1.0);
}

double bm_delta(int p, int d, double gamma) {
  if (p <= 2 * d) throw InputError("bm_delta: requires p > 2d");
  return (2.0 + std::sqrt(5.0)) * (p + d) * gamma / (p - 2 * d);
}

std::optional<BoundReport> bound_bm(const BlockMatrix& delta, const StiefelTuple& ground_truth,
                                    int p) {
  if (p <= 2 * delta.d()) return std::nullopt;
  const double gamma = anisotropy_gamma(delta);
  BoundReport r = evaluate_bound(delta, ground_truth, bm_delta(p, delta.d(), gamma));
  r.gamma = gamma;
  return r;
}

bool proximity_check(const StiefelTuple& s, const StiefelTuple& reference,
                     const BlockMatrix& noise, double delta) {
  const double rhs = delta * std::sqrt(static_cast<double>(s.d()) / s.n()) * operator_norm(noise);
  return distance_to_sync(s, reference) <= rhs;
}

}  // namespace osync
