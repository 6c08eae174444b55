#include "osync/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "osync/certify.hpp"
#include "osync/errors.hpp"
#include "osync/rng.hpp"
#include "osync/solver.hpp"

namespace osync {

using Eigen::MatrixXd;

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void check_dims(const SyncProblem& problem, const StiefelTuple& s) {
  if (s.n() != problem.n() || s.d() != problem.d()) {
    throw InputError("candidate dimensions do not match the instance");
  }
}

}  // namespace

TangentTuple riemannian_gradient(const SyncProblem& problem, const StiefelTuple& s) {
  check_dims(problem, s);
  return tangent_project(s, problem.data().dense() * s.stacked());
}

double hessian_quadform(const SyncProblem& problem, const StiefelTuple& s, const TangentTuple& v) {
  check_dims(problem, s);
  if (v.n() != s.n() || v.d() != s.d() || v.p() != s.p()) {
    throw InputError("hessian_quadform: direction dimensions differ from S");
  }
  const double defect = v.tangency_defect(s);
  if (defect > 1e-8) {
    throw InputError("hessian_quadform: direction is not tangent (defect " +
                     sci(defect) + ")");
  }
  const BlockDiagonal lambda = compute_lambda(problem, s);
  const MatrixXd& y = v.stacked();
  double value = y.cwiseProduct(problem.data().dense() * y).sum();
  for (int i = 0; i < s.n(); ++i) {
    value -= v.block(i).cwiseProduct(lambda.block(i) * v.block(i)).sum();
  }
  return value;
}

std::vector<TangentTuple> sample_tangent_directions(const StiefelTuple& s, int count,
                                                    std::uint64_t seed) {
  if (count < 0) throw InputError("sample_tangent_directions: negative count");
  const int n = s.n();
  const int d = s.d();
  const int p = s.p();
  Rng rng = make_rng(derive_stream({seed, static_cast<std::uint64_t>(n),
                                    static_cast<std::uint64_t>(d),
                                    static_cast<std::uint64_t>(p), 0x7a9ULL}));
  std::vector<TangentTuple> out;
  out.reserve(static_cast<size_t>(count));
  const MatrixXd eye = MatrixXd::Identity(p, p);
  for (int k = 0; k < count; ++k) {
    MatrixXd y;
    if (k % 2 == 1 && p > d) {
      const MatrixXd phi = gaussian_matrix(d, p, rng);
      y.resize(n * d, p);
      for (int i = 0; i < n; ++i) {
        y.middleRows(i * d, d) = phi * (eye - s.block(i).transpose() * s.block(i));
      }
    } else {
      y = tangent_project(s, gaussian_matrix(n * d, p, rng)).stacked();
    }
    const double norm = y.norm();
    if (norm > 0.0) y /= norm;
    out.emplace_back(n, d, p, std::move(y));
  }
  return out;
}

SocpReport sample_socp_test(const SyncProblem& problem, const StiefelTuple& s, int num_directions,
                            std::uint64_t seed, const SocpOptions& options) {
  check_dims(problem, s);
  SocpReport r;
  r.grad_norm = riemannian_gradient(problem, s).stacked().norm();
  const BlockDiagonal lambda = compute_lambda(problem, s);
  r.lambda_min_blocks.resize(s.n());
  for (int i = 0; i < s.n(); ++i) r.lambda_min_blocks(i) = lambda.lambda_min(i);

  r.num_directions = num_directions;
  r.min_hessian_quadform = std::numeric_limits<double>::infinity();
  r.max_hessian_quadform = -std::numeric_limits<double>::infinity();
  for (const auto& v : sample_tangent_directions(s, num_directions, seed)) {
    const double q = hessian_quadform(problem, s, v);
    r.min_hessian_quadform = std::min(r.min_hessian_quadform, q);
    r.max_hessian_quadform = std::max(r.max_hessian_quadform, q);
  }
  if (num_directions == 0) {
    r.min_hessian_quadform = 0.0;
    r.max_hessian_quadform = 0.0;
  }
  const double worst_lambda = s.n() > 0 ? r.lambda_min_blocks.minCoeff() : 1.0;
  r.is_socp_numerically = r.grad_norm < options.grad_tol &&
                          r.max_hessian_quadform <= options.quadform_tol &&
                          worst_lambda >= 1.0 - options.lambda_slack;
  return r;
}

AuditReport bm_inequality_audit(const SyncProblem& problem, const StiefelTuple& s,
                                double critical_tol) {
  check_dims(problem, s);
  AuditReport r;
  r.residual = check_fixed_point(problem, s);
  if (!(r.residual < critical_tol)) {
    throw InputError("bm_inequality_audit: S is not a critical point (residual " +
                     sci(r.residual) + ")");
  }
  if (problem.ground_truth()) {
    const SyncProblem canonical(reduce_to_canonical(problem).data(), problem.sigma(),
                                std::nullopt, problem.seed(), problem.noise_kind());
    return bm_inequality_audit(canonical, to_canonical_frame(*problem.ground_truth(), s),
                               critical_tol);
  }

  const int n = s.n();
  const int d = s.d();
  const int p = s.p();
  const BlockMatrix noise = problem.noise();
  const MatrixXd& delta = noise.dense();
  const MatrixXd& st = s.stacked();

  const double zts = s.reference_product(StiefelTuple::synchronized(n, d, d)).squaredNorm();
  const MatrixXd gram = st * st.transpose();
  const double sst = gram.squaredNorm();

  double weighted_trace = 0.0;
  double trace_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double tr = delta.block(i * d, j * d, d, d).trace();
      weighted_trace += (gram.block(i * d, j * d, d, d).squaredNorm() - d) * tr;
      trace_sum += tr;
    }
  }
  const double delta_gap = trace_sum - delta.cwiseProduct(gram).sum();

  const double nn = static_cast<double>(n) * n;
  r.second_order_lhs = (p - d) * zts;
  r.second_order_rhs = (p - 2.0 * d) * nn * d + sst * d + weighted_trace + (p - d) * delta_gap;
  r.first_order_lhs = sst;
  r.first_order_rhs = zts - (delta * st).squaredNorm() / n;
  return r;
}

}  // namespace osync
