#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "osync/manifold.hpp"
#include "osync/model.hpp"

namespace osync {

// Block i is the tangent projection of M_i = sum_j A_ij S_j at S_i, which
// equals -((Lambda - A) S)_i. Along the polar retraction,
// d/dt f(R_S(t V)) at 0 is 2 <grad, V>.
TangentTuple riemannian_gradient(const SyncProblem& problem, const StiefelTuple& s);

// sum_ij <A_ij, V_i V_j^T> - sum_i <Lambda_ii, V_i V_i^T>. At a critical
// point the second derivative of f along the polar retraction is twice this
// value. Throws InputError when V is not tangent at S (defect > 1e-8).
double hessian_quadform(const SyncProblem& problem, const StiefelTuple& s, const TangentTuple& v);

// Unit-Frobenius tangent directions at S. Even indices are Gaussian matrices
// projected onto the tangent space; odd indices use the family
// V_i = Phi (I_p - S_i^T S_i) with one Gaussian Phi shared by all blocks,
// which is identically zero when p = d and is then replaced by a projected
// Gaussian.
std::vector<TangentTuple> sample_tangent_directions(const StiefelTuple& s, int count,
                                                    std::uint64_t seed);

struct SocpOptions {
  double grad_tol = 1e-5;
  double quadform_tol = 1e-8;
  double lambda_slack = 1e-6;
};

struct SocpReport {
  double grad_norm = 0.0;
  double min_hessian_quadform = 0.0;
  double max_hessian_quadform = 0.0;
  int num_directions = 0;
  // lambda_min(Lambda_ii) per block.
  Eigen::VectorXd lambda_min_blocks;
  // grad_norm < grad_tol, every sampled quadform <= quadform_tol and
  // lambda_min(Lambda_ii) >= 1 - lambda_slack for all i.
  bool is_socp_numerically = false;
};

SocpReport sample_socp_test(const SyncProblem& problem, const StiefelTuple& s, int num_directions,
                            std::uint64_t seed, const SocpOptions& options = {});

// Both sides of the two necessary inequalities, evaluated in canonical form
// (Delta = A - Z Z^T):
//   second order: (p-d)||Z^T S||^2 >= (p-2d) n^2 d + d ||S S^T||^2
//                 + sum_ij (||S_i S_j^T||^2 - d) Tr(Delta_ij)
//                 + (p-d) <Delta, Z Z^T - S S^T>
//   first order:  ||S S^T||^2 >= ||Z^T S||^2 - ||Delta S||^2 / n
struct AuditReport {
  double second_order_lhs = 0.0;
  double second_order_rhs = 0.0;
  double first_order_lhs = 0.0;
  double first_order_rhs = 0.0;
  double residual = 0.0;

  double second_order_margin() const { return second_order_lhs - second_order_rhs; }
  double first_order_margin() const { return first_order_lhs - first_order_rhs; }
};

// Instances with a ground truth are first reduced to canonical form. Throws
// InputError when ||(Lambda - A) S||_op >= critical_tol.
AuditReport bm_inequality_audit(const SyncProblem& problem, const StiefelTuple& s,
                                double critical_tol = 1e-8);

}  // namespace osync
