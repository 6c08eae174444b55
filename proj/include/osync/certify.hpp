#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "osync/blockmat.hpp"
#include "osync/manifold.hpp"
#include "osync/model.hpp"

namespace osync {

struct CertifyTolerances {
  double residual_tol = 1e-6;
  double gap_tol = 1e-8;
};

enum class Verdict { CertifiedUniqueRankD, FirstOrderOnly, Failed };

std::string to_string(Verdict verdict);

// The dual certificate C = Lambda - A built from a candidate S.
struct Certificate {
  BlockDiagonal lambda;
  // ||(Lambda - A) S||_op.
  double residual = 0.0;
  // lambda_1 <= ... <= lambda_{d+1} of C.
  Eigen::VectorXd low_spectrum;
  Verdict verdict = Verdict::Failed;
  CertifyTolerances tolerances;

  // lambda_{d+1}(C).
  double gap() const { return low_spectrum(low_spectrum.size() - 1); }
};

// Lambda_ii = (S_i M_i^T + M_i S_i^T) / 2 with M_i = sum_j A_ij S_j.
BlockDiagonal compute_lambda(const SyncProblem& problem, const StiefelTuple& s);
// Same, reusing a precomputed A S.
BlockDiagonal compute_lambda(const StiefelTuple& s, const Eigen::MatrixXd& as);

// C = Lambda - A.
BlockMatrix certificate_matrix(const SyncProblem& problem, const BlockDiagonal& lambda);

// ||Lambda S - A S||_op.
double certificate_residual(const StiefelTuple& s, const BlockDiagonal& lambda,
                            const Eigen::MatrixXd& as);

// Verdict:
//   CertifiedUniqueRankD  residual < residual_tol, lambda_{d+1}(C) > gap_tol
//                         and lambda_1(C) >= -residual_tol;
//   FirstOrderOnly        residual < residual_tol but the spectral test fails;
//   Failed                residual >= residual_tol.
Certificate certify(const SyncProblem& problem, const StiefelTuple& s,
                    const CertifyTolerances& tolerances = {},
                    const SpectralOptions& spectral = {});

// Sufficient condition n >= t1 + t2 + t3 + t4 for a unique rank-d optimum.
struct BoundReport {
  double lhs = 0.0;
  // 3 delta^2 d ||Delta||^2 / (2n)
  double proximity_term = 0.0;
  // delta sqrt(d/n) ||Delta|| max_i ||Delta_i||
  double cross_term = 0.0;
  // max_i ||sum_j Delta_ij G_j||
  double alignment_term = 0.0;
  // ||Delta||
  double noise_term = 0.0;
  double delta = 0.0;
  std::optional<double> gamma;
  bool satisfied = false;
  double margin = 0.0;

  double rhs() const { return proximity_term + cross_term + alignment_term + noise_term; }
};

// delta = 4.
BoundReport bound_cvx(const BlockMatrix& delta, const StiefelTuple& ground_truth);

// gamma = max(||Tr_d(Delta)|| / ||Delta||, 1), gamma = 1 for Delta = 0.
double anisotropy_gamma(const BlockMatrix& delta);
// (2 + sqrt 5)(p + d) gamma / (p - 2d); requires p > 2d.
double bm_delta(int p, int d, double gamma);

// The same inequality with delta = bm_delta(p, d, gamma). nullopt when
// p <= 2d.
std::optional<BoundReport> bound_bm(const BlockMatrix& delta, const StiefelTuple& ground_truth,
                                    int p);

// d_F(S, Z) <= delta sqrt(d/n) ||Delta||_op.
bool proximity_check(const StiefelTuple& s, const StiefelTuple& reference,
                     const BlockMatrix& noise, double delta);

}  // namespace osync
