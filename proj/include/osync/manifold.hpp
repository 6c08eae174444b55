#pragma once

#include <cstdint>
#include <iosfwd>

#include <Eigen/Dense>

namespace osync {

// A point of St(d, p)^n: n stacked d x p matrices S_i with S_i S_i^T = I_d.
// Stored as the nd x p matrix S whose i-th block row is S_i.
class StiefelTuple {
 public:
  // Validates S_i S_i^T = I_d to Frobenius tolerance `tol` for every i.
  StiefelTuple(int n, int d, int p, Eigen::MatrixXd stacked, double tol = 1e-10);

  // Z Q with Z^T = [I_d, ..., I_d] and Q = [I_d | 0] (d x p).
  static StiefelTuple synchronized(int n, int d, int p);
  // Every block equal to q (d x p, q q^T = I_d).
  static StiefelTuple synchronized(int n, const Eigen::MatrixXd& q);

  int n() const { return n_; }
  int d() const { return d_; }
  int p() const { return p_; }

  const Eigen::MatrixXd& stacked() const { return data_; }
  auto block(int i) const { return data_.middleRows(i * d_, d_); }

  // R^T S = sum_i R_i^T S_i for a reference tuple with square blocks
  // (p = d); with R = Z this is the block sum sum_i S_i.
  Eigen::MatrixXd reference_product(const StiefelTuple& reference) const;

 private:
  int n_;
  int d_;
  int p_;
  Eigen::MatrixXd data_;
};

// n stacked d x p tangent directions. Tangency is a property relative to a
// base point and is checked with is_tangent_at().
class TangentTuple {
 public:
  TangentTuple(int n, int d, int p, Eigen::MatrixXd stacked);

  int n() const { return n_; }
  int d() const { return d_; }
  int p() const { return p_; }
  const Eigen::MatrixXd& stacked() const { return data_; }
  auto block(int i) const { return data_.middleRows(i * d_, d_); }

  // Largest Frobenius norm of S_i Y_i^T + Y_i S_i^T over the blocks.
  double tangency_defect(const StiefelTuple& base) const;
  bool is_tangent_at(const StiefelTuple& base, double tol = 1e-10) const {
    return tangency_defect(base) <= tol;
  }

 private:
  int n_;
  int d_;
  int p_;
  Eigen::MatrixXd data_;
};

// P(M) = U V^T from the thin SVD M = U Sigma V^T of a d x p matrix, p >= d:
// the partial-orthogonal matrix maximizing <Q, M>. Throws RankDeficient when
// sigma_d <= 1e-12 sigma_1.
Eigen::MatrixXd polar_project(const Eigen::Ref<const Eigen::MatrixXd>& m);

// Projection onto the tangent space of St(d, p) at s:
// Pi - (Pi s^T + s Pi^T) s / 2.
Eigen::MatrixXd tangent_project(const Eigen::Ref<const Eigen::MatrixXd>& s,
                                const Eigen::Ref<const Eigen::MatrixXd>& pi);
TangentTuple tangent_project(const StiefelTuple& s, const Eigen::Ref<const Eigen::MatrixXd>& pi);

// Blockwise polar retraction R_S(V) = P(S_i + V_i).
StiefelTuple retract(const StiefelTuple& s, const Eigen::Ref<const Eigen::MatrixXd>& v);

// Q minimizing ||S - R Q||_F over St(d, p), i.e. Q = P(R^T S). When R^T S
// is rank-deficient the minimizer is not unique and U V^T from its SVD is
// returned.
Eigen::MatrixXd align(const StiefelTuple& s, const StiefelTuple& reference);

// d_F(S, R) = ||S - R align(S, R)||_F.
double distance_to_sync(const StiefelTuple& s, const StiefelTuple& reference);

// Each S_i is the row space of an independent d x p Gaussian matrix,
// orthonormalized by QR with a positive-diagonal R factor.
StiefelTuple random_stiefel(int n, int d, int p, std::uint64_t seed);

// "i,k,l,value": block i, row k, column l.
void write_tuple_csv(const StiefelTuple& s, std::ostream& out);
StiefelTuple read_tuple_csv(std::istream& in, double tol = 1e-8);

}  // namespace osync
