#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

namespace osync {

class StiefelTuple;

// Symmetric nd x nd real matrix viewed as an n x n grid of d x d blocks.
//
// Storage is a single dense array so spectral routines can consume it
// directly. The input is symmetrized once, (M + M^T) / 2, at construction;
// afterwards the matrix is immutable.
class BlockMatrix {
 public:
  BlockMatrix(int n, int d, Eigen::MatrixXd data);

  static BlockMatrix zeros(int n, int d);
  static BlockMatrix identity(int n, int d);
  // Z Z^T with Z^T = [I_d, ..., I_d]: every block is I_d.
  static BlockMatrix synchronized(int n, int d);

  int n() const { return n_; }
  int d() const { return d_; }
  int side() const { return n_ * d_; }

  const Eigen::MatrixXd& dense() const { return data_; }

  auto block(int i, int j) const { return data_.block(i * d_, j * d_, d_, d_); }
  // i-th block row, d x nd.
  auto block_row(int i) const { return data_.middleRows(i * d_, d_); }

  BlockMatrix operator+(const BlockMatrix& other) const;
  BlockMatrix operator-(const BlockMatrix& other) const;
  BlockMatrix operator*(double scale) const;

 private:
  int n_;
  int d_;
  Eigen::MatrixXd data_;
};

inline BlockMatrix operator*(double scale, const BlockMatrix& m) { return m * scale; }

// Block-diagonal matrix blkdiag(L_11, ..., L_nn) of symmetric d x d blocks.
class BlockDiagonal {
 public:
  BlockDiagonal(int n, int d, std::vector<Eigen::MatrixXd> blocks);

  int n() const { return n_; }
  int d() const { return d_; }
  const Eigen::MatrixXd& block(int i) const { return blocks_[static_cast<size_t>(i)]; }
  const std::vector<Eigen::MatrixXd>& blocks() const { return blocks_; }

  // Smallest eigenvalue of block i.
  double lambda_min(int i) const;
  Eigen::MatrixXd to_dense() const;

 private:
  int n_;
  int d_;
  std::vector<Eigen::MatrixXd> blocks_;
};

// n x n matrix of blockwise traces.
Eigen::MatrixXd partial_trace(const BlockMatrix& m);

// Entrywise product X o (S S^T).
BlockMatrix hadamard_with_gram(const BlockMatrix& x, const StiefelTuple& s);

struct SpectralOptions {
  // Exact SVD / eigendecomposition at or below this side length (the
  // smaller side for rectangular input); power iteration above.
  int dense_norm_limit = 512;
  // Dense symmetric eigensolver at or below this side length; block
  // Lanczos above.
  int dense_eigen_limit = 2048;
  double power_tol = 1e-10;
  int power_max_iters = 10000;
  double lanczos_tol = 1e-9;
  std::uint64_t seed = 0x0b5e55ed;
};

// Largest singular value.
double operator_norm(const BlockMatrix& m, const SpectralOptions& options = {});
double operator_norm(const Eigen::Ref<const Eigen::MatrixXd>& m,
                     const SpectralOptions& options = {});

// k smallest eigenvalues in ascending order.
Eigen::VectorXd eigen_low(const BlockMatrix& m, int k, const SpectralOptions& options = {});
Eigen::VectorXd eigen_low(const Eigen::Ref<const Eigen::MatrixXd>& sym, int k,
                          const SpectralOptions& options = {});

// Debug serialization: header "i,j,k,l,value" then one line per entry,
// (i, j) the block index and (k, l) the position inside the block. All n^2 d^2
// entries are written.
void write_block_csv(const BlockMatrix& m, std::ostream& out);
BlockMatrix read_block_csv(std::istream& in);

}  // namespace osync
