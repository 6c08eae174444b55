#include "osync/blockmat.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>

#include "osync/errors.hpp"
#include "osync/manifold.hpp"

namespace osync {

BlockMatrix::BlockMatrix(int n, int d, Eigen::MatrixXd data) : n_(n), d_(d) {
  if (n < 1 || d < 1) {
    throw InputError("BlockMatrix: n and d must be positive");
  }
  if (data.rows() != n * d || data.cols() != n * d) {
    throw InputError("BlockMatrix: expected a square matrix of side n*d = " +
                     std::to_string(n * d));
  }
  data_ = 0.5 * (data + data.transpose());
}

BlockMatrix BlockMatrix::zeros(int n, int d) {
  return BlockMatrix(n, d, Eigen::MatrixXd::Zero(n * d, n * d));
}

BlockMatrix BlockMatrix::identity(int n, int d) {
  return BlockMatrix(n, d, Eigen::MatrixXd::Identity(n * d, n * d));
}

BlockMatrix BlockMatrix::synchronized(int n, int d) {
  Eigen::MatrixXd data(n * d, n * d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      data.block(i * d, j * d, d, d).setIdentity();
    }
  }
  return BlockMatrix(n, d, std::move(data));
}

BlockMatrix BlockMatrix::operator+(const BlockMatrix& other) const {
  if (other.n_ != n_ || other.d_ != d_) {
    throw InputError("BlockMatrix: dimension mismatch in +");
  }
  return BlockMatrix(n_, d_, data_ + other.data_);
}

BlockMatrix BlockMatrix::operator-(const BlockMatrix& other) const {
  if (other.n_ != n_ || other.d_ != d_) {
    throw InputError("BlockMatrix: dimension mismatch in -");
  }
  return BlockMatrix(n_, d_, data_ - other.data_);
}

BlockMatrix BlockMatrix::operator*(double scale) const {
  return BlockMatrix(n_, d_, data_ * scale);
}

BlockDiagonal::BlockDiagonal(int n, int d, std::vector<Eigen::MatrixXd> blocks)
    : n_(n), d_(d), blocks_(std::move(blocks)) {
  if (static_cast<int>(blocks_.size()) != n) {
    throw InputError("BlockDiagonal: expected n blocks");
  }
  for (auto& b : blocks_) {
    if (b.rows() != d || b.cols() != d) {
      throw InputError("BlockDiagonal: every block must be d x d");
    }
    b = (0.5 * (b + b.transpose())).eval();
  }
}

double BlockDiagonal::lambda_min(int i) const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(block(i), Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

Eigen::MatrixXd BlockDiagonal::to_dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_ * d_, n_ * d_);
  for (int i = 0; i < n_; ++i) {
    out.block(i * d_, i * d_, d_, d_) = blocks_[static_cast<size_t>(i)];
  }
  return out;
}

Eigen::MatrixXd partial_trace(const BlockMatrix& m) {
  const int n = m.n();
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out(i, j) = m.block(i, j).trace();
    }
  }
  return out;
}

BlockMatrix hadamard_with_gram(const BlockMatrix& x, const StiefelTuple& s) {
  if (x.n() != s.n() || x.d() != s.d()) {
    throw InputError("hadamard_with_gram: X and S S^T are not conformable");
  }
  const Eigen::MatrixXd gram = s.stacked() * s.stacked().transpose();
  return BlockMatrix(x.n(), x.d(), x.dense().cwiseProduct(gram));
}

void write_block_csv(const BlockMatrix& m, std::ostream& out) {
  out << "i,j,k,l,value\n";
  char buf[64];
  const int n = m.n();
  const int d = m.d();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) {
          std::snprintf(buf, sizeof buf, "%.17g", m.dense()(i * d + k, j * d + l));
          out << i << ',' << j << ',' << k << ',' << l << ',' << buf << '\n';
        }
      }
    }
  }
}

BlockMatrix read_block_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("i,j,k,l,value", 0) != 0) {
    throw InputError("read_block_csv: missing 'i,j,k,l,value' header");
  }
  std::vector<std::tuple<int, int, int, int, double>> entries;
  int n = 0;
  int d = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    int i, j, k, l;
    double v;
    char c1, c2, c3, c4;
    if (!(row >> i >> c1 >> j >> c2 >> k >> c3 >> l >> c4 >> v) || i < 0 || j < 0 || k < 0 ||
        l < 0) {
      throw InputError("read_block_csv: malformed line '" + line + "'");
    }
    n = std::max({n, i + 1, j + 1});
    d = std::max({d, k + 1, l + 1});
    entries.emplace_back(i, j, k, l, v);
  }
  if (n == 0) {
    throw InputError("read_block_csv: no entries");
  }
  Eigen::MatrixXd data = Eigen::MatrixXd::Zero(n * d, n * d);
  for (const auto& [i, j, k, l, v] : entries) {
    data(i * d + k, j * d + l) = v;
  }
  return BlockMatrix(n, d, std::move(data));
}

}  // namespace osync
