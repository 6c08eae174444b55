#include <algorithm>
#include <cmath>
#include <string>

#include "osync/blockmat.hpp"
#include "osync/errors.hpp"
#include "osync/rng.hpp"

namespace osync {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void require_finite(const Eigen::Ref<const MatrixXd>& m, const char* who) {
  if (!m.allFinite()) {
    throw InputError(std::string(who) + ": non-finite entries");
  }
}

// sigma_max by power iteration on M^T M; the estimate ||M v|| increases
// monotonically towards sigma_max.
double power_norm(const Eigen::Ref<const MatrixXd>& m, const SpectralOptions& opt) {
  Rng rng = make_rng(derive_stream({opt.seed, static_cast<std::uint64_t>(m.rows()),
                                    static_cast<std::uint64_t>(m.cols())}));
  VectorXd v = gaussian_matrix(m.cols(), 1, rng);
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < opt.power_max_iters; ++it) {
    const VectorXd u = m * v;
    const double next = u.norm();
    if (next == 0.0) return 0.0;
    v.noalias() = m.transpose() * u;
    const double vn = v.norm();
    if (vn == 0.0) return next;
    v /= vn;
    if (std::abs(next - sigma) <= opt.power_tol * next) return next;
    sigma = next;
  }
  return sigma;
}

MatrixXd orthonormal_columns(const MatrixXd& w) {
  Eigen::HouseholderQR<MatrixXd> qr(w);
  return qr.householderQ() * MatrixXd::Identity(w.rows(), w.cols());
}

// Appends an orthonormal block spanning the part of `w` orthogonal to the
// current basis. Directions that vanish after projection (invariant
// subspace found) are replaced with fresh random ones so the basis keeps
// growing. Returns the number of columns appended.
Index extend_basis(const MatrixXd& m, MatrixXd& basis, MatrixXd& image, Index used,
                   MatrixXd w, Rng& rng) {
  const Index b = w.cols();
  const double scale = std::max(1.0, w.norm());
  for (int pass = 0; pass < 2; ++pass) {
    w -= basis.leftCols(used) * (basis.leftCols(used).transpose() * w);
  }
  Eigen::ColPivHouseholderQR<MatrixXd> qr(w);
  const Index rank = std::min<Index>(qr.rank(), b);
  const double tiny = 1e-10 * scale;
  Index good = 0;
  for (Index c = 0; c < rank; ++c) {
    if (std::abs(qr.matrixQR()(c, c)) > tiny) ++good;
  }
  MatrixXd block(w.rows(), b);
  if (good > 0) {
    const MatrixXd q = qr.householderQ() * MatrixXd::Identity(w.rows(), good);
    block.leftCols(good) = q;
  }
  if (good < b) {
    MatrixXd fill = gaussian_matrix(w.rows(), b - good, rng);
    for (int pass = 0; pass < 2; ++pass) {
      fill -= basis.leftCols(used) * (basis.leftCols(used).transpose() * fill);
      if (good > 0) fill -= block.leftCols(good) * (block.leftCols(good).transpose() * fill);
    }
    block.rightCols(b - good) = orthonormal_columns(fill);
  }
  basis.middleCols(used, b) = block;
  image.middleCols(used, b) = m * block;
  return b;
}

// k smallest eigenvalues of a symmetric matrix by thick-restarted block
// Krylov iteration with exact Rayleigh-Ritz on the stored basis.
VectorXd block_lanczos_low(const MatrixXd& m, int k, const SpectralOptions& opt) {
  const Index n = m.rows();
  const Index b = std::min<Index>(n, k + 4);
  const Index max_basis = std::min<Index>(n, std::max<Index>(30 * b, 300));
  const Index keep = std::min<Index>(max_basis / 2, 3 * b);
  const int max_cycles = 500;

  Rng rng = make_rng(derive_stream({opt.seed, static_cast<std::uint64_t>(n), 0x1a2c705ULL}));
  MatrixXd basis(n, max_basis);
  MatrixXd image(n, max_basis);
  Index used = 0;
  used += extend_basis(m, basis, image, used, gaussian_matrix(n, b, rng), rng);

  VectorXd best = VectorXd::Zero(k);
  for (int cycle = 0; cycle < max_cycles; ++cycle) {
    // Block Krylov expansion until the basis is full.
    while (used + b <= max_basis) {
      MatrixXd w = image.middleCols(used - b, b);
      used += extend_basis(m, basis, image, used, std::move(w), rng);
    }
    MatrixXd h = basis.leftCols(used).transpose() * image.leftCols(used);
    h = 0.5 * (h + h.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(h);
    const VectorXd& theta = eig.eigenvalues();
    const double norm_est = std::max(std::abs(theta(0)), std::abs(theta(used - 1)));

    const Index wanted = std::min<Index>(keep, used);
    const MatrixXd y = eig.eigenvectors().leftCols(wanted);
    MatrixXd ritz = basis.leftCols(used) * y;
    MatrixXd ritz_image = image.leftCols(used) * y;
    MatrixXd residual = ritz_image.leftCols(b) - ritz.leftCols(b) * theta.head(b).asDiagonal();

    best = theta.head(k);
    bool converged = true;
    for (int c = 0; c < k; ++c) {
      if (residual.col(c).norm() > opt.lanczos_tol * (1.0 + norm_est)) {
        converged = false;
        break;
      }
    }
    if (converged || used >= n) return best;

    // Thick restart: keep the lowest Ritz pairs, expand with their residuals.
    basis.leftCols(wanted) = ritz;
    image.leftCols(wanted) = ritz_image;
    used = wanted;
    used += extend_basis(m, basis, image, used, std::move(residual), rng);
  }
  return best;
}

}  // namespace

double operator_norm(const Eigen::Ref<const MatrixXd>& m, const SpectralOptions& options) {
  require_finite(m, "operator_norm");
  if (m.size() == 0) return 0.0;
  if (std::min(m.rows(), m.cols()) <= options.dense_norm_limit) {
    Eigen::BDCSVD<MatrixXd> svd(m);
    return svd.singularValues()(0);
  }
  return power_norm(m, options);
}

double operator_norm(const BlockMatrix& m, const SpectralOptions& options) {
  const MatrixXd& a = m.dense();
  require_finite(a, "operator_norm");
  if (m.side() <= options.dense_norm_limit) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(a, Eigen::EigenvaluesOnly);
    const VectorXd& ev = eig.eigenvalues();
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  }
  return power_norm(a, options);
}

VectorXd eigen_low(const Eigen::Ref<const MatrixXd>& sym, int k, const SpectralOptions& options) {
  if (sym.rows() != sym.cols()) {
    throw InputError("eigen_low: matrix must be square");
  }
  if (k < 1 || k > sym.rows()) {
    throw InputError("eigen_low: k = " + std::to_string(k) + " outside [1, " +
                     std::to_string(sym.rows()) + "]");
  }
  require_finite(sym, "eigen_low");
  if (sym.rows() <= options.dense_eigen_limit) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().head(k);
  }
  return block_lanczos_low(sym, k, options);
}

VectorXd eigen_low(const BlockMatrix& m, int k, const SpectralOptions& options) {
  return eigen_low(m.dense(), k, options);
}

}  // namespace osync
