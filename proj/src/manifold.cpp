#include "osync/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "osync/errors.hpp"
#include "osync/rng.hpp"

namespace osync {

using Eigen::MatrixXd;

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

StiefelTuple::StiefelTuple(int n, int d, int p, MatrixXd stacked, double tol)
    : n_(n), d_(d), p_(p), data_(std::move(stacked)) {
  if (n < 1 || d < 1) {
    throw InputError("StiefelTuple: n and d must be positive");
  }
  if (p < d) {
    throw InputError("StiefelTuple: p must be at least d");
  }
  if (data_.rows() != n * d || data_.cols() != p) {
    throw InputError("StiefelTuple: expected an (n*d) x p matrix");
  }
  if (!data_.allFinite()) {
    throw InputError("StiefelTuple: non-finite entries");
  }
  const MatrixXd eye = MatrixXd::Identity(d, d);
  for (int i = 0; i < n; ++i) {
    const double defect = (block(i) * block(i).transpose() - eye).norm();
    if (defect > tol) {
      throw InputError("StiefelTuple: block " + std::to_string(i) +
                       " violates S_i S_i^T = I (defect " + sci(defect) + ")");
    }
  }
}

StiefelTuple StiefelTuple::synchronized(int n, int d, int p) {
  if (p < d) throw InputError("StiefelTuple::synchronized: p must be at least d");
  return synchronized(n, MatrixXd::Identity(d, p));
}

StiefelTuple StiefelTuple::synchronized(int n, const MatrixXd& q) {
  const auto d = static_cast<int>(q.rows());
  const auto p = static_cast<int>(q.cols());
  return StiefelTuple(n, d, p, q.replicate(n, 1));
}

MatrixXd StiefelTuple::reference_product(const StiefelTuple& reference) const {
  if (reference.n_ != n_ || reference.d_ != d_ || reference.p_ != d_) {
    throw InputError("reference_product: reference must be an n-tuple of d x d blocks");
  }
  return reference.data_.transpose() * data_;
}

TangentTuple::TangentTuple(int n, int d, int p, MatrixXd stacked)
    : n_(n), d_(d), p_(p), data_(std::move(stacked)) {
  if (data_.rows() != n * d || data_.cols() != p) {
    throw InputError("TangentTuple: expected an (n*d) x p matrix");
  }
}

double TangentTuple::tangency_defect(const StiefelTuple& base) const {
  if (base.n() != n_ || base.d() != d_ || base.p() != p_) {
    throw InputError("TangentTuple: base point dimensions differ");
  }
  double worst = 0.0;
  for (int i = 0; i < n_; ++i) {
    const MatrixXd sy = base.block(i) * block(i).transpose();
    worst = std::max(worst, (sy + sy.transpose()).norm());
  }
  return worst;
}

MatrixXd polar_project(const Eigen::Ref<const MatrixXd>& m) {
  if (m.cols() < m.rows()) {
    throw InputError("polar_project: expected a d x p matrix with p >= d");
  }
  Eigen::JacobiSVD<MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const Eigen::Index d = m.rows();
  const double ratio = sv(0) > 0.0 ? sv(d - 1) / sv(0) : 0.0;
  if (!(ratio > 1e-12)) {
    throw RankDeficient("polar_project: rank-deficient input", ratio);
  }
  MatrixXd u = svd.matrixU();
  MatrixXd v = svd.matrixV();
  // Each column of U gets a nonnegative entry of largest magnitude.
  for (Eigen::Index c = 0; c < d; ++c) {
    Eigen::Index arg = 0;
    u.col(c).cwiseAbs().maxCoeff(&arg);
    if (u(arg, c) < 0.0) {
      u.col(c) *= -1.0;
      v.col(c) *= -1.0;
    }
  }
  return u * v.transpose();
}

MatrixXd tangent_project(const Eigen::Ref<const MatrixXd>& s, const Eigen::Ref<const MatrixXd>& pi) {
  if (s.rows() != pi.rows() || s.cols() != pi.cols()) {
    throw InputError("tangent_project: dimension mismatch");
  }
  const MatrixXd sym = 0.5 * (pi * s.transpose() + s * pi.transpose());
  return pi - sym * s;
}

TangentTuple tangent_project(const StiefelTuple& s, const Eigen::Ref<const MatrixXd>& pi) {
  if (pi.rows() != s.stacked().rows() || pi.cols() != s.p()) {
    throw InputError("tangent_project: dimension mismatch");
  }
  const int d = s.d();
  MatrixXd out(pi.rows(), pi.cols());
  for (int i = 0; i < s.n(); ++i) {
    out.middleRows(i * d, d) = tangent_project(s.block(i), pi.middleRows(i * d, d));
  }
  return TangentTuple(s.n(), d, s.p(), std::move(out));
}

StiefelTuple retract(const StiefelTuple& s, const Eigen::Ref<const MatrixXd>& v) {
  if (v.rows() != s.stacked().rows() || v.cols() != s.p()) {
    throw InputError("retract: dimension mismatch");
  }
  const int d = s.d();
  MatrixXd out(v.rows(), v.cols());
  for (int i = 0; i < s.n(); ++i) {
    out.middleRows(i * d, d) = polar_project(s.block(i) + v.middleRows(i * d, d));
  }
  return StiefelTuple(s.n(), d, s.p(), std::move(out));
}

MatrixXd align(const StiefelTuple& s, const StiefelTuple& reference) {
  const MatrixXd m = s.reference_product(reference);
  try {
    return polar_project(m);
  } catch (const RankDeficient&) {
    Eigen::JacobiSVD<MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU() * svd.matrixV().transpose();
  }
}

double distance_to_sync(const StiefelTuple& s, const StiefelTuple& reference) {
  const MatrixXd q = align(s, reference);
  return (s.stacked() - reference.stacked() * q).norm();
}

StiefelTuple random_stiefel(int n, int d, int p, std::uint64_t seed) {
  if (n < 1 || d < 1) throw InputError("random_stiefel: n and d must be positive");
  if (p < d) throw InputError("random_stiefel: p must be at least d");
  Rng rng = make_rng(derive_stream({seed, static_cast<std::uint64_t>(n),
                                    static_cast<std::uint64_t>(d),
                                    static_cast<std::uint64_t>(p)}));
  MatrixXd out(n * d, p);
  for (int i = 0; i < n; ++i) {
    const MatrixXd g = gaussian_matrix(d, p, rng);
    Eigen::HouseholderQR<MatrixXd> qr(g.transpose());
    MatrixXd q = qr.householderQ() * MatrixXd::Identity(p, d);
    for (int c = 0; c < d; ++c) {
      if (qr.matrixQR()(c, c) < 0.0) q.col(c) *= -1.0;
    }
    out.middleRows(i * d, d) = q.transpose();
  }
  return StiefelTuple(n, d, p, std::move(out));
}

void write_tuple_csv(const StiefelTuple& s, std::ostream& out) {
  out << "i,k,l,value\n";
  char buf[64];
  for (int i = 0; i < s.n(); ++i) {
    for (int k = 0; k < s.d(); ++k) {
      for (int l = 0; l < s.p(); ++l) {
        std::snprintf(buf, sizeof buf, "%.17g", s.stacked()(i * s.d() + k, l));
        out << i << ',' << k << ',' << l << ',' << buf << '\n';
      }
    }
  }
}

StiefelTuple read_tuple_csv(std::istream& in, double tol) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("i,k,l,value", 0) != 0) {
    throw InputError("read_tuple_csv: missing 'i,k,l,value' header");
  }
  std::vector<std::tuple<int, int, int, double>> entries;
  int n = 0, d = 0, p = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    int i, k, l;
    double v;
    char c1, c2, c3;
    if (!(row >> i >> c1 >> k >> c2 >> l >> c3 >> v) || i < 0 || k < 0 || l < 0) {
      throw InputError("read_tuple_csv: malformed line '" + line + "'");
    }
    n = std::max(n, i + 1);
    d = std::max(d, k + 1);
    p = std::max(p, l + 1);
    entries.emplace_back(i, k, l, v);
  }
  if (n == 0) throw InputError("read_tuple_csv: no entries");
  MatrixXd data = MatrixXd::Zero(n * d, p);
  for (const auto& [i, k, l, v] : entries) data(i * d + k, l) = v;
  return StiefelTuple(n, d, p, std::move(data), tol);
}

}  // namespace osync
