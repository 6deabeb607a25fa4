#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "altnet/common.hpp"

namespace altnet {

// Moore-Penrose pseudoinverse by SVD. Singular values below
// rtol * sigma_max are treated as zero.
template <class Svd, class M>
M pinv_via(const M& A, double rtol) {
  Svd svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double cut = sv.size() ? rtol * sv(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> pseudoinverse(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
    double rtol = tols().svd_rtol) {
  using M = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (A.size() == 0) return M(A.cols(), A.rows());
  if (A.rows() <= 48 && A.cols() <= 48)
    return pinv_via<Eigen::JacobiSVD<M>>(A, rtol);
  return pinv_via<Eigen::BDCSVD<M>>(A, rtol);
}

// max violation over the four Penrose identities
template <class M>
double penrose_violation(const M& A, const M& Ap) {
  double v = 0;
  auto upd = [&v](double x) {
    if (x > v) v = x;
  };
  upd((A * Ap * A - A).cwiseAbs().maxCoeff());
  upd((Ap * A * Ap - Ap).cwiseAbs().maxCoeff());
  upd(((A * Ap) - (A * Ap).adjoint()).cwiseAbs().maxCoeff());
  upd(((Ap * A) - (Ap * A).adjoint()).cwiseAbs().maxCoeff());
  return v;
}

inline bool is_projector(const CMat& P, double tol) {
  if (P.rows() != P.cols()) return false;
  if ((P - P.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  return (P * P - P).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace altnet
