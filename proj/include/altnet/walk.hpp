#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "altnet/alt_network.hpp"
#include "altnet/arc_state.hpp"
#include "altnet/common.hpp"
#include "altnet/linalg.hpp"
#include "altnet/network.hpp"

namespace altnet {

inline Mat swap_matrix(const Network& net) {
  int m = net.num_edges();
  Mat S = Mat::Zero(2 * m, 2 * m);
  for (int a = 0; a < m; ++a) {
    S(a, m + a) = 1.0;
    S(m + a, a) = 1.0;
  }
  return S;
}

// projector onto the antisymmetric subspace A = span{|u,v> - |v,u>}
inline Mat projector_antisymmetric(const Network& net) {
  int d = arc_dim(net);
  return 0.5 * (Mat::Identity(d, d) - swap_matrix(net));
}

// projector onto span{|psi_u> : u interior}
inline Mat projector_star_space(const Network& net) {
  int d = arc_dim(net);
  Mat P = Mat::Zero(d, d);
  for (int u = 0; u < net.num_vertices(); ++u) {
    if (net.is_terminal(u)) continue;
    Vec psi = star_state(net, u).real();
    P += psi * psi.transpose();
  }
  return P;
}

// projector onto span{|psi_{u,i}> : u interior}
inline CMat projector_alt_star_space(const Network& net,
                                     const AltNeighbourhoods& alt) {
  int d = arc_dim(net);
  CMat P = CMat::Zero(d, d);
  for (int u = 0; u < net.num_vertices(); ++u) {
    if (net.is_terminal(u)) continue;
    for (int i = 0; i < alt.count(u); ++i) {
      const ArcState& psi = alt.state(u, i);
      P += psi * psi.adjoint();
    }
  }
  return P;
}

// U = (2 Pi_A - I)(2 Pi_B - I); both arguments must be orthogonal projectors
inline CMat walk_unitary(const CMat& PiA, const CMat& PiB) {
  if (PiA.rows() != PiB.rows() || PiA.rows() != PiA.cols() ||
      PiB.rows() != PiB.cols())
    throw std::invalid_argument("walk_unitary: dimension mismatch");
  double tol = 1e-8;
  if (!is_projector(PiA, tol) || !is_projector(PiB, tol))
    throw std::invalid_argument("walk_unitary: argument is not a projector");
  Eigen::Index d = PiA.rows();
  CMat I = CMat::Identity(d, d);
  return (2.0 * PiA - I) * (2.0 * PiB - I);
}

// Eigenphase decomposition of a unitary: U = sum_j e^{i theta_j} Pi_j with
// theta in (-pi, pi], grouped within the phase tolerance. Phases inside the
// tolerance of zero are snapped to exactly zero (likewise pi), so the
// zero-phase projector can be read off directly.
struct Spectrum {
  std::vector<double> phases;
  CMat basis;  // orthonormal eigenvectors, columns grouped by eigenphase
  std::vector<Eigen::Index> offset;
  std::vector<Eigen::Index> count;

  Eigen::Index multiplicity(std::size_t j) const { return count[j]; }

  auto block(std::size_t j) const {
    return basis.middleCols(offset[j], count[j]);
  }

  // action of the j-th eigenprojector without forming the matrix
  CVec project(std::size_t j, const CVec& psi) const {
    auto B = block(j);
    return B * (B.adjoint() * psi);
  }

  CMat projector(std::size_t j) const {
    auto B = block(j);
    return B * B.adjoint();
  }

  Eigen::Index zero_index() const {
    for (std::size_t j = 0; j < phases.size(); ++j)
      if (phases[j] == 0.0) return Eigen::Index(j);
    return -1;
  }

  CMat zero_projector(Eigen::Index dim) const {
    Eigen::Index z = zero_index();
    return z < 0 ? CMat::Zero(dim, dim) : projector(std::size_t(z));
  }
};

namespace detail {

struct EigPair {
  double phase;
  CVec vec;
};

// U real orthogonal: eigenvectors of H=(U+U^T)/2 fix the cos-eigenspaces;
// the skew part separates +theta from -theta inside each of them. This keeps
// degenerate clusters orthonormal, which ComplexEigenSolver does not
// guarantee.
inline std::vector<EigPair> eig_real_orthogonal(const Mat& U) {
  Eigen::Index d = U.rows();
  Mat H = 0.5 * (U + U.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  Vec c = es.eigenvalues();
  const Mat& Q = es.eigenvectors();

  std::vector<EigPair> out;
  Eigen::Index i = 0;
  while (i < d) {
    Eigen::Index j = i + 1;
    while (j < d && c[j] - c[i] < 1e-9) ++j;  // ascending eigenvalues
    Eigen::Index n = j - i;
    Mat Qc = Q.middleCols(i, n);
    Mat M = Qc.transpose() * U * Qc;
    CMat W = cplx(0, 0.5) * (M - M.transpose()).cast<cplx>();
    Eigen::SelfAdjointEigenSolver<CMat> ws(W);
    if (ws.info() != Eigen::Success)
      throw std::runtime_error("eigendecomposition failed");
    Mat Msym = 0.5 * (M + M.transpose());
    for (Eigen::Index k = 0; k < n; ++k) {
      CVec z = ws.eigenvectors().col(k);
      double s = ws.eigenvalues()[k];
      double cz = (z.adjoint() * Msym.cast<cplx>() * z)(0).real();
      EigPair p;
      p.phase = std::atan2(-s, cz);
      p.vec = Qc.cast<cplx>() * z;
      out.push_back(std::move(p));
    }
    i = j;
  }
  return out;
}

inline std::vector<EigPair> eig_schur(const CMat& U) {
  Eigen::ComplexSchur<CMat> sch(U, true);
  if (sch.info() != Eigen::Success)
    throw std::runtime_error("schur decomposition failed");
  std::vector<EigPair> out;
  for (Eigen::Index k = 0; k < U.rows(); ++k) {
    cplx lam = sch.matrixT()(k, k);
    EigPair p;
    p.phase = std::atan2(lam.imag(), lam.real());
    p.vec = sch.matrixU().col(k);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace detail

inline Spectrum spectral_decomposition(const CMat& U,
                                       double tol = tols().phase_tol) {
  Eigen::Index d = U.rows();
  std::vector<detail::EigPair> pairs =
      (U.imag().cwiseAbs().maxCoeff() < 1e-12)
          ? detail::eig_real_orthogonal(U.real())
          : detail::eig_schur(U);

  for (auto& p : pairs) {
    if (std::abs(p.phase) < tol) p.phase = 0.0;
    if (std::abs(p.phase - std::numbers::pi) < tol ||
        std::abs(p.phase + std::numbers::pi) < tol)
      p.phase = std::numbers::pi;
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.phase < b.phase; });

  Spectrum sp;
  sp.basis = CMat(d, d);
  Eigen::Index col = 0;
  std::size_t i = 0;
  while (i < pairs.size()) {
    std::size_t j = i + 1;
    while (j < pairs.size() && pairs[j].phase - pairs[i].phase <= tol) ++j;
    sp.offset.push_back(col);
    sp.count.push_back(Eigen::Index(j - i));
    double ph = 0;
    for (std::size_t k = i; k < j; ++k) {
      sp.basis.col(col++) = pairs[k].vec;
      ph += pairs[k].phase;
    }
    ph /= double(j - i);
    if (std::abs(ph) < tol) ph = 0.0;
    sp.phases.push_back(ph);
    i = j;
  }

  CVec lam(d);
  for (std::size_t j2 = 0; j2 < sp.phases.size(); ++j2)
    for (Eigen::Index k = 0; k < sp.count[j2]; ++k)
      lam[sp.offset[j2] + k] = std::polar(1.0, sp.phases[j2]);
  if ((sp.basis.adjoint() * sp.basis - CMat::Identity(d, d))
              .cwiseAbs()
              .maxCoeff() > 1e-9 ||
      (U * sp.basis - sp.basis * lam.asDiagonal()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::runtime_error("spectral decomposition verification failed");
  return sp;
}

struct WalkOperator {
  CMat U;
  CMat PiA;
  CMat PiB;
  Spectrum spectrum;
};

inline WalkOperator make_walk(const Network& net, const AltNeighbourhoods& alt) {
  WalkOperator w;
  w.PiA = projector_antisymmetric(net).cast<cplx>();
  w.PiB = projector_alt_star_space(net, alt);
  w.U = walk_unitary(w.PiA, w.PiB);
  w.spectrum = spectral_decomposition(w.U);
  return w;
}

inline WalkOperator make_walk_classical(const Network& net) {
  WalkOperator w;
  w.PiA = projector_antisymmetric(net).cast<cplx>();
  w.PiB = projector_star_space(net).cast<cplx>();
  w.U = walk_unitary(w.PiA, w.PiB);
  w.spectrum = spectral_decomposition(w.U);
  return w;
}

// |psi_s^+> = sqrt(2) (I - Pi_A)|psi_s>
inline ArcState psi_s_plus(const Network& net) {
  ArcState psi = star_state(net, net.s());
  CVec sw = swap_matrix(net).cast<cplx>() * psi;
  return (psi + sw) / std::numbers::sqrt2;
}

// |p> = sqrt(2/R) sum_{u != s} p_u sqrt(w_u) |psi_u>
inline ArcState potential_state(const Network& net, const VertexPotential& vp,
                                double R) {
  if (R <= 0) throw std::invalid_argument("potential_state: R <= 0");
  ArcState st = ArcState::Zero(arc_dim(net));
  for (int u = 0; u < net.num_vertices(); ++u) {
    if (u == net.s()) continue;
    st += vp.p[u] * std::sqrt(net.weighted_degree(u)) * star_state(net, u);
  }
  return std::sqrt(2.0 / R) * st;
}

// |p_alt> = sqrt(2/R) sum_{u != s} sum_v (-1)^Delta p_{u,v} sqrt(w_{u,v}) |u,v>
inline ArcState alt_potential_state(const Network& net, const EdgePotential& pe,
                                    double R) {
  if (R <= 0) throw std::invalid_argument("alt_potential_state: R <= 0");
  ArcState st = ArcState::Zero(arc_dim(net));
  for (int u = 0; u < net.num_vertices(); ++u) {
    if (u == net.s()) continue;
    for (const auto& nb : net.neighbourhood(u)) {
      double p = (nb.delta ? pe.head : pe.tail)[nb.arc];
      st[ket_index(net, u, nb.v)] +=
          (nb.delta ? -1.0 : 1.0) * p * std::sqrt(nb.w);
    }
  }
  return std::sqrt(2.0 / R) * st;
}

struct PhaseEstimate {
  double p_zero = 0.0;  // probability of reading phase 0 with T steps
  ArcState post;        // normalized state conditioned on that outcome
};

// Exact phase-register-zero statistics of T-step phase estimation:
// amplitude factor c_j = T^{-1} sum_{t<T} e^{i t theta_j} per eigenspace.
inline PhaseEstimate pe_zero(const Spectrum& sp, const ArcState& psi, long T) {
  if (T <= 0) throw std::invalid_argument("pe_zero: T must be positive");
  CVec acc = CVec::Zero(psi.size());
  double p = 0;
  for (std::size_t j = 0; j < sp.phases.size(); ++j) {
    CVec comp = sp.project(j, psi);
    double n2 = comp.squaredNorm();
    if (n2 == 0.0) continue;
    cplx c;
    double th = sp.phases[j];
    if (th == 0.0) {
      c = 1.0;
    } else {
      // geometric sum, |c|^2 = sin^2(T th/2) / (T^2 sin^2(th/2))
      cplx num = 1.0 - std::polar(1.0, double(T) * th);
      cplx den = 1.0 - std::polar(1.0, th);
      c = num / (den * double(T));
    }
    p += std::norm(c) * n2;
    acc += c * comp;
  }
  PhaseEstimate out;
  out.p_zero = p;
  out.post = acc.norm() > 0 ? ArcState(acc / acc.norm()) : acc;
  return out;
}

inline PhaseEstimate pe_zero(const WalkOperator& w, const ArcState& psi, long T) {
  return pe_zero(w.spectrum, psi, T);
}

struct GapCheck {
  double lhs = 0.0;
  double bound = 0.0;
  bool pass = false;
};

// |Lambda_eps (I - Pi_A) phi| <= (eps/2)|phi| for phi in the star space of
// the walk. Lambda_eps projects onto eigenphases with |theta| <= eps.
inline GapCheck effective_spectral_gap_check(const WalkOperator& w,
                                             const ArcState& phi, double eps) {
  if ((w.PiB * phi - phi).norm() > 1e-8 * std::max(1.0, phi.norm()))
    throw std::invalid_argument("gap check: phi not in the star space");
  CVec refl = phi - w.PiA * phi;
  double l2 = 0;  // eigenspaces are orthogonal, so norms add in squares
  for (std::size_t j = 0; j < w.spectrum.phases.size(); ++j)
    if (std::abs(w.spectrum.phases[j]) <= eps)
      l2 += (w.spectrum.block(j).adjoint() * refl).squaredNorm();
  GapCheck g;
  g.lhs = std::sqrt(l2);
  g.bound = 0.5 * eps * phi.norm();
  g.pass = g.lhs <= g.bound + 1e-12;
  return g;
}

inline double trace_distance_pure(const ArcState& a, const ArcState& b) {
  double na = a.norm(), nb = b.norm();
  if (na == 0 || nb == 0) throw std::invalid_argument("trace distance of zero vector");
  double ov = std::abs(a.dot(b)) / (na * nb);
  double x = 1.0 - ov * ov;
  return std::sqrt(std::max(0.0, x));
}

}  // namespace altnet
