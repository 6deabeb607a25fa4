#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <variant>
#include <vector>

#include "altnet/arc_state.hpp"
#include "altnet/common.hpp"
#include "altnet/flow_solver.hpp"
#include "altnet/linalg.hpp"
#include "altnet/network.hpp"

namespace altnet {

// Per-vertex orthonormal neighbourhood bases. states[u] always starts with
// the star state; terminals carry the star state only. Interior vertices must
// keep a_u < deg(u), otherwise no flow could pass through u.
struct AltNeighbourhoods {
  std::vector<std::vector<ArcState>> states;

  int count(int u) const { return int(states.at(std::size_t(u)).size()); }

  const ArcState& state(int u, int i) const {
    return states.at(std::size_t(u)).at(std::size_t(i));
  }
};

namespace detail {

inline void check_support(const Network& net, int u, const ArcState& st) {
  if (st.size() != arc_dim(net))
    throw std::invalid_argument("alt state: wrong dimension");
  CVec rest = st;
  for (const auto& nb : net.neighbourhood(u)) rest[ket_index(net, u, nb.v)] = 0;
  if (rest.norm() > 1e-12)
    throw std::invalid_argument("alt state: support outside the neighbourhood of u");
}

}  // namespace detail

// Gram-Schmidt over one vertex list. The leading entry must be the star
// state and is kept verbatim; later states are orthogonalized against the
// accepted prefix and dropped when the residual norm falls below drop_tol.
inline std::vector<ArcState> orthonormalize(const Network& net, int u,
                                            const std::vector<ArcState>& raw,
                                            double drop_tol = tols().svd_rtol) {
  if (raw.empty()) throw std::invalid_argument("orthonormalize: empty list");
  ArcState star = star_state(net, u);
  for (const auto& st : raw) detail::check_support(net, u, st);
  if ((raw[0].normalized() - star).norm() > 1e-8)
    throw std::invalid_argument("orthonormalize: first state is not the star state");

  std::vector<ArcState> basis{star};
  for (std::size_t k = 1; k < raw.size(); ++k) {
    ArcState v = raw[k].normalized();
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) v -= b * b.dot(v);
    if (v.norm() < drop_tol) continue;
    basis.push_back(v.normalized());
  }
  if (!net.is_terminal(u) && int(basis.size()) >= net.degree(u))
    throw std::invalid_argument("orthonormalize: neighbourhood basis saturates the vertex");
  return basis;
}

// Star states everywhere: reproduces the plain electrical network.
inline AltNeighbourhoods star_only(const Network& net) {
  AltNeighbourhoods alt;
  alt.states.resize(std::size_t(net.num_vertices()));
  for (int u = 0; u < net.num_vertices(); ++u)
    alt.states[std::size_t(u)] = {star_state(net, u)};
  return alt;
}

// Build from raw per-vertex extras (star states are implicit). Terminals may
// not carry extras.
inline AltNeighbourhoods make_alt(
    const Network& net, const std::map<int, std::vector<ArcState>>& extras) {
  AltNeighbourhoods alt = star_only(net);
  for (const auto& [u, list] : extras) {
    if (list.empty()) continue;
    if (net.is_terminal(u))
      throw std::invalid_argument("make_alt: terminals are star-only");
    std::vector<ArcState> raw{star_state(net, u)};
    raw.insert(raw.end(), list.begin(), list.end());
    alt.states[std::size_t(u)] = orthonormalize(net, u, raw);
  }
  return alt;
}

// Alternative incidence matrix. Rows follow the stored arcs; columns are
// keyed (u,i) and ordered (s,0), interior vertices ascending with their
// state index, (t,0) last. Entry in row (u,v), column (a,i):
// sqrt(w_a) <u,v|psi_{a,i}> for a=u and sqrt(w_a) <v,u|psi_{a,i}> for a=v,
// with w_a the weighted degree.
struct AltIncidenceMatrix {
  CMat B;
  std::vector<std::pair<int, int>> col_key;

  CVec terminal_rhs() const {
    CVec b = CVec::Zero(B.cols());
    b[0] = 1.0;
    b[B.cols() - 1] = -1.0;
    return b;
  }
};

inline AltIncidenceMatrix alt_incidence_matrix(const Network& net,
                                               const AltNeighbourhoods& alt) {
  AltIncidenceMatrix am;
  for (int u : net.matrix_columns())
    for (int i = 0; i < alt.count(u); ++i) am.col_key.push_back({u, i});
  am.B = CMat::Zero(net.num_edges(), Eigen::Index(am.col_key.size()));
  for (std::size_t c = 0; c < am.col_key.size(); ++c) {
    auto [u, i] = am.col_key[c];
    double su = std::sqrt(net.weighted_degree(u));
    const ArcState& st = alt.state(u, i);
    for (const auto& nb : net.neighbourhood(u))
      am.B(nb.arc, Eigen::Index(c)) = su * st[ket_index(net, u, nb.v)];
  }
  return am;
}

struct Infeasible {
  double residual = 0.0;
};

struct AltFlowSolution {
  Flow flow;
  Vec w_theta;
  double resistance = 0.0;  // = energy of the flow
};

using AltFlowResult = std::variant<AltFlowSolution, Infeasible>;

// Unit s-t flow obeying every neighbourhood constraint: the minimum-norm
// real solution of B_alt^dagger (W theta) = e_s - e_t. When the constraints
// cannot be met the best candidate's residual is reported instead.
inline AltFlowResult alt_electrical_flow(const Network& net,
                                         const AltNeighbourhoods& alt) {
  AltIncidenceMatrix am = alt_incidence_matrix(net, alt);
  CMat M = am.B.adjoint();
  CVec b = am.terminal_rhs();
  CVec x = pseudoinverse(M) * b;
  Vec xr = x.real();
  double residual = (M * xr.cast<cplx>() - b).norm();
  if (residual > tols().feas_tol) return Infeasible{residual};
  AltFlowSolution sol;
  sol.w_theta = xr;
  sol.resistance = xr.squaredNorm();
  sol.flow.theta = Vec(net.num_edges());
  for (int a = 0; a < net.num_edges(); ++a)
    sol.flow.theta[a] = xr[a] * std::sqrt(net.arc(a).w);
  return sol;
}

inline double alt_effective_resistance(const Network& net,
                                       const AltNeighbourhoods& alt) {
  AltFlowResult r = alt_electrical_flow(net, alt);
  if (std::holds_alternative<Infeasible>(r))
    throw std::runtime_error("alt_effective_resistance: infeasible");
  return std::get<AltFlowSolution>(r).resistance;
}

// Largest |<psi_{u,i}|theta>| over interior vertices, with |theta> the
// normalized flow state. Zero exactly when the flow satisfies every
// neighbourhood constraint.
inline double check_alt_kirchhoff(const Network& net,
                                  const AltNeighbourhoods& alt, const Flow& f) {
  ArcState th = flow_state(net, f);
  double worst = 0;
  for (int u = 0; u < net.num_vertices(); ++u) {
    if (net.is_terminal(u)) continue;
    for (int i = 0; i < alt.count(u); ++i)
      worst = std::max(worst, std::abs(alt.state(u, i).dot(th)));
  }
  return worst;
}

struct AltPotential {
  EdgePotential pe;
  CVec coeffs;  // aligned with AltIncidenceMatrix columns, (t,0) entry zero
};

// Edge potentials from the reduced system B_alt_bar c = W theta (the (t,0)
// column dropped, its coefficient fixed to zero):
// p_{u,v} = (-1)^{Delta_{u,v}} w_{u,v}^{-1/2} sum_i c_{u,i} sqrt(w_u) <u,v|psi_{u,i}>.
inline AltPotential alt_edge_potential(const Network& net,
                                       const AltNeighbourhoods& alt,
                                       const AltFlowSolution& sol) {
  AltIncidenceMatrix am = alt_incidence_matrix(net, alt);
  Eigen::Index k = am.B.cols();
  CMat Bbar = am.B.leftCols(k - 1);
  CVec cbar = pseudoinverse(Bbar) * sol.w_theta.cast<cplx>();
  AltPotential out;
  out.coeffs = CVec::Zero(k);
  out.coeffs.head(k - 1) = cbar;

  std::map<int, Eigen::Index> first_col;
  for (Eigen::Index c = 0; c < k; ++c)
    if (!first_col.count(am.col_key[std::size_t(c)].first))
      first_col[am.col_key[std::size_t(c)].first] = c;

  out.pe.tail = Vec::Zero(net.num_edges());
  out.pe.head = Vec::Zero(net.num_edges());
  for (int u = 0; u < net.num_vertices(); ++u) {
    double su = std::sqrt(net.weighted_degree(u));
    Eigen::Index c0 = first_col[u];
    for (const auto& nb : net.neighbourhood(u)) {
      cplx acc = 0;
      for (int i = 0; i < alt.count(u); ++i)
        acc += out.coeffs[c0 + i] * su * alt.state(u, i)[ket_index(net, u, nb.v)];
      acc *= (nb.delta ? -1.0 : 1.0) / std::sqrt(nb.w);
      if (std::abs(acc.imag()) > 1e-7)
        throw std::runtime_error("alt_edge_potential: non-real potential");
      (nb.delta ? out.pe.head : out.pe.tail)[nb.arc] = acc.real();
    }
  }
  return out;
}

}  // namespace altnet
