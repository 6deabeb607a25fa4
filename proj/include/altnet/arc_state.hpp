#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "altnet/common.hpp"
#include "altnet/network.hpp"

namespace altnet {

// States live on the doubled arc space of dimension 2|E|: ket |u,v> of the
// stored arc a=(u,v) sits at slot a, the reversed ket |v,u> at slot |E|+a.
using ArcState = CVec;

inline int arc_dim(const Network& net) { return 2 * net.num_edges(); }

inline int ket_index(const Network& net, int u, int v) {
  if (auto a = net.find_arc(u, v)) return *a;
  if (auto a = net.find_arc(v, u)) return net.num_edges() + *a;
  throw std::invalid_argument("ket_index: not an edge");
}

// (u,v) for a ket slot
inline std::pair<int, int> ket_vertices(const Network& net, int k) {
  int m = net.num_edges();
  if (k < 0 || k >= 2 * m) throw std::out_of_range("ket slot");
  const Arc& a = net.arc(k % m);
  return k < m ? std::pair{a.u, a.v} : std::pair{a.v, a.u};
}

// |psi_u> = w_u^{-1/2} sum_v (-1)^{Delta_{u,v}} sqrt(w_{u,v}) |u,v>
inline ArcState star_state(const Network& net, int u) {
  ArcState psi = ArcState::Zero(arc_dim(net));
  double wu = net.weighted_degree(u);
  if (wu <= 0) throw std::invalid_argument("isolated vertex");
  for (const auto& nb : net.neighbourhood(u)) {
    double c = std::sqrt(nb.w / wu);
    psi[ket_index(net, u, nb.v)] = (nb.delta ? -c : c);
  }
  return psi;
}

// Fourier vectors on the neighbourhood of u, ascending neighbour id:
// |psihat^j_u> = D^{-1/2} sum_k omega^{jk} |u,v_k>, omega = exp(2 pi i / D),
// for j = 1..D-1. j = 0 (the uniform vector) is omitted; on a balanced vertex
// it carries the flow, and the star state already spans the relevant
// direction inside the sum-zero subspace.
inline std::vector<ArcState> fourier_neighbourhood(const Network& net, int u) {
  const auto& ns = net.neighbourhood(u);
  int D = int(ns.size());
  if (D < 2) throw std::invalid_argument("fourier_neighbourhood: degree < 2");
  std::vector<ArcState> out;
  out.reserve(std::size_t(D - 1));
  for (int j = 1; j < D; ++j) {
    ArcState psi = ArcState::Zero(arc_dim(net));
    for (int k = 0; k < D; ++k) {
      double ang = 2.0 * std::numbers::pi * double(j) * double(k) / double(D);
      psi[ket_index(net, u, ns[std::size_t(k)].v)] =
          cplx(std::cos(ang), std::sin(ang)) / std::sqrt(double(D));
    }
    out.push_back(std::move(psi));
  }
  return out;
}

// Real basis of the same span: conjugate pairs are replaced by
// sqrt(2) Re / sqrt(2) Im, self-conjugate vectors kept as-is.
inline std::vector<ArcState> realify_span(const std::vector<ArcState>& states) {
  std::vector<ArcState> out;
  std::vector<char> used(states.size(), 0);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (used[i]) continue;
    used[i] = 1;
    const ArcState& a = states[i];
    std::size_t mate = i;
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      if (used[j]) continue;
      if ((states[j] - a.conjugate()).norm() < 1e-12) {
        mate = j;
        break;
      }
    }
    if (mate == i) {
      if (a.imag().norm() > 1e-12)
        throw std::invalid_argument("realify_span: span not conjugation-closed");
      out.push_back(a);
    } else {
      used[mate] = 1;
      ArcState re = ArcState::Zero(a.size());
      ArcState im = ArcState::Zero(a.size());
      re.real() = std::numbers::sqrt2 * a.real();
      im.real() = std::numbers::sqrt2 * a.imag();
      out.push_back(std::move(re));
      out.push_back(std::move(im));
    }
  }
  return out;
}

// State of a nonzero flow:
// |theta> = (2 E(theta))^{-1/2} sum_arcs (theta/sqrt w)(|u,v> + |v,u>)
inline ArcState flow_state(const Network& net, const Flow& f) {
  double e = f.energy(net);
  if (e <= 0) throw std::invalid_argument("flow_state: zero flow");
  ArcState st = ArcState::Zero(arc_dim(net));
  int m = net.num_edges();
  for (int a = 0; a < m; ++a) {
    double c = f.theta[a] / std::sqrt(net.arc(a).w * 2.0 * e);
    st[a] = c;
    st[m + a] = c;
  }
  return st;
}

}  // namespace altnet
