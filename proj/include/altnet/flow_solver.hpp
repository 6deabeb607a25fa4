#pragma once

#include <cmath>
#include <vector>

#include "altnet/common.hpp"
#include "altnet/linalg.hpp"
#include "altnet/network.hpp"

namespace altnet {

// Incidence matrix B: row per stored arc (u,v), +sqrt(w) in column u and
// -sqrt(w) in column v. Columns ordered s, interior, t.
struct IncidenceMatrix {
  Mat B;
  std::vector<int> col_vertex;  // column -> vertex id
  std::vector<int> vertex_col;  // vertex id -> column

  Vec terminal_rhs() const {
    Vec b = Vec::Zero(B.cols());
    b[0] = 1.0;
    b[B.cols() - 1] = -1.0;
    return b;
  }
};

inline IncidenceMatrix incidence_matrix(const Network& net) {
  IncidenceMatrix im;
  im.col_vertex = net.matrix_columns();
  im.vertex_col.assign(std::size_t(net.num_vertices()), -1);
  for (int c = 0; c < int(im.col_vertex.size()); ++c)
    im.vertex_col[std::size_t(im.col_vertex[std::size_t(c)])] = c;
  im.B = Mat::Zero(net.num_edges(), net.num_vertices());
  for (int a = 0; a < net.num_edges(); ++a) {
    const Arc& e = net.arc(a);
    double s = std::sqrt(e.w);
    im.B(a, im.vertex_col[std::size_t(e.u)]) = s;
    im.B(a, im.vertex_col[std::size_t(e.v)]) = -s;
  }
  return im;
}

// B^T B: the weighted Laplacian in the same column order
inline Mat weighted_laplacian(const Network& net) {
  Mat B = incidence_matrix(net).B;
  return B.transpose() * B;
}

struct FlowSolution {
  Flow flow;
  Vec w_theta;  // W theta = B^{T+}(e_s - e_t), indexed by arcs
  double resistance = 0.0;
};

// Unit s-t electrical flow: W theta is the minimum-norm solution of
// B^T (W theta) = e_s - e_t, and R_{s,t} = |W theta|^2.
inline FlowSolution electrical_flow(const Network& net) {
  IncidenceMatrix im = incidence_matrix(net);
  Mat Bt = im.B.transpose();
  Vec wt = pseudoinverse(Bt) * im.terminal_rhs();
  FlowSolution out;
  out.w_theta = wt;
  out.resistance = wt.squaredNorm();
  out.flow.theta = Vec(net.num_edges());
  for (int a = 0; a < net.num_edges(); ++a)
    out.flow.theta[a] = wt[a] * std::sqrt(net.arc(a).w);
  return out;
}

inline double effective_resistance(const Network& net) {
  return electrical_flow(net).resistance;
}

// Potentials grounded at t: p solves B_bar p_bar = W theta with the t column
// dropped, p_t = 0. Satisfies Ohm's law and p_s - p_t = R.
inline VertexPotential vertex_potential(const Network& net,
                                        const FlowSolution& sol) {
  IncidenceMatrix im = incidence_matrix(net);
  int n = net.num_vertices();
  Mat Bbar = im.B.leftCols(n - 1);
  Vec pbar = pseudoinverse(Bbar) * sol.w_theta;
  VertexPotential vp;
  vp.p = Vec::Zero(n);
  for (int c = 0; c + 1 < n; ++c)
    vp.p[im.col_vertex[std::size_t(c)]] = pbar[c];
  vp.p[net.t()] = 0.0;
  return vp;
}

inline VertexPotential vertex_potential(const Network& net) {
  return vertex_potential(net, electrical_flow(net));
}

}  // namespace altnet
