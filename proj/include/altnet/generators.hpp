#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "altnet/alt_network.hpp"
#include "altnet/arc_state.hpp"
#include "altnet/common.hpp"
#include "altnet/network.hpp"

namespace altnet {

// A generated instance: the network plus its neighbourhood structure and the
// bookkeeping the oracle/test layers need. blue[u] == 1 iff u carries
// neighbourhoods beyond the star state.
struct Instance {
  Network net;
  AltNeighbourhoods alt;
  std::vector<int> blue;
  std::string family;
  std::map<std::string, std::int64_t> params;
  std::uint64_t seed = 0;
  std::vector<int> canonical_path;  // vertex ids, circuit-style families only
  int middle_junction = -1;
};

// Layered 1D description: s[k] vertices in layer k, e[k] edges between
// layers k-1 and k (1-based), single source and sink.
struct HierarchicalSpec {
  std::vector<std::int64_t> s;
  std::vector<std::int64_t> e;

  int layers() const { return int(e.size()); }

  void validate() const {
    if (s.size() < 2 || e.size() + 1 != s.size())
      throw std::invalid_argument("hierarchical spec: bad profile sizes");
    if (s.front() != 1 || s.back() != 1)
      throw std::invalid_argument("hierarchical spec: endpoints must be single vertices");
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (s[k] <= 0 || s[k + 1] <= 0 || e[k] <= 0)
        throw std::invalid_argument("hierarchical spec: non-positive entry");
      if (e[k] % s[k] != 0 || e[k] % s[k + 1] != 0)
        throw std::invalid_argument("hierarchical spec: block is not biregular");
      if (e[k] / s[k] > s[k + 1] || e[k] / s[k + 1] > s[k])
        throw std::invalid_argument("hierarchical spec: simple block impossible");
    }
    if (s[s.size() - 2] <= 0) throw std::invalid_argument("hierarchical spec");
  }

  // layer weights: w_1 = 1, balanced across odd (blue) vertex layers,
  // constant across even ones
  std::vector<double> weights() const {
    validate();
    int n = layers();
    std::vector<double> w(std::size_t(n) + 1, 0.0);
    w[1] = 1.0;
    for (int k = 1; k < n; ++k) {
      double r = double(e[std::size_t(k - 1)]) / double(e[std::size_t(k)]);
      w[std::size_t(k) + 1] = (k % 2 == 1) ? w[std::size_t(k)] * r * r
                                           : w[std::size_t(k)];
    }
    return w;
  }

  // series-law effective resistance of the layered flow
  double resistance() const {
    std::vector<double> w = weights();
    double R = 0;
    for (int k = 1; k <= layers(); ++k)
      R += 1.0 / (double(e[std::size_t(k - 1)]) * w[std::size_t(k)]);
    return R;
  }
};

namespace detail {

// random simple biregular bipartite block: every left vertex gets c edges,
// every right vertex d edges
inline std::vector<std::pair<int, int>> biregular_block(Rng& rng, int nl,
                                                        int nr, int c, int d) {
  if (nl * c != nr * d) throw std::invalid_argument("biregular block: degree mismatch");
  std::vector<int> right_stubs;
  right_stubs.reserve(std::size_t(nr * d));
  for (int r = 0; r < nr; ++r)
    for (int k = 0; k < d; ++k) right_stubs.push_back(r);
  for (int attempt = 0; attempt < 500; ++attempt) {
    rng.shuffle(right_stubs);
    std::set<std::pair<int, int>> seen;
    std::vector<std::pair<int, int>> edges;
    edges.reserve(right_stubs.size());
    bool ok = true;
    std::size_t idx = 0;
    for (int l = 0; l < nl && ok; ++l)
      for (int k = 0; k < c && ok; ++k) {
        std::pair<int, int> p{l, right_stubs[idx++]};
        if (!seen.insert(p).second) ok = false;
        edges.push_back(p);
      }
    if (ok) return edges;
  }
  throw std::runtime_error("biregular block: no simple configuration found");
}

inline void attach_fourier(Instance& inst) {
  std::map<int, std::vector<ArcState>> extras;
  for (int u = 0; u < inst.net.num_vertices(); ++u)
    if (inst.blue[std::size_t(u)] && !inst.net.is_terminal(u))
      extras[u] = fourier_neighbourhood(inst.net, u);
  inst.alt = make_alt(inst.net, extras);
}

}  // namespace detail

// Random layered graph for a given profile. Edge layer k is oriented
// forward (lower layer to higher) iff k mod 4 is 1 or 2; Fourier
// neighbourhoods sit on the odd (blue) interior layers.
inline Instance hierarchical_1d(const HierarchicalSpec& spec,
                                std::uint64_t seed) {
  spec.validate();
  int n = spec.layers();
  std::vector<double> w = spec.weights();
  Rng rng(seed);

  Instance inst;
  inst.family = "hierarchical";
  inst.seed = seed;
  inst.params["n"] = n;

  std::vector<std::vector<int>> layer(std::size_t(n) + 1);
  for (int k = 0; k <= n; ++k)
    for (std::int64_t i = 0; i < spec.s[std::size_t(k)]; ++i) {
      std::string label = k == 0   ? "s"
                          : k == n ? "t"
                                   : "L" + std::to_string(k) + "." + std::to_string(i);
      layer[std::size_t(k)].push_back(inst.net.add_vertex(label));
    }
  inst.net.set_terminals(layer[0][0], layer[std::size_t(n)][0]);

  for (int k = 1; k <= n; ++k) {
    int nl = int(layer[std::size_t(k - 1)].size());
    int nr = int(layer[std::size_t(k)].size());
    int c = int(spec.e[std::size_t(k - 1)] / nl);
    int d = int(spec.e[std::size_t(k - 1)] / nr);
    bool fwd = (k % 4 == 1) || (k % 4 == 2);
    for (auto [l, r] : detail::biregular_block(rng, nl, nr, c, d)) {
      int u = layer[std::size_t(k - 1)][std::size_t(l)];
      int v = layer[std::size_t(k)][std::size_t(r)];
      if (fwd)
        inst.net.add_edge(u, v, w[std::size_t(k)]);
      else
        inst.net.add_edge(v, u, w[std::size_t(k)]);
    }
  }

  inst.blue.assign(std::size_t(inst.net.num_vertices()), 0);
  for (int k = 1; k < n; k += 2)
    for (int u : layer[std::size_t(k)])
      if (!inst.net.is_terminal(u)) inst.blue[std::size_t(u)] = 1;
  detail::attach_fourier(inst);
  return inst;
}

// profile of two depth-h binary trees joined leaf-to-leaf by a double
// matching
inline HierarchicalSpec welded_spec(int h) {
  if (h < 1) throw std::invalid_argument("welded_tree: depth must be >= 1");
  HierarchicalSpec spec;
  for (int j = 0; j <= h; ++j) spec.s.push_back(std::int64_t(1) << j);
  for (int j = h; j >= 0; --j) spec.s.push_back(std::int64_t(1) << j);
  for (int j = 1; j <= h; ++j) spec.e.push_back(std::int64_t(1) << j);
  spec.e.push_back(std::int64_t(1) << (h + 1));
  for (int j = h; j >= 1; --j) spec.e.push_back(std::int64_t(1) << j);
  return spec;
}

inline Instance welded_tree(int h, std::uint64_t seed) {
  Instance inst = hierarchical_1d(welded_spec(h), seed);
  inst.family = "welded";
  inst.params.clear();
  inst.params["h"] = h;
  return inst;
}

// The ten-vertex example network with hand-picked alternative states on its
// three blue vertices.
inline Instance graph_G1() {
  Instance inst;
  inst.family = "g1";
  Network& g = inst.net;
  int s = g.add_vertex("s");
  int v1 = g.add_vertex("v1"), v2 = g.add_vertex("v2"), v3 = g.add_vertex("v3");
  int v4 = g.add_vertex("v4"), v5 = g.add_vertex("v5"), v6 = g.add_vertex("v6");
  int v7 = g.add_vertex("v7"), v8 = g.add_vertex("v8");
  int t = g.add_vertex("t");
  g.set_terminals(s, t);
  g.add_edge(s, v1, 1.0);
  g.add_edge(s, v2, 1.0);
  g.add_edge(v1, v3, 1.0);
  g.add_edge(v2, v4, 0.25);
  g.add_edge(v2, v5, 0.25);
  g.add_edge(v3, v6, 0.25);
  g.add_edge(v3, v7, 0.25);
  g.add_edge(v4, v6, 0.25);
  g.add_edge(v7, v5, 0.25);
  g.add_edge(v8, v5, 0.25);
  g.add_edge(v8, v6, 0.25);
  g.add_edge(t, v8, 1.0);

  auto state = [&](int u, std::initializer_list<std::pair<int, double>> kets) {
    ArcState st = ArcState::Zero(arc_dim(g));
    for (auto [v, coef] : kets)
      st[ket_index(g, u, v)] = std::sqrt(2.0 / 3.0) * coef;
    return st;
  };
  std::map<int, std::vector<ArcState>> extras;
  extras[v2] = {state(v2, {{s, 0.5}, {v4, -1.0}, {v5, 0.5}})};
  extras[v3] = {state(v3, {{v1, 0.5}, {v6, -1.0}, {v7, 0.5}})};
  extras[v8] = {state(v8, {{t, 0.5}, {v5, -1.0}, {v6, 0.5}})};
  inst.alt = make_alt(g, extras);

  inst.blue.assign(std::size_t(g.num_vertices()), 0);
  inst.blue[std::size_t(v2)] = inst.blue[std::size_t(v3)] = inst.blue[std::size_t(v8)] = 1;
  return inst;
}

namespace detail {

// In-circuit weld: edge layers c = 0..2d+2 where 0 and 2d+2 are the single
// boundary edges. Weights chain inward from both boundaries through the
// balance conditions of the blue (even-index) vertex layers; black layers
// keep the weight. For even d the blue leaf layer S_d carries no balance
// condition (it is demoted to star-only), which is exactly what lets both
// boundary conditions hold at once.
struct WeldChain {
  std::vector<double> w;  // size 2d+3
  bool demote_leaf = false;
};

inline WeldChain weld_chain(int d) {
  WeldChain ch;
  ch.demote_leaf = (d % 2 == 0);
  int m = 2 * d + 2;
  ch.w.assign(std::size_t(m) + 1, 0.0);
  auto blue = [&](int j) { return j % 2 == 0 && !(ch.demote_leaf && j == d); };
  ch.w[0] = 1.0;
  for (int j = 0; j < d; ++j)
    ch.w[std::size_t(j) + 1] = blue(j) ? ch.w[std::size_t(j)] / 4.0 : ch.w[std::size_t(j)];
  ch.w[std::size_t(m)] = 1.0;
  for (int j = 2 * d + 1; j > d; --j)
    ch.w[std::size_t(j)] = blue(j) ? ch.w[std::size_t(j) + 1] / 4.0 : ch.w[std::size_t(j) + 1];
  if (d % 2 == 1 && std::abs(ch.w[std::size_t(d)] - ch.w[std::size_t(d) + 1]) > 1e-12)
    throw std::logic_error("weld chain failed to close");
  return ch;
}

struct WeldResult {
  std::vector<int> demoted;
};

// Builds one weld between attach0 (the 0-end) and attach1 (the far end).
// reversed flips every stored arc; scale multiplies every weight.
inline WeldResult build_weld(Network& g, Rng& rng, int d, int attach0,
                             int attach1, bool reversed, double scale,
                             const std::string& tag) {
  WeldChain ch = weld_chain(d);
  std::vector<std::vector<int>> layer(std::size_t(2 * d + 2));
  for (int j = 0; j <= 2 * d + 1; ++j) {
    int size = j <= d ? (1 << j) : (1 << (2 * d + 1 - j));
    for (int i = 0; i < size; ++i)
      layer[std::size_t(j)].push_back(
          g.add_vertex(tag + "." + std::to_string(j) + "." + std::to_string(i)));
  }

  auto add = [&](int lo, int hi, int c, double w) {
    bool fwd = (c % 4 == 0 || c % 4 == 1 || c == 2 * d + 2);
    if (reversed) fwd = !fwd;
    if (fwd)
      g.add_edge(lo, hi, w);
    else
      g.add_edge(hi, lo, w);
  };

  add(attach0, layer[0][0], 0, scale * ch.w[0]);
  for (int c = 1; c <= 2 * d + 1; ++c) {
    auto& L = layer[std::size_t(c - 1)];
    auto& R = layer[std::size_t(c)];
    int nl = int(L.size()), nr = int(R.size());
    int e = 2 * std::min(nl, nr);
    int cl = e / nl, cr = e / nr;
    for (auto [l, r] : biregular_block(rng, nl, nr, cl, cr))
      add(L[std::size_t(l)], R[std::size_t(r)], c, scale * ch.w[std::size_t(c)]);
  }
  add(layer[std::size_t(2 * d + 1)][0], attach1, 2 * d + 2,
      scale * ch.w[std::size_t(2 * d + 2)]);

  WeldResult res;
  if (ch.demote_leaf) res.demoted = layer[std::size_t(d)];
  return res;
}

inline Instance circuit_core(int layers, int depth, std::uint64_t seed,
                             const std::string& family) {
  if (layers < 1) throw std::invalid_argument("circuit: layers must be >= 1");
  if (depth < 1) throw std::invalid_argument("circuit: tree depth must be >= 1");
  Rng rng(seed);
  Instance inst;
  inst.family = family;
  inst.seed = seed;
  inst.params["n"] = layers;
  if (depth != layers) inst.params["depth"] = depth;

  Network& g = inst.net;
  std::vector<int> demoted;
  std::vector<int> J(std::size_t(layers) + 1, -1);
  J[0] = g.add_vertex("s");
  for (int i = 1; i <= layers; ++i)
    J[std::size_t(i)] =
        g.add_vertex(i == layers ? "t" : "j" + std::to_string(i));
  g.set_terminals(J[0], J[std::size_t(layers)]);

  for (int i = 1; i <= layers; ++i) {
    std::string pi = "p" + std::to_string(i) + ".";
    int A = g.add_vertex(pi + "2");
    int B = g.add_vertex(pi + "3");
    int C = g.add_vertex(pi + "4");
    int D = g.add_vertex(pi + "5");
    int E = g.add_vertex(pi + "6");
    int Jin = J[std::size_t(i - 1)], Jout = J[std::size_t(i)];

    g.add_edge(Jin, A, 1.0);
    g.add_edge(A, B, 0.25);
    g.add_edge(C, B, 0.25);
    g.add_edge(E, D, 0.25);
    g.add_edge(C, D, 0.25);
    g.add_edge(Jout, C, 1.0);

    std::string wi = "w" + std::to_string(i) + ".";
    auto r1 = detail::build_weld(g, rng, depth, Jin, E, false, 1.0, wi + "1");
    auto r2 = detail::build_weld(g, rng, depth, D, A, true, 0.25, wi + "2");
    auto r3 = detail::build_weld(g, rng, depth, B, E, true, 0.25, wi + "3");
    for (auto* r : {&r1, &r2, &r3})
      demoted.insert(demoted.end(), r->demoted.begin(), r->demoted.end());

    inst.canonical_path.insert(inst.canonical_path.end(),
                               {A, B, C, Jout});
  }
  inst.canonical_path.insert(inst.canonical_path.begin(), J[0]);

  std::vector<int> parity = g.bipartite_parity();
  if (parity.empty()) throw std::logic_error("circuit: graph not bipartite");
  inst.blue.assign(std::size_t(g.num_vertices()), 0);
  for (int u = 0; u < g.num_vertices(); ++u)
    inst.blue[std::size_t(u)] = (parity[std::size_t(u)] == 1 && !g.is_terminal(u)) ? 1 : 0;
  for (int u : demoted) inst.blue[std::size_t(u)] = 0;
  detail::attach_fourier(inst);

  if (layers % 2 == 1 && layers >= 3)
    inst.middle_junction = J[std::size_t((layers + 1) / 2 - 1)];
  return inst;
}

}  // namespace detail

// One pattern layer with three welds of the given tree depth.
inline Instance graph_G2(int tree_depth, std::uint64_t seed) {
  return detail::circuit_core(1, tree_depth, seed, "g2");
}

// n chained pattern layers, welds of tree depth n.
inline Instance welded_circuit(int n, std::uint64_t seed) {
  return detail::circuit_core(n, n, seed, "circuit");
}

// Small fixed instances used across the documentation and the regression
// suite.

// four-vertex example: s-x bridge, triangle-free diamond x/y/t
inline Instance fig_normal() {
  Instance inst;
  inst.family = "fig-normal";
  Network& g = inst.net;
  int s = g.add_vertex("s"), x = g.add_vertex("x"), y = g.add_vertex("y"),
      t = g.add_vertex("t");
  g.set_terminals(s, t);
  g.add_edge(s, x, 1.0);
  g.add_edge(x, y, 0.25);
  g.add_edge(x, t, 0.25);
  g.add_edge(y, t, 0.25);
  ArcState ex = ArcState::Zero(arc_dim(g));
  ex[ket_index(g, x, s)] = std::sqrt(2.0 / 3.0) * 0.5;
  ex[ket_index(g, x, y)] = -std::sqrt(2.0 / 3.0);
  ex[ket_index(g, x, t)] = std::sqrt(2.0 / 3.0) * 0.5;
  inst.alt = make_alt(g, {{x, {ex}}});
  inst.blue.assign(4, 0);
  inst.blue[std::size_t(x)] = 1;
  return inst;
}

// same blue state, but (y,t) removed and the x-t edge at unit weight: no
// unit s-t flow can satisfy the neighbourhood constraint at x
inline Instance fig_counterexample() {
  Instance inst;
  inst.family = "counterexample";
  Network& g = inst.net;
  int s = g.add_vertex("s"), x = g.add_vertex("x"), y = g.add_vertex("y"),
      t = g.add_vertex("t");
  g.set_terminals(s, t);
  g.add_edge(s, x, 1.0);
  g.add_edge(x, y, 0.25);
  g.add_edge(x, t, 1.0);
  ArcState ex = ArcState::Zero(arc_dim(g));
  ex[ket_index(g, x, s)] = std::sqrt(2.0 / 3.0) * 0.5;
  ex[ket_index(g, x, y)] = -std::sqrt(2.0 / 3.0);
  ex[ket_index(g, x, t)] = std::sqrt(2.0 / 3.0) * 0.5;
  inst.alt = make_alt(g, {{x, {ex}}});
  inst.blue.assign(4, 0);
  inst.blue[std::size_t(x)] = 1;
  return inst;
}

}  // namespace altnet
