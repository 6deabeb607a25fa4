#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "altnet/common.hpp"

namespace altnet {

// Oriented edge (u,v) with conductance w > 0. Orientation is bookkeeping
// only: it fixes reference signs for flows, it does not restrict them.
struct Arc {
  int u = -1;
  int v = -1;
  double w = 1.0;
};

// One neighbour of a fixed vertex. delta == 0 when the stored arc leaves the
// vertex, 1 when it enters it.
struct Neighbour {
  int v = -1;
  int arc = -1;
  int delta = 0;
  double w = 1.0;
};

// Weighted graph with two terminals. Vertices are dense ids; labels are only
// used for I/O. Matrix columns are always ordered s, interior (ascending id),
// t, regardless of the ids themselves.
class Network {
 public:
  int add_vertex(std::string label = {}) {
    int id = int(labels_.size());
    if (label.empty()) label = "v" + std::to_string(id);
    labels_.push_back(std::move(label));
    adj_.emplace_back();
    return id;
  }

  int add_edge(int u, int v, double w) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw std::invalid_argument("self-loop");
    if (w <= 0) throw std::invalid_argument("non-positive weight");
    if (find_arc(u, v) || find_arc(v, u))
      throw std::invalid_argument("parallel edge");
    int a = int(arcs_.size());
    arcs_.push_back({u, v, w});
    insert_nb(u, {v, a, 0, w});
    insert_nb(v, {u, a, 1, w});
    return a;
  }

  void set_terminals(int s, int t) {
    check_vertex(s);
    check_vertex(t);
    if (s == t) throw std::invalid_argument("s == t");
    s_ = s;
    t_ = t;
  }

  int num_vertices() const { return int(labels_.size()); }
  int num_edges() const { return int(arcs_.size()); }
  int s() const { return require_terminal(s_); }
  int t() const { return require_terminal(t_); }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const Arc& arc(int a) const { return arcs_.at(std::size_t(a)); }
  const std::string& label(int u) const { return labels_.at(std::size_t(u)); }
  void set_label(int u, std::string l) { labels_.at(std::size_t(u)) = std::move(l); }

  // neighbours of u, ascending neighbour id
  const std::vector<Neighbour>& neighbourhood(int u) const {
    check_vertex(u);
    return adj_[std::size_t(u)];
  }

  int degree(int u) const { return int(neighbourhood(u).size()); }

  // weighted degree w_u
  double weighted_degree(int u) const {
    double s = 0;
    for (const auto& nb : neighbourhood(u)) s += nb.w;
    return s;
  }

  std::optional<int> find_arc(int u, int v) const {
    if (u < 0 || v < 0 || u >= num_vertices()) return std::nullopt;
    const auto& ns = adj_[std::size_t(u)];
    auto it = std::lower_bound(ns.begin(), ns.end(), v,
                               [](const Neighbour& n, int x) { return n.v < x; });
    if (it == ns.end() || it->v != v || it->delta != 0) return std::nullopt;
    return it->arc;
  }

  bool is_terminal(int u) const { return u == s_ || u == t_; }

  // column order for incidence-type matrices: s, interior ascending, t
  std::vector<int> matrix_columns() const {
    std::vector<int> cols;
    cols.push_back(s());
    for (int u = 0; u < num_vertices(); ++u)
      if (!is_terminal(u)) cols.push_back(u);
    cols.push_back(t());
    return cols;
  }

  // connectivity of the underlying undirected graph
  bool connected() const {
    if (num_vertices() == 0) return true;
    std::vector<int> seen(std::size_t(num_vertices()), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (const auto& nb : adj_[std::size_t(u)])
        if (!seen[std::size_t(nb.v)]) {
          seen[std::size_t(nb.v)] = 1;
          ++count;
          stack.push_back(nb.v);
        }
    }
    return count == num_vertices();
  }

  // 2-colouring by BFS distance parity from s; empty if the graph has an odd
  // cycle
  std::vector<int> bipartite_parity() const {
    std::vector<int> par(std::size_t(num_vertices()), -1);
    std::vector<int> queue{s()};
    par[std::size_t(s())] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      int u = queue[head];
      for (const auto& nb : adj_[std::size_t(u)]) {
        if (par[std::size_t(nb.v)] < 0) {
          par[std::size_t(nb.v)] = 1 - par[std::size_t(u)];
          queue.push_back(nb.v);
        } else if (par[std::size_t(nb.v)] == par[std::size_t(u)]) {
          return {};
        }
      }
    }
    return par;
  }

 private:
  void check_vertex(int u) const {
    if (u < 0 || u >= num_vertices()) throw std::out_of_range("vertex id");
  }
  static int require_terminal(int x) {
    if (x < 0) throw std::logic_error("terminals not set");
    return x;
  }
  void insert_nb(int u, Neighbour nb) {
    auto& ns = adj_[std::size_t(u)];
    auto it = std::lower_bound(ns.begin(), ns.end(), nb.v,
                               [](const Neighbour& n, int x) { return n.v < x; });
    ns.insert(it, nb);
  }

  std::vector<std::string> labels_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<Neighbour>> adj_;
  int s_ = -1;
  int t_ = -1;
};

// Flow on stored arcs, signed along the stored orientation.
struct Flow {
  Vec theta;

  double energy(const Network& net) const {
    double e = 0;
    for (int a = 0; a < net.num_edges(); ++a)
      e += theta[a] * theta[a] / net.arc(a).w;
    return e;
  }
};

inline double divergence(const Network& net, const Flow& f, int u) {
  double d = 0;
  for (const auto& nb : net.neighbourhood(u))
    d += (nb.delta == 0 ? f.theta[nb.arc] : -f.theta[nb.arc]);
  return d;
}

// theta_{u,v} with u,v adjacent: signed flow out of u along that edge
inline double flow_along(const Network& net, const Flow& f, int u, int v) {
  auto a = net.find_arc(u, v);
  if (a) return f.theta[*a];
  a = net.find_arc(v, u);
  if (!a) throw std::invalid_argument("flow_along: not an edge");
  return -f.theta[*a];
}

struct VertexPotential {
  Vec p;  // indexed by vertex id
};

// Directional potentials p_{u,v}: one value per arc endpoint. tail[a] is
// p_{u,v} for the stored arc a=(u,v), head[a] is p_{v,u}.
struct EdgePotential {
  Vec tail;
  Vec head;

  double at(const Network& net, int u, int v) const {
    if (auto a = net.find_arc(u, v)) return tail[*a];
    if (auto a = net.find_arc(v, u)) return head[*a];
    throw std::invalid_argument("edge potential: not an edge");
  }
};

}  // namespace altnet
