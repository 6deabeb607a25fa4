#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "altnet/alt_network.hpp"
#include "altnet/common.hpp"
#include "altnet/flow_solver.hpp"
#include "altnet/generators.hpp"
#include "altnet/walk.hpp"

namespace altnet {

// Adjacency-list oracle with random bit-string names. All graph access from
// the algorithm side goes through query()/is_target(); vertex ids and labels
// stay private to the simulator.
class OracleGraph {
 public:
  OracleGraph(const Instance& inst, std::uint64_t seed, int name_bits = 0)
      : inst_(inst) {
    const Network& g = inst.net;
    int n_param = 0;
    if (auto it = inst.params.find("n"); it != inst.params.end())
      n_param = int(it->second);
    if (auto it = inst.params.find("h"); it != inst.params.end())
      n_param = int(it->second);
    int base = 0;
    if (inst.family == "circuit" || inst.family == "g2") base = 3 * n_param;
    if (inst.family == "welded" || inst.family == "hierarchical")
      base = 2 * n_param;
    int min_bits = 1;
    while ((std::int64_t(1) << min_bits) <= g.num_vertices()) ++min_bits;
    ++min_bits;  // keep a constant fraction of strings unmapped
    bits_ = name_bits > 0 ? name_bits : std::max(base, min_bits);
    if (bits_ > 62) throw std::invalid_argument("oracle: name length too large");
    if ((std::int64_t(1) << bits_) <= g.num_vertices())
      throw std::invalid_argument("oracle: name space not larger than vertex set");

    Rng rng = Rng::derived(seed, 0x6f7261636c65ull);
    names_.resize(std::size_t(g.num_vertices()));
    std::set<std::uint64_t> used;
    for (int v = 0; v < g.num_vertices(); ++v) {
      std::uint64_t code = 0;
      if (v != g.s()) {
        do {
          code = rng.bounded((std::uint64_t(1) << bits_) - 1) + 1;
        } while (!used.insert(code).second);
      }
      std::string name(std::size_t(bits_), '0');
      for (int b = 0; b < bits_; ++b)
        if (code >> (bits_ - 1 - b) & 1) name[std::size_t(b)] = '1';
      names_[std::size_t(v)] = name;
      index_[name] = v;
    }
    adj_.resize(std::size_t(g.num_vertices()));
    for (int v = 0; v < g.num_vertices(); ++v) {
      for (const Neighbour& nb : g.neighbourhood(v))
        adj_[std::size_t(v)].push_back(nb.v);
      rng.shuffle(adj_[std::size_t(v)]);
    }
  }

  int name_length() const { return bits_; }
  const std::string& start_name() const {
    return names_[std::size_t(inst_.net.s())];
  }

  std::optional<std::vector<std::string>> query(const std::string& name) {
    if (int(name.size()) != bits_)
      throw std::invalid_argument("oracle: query with wrong-length name");
    ++count_;
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    std::vector<std::string> out;
    for (int v : adj_[std::size_t(it->second)])
      out.push_back(names_[std::size_t(v)]);
    return out;
  }

  // the target-check predicate that comes with the problem statement
  bool is_target(const std::string& name) {
    ++count_;
    return name == names_[std::size_t(inst_.net.t())];
  }

  long long query_count() const { return count_; }
  void reset_query_count() { count_ = 0; }

  // privileged access for the simulator side only
  const Instance& instance() const { return inst_; }
  const std::string& name_of(int v) const { return names_[std::size_t(v)]; }
  int vertex_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::invalid_argument("oracle: unknown name");
    return it->second;
  }

 private:
  const Instance& inst_;
  int bits_ = 0;
  long long count_ = 0;
  std::vector<std::string> names_;
  std::map<std::string, int> index_;
  std::vector<std::vector<int>> adj_;
};

enum class RunMode { analytic, faithful };

namespace detail {

// Everything the phase-estimation trial loop needs, computed once per
// instance: the zero-phase outcome probability at the working precision and
// the arc-measurement distribution of the post-measurement state.
struct PeContext {
  double r_alt = 0;
  double p = 0;       // promised lower bound 1/(R^alt w_s)
  double p_zero = 0;  // exact zero-outcome probability at precision 1/t_pe
  long long t_pe = 1;
  std::vector<double> slot_weights;  // |<u,v|post>|^2 per arc slot
};

inline PeContext prepare_pe(const Instance& inst, const WalkOperator& walk,
                            double eps) {
  PeContext ctx;
  const Network& g = inst.net;
  auto res = alt_electrical_flow(g, inst.alt);
  if (std::holds_alternative<Infeasible>(res))
    throw std::runtime_error("pe context: instance has no feasible unit flow");
  const AltFlowSolution& sol = std::get<AltFlowSolution>(res);
  ctx.r_alt = sol.resistance;

  double ws = g.weighted_degree(g.s());
  ctx.p = 1.0 / (ctx.r_alt * ws);
  AltPotential pot = alt_edge_potential(g, inst.alt, sol);
  ArcState p_state = alt_potential_state(g, pot.pe, ctx.r_alt);
  double phi_norm = p_state.norm() / std::sqrt(ctx.r_alt * ws);
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  double delta_pe = phi_norm > 1e-14
                        ? 16.0 * ctx.p * eps * eps / (17.0 * pi2 * phi_norm)
                        : eps * eps;
  ctx.t_pe = std::max<long long>(2, (long long)std::ceil(1.0 / delta_pe));

  PhaseEstimate pe = pe_zero(walk.spectrum, psi_s_plus(g), long(ctx.t_pe));
  ctx.p_zero = pe.p_zero;
  ctx.slot_weights.resize(std::size_t(pe.post.size()));
  for (int k = 0; k < pe.post.size(); ++k)
    ctx.slot_weights[std::size_t(k)] = std::norm(pe.post[k]);
  return ctx;
}

// one phase-estimation attempt; faithful mode re-runs the estimator instead
// of using the cached numbers (identical values, exercised code path)
inline bool pe_attempt(const PeContext& ctx, const Instance& inst,
                       const WalkOperator& walk, RunMode mode, Rng& rng,
                       const std::vector<double>*& weights_out,
                       std::vector<double>& scratch) {
  double p_zero;
  if (mode == RunMode::faithful) {
    PhaseEstimate pe =
        pe_zero(walk.spectrum, psi_s_plus(inst.net), long(ctx.t_pe));
    p_zero = pe.p_zero;
    scratch.resize(std::size_t(pe.post.size()));
    for (int k = 0; k < pe.post.size(); ++k)
      scratch[std::size_t(k)] = std::norm(pe.post[k]);
    weights_out = &scratch;
  } else {
    p_zero = ctx.p_zero;
    weights_out = &ctx.slot_weights;
  }
  return rng.bernoulli(p_zero);
}

}  // namespace detail

struct Alg1Params {
  double c1 = 4.0;
  double c2 = 4.0;
  double delta = 0.1;
  RunMode mode = RunMode::analytic;
};

struct Alg1Result {
  bool success = false;
  std::string t_name;
  int trials_used = 0;
  long long queries_actual = 0;
  long long queries_model = 0;
};

// Exact per-trial numbers; tests use them to predict the success rate.
struct Alg1Analysis {
  long long t1 = 0, t2 = 0;
  double eps = 0;
  double p_zero = 0;      // per phase-estimation attempt
  double pe_success = 0;  // 1-(1-p_zero)^(T1+1)
  double t_touch = 0;     // P(measured arc touches t | zero outcome)
  double per_trial = 0;   // pe_success * t_touch
  double predicted = 0;   // 1-(1-per_trial)^T2
  detail::PeContext ctx;
};

inline Alg1Analysis alg1_analyse(const Instance& inst,
                                 const WalkOperator& walk,
                                 const Alg1Params& params) {
  const Network& g = inst.net;
  int d_max = 0;
  for (int u = 0; u < g.num_vertices(); ++u)
    if (!g.is_terminal(u)) d_max = std::max(d_max, g.degree(u));
  if (d_max == 0) d_max = std::max(g.degree(g.s()), g.degree(g.t()));
  double w_n = g.neighbourhood(g.t()).front().w;
  double r = alt_effective_resistance(g, inst.alt);

  Alg1Analysis an;
  an.t1 = (long long)std::ceil(params.c1 * r * d_max);
  an.t2 = std::max<long long>(
      1, (long long)std::ceil(params.c2 * r * d_max * w_n *
                              std::log(1.0 / params.delta)));
  an.eps = 1.0 / (2.0 * r * d_max * w_n);
  an.ctx = detail::prepare_pe(inst, walk, an.eps);
  an.p_zero = an.ctx.p_zero;
  an.pe_success = 1.0 - std::pow(1.0 - an.p_zero, double(an.t1 + 1));

  double touch = 0, total = 0;
  for (std::size_t k = 0; k < an.ctx.slot_weights.size(); ++k) {
    total += an.ctx.slot_weights[k];
    auto [u, v] = ket_vertices(g, int(k));
    if (u == g.t() || v == g.t()) touch += an.ctx.slot_weights[k];
  }
  an.t_touch = total > 0 ? touch / total : 0.0;
  an.per_trial = an.pe_success * an.t_touch;
  an.predicted = 1.0 - std::pow(1.0 - an.per_trial, double(an.t2));
  return an;
}

inline Alg1Result alg1_find_target(OracleGraph& oracle,
                                   const WalkOperator& walk,
                                   const Alg1Analysis& an,
                                   const Alg1Params& params,
                                   std::uint64_t seed) {
  const Instance& inst = oracle.instance();
  const Network& g = inst.net;
  Rng rng = Rng::derived(seed, 0x616c6731ull);
  oracle.reset_query_count();

  Alg1Result res;
  std::vector<double> scratch;
  for (long long i = 1; i <= an.t2 && !res.success; ++i) {
    res.trials_used = int(i);
    int slot = -1;
    for (long long j = 0; j <= an.t1; ++j) {
      res.queries_model += an.ctx.t_pe;
      const std::vector<double>* weights;
      if (detail::pe_attempt(an.ctx, inst, walk, params.mode, rng, weights,
                             scratch)) {
        slot = int(rng.weighted(*weights));
        break;
      }
    }
    if (slot < 0) continue;
    auto [u, v] = ket_vertices(g, slot);
    for (int cand : {u, v}) {
      const std::string& name = oracle.name_of(cand);
      if (name == oracle.start_name()) continue;
      if (oracle.is_target(name)) {
        res.success = true;
        res.t_name = name;
        break;
      }
    }
  }
  res.queries_actual = oracle.query_count();
  return res;
}

inline Alg1Result alg1_find_target(OracleGraph& oracle,
                                   const WalkOperator& walk,
                                   const Alg1Params& params,
                                   std::uint64_t seed) {
  Alg1Analysis an = alg1_analyse(oracle.instance(), walk, params);
  return alg1_find_target(oracle, walk, an, params, seed);
}

struct Alg2Params {
  double c1 = 40.0;
  double c2 = 40.0;
  double delta = 0.1;
  RunMode mode = RunMode::analytic;
};

struct Alg2Result {
  bool success = false;
  std::vector<std::string> path;
  std::vector<std::pair<std::string, std::string>> sample;  // edge multiset S
  long long queries_actual = 0;
  long long queries_model = 0;
};

struct Alg2Prep {
  long long t1 = 0, t2 = 0;
  double eps = 0;
  detail::PeContext ctx;
};

inline Alg2Prep alg2_prepare(const Instance& inst, const WalkOperator& walk,
                             const Alg2Params& params) {
  auto itn = inst.params.find("n");
  if (itn == inst.params.end())
    throw std::invalid_argument("alg2: instance has no layer count");
  double n = double(itn->second);
  Alg2Prep prep;
  prep.t1 = (long long)std::ceil(params.c1 * n * n);
  prep.t2 = std::max<long long>(
      1,
      (long long)std::ceil(params.c2 * n * n * std::log(n / params.delta)));
  prep.eps = 1.0 / (2.0 * n * n);
  prep.ctx = detail::prepare_pe(inst, walk, prep.eps);
  return prep;
}

// breadth-first search over a sampled edge list, lexicographic tie-break
inline std::optional<std::vector<std::string>> bfs_path(
    const std::vector<std::pair<std::string, std::string>>& edges,
    const std::string& s_name, const std::string& t_name) {
  std::map<std::string, std::set<std::string>> adj;
  for (const auto& [a, b] : edges) {
    adj[a].insert(b);
    adj[b].insert(a);
  }
  if (!adj.count(s_name)) return std::nullopt;
  std::map<std::string, std::string> parent;
  std::deque<std::string> queue{s_name};
  parent[s_name] = s_name;
  while (!queue.empty()) {
    std::string cur = queue.front();
    queue.pop_front();
    if (cur == t_name) {
      std::vector<std::string> path{cur};
      while (path.back() != s_name) path.push_back(parent[path.back()]);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (const std::string& nxt : adj[cur])
      if (!parent.count(nxt)) {
        parent[nxt] = cur;
        queue.push_back(nxt);
      }
  }
  return std::nullopt;
}

inline Alg2Result alg2_find_path(OracleGraph& oracle,
                                 const WalkOperator& walk,
                                 const Alg2Prep& prep,
                                 const Alg2Params& params,
                                 std::uint64_t seed) {
  const Instance& inst = oracle.instance();
  const Network& g = inst.net;
  Rng rng = Rng::derived(seed, 0x616c6732ull);
  oracle.reset_query_count();

  Alg2Result res;
  std::vector<double> scratch;
  for (long long i = 1; i <= prep.t2; ++i) {
    int slot = -1;
    for (long long j = 0; j <= prep.t1; ++j) {
      res.queries_model += prep.ctx.t_pe;
      const std::vector<double>* weights;
      if (detail::pe_attempt(prep.ctx, inst, walk, params.mode, rng, weights,
                             scratch)) {
        slot = int(rng.weighted(*weights));
        break;
      }
    }
    if (slot < 0) continue;
    auto [u, v] = ket_vertices(g, slot);
    res.sample.emplace_back(oracle.name_of(u), oracle.name_of(v));
  }

  // identify t among the sampled names by its degree, then search the sample
  std::set<std::string> seen;
  for (const auto& [a, b] : res.sample) {
    seen.insert(a);
    seen.insert(b);
  }
  std::string t_name;
  for (const std::string& name : seen) {
    if (name == oracle.start_name()) continue;
    auto nbrs = oracle.query(name);
    if (nbrs && nbrs->size() == 1) {
      t_name = name;
      break;
    }
  }
  if (!t_name.empty()) {
    if (auto path = bfs_path(res.sample, oracle.start_name(), t_name)) {
      res.success = true;
      res.path = *path;
    }
  }
  res.queries_actual = oracle.query_count();
  return res;
}

inline Alg2Result alg2_find_path(OracleGraph& oracle,
                                 const WalkOperator& walk,
                                 const Alg2Params& params,
                                 std::uint64_t seed) {
  Alg2Prep prep = alg2_prepare(oracle.instance(), walk, params);
  return alg2_find_path(oracle, walk, prep, params, seed);
}

struct BaselineResult {
  bool found_middle = false;
  bool cycle_single_root = false;
  bool cycle_two_roots = false;
  bool exhausted = false;
  long long queries = 0;
};

namespace detail {

inline bool is_weld_root(const Instance& inst, int v) {
  const std::string& label = inst.net.label(v);
  if (label.empty() || label[0] != 'w') return false;
  // weld labels: w<layer>.<index>.<depth-position>.<i>
  std::vector<std::string> parts;
  std::string cur;
  for (char c : label)
    if (c == '.') {
      parts.push_back(cur);
      cur.clear();
    } else
      cur.push_back(c);
  parts.push_back(cur);
  if (parts.size() != 4) return false;
  int layer = std::atoi(parts[2].c_str());
  int depth = 0;
  if (auto it = inst.params.find("depth"); it != inst.params.end())
    depth = int(it->second);
  else if (auto it2 = inst.params.find("n"); it2 != inst.params.end())
    depth = int(it2->second);
  return layer == 0 || layer == 2 * depth + 1;
}

}  // namespace detail

// Random embedding of a binary tree, expanded breadth-first until the query
// budget runs out. Wins by seeing the middle junction's name or by
// revisiting a vertex (an improper embedding closes a cycle in the image).
inline BaselineResult classical_embedding_baseline(OracleGraph& oracle,
                                                   long long budget,
                                                   std::uint64_t seed) {
  const Instance& inst = oracle.instance();
  if (inst.middle_junction < 0)
    throw std::invalid_argument("baseline: instance has no middle junction");
  const std::string middle = oracle.name_of(inst.middle_junction);
  Rng rng = Rng::derived(seed, 0x67616d6561ull);
  oracle.reset_query_count();

  BaselineResult res;
  struct Node {
    std::string name;
    int parent;  // index into nodes
  };
  std::vector<Node> nodes{{oracle.start_name(), -1}};
  std::map<std::string, int> first_visit{{oracle.start_name(), 0}};
  std::deque<int> frontier{0};

  auto classify_cycle = [&](int a, int b) {
    // walk both branches up to the common ancestor and count distinct weld
    // roots on the closed walk in the image
    std::set<int> ancestry;
    for (int x = a; x != -1; x = nodes[std::size_t(x)].parent)
      ancestry.insert(x);
    int meet = b;
    while (!ancestry.count(meet)) meet = nodes[std::size_t(meet)].parent;
    std::set<int> roots;
    auto collect = [&](int from) {
      for (int y = from; y != meet; y = nodes[std::size_t(y)].parent) {
        int v = oracle.vertex_of(nodes[std::size_t(y)].name);
        if (detail::is_weld_root(inst, v)) roots.insert(v);
      }
    };
    collect(a);
    collect(b);
    int vm = oracle.vertex_of(nodes[std::size_t(meet)].name);
    if (detail::is_weld_root(inst, vm)) roots.insert(vm);
    if (roots.size() >= 2)
      res.cycle_two_roots = true;
    else
      res.cycle_single_root = true;
  };

  while (!frontier.empty()) {
    if (oracle.query_count() >= budget) {
      res.exhausted = true;
      break;
    }
    int idx = frontier.front();
    frontier.pop_front();
    const std::string name = nodes[std::size_t(idx)].name;
    if (name == middle) {
      res.found_middle = true;
      continue;  // the embedding stops here
    }
    auto nbrs = oracle.query(name);
    if (!nbrs) continue;
    std::vector<std::string> children;
    std::string parent_name =
        nodes[std::size_t(idx)].parent >= 0
            ? nodes[std::size_t(nodes[std::size_t(idx)].parent)].name
            : std::string();
    for (const std::string& nb : *nbrs) {
      if (nb == middle) res.found_middle = true;
      if (nb != parent_name) children.push_back(nb);
    }
    if (children.size() == 2 && rng.bernoulli(0.5))
      std::swap(children[0], children[1]);
    for (const std::string& child : children) {
      int cidx = int(nodes.size());
      nodes.push_back({child, idx});
      auto [it, fresh] = first_visit.try_emplace(child, cidx);
      if (!fresh)
        classify_cycle(it->second, cidx);
      else if (child != oracle.start_name())
        frontier.push_back(cidx);
    }
  }
  res.queries = oracle.query_count();
  return res;
}

}  // namespace altnet
