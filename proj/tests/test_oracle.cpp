#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "altnet/altnet.hpp"

using namespace altnet;

TEST_CASE("oracle name space", "[oracle]") {
  Instance w2 = welded_tree(2, 1);
  OracleGraph o1(w2, 10);
  REQUIRE(o1.name_length() == 5);

  Instance c1 = welded_circuit(1, 1);
  OracleGraph o2(c1, 10);
  REQUIRE(o2.name_length() == 6);

  Instance c3 = welded_circuit(3, 1);
  OracleGraph o3(c3, 10);
  REQUIRE(o3.name_length() == 10);

  // the start vertex is the all-zero string, all other names are distinct
  // nonzero strings over {0,1}
  REQUIRE(o2.start_name() == std::string(6, '0'));
  std::set<std::string> seen;
  for (int v = 0; v < c1.net.num_vertices(); ++v) {
    const std::string& name = o2.name_of(v);
    REQUIRE(int(name.size()) == 6);
    REQUIRE(name.find_first_not_of("01") == std::string::npos);
    if (v != c1.net.s()) REQUIRE(name != std::string(6, '0'));
    REQUIRE(seen.insert(name).second);
  }
}

TEST_CASE("oracle adjacency and counting", "[oracle]") {
  Instance inst = welded_tree(2, 7);
  OracleGraph o(inst, 3);
  REQUIRE(o.query_count() == 0);

  for (int v = 0; v < inst.net.num_vertices(); ++v) {
    auto r = o.query(o.name_of(v));
    REQUIRE(r.has_value());
    std::vector<std::string> expect;
    for (const auto& nb : inst.net.neighbourhood(v))
      expect.push_back(o.name_of(nb.v));
    std::vector<std::string> got = *r;
    std::sort(got.begin(), got.end());
    std::sort(expect.begin(), expect.end());
    REQUIRE(got == expect);
  }
  REQUIRE(o.query_count() == inst.net.num_vertices());

  // wrong-length queries throw without burning budget
  REQUIRE_THROWS_AS(o.query("01"), std::invalid_argument);
  REQUIRE(o.query_count() == inst.net.num_vertices());

  // unmapped names consume a query and return nothing
  std::set<std::string> names;
  for (int v = 0; v < inst.net.num_vertices(); ++v) names.insert(o.name_of(v));
  std::string unknown;
  for (int code = 1; unknown.empty(); ++code) {
    std::string cand(std::size_t(o.name_length()), '0');
    for (int b = 0; b < o.name_length(); ++b)
      if (code >> (o.name_length() - 1 - b) & 1) cand[std::size_t(b)] = '1';
    if (!names.count(cand)) unknown = cand;
  }
  REQUIRE_FALSE(o.query(unknown).has_value());
  REQUIRE(o.query_count() == inst.net.num_vertices() + 1);

  REQUIRE(o.is_target(o.name_of(inst.net.t())));
  REQUIRE_FALSE(o.is_target(o.start_name()));
  o.reset_query_count();
  REQUIRE(o.query_count() == 0);
}

TEST_CASE("oracle determinism", "[oracle]") {
  Instance inst = welded_tree(2, 7);
  OracleGraph a(inst, 5);
  OracleGraph b(inst, 5);
  OracleGraph c(inst, 6);
  bool same_ab = true, same_ac = true;
  for (int v = 0; v < inst.net.num_vertices(); ++v) {
    same_ab &= a.name_of(v) == b.name_of(v);
    same_ac &= a.name_of(v) == c.name_of(v);
  }
  REQUIRE(same_ab);
  REQUIRE_FALSE(same_ac);
  REQUIRE(*a.query(a.start_name()) == *b.query(b.start_name()));
}

TEST_CASE("target finding on the welded tree", "[oracle][alg1]") {
  Instance inst = welded_tree(2, 99);
  WalkOperator walk = make_walk(inst.net, inst.alt);
  Alg1Params params;
  Alg1Analysis an = alg1_analyse(inst, walk, params);

  REQUIRE(an.t1 == 33);
  REQUIRE(an.t2 == 76);
  REQUIRE(an.eps == Catch::Approx(1.0 / 16.5).margin(1e-12));
  REQUIRE(an.p_zero >= 1.0 / 5.5 - 1e-9);  // 1/(R^alt w_s)
  REQUIRE(an.predicted > 0.99);

  int wins = 0;
  long long t_pe = an.ctx.t_pe;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    OracleGraph oracle(inst, 1000 + seed);
    Alg1Result res = alg1_find_target(oracle, walk, an, params, seed);
    if (res.success) {
      ++wins;
      REQUIRE(res.t_name == oracle.name_of(inst.net.t()));
    }
    REQUIRE(res.queries_actual <= 2 * res.trials_used);
    REQUIRE(res.queries_model % t_pe == 0);
    REQUIRE(res.queries_model <= t_pe * (an.t1 + 1) * an.t2);
  }
  double rate = wins / 40.0;
  REQUIRE(std::abs(rate - an.predicted) < 0.10);
}

TEST_CASE("trial statistics track the analysis", "[oracle][alg1]") {
  Instance inst = welded_tree(1, 5);
  WalkOperator walk = make_walk(inst.net, inst.alt);
  Alg1Params params;
  params.c1 = 0.4;
  params.c2 = 0.4;
  Alg1Analysis an = alg1_analyse(inst, walk, params);
  REQUIRE(an.t1 == 5);
  REQUIRE(an.t2 == 3);  // w_n = 1/4 on the sink side of the depth-1 profile
  REQUIRE(an.predicted > 0.2);
  REQUIRE(an.predicted < 0.95);

  int wins = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    OracleGraph oracle(inst, 7000 + seed);
    if (alg1_find_target(oracle, walk, an, params, seed).success) ++wins;
  }
  REQUIRE(std::abs(wins / 300.0 - an.predicted) < 0.10);
}

TEST_CASE("replaying the estimator matches the cached run", "[oracle][alg1]") {
  Instance inst = welded_tree(1, 21);
  WalkOperator walk = make_walk(inst.net, inst.alt);
  Alg1Params cached;
  Alg1Params replay;
  replay.mode = RunMode::faithful;
  Alg1Analysis an = alg1_analyse(inst, walk, cached);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    OracleGraph oa(inst, 50 + seed);
    OracleGraph ob(inst, 50 + seed);
    Alg1Result a = alg1_find_target(oa, walk, an, cached, seed);
    Alg1Result b = alg1_find_target(ob, walk, an, replay, seed);
    REQUIRE(a.success == b.success);
    REQUIRE(a.t_name == b.t_name);
    REQUIRE(a.trials_used == b.trials_used);
    REQUIRE(a.queries_actual == b.queries_actual);
    REQUIRE(a.queries_model == b.queries_model);
  }
}

TEST_CASE("pathfinding on the single-layer circuit", "[oracle][alg2]") {
  Instance inst = welded_circuit(1, 404);
  WalkOperator walk = make_walk(inst.net, inst.alt);
  Alg2Params params;
  Alg2Prep prep = alg2_prepare(inst, walk, params);
  REQUIRE(prep.t1 == 40);
  REQUIRE(prep.t2 == 93);

  int wins = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    OracleGraph oracle(inst, 600 + seed);
    Alg2Result res = alg2_find_path(oracle, walk, prep, params, seed);
    REQUIRE(int(res.sample.size()) <= prep.t2);
    if (!res.success) continue;
    ++wins;
    REQUIRE(res.path.front() == oracle.start_name());
    REQUIRE(res.path.back() == oracle.name_of(inst.net.t()));
    std::set<std::pair<std::string, std::string>> edges;
    for (const auto& [a, b] : res.sample) {
      edges.insert({a, b});
      edges.insert({b, a});
    }
    for (std::size_t i = 0; i + 1 < res.path.size(); ++i) {
      REQUIRE(edges.count({res.path[i], res.path[i + 1]}) == 1);
      // consecutive names are adjacent in the hidden graph too
      int u = oracle.vertex_of(res.path[i]);
      int v = oracle.vertex_of(res.path[i + 1]);
      REQUIRE_NOTHROW(ket_index(inst.net, u, v));
    }
  }
  REQUIRE(wins >= 14);
}

TEST_CASE("sampled edges are real edges", "[oracle][alg2]") {
  Instance inst = welded_circuit(1, 11);
  WalkOperator walk = make_walk(inst.net, inst.alt);
  Alg2Params params;
  Alg2Prep prep = alg2_prepare(inst, walk, params);
  OracleGraph oracle(inst, 31);
  Alg2Result res = alg2_find_path(oracle, walk, prep, params, 3);
  REQUIRE_FALSE(res.sample.empty());
  for (const auto& [a, b] : res.sample)
    REQUIRE_NOTHROW(
        ket_index(inst.net, oracle.vertex_of(a), oracle.vertex_of(b)));
  REQUIRE(res.queries_model % prep.ctx.t_pe == 0);
}

TEST_CASE("sample search helper", "[oracle][alg2]") {
  std::vector<std::pair<std::string, std::string>> edges{
      {"00", "01"}, {"01", "10"}, {"00", "11"}, {"11", "10"}, {"01", "01"}};
  auto path = bfs_path(edges, "00", "10");
  REQUIRE(path.has_value());
  REQUIRE(path->size() == 3);
  REQUIRE(path->front() == "00");
  REQUIRE(path->back() == "10");
  REQUIRE_FALSE(bfs_path(edges, "00", "0x").has_value());
  REQUIRE_FALSE(bfs_path({{"a", "b"}}, "c", "b").has_value());
}

TEST_CASE("embedding baseline respects its budget", "[oracle][baseline]") {
  Instance inst = welded_circuit(3, 77);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    OracleGraph oracle(inst, 300 + seed);
    BaselineResult res = classical_embedding_baseline(oracle, 2, seed);
    REQUIRE(res.queries <= 2);
    REQUIRE(res.exhausted);
    REQUIRE_FALSE(res.found_middle);
    REQUIRE_FALSE(res.cycle_single_root);
    REQUIRE_FALSE(res.cycle_two_roots);
  }
}

TEST_CASE("embedding baseline wins with a generous budget",
          "[oracle][baseline]") {
  Instance inst = welded_circuit(3, 78);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    OracleGraph oracle(inst, 900 + seed);
    BaselineResult res = classical_embedding_baseline(oracle, 2000, seed);
    REQUIRE(res.queries <= 2000);
    REQUIRE(res.found_middle);
    REQUIRE((res.cycle_single_root || res.cycle_two_roots));
    REQUIRE_FALSE(res.exhausted);
  }
  Instance flat = welded_circuit(1, 5);
  OracleGraph oracle(flat, 1);
  REQUIRE_THROWS_AS(classical_embedding_baseline(oracle, 10, 0),
                    std::invalid_argument);
}

TEST_CASE("terminal degrees are visible through the oracle",
          "[oracle]") {
  Instance inst = welded_circuit(1, 19);
  OracleGraph o(inst, 8);
  REQUIRE(o.query(o.name_of(inst.net.t()))->size() == 1);
  REQUIRE(o.query(o.start_name())->size() == 2);
}
