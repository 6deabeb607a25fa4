#include <catch2/catch_amalgamated.hpp>

#include "altnet/altnet.hpp"
#include "support/brute_force.hpp"

using namespace altnet;

TEST_CASE("unit flow on the quarter-weight path", "[flow]") {
  Network g = fig_normal().net;
  FlowSolution sol = electrical_flow(g);

  Vec wt_expect(4);
  wt_expect << 1.0, 2.0 / 3, 4.0 / 3, 2.0 / 3;
  REQUIRE((sol.w_theta - wt_expect).cwiseAbs().maxCoeff() < 1e-9);

  Vec th_expect(4);
  th_expect << 1.0, 1.0 / 3, 2.0 / 3, 1.0 / 3;
  REQUIRE((sol.flow.theta - th_expect).cwiseAbs().maxCoeff() < 1e-9);
  REQUIRE(sol.resistance == Catch::Approx(11.0 / 3).epsilon(1e-10));
  REQUIRE(sol.flow.energy(g) == Catch::Approx(sol.resistance).epsilon(1e-10));

  VertexPotential vp = vertex_potential(g, sol);
  REQUIRE(vp.p[0] == Catch::Approx(11.0 / 3).epsilon(1e-10));
  REQUIRE(vp.p[1] == Catch::Approx(8.0 / 3).epsilon(1e-10));
  REQUIRE(vp.p[2] == Catch::Approx(4.0 / 3).epsilon(1e-10));
  REQUIRE(vp.p[3] == 0.0);
}

TEST_CASE("uniform line carries unit flow", "[flow]") {
  Network g;
  for (int i = 0; i < 4; ++i) g.add_vertex();
  for (int i = 0; i < 3; ++i) g.add_edge(i, i + 1, 1.0);
  g.set_terminals(0, 3);
  FlowSolution sol = electrical_flow(g);
  for (int a = 0; a < 3; ++a)
    REQUIRE(sol.flow.theta[a] == Catch::Approx(1.0).epsilon(1e-12));
  REQUIRE(sol.resistance == Catch::Approx(3.0).epsilon(1e-12));
  VertexPotential vp = vertex_potential(g, sol);
  for (int v = 0; v < 4; ++v)
    REQUIRE(vp.p[v] == Catch::Approx(3.0 - v).margin(1e-10));
}

TEST_CASE("flow matches the cycle-basis reference on random networks",
          "[flow]") {
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    Network g = bf::random_network(rng);
    CAPTURE(trial, g.num_vertices(), g.num_edges());
    FlowSolution sol = electrical_flow(g);
    bf::ClassicalFlow ref = bf::classical_flow(g);
    REQUIRE(sol.resistance == Catch::Approx(ref.resistance).margin(1e-8));
    REQUIRE((sol.flow.theta - ref.theta).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("flow satisfies conservation and Ohm's law", "[flow]") {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    Network g = bf::random_network(rng);
    FlowSolution sol = electrical_flow(g);
    VertexPotential vp = vertex_potential(g, sol);
    for (int u = 0; u < g.num_vertices(); ++u) {
      double want = u == g.s() ? 1.0 : (u == g.t() ? -1.0 : 0.0);
      REQUIRE(divergence(g, sol.flow, u) == Catch::Approx(want).margin(1e-8));
    }
    for (int a = 0; a < g.num_edges(); ++a) {
      const Arc& arc = g.arc(a);
      REQUIRE(vp.p[arc.u] - vp.p[arc.v] ==
              Catch::Approx(sol.flow.theta[a] / arc.w).margin(1e-9));
    }
    REQUIRE(vp.p[g.s()] - vp.p[g.t()] ==
            Catch::Approx(sol.resistance).margin(1e-8));
  }
}

TEST_CASE("electrical flow minimizes energy over unit flows", "[flow]") {
  Rng rng(5150);
  for (int trial = 0; trial < 5; ++trial) {
    Network g = bf::random_network(rng);
    double r = effective_resistance(g);
    Vec base = bf::path_flow(g);
    Mat cycles = bf::cycle_basis(g);
    for (int k = 0; k < 20; ++k) {
      Vec theta = base;
      for (int c = 0; c < cycles.cols(); ++c)
        theta += (rng.uniform01() * 2.0 - 1.0) * cycles.col(c);
      Flow f;
      f.theta = theta;
      REQUIRE(f.energy(g) >= r - 1e-10);
    }
  }
}

TEST_CASE("welded-tree resistances", "[flow]") {
  REQUIRE(effective_resistance(welded_tree(1, 3).net) ==
          Catch::Approx(3.5).epsilon(1e-10));
  REQUIRE(effective_resistance(welded_tree(2, 3).net) ==
          Catch::Approx(2.75).epsilon(1e-10));
  REQUIRE(effective_resistance(welded_tree(3, 3).net) ==
          Catch::Approx(8.0).epsilon(1e-10));
  REQUIRE(effective_resistance(welded_tree(4, 3).net) ==
          Catch::Approx(5.0).epsilon(1e-10));
}
