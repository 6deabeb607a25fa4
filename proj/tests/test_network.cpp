#include <catch2/catch_amalgamated.hpp>

#include "altnet/altnet.hpp"

using namespace altnet;

namespace {

Network path_fixture() { return fig_normal().net; }

}  // namespace

TEST_CASE("arc storage and neighbour flags", "[network]") {
  Network g;
  int a = g.add_vertex("a");
  int b = g.add_vertex("b");
  int c = g.add_vertex("c");
  g.add_edge(a, b, 2.0);
  g.add_edge(b, c, 0.25);
  g.set_terminals(a, c);

  REQUIRE(g.num_vertices() == 3);
  REQUIRE(g.num_edges() == 2);
  REQUIRE(g.degree(b) == 2);
  REQUIRE(g.weighted_degree(b) == Catch::Approx(2.25));

  // stored direction: delta 0 at the tail, 1 at the head
  for (const Neighbour& nb : g.neighbourhood(a)) {
    REQUIRE(nb.v == b);
    REQUIRE(nb.delta == 0);
    REQUIRE(nb.w == 2.0);
  }
  for (const Neighbour& nb : g.neighbourhood(c)) REQUIRE(nb.delta == 1);

  REQUIRE(g.find_arc(a, b).has_value());
  REQUIRE_FALSE(g.find_arc(b, a).has_value());
  REQUIRE_FALSE(g.find_arc(a, c).has_value());
  REQUIRE(g.is_terminal(a));
  REQUIRE_FALSE(g.is_terminal(b));
  REQUIRE(g.connected());
}

TEST_CASE("invalid constructions are rejected", "[network]") {
  Network g;
  int a = g.add_vertex("a");
  int b = g.add_vertex("b");
  g.add_edge(a, b, 1.0);
  REQUIRE_THROWS(g.add_edge(a, a, 1.0));
  REQUIRE_THROWS(g.add_edge(a, b, 1.0));
  REQUIRE_THROWS(g.add_edge(b, a, 1.0));
  REQUIRE_THROWS(g.add_edge(a, b + 7, 1.0));
  REQUIRE_THROWS(g.add_edge(a, b, 0.0));
  REQUIRE_THROWS(g.add_edge(a, b, -1.0));
  REQUIRE_THROWS(g.set_terminals(a, a));
  Network h;
  h.add_vertex("x");
  REQUIRE_THROWS(h.s());
}

TEST_CASE("matrix column order: s first, interior ascending, t last",
          "[network]") {
  Network g;
  for (int i = 0; i < 5; ++i) g.add_vertex("v" + std::to_string(i));
  g.add_edge(0, 1, 1);
  g.add_edge(1, 2, 1);
  g.add_edge(2, 3, 1);
  g.add_edge(3, 4, 1);
  g.set_terminals(3, 1);
  std::vector<int> cols = g.matrix_columns();
  REQUIRE(cols == std::vector<int>{3, 0, 2, 4, 1});
}

TEST_CASE("incidence matrix of the quarter-weight path", "[network]") {
  Network g = path_fixture();  // s,x,y,t ids 0..3
  IncidenceMatrix im = incidence_matrix(g);
  REQUIRE(im.B.rows() == 4);
  REQUIRE(im.B.cols() == 4);

  Mat expect(4, 4);
  expect << 1.0, -1.0, 0.0, 0.0,    // (s,x) w=1
      0.0, 0.5, -0.5, 0.0,          // (x,y) w=1/4
      0.0, 0.5, 0.0, -0.5,          // (x,t) w=1/4
      0.0, 0.0, 0.5, -0.5;          // (y,t) w=1/4
  REQUIRE((im.B - expect).cwiseAbs().maxCoeff() < 1e-14);

  Vec rhs = im.terminal_rhs();
  REQUIRE(rhs[0] == 1.0);
  REQUIRE(rhs[3] == -1.0);
  REQUIRE(rhs[1] == 0.0);
  REQUIRE(rhs[2] == 0.0);
}

TEST_CASE("pseudoinverse of the path incidence transpose", "[network]") {
  Network g = path_fixture();
  Mat Bt = incidence_matrix(g).B.transpose();
  Mat P = pseudoinverse(Bt);

  Mat expect(4, 4);
  expect << 3.0 / 4, -1.0 / 4, -1.0 / 4, -1.0 / 4,  //
      1.0 / 2, 1.0 / 2, -5.0 / 6, -1.0 / 6,         //
      1.0 / 2, 1.0 / 2, -1.0 / 6, -5.0 / 6,         //
      0.0, 0.0, 2.0 / 3, -2.0 / 3;
  REQUIRE((P - expect).cwiseAbs().maxCoeff() < 1e-9);

  // Moore-Penrose identities
  REQUIRE((Bt * P * Bt - Bt).cwiseAbs().maxCoeff() < 1e-9);
  REQUIRE((P * Bt * P - P).cwiseAbs().maxCoeff() < 1e-9);
  REQUIRE((Bt * P - (Bt * P).transpose()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("star states", "[network]") {
  Network g = path_fixture();
  double n = std::sqrt(1.5);
  ArcState sx = star_state(g, 1);  // x
  REQUIRE(std::abs(sx[ket_index(g, 1, 0)] - cplx(-1.0 / n)) < 1e-12);
  REQUIRE(std::abs(sx[ket_index(g, 1, 2)] - cplx(0.5 / n)) < 1e-12);
  REQUIRE(std::abs(sx[ket_index(g, 1, 3)] - cplx(0.5 / n)) < 1e-12);
  REQUIRE(std::abs(sx.norm() - 1.0) < 1e-12);

  // only kets leaving x are populated
  for (int k = 0; k < arc_dim(g); ++k) {
    auto [u, v] = ket_vertices(g, k);
    if (u != 1) REQUIRE(sx[k] == cplx(0.0));
  }
}

TEST_CASE("bipartite parity of layered graphs", "[network]") {
  Instance inst = welded_tree(2, 5);
  std::vector<int> parity = inst.net.bipartite_parity();
  REQUIRE(parity[std::size_t(inst.net.s())] == 0);
  for (const Arc& a : inst.net.arcs())
    REQUIRE(parity[std::size_t(a.u)] != parity[std::size_t(a.v)]);
}

TEST_CASE("flow helpers", "[network]") {
  Network g = path_fixture();
  Flow f;
  f.theta = Vec::Zero(4);
  f.theta << 1.0, 0.4, 0.6, 0.4;
  REQUIRE(divergence(g, f, 0) == Catch::Approx(1.0));
  REQUIRE(divergence(g, f, 1) == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(divergence(g, f, 3) == Catch::Approx(-1.0));
  REQUIRE(flow_along(g, f, 1, 0) == Catch::Approx(-1.0));
  REQUIRE(flow_along(g, f, 1, 2) == Catch::Approx(0.4));
  REQUIRE(f.energy(g) == Catch::Approx(1.0 + 4 * (0.16 + 0.36 + 0.16)));
}
