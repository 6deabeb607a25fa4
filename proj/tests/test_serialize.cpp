#include <catch2/catch_amalgamated.hpp>

#include "altnet/altnet.hpp"
#include "altnet/serialize.hpp"

using namespace altnet;

TEST_CASE("round trip is byte-stable", "[serialize]") {
  for (const Instance& inst :
       {welded_circuit(1, 3), welded_tree(2, 9), graph_G1(), fig_normal()}) {
    std::string text = serialize(inst);
    Instance back = parse_instance(text);
    REQUIRE(serialize(back) == text);

    REQUIRE(back.net.num_vertices() == inst.net.num_vertices());
    REQUIRE(back.net.num_edges() == inst.net.num_edges());
    REQUIRE(back.family == inst.family);
    REQUIRE(back.params == inst.params);
    REQUIRE(back.seed == inst.seed);
    REQUIRE(back.blue == inst.blue);
    REQUIRE(back.canonical_path == inst.canonical_path);
    REQUIRE(back.middle_junction == inst.middle_junction);
    for (int u = 0; u < inst.net.num_vertices(); ++u) {
      REQUIRE(back.net.label(u) == inst.net.label(u));
      REQUIRE(back.alt.count(u) == inst.alt.count(u));
      for (int i = 0; i < inst.alt.count(u); ++i)
        REQUIRE((back.alt.state(u, i) - inst.alt.state(u, i)).norm() == 0.0);
    }
  }
}

TEST_CASE("parsed instances solve identically", "[serialize]") {
  Instance inst = welded_circuit(1, 12);
  double want = alt_effective_resistance(inst.net, inst.alt);
  Instance back = parse_instance(serialize(inst));
  REQUIRE(alt_effective_resistance(back.net, back.alt) ==
          Catch::Approx(want).margin(1e-12));
  REQUIRE(want == Catch::Approx(99.0 / 13).margin(1e-8));
}

TEST_CASE("seeds shape the payload", "[serialize]") {
  REQUIRE(serialize(welded_tree(2, 5)) == serialize(welded_tree(2, 5)));
  REQUIRE(serialize(welded_tree(2, 5)) != serialize(welded_tree(2, 6)));
}

TEST_CASE("the two single-layer families agree", "[serialize]") {
  json a = to_json(welded_circuit(1, 31));
  json b = to_json(graph_G2(1, 31));
  REQUIRE(a.at("family") == "circuit");
  REQUIRE(b.at("family") == "g2");
  a.erase("family");
  b.erase("family");
  REQUIRE(a == b);
}

TEST_CASE("schema guards", "[serialize]") {
  json j = to_json(fig_normal());
  j["schema_version"] = 2;
  REQUIRE_THROWS_AS(from_json(j), std::invalid_argument);
  j.erase("schema_version");
  REQUIRE_THROWS_AS(from_json(j), std::invalid_argument);

  json bad = to_json(fig_normal());
  bad["psi"][0]["states"][0][0][0] = 99;  // ket slot past the arc space
  REQUIRE_THROWS_AS(from_json(bad), std::invalid_argument);
}
