#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "altnet/alt_network.hpp"
#include "altnet/generators.hpp"
#include "altnet/network.hpp"

namespace altnet {

using json = nlohmann::ordered_json;

// Instances serialize to a stable schema: the network, the non-star
// neighbourhood states (already orthonormalized; the star state of every
// vertex is implicit and recomputed on load), and generator metadata.
// Coefficients round-trip exactly, so serialize(parse(x)) == x.
inline json to_json(const Instance& inst) {
  const Network& g = inst.net;
  json j;
  j["schema_version"] = 1;
  j["family"] = inst.family;
  json params = json::object();
  for (const auto& [k, v] : inst.params) params[k] = v;
  j["params"] = params;
  j["seed"] = inst.seed;

  json net;
  json vertices = json::array();
  for (int v = 0; v < g.num_vertices(); ++v) vertices.push_back(g.label(v));
  net["vertices"] = vertices;
  json edges = json::array();
  for (const Arc& a : g.arcs()) edges.push_back(json::array({a.u, a.v, a.w}));
  net["edges"] = edges;
  net["s"] = g.s();
  net["t"] = g.t();
  j["network"] = net;

  json psi = json::array();
  for (int u = 0; u < g.num_vertices(); ++u) {
    if (inst.alt.count(u) <= 1) continue;
    json entry;
    entry["v"] = u;
    json states = json::array();
    for (int i = 1; i < inst.alt.count(u); ++i) {
      const ArcState& st = inst.alt.state(u, i);
      json coeffs = json::array();
      for (int k = 0; k < st.size(); ++k) {
        if (st[k] == cplx(0.0, 0.0)) continue;
        coeffs.push_back(json::array({k, st[k].real(), st[k].imag()}));
      }
      states.push_back(coeffs);
    }
    entry["states"] = states;
    psi.push_back(entry);
  }
  j["psi"] = psi;

  j["blue"] = inst.blue;
  j["canonical_path"] = inst.canonical_path;
  j["middle_junction"] = inst.middle_junction;
  return j;
}

inline Instance from_json(const json& j) {
  if (!j.contains("schema_version") || j.at("schema_version").get<int>() != 1)
    throw std::invalid_argument("instance: unsupported schema version");
  Instance inst;
  inst.family = j.at("family").get<std::string>();
  for (const auto& [k, v] : j.at("params").items())
    inst.params[k] = v.get<std::int64_t>();
  inst.seed = j.at("seed").get<std::uint64_t>();

  const json& net = j.at("network");
  for (const auto& label : net.at("vertices"))
    inst.net.add_vertex(label.get<std::string>());
  for (const auto& e : net.at("edges"))
    inst.net.add_edge(e.at(0).get<int>(), e.at(1).get<int>(),
                      e.at(2).get<double>());
  inst.net.set_terminals(net.at("s").get<int>(), net.at("t").get<int>());

  inst.alt = star_only(inst.net);
  int dim = arc_dim(inst.net);
  for (const auto& entry : j.at("psi")) {
    int u = entry.at("v").get<int>();
    for (const auto& coeffs : entry.at("states")) {
      ArcState st = ArcState::Zero(dim);
      for (const auto& c : coeffs) {
        int k = c.at(0).get<int>();
        if (k < 0 || k >= dim)
          throw std::invalid_argument("instance: state index out of range");
        st[k] = cplx(c.at(1).get<double>(), c.at(2).get<double>());
      }
      inst.alt.states[std::size_t(u)].push_back(st);
    }
  }

  inst.blue = j.at("blue").get<std::vector<int>>();
  inst.canonical_path = j.at("canonical_path").get<std::vector<int>>();
  inst.middle_junction = j.at("middle_junction").get<int>();
  return inst;
}

inline std::string serialize(const Instance& inst) {
  return to_json(inst).dump(1) + "\n";
}

inline Instance parse_instance(const std::string& text) {
  return from_json(json::parse(text));
}

}  // namespace altnet
