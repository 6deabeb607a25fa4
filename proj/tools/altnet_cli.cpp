#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "altnet/altnet.hpp"
#include "altnet/serialize.hpp"

namespace {

using altnet::Instance;
using altnet::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
}

Instance load_instance(const std::string& path) {
  return altnet::parse_instance(read_file(path));
}

std::vector<std::int64_t> parse_profile(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
  return out;
}

// deterministic worker pool: task i writes only slot i of its result vector
template <class F>
void parallel_for(int jobs, int count, F f) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || count <= 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < std::min(jobs, count); ++w)
    pool.emplace_back([&] {
      for (int i; (i = next.fetch_add(1)) < count;) f(i);
    });
  for (auto& th : pool) th.join();
}

struct GenOpts {
  std::string family;
  int n = 0, h = 0, depth = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string s_profile, e_profile;
};

Instance build_family(const GenOpts& o) {
  if (o.family == "welded") return altnet::welded_tree(o.h > 0 ? o.h : 2, o.seed);
  if (o.family == "hierarchical") {
    altnet::HierarchicalSpec spec;
    spec.s = parse_profile(o.s_profile);
    spec.e = parse_profile(o.e_profile);
    return altnet::hierarchical_1d(spec, o.seed);
  }
  if (o.family == "circuit")
    return altnet::welded_circuit(o.n > 0 ? o.n : 1, o.seed);
  if (o.family == "g2")
    return altnet::graph_G2(o.depth > 0 ? o.depth : (o.n > 0 ? o.n : 1),
                            o.seed);
  if (o.family == "g1") return altnet::graph_G1();
  if (o.family == "fig-normal") return altnet::fig_normal();
  if (o.family == "counterexample") return altnet::fig_counterexample();
  throw std::runtime_error("unknown family: " + o.family);
}

int cmd_gen(const GenOpts& o) {
  write_out(o.out, altnet::serialize(build_family(o)));
  return 0;
}

int cmd_flow(const std::string& in, const std::string& out) {
  Instance inst = load_instance(in);
  altnet::FlowSolution sol = altnet::electrical_flow(inst.net);
  altnet::VertexPotential vp = altnet::vertex_potential(inst.net, sol);
  json j;
  j["resistance"] = sol.resistance;
  json arcs = json::array();
  for (int a = 0; a < inst.net.num_edges(); ++a) {
    const altnet::Arc& arc = inst.net.arc(a);
    arcs.push_back(json::array(
        {inst.net.label(arc.u), inst.net.label(arc.v), sol.flow.theta[a]}));
  }
  j["arcs"] = arcs;
  json pot = json::object();
  for (int v = 0; v < inst.net.num_vertices(); ++v)
    pot[inst.net.label(v)] = vp.p[v];
  j["potential"] = pot;
  write_out(out, j.dump(1) + "\n");
  return 0;
}

int cmd_altflow(const std::string& in, const std::string& out) {
  Instance inst = load_instance(in);
  altnet::AltFlowResult res = altnet::alt_electrical_flow(inst.net, inst.alt);
  json j;
  if (std::holds_alternative<altnet::Infeasible>(res)) {
    j["feasible"] = false;
    j["residual"] = std::get<altnet::Infeasible>(res).residual;
    write_out(out, j.dump(1) + "\n");
    return 2;
  }
  const auto& sol = std::get<altnet::AltFlowSolution>(res);
  altnet::AltPotential pot = altnet::alt_edge_potential(inst.net, inst.alt, sol);
  j["feasible"] = true;
  j["resistance"] = sol.resistance;
  json arcs = json::array();
  json pe = json::array();
  for (int a = 0; a < inst.net.num_edges(); ++a) {
    const altnet::Arc& arc = inst.net.arc(a);
    arcs.push_back(json::array(
        {inst.net.label(arc.u), inst.net.label(arc.v), sol.flow.theta[a]}));
    pe.push_back(json::array({inst.net.label(arc.u), inst.net.label(arc.v),
                              pot.pe.tail[a], pot.pe.head[a]}));
  }
  j["arcs"] = arcs;
  j["edge_potential"] = pe;
  write_out(out, j.dump(1) + "\n");
  return 0;
}

int cmd_walk_spectrum(const std::string& in, const std::string& out) {
  Instance inst = load_instance(in);
  altnet::WalkOperator walk = altnet::make_walk(inst.net, inst.alt);
  altnet::ArcState psi = altnet::psi_s_plus(inst.net);
  std::ostringstream csv;
  csv << "phase,multiplicity,overlap\n";
  csv.precision(17);
  for (std::size_t k = 0; k < walk.spectrum.phases.size(); ++k) {
    long mult = long(walk.spectrum.multiplicity(k));
    double overlap = (walk.spectrum.block(k).adjoint() * psi).squaredNorm();
    csv << walk.spectrum.phases[k] << "," << mult << "," << overlap << "\n";
  }
  write_out(out, csv.str());
  return 0;
}

int cmd_pe(const std::string& in, long T, const std::string& out) {
  Instance inst = load_instance(in);
  altnet::WalkOperator walk = altnet::make_walk(inst.net, inst.alt);
  altnet::PhaseEstimate pe =
      altnet::pe_zero(walk.spectrum, altnet::psi_s_plus(inst.net), T);
  json j;
  j["T"] = T;
  j["p_zero"] = pe.p_zero;
  std::vector<std::pair<double, int>> slots;
  for (int k = 0; k < pe.post.size(); ++k) {
    double p = std::norm(pe.post[k]);
    if (p > 1e-12) slots.emplace_back(p, k);
  }
  std::sort(slots.rbegin(), slots.rend());
  json top = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(slots.size(), 10); ++i) {
    auto [u, v] = altnet::ket_vertices(inst.net, slots[i].second);
    top.push_back(json::array(
        {inst.net.label(u), inst.net.label(v), slots[i].first}));
  }
  j["post_top"] = top;
  write_out(out, j.dump(1) + "\n");
  return 0;
}

struct RunOpts {
  std::string in, out, mode = "analytic";
  int seeds = 1;
  std::uint64_t seed0 = 0;
  double delta = 0.1;
  double c1 = -1, c2 = -1;
  int jobs = 1;
  long long budget = -1;
};

altnet::RunMode parse_mode(const std::string& m) {
  if (m == "analytic") return altnet::RunMode::analytic;
  if (m == "faithful") return altnet::RunMode::faithful;
  throw std::runtime_error("unknown mode: " + m);
}

json params_json(const Instance& inst) {
  json p = json::object();
  for (const auto& [k, v] : inst.params) p[k] = v;
  return p;
}

int cmd_run_alg1(const RunOpts& o) {
  Instance inst = load_instance(o.in);
  altnet::WalkOperator walk = altnet::make_walk(inst.net, inst.alt);
  altnet::Alg1Params params;
  params.delta = o.delta;
  params.mode = parse_mode(o.mode);
  if (o.c1 > 0) params.c1 = o.c1;
  if (o.c2 > 0) params.c2 = o.c2;
  altnet::Alg1Analysis an = altnet::alg1_analyse(inst, walk, params);

  std::vector<altnet::Alg1Result> results(std::size_t(o.seeds));
  parallel_for(o.jobs, o.seeds, [&](int i) {
    altnet::OracleGraph oracle(inst, o.seed0 + std::uint64_t(i));
    results[std::size_t(i)] = altnet::alg1_find_target(
        oracle, walk, an, params, o.seed0 + std::uint64_t(i));
  });

  int wins = 0;
  json rows = json::array();
  std::ostringstream csv;
  csv << "seed,success,trials,queries_actual,queries_model\n";
  for (int i = 0; i < o.seeds; ++i) {
    const auto& r = results[std::size_t(i)];
    wins += r.success ? 1 : 0;
    rows.push_back({{"seed", o.seed0 + std::uint64_t(i)},
                    {"success", r.success},
                    {"trials", r.trials_used},
                    {"queries_actual", r.queries_actual},
                    {"queries_model", r.queries_model}});
    csv << (o.seed0 + std::uint64_t(i)) << "," << (r.success ? 1 : 0) << ","
        << r.trials_used << "," << r.queries_actual << "," << r.queries_model
        << "\n";
  }
  if (!o.out.empty()) write_out(o.out, csv.str());

  json j;
  j["algorithm"] = "alg1";
  j["family"] = inst.family;
  j["params"] = params_json(inst);
  j["mode"] = o.mode;
  j["delta"] = o.delta;
  j["t1"] = an.t1;
  j["t2"] = an.t2;
  j["t_pe"] = an.ctx.t_pe;
  j["seeds"] = o.seeds;
  j["seed0"] = o.seed0;
  j["success_rate"] = o.seeds ? double(wins) / o.seeds : 0.0;
  j["predicted"] = an.predicted;
  j["results"] = rows;
  std::cout << j.dump(1) << "\n";
  return wins == 0 ? 3 : 0;
}

int cmd_run_alg2(const RunOpts& o) {
  Instance inst = load_instance(o.in);
  altnet::WalkOperator walk = altnet::make_walk(inst.net, inst.alt);
  altnet::Alg2Params params;
  params.delta = o.delta;
  params.mode = parse_mode(o.mode);
  if (o.c1 > 0) params.c1 = o.c1;
  if (o.c2 > 0) params.c2 = o.c2;
  altnet::Alg2Prep prep = altnet::alg2_prepare(inst, walk, params);

  std::vector<altnet::Alg2Result> results(std::size_t(o.seeds));
  parallel_for(o.jobs, o.seeds, [&](int i) {
    altnet::OracleGraph oracle(inst, o.seed0 + std::uint64_t(i));
    results[std::size_t(i)] = altnet::alg2_find_path(
        oracle, walk, prep, params, o.seed0 + std::uint64_t(i));
  });

  int wins = 0;
  json rows = json::array();
  std::ostringstream csv;
  csv << "seed,success,sample_size,queries_actual,queries_model\n";
  for (int i = 0; i < o.seeds; ++i) {
    const auto& r = results[std::size_t(i)];
    wins += r.success ? 1 : 0;
    json row = {{"seed", o.seed0 + std::uint64_t(i)},
                {"success", r.success},
                {"sample_size", r.sample.size()},
                {"queries_actual", r.queries_actual},
                {"queries_model", r.queries_model}};
    if (r.success) row["path"] = r.path;
    rows.push_back(row);
    csv << (o.seed0 + std::uint64_t(i)) << "," << (r.success ? 1 : 0) << ","
        << r.sample.size() << "," << r.queries_actual << ","
        << r.queries_model << "\n";
  }
  if (!o.out.empty()) write_out(o.out, csv.str());

  json j;
  j["algorithm"] = "alg2";
  j["family"] = inst.family;
  j["params"] = params_json(inst);
  j["mode"] = o.mode;
  j["delta"] = o.delta;
  j["t1"] = prep.t1;
  j["t2"] = prep.t2;
  j["t_pe"] = prep.ctx.t_pe;
  j["seeds"] = o.seeds;
  j["seed0"] = o.seed0;
  j["success_rate"] = o.seeds ? double(wins) / o.seeds : 0.0;
  j["results"] = rows;
  std::cout << j.dump(1) << "\n";
  return wins == 0 ? 3 : 0;
}

int cmd_run_baseline(const RunOpts& o) {
  Instance inst = load_instance(o.in);
  long long budget = o.budget;
  if (budget < 0) {
    auto it = inst.params.find("n");
    double n = it != inst.params.end() ? double(it->second) : 1.0;
    budget = (long long)std::ceil(std::pow(2.0, n / 6.0));
  }

  std::vector<altnet::BaselineResult> results(std::size_t(o.seeds));
  parallel_for(o.jobs, o.seeds, [&](int i) {
    altnet::OracleGraph oracle(inst, o.seed0 + std::uint64_t(i));
    results[std::size_t(i)] = altnet::classical_embedding_baseline(
        oracle, budget, o.seed0 + std::uint64_t(i));
  });

  int middle = 0, cyc1 = 0, cyc2 = 0, wins = 0;
  json rows = json::array();
  std::ostringstream csv;
  csv << "seed,found_middle,cycle_single_root,cycle_two_roots,exhausted,queries\n";
  for (int i = 0; i < o.seeds; ++i) {
    const auto& r = results[std::size_t(i)];
    middle += r.found_middle;
    cyc1 += r.cycle_single_root;
    cyc2 += r.cycle_two_roots;
    wins += (r.found_middle || r.cycle_single_root || r.cycle_two_roots);
    rows.push_back({{"seed", o.seed0 + std::uint64_t(i)},
                    {"found_middle", r.found_middle},
                    {"cycle_single_root", r.cycle_single_root},
                    {"cycle_two_roots", r.cycle_two_roots},
                    {"exhausted", r.exhausted},
                    {"queries", r.queries}});
    csv << (o.seed0 + std::uint64_t(i)) << "," << r.found_middle << ","
        << r.cycle_single_root << "," << r.cycle_two_roots << ","
        << r.exhausted << "," << r.queries << "\n";
  }
  if (!o.out.empty()) write_out(o.out, csv.str());

  json j;
  j["algorithm"] = "baseline";
  j["family"] = inst.family;
  j["params"] = params_json(inst);
  j["budget"] = budget;
  j["seeds"] = o.seeds;
  j["seed0"] = o.seed0;
  j["win_rate"] = o.seeds ? double(wins) / o.seeds : 0.0;
  j["middle_rate"] = o.seeds ? double(middle) / o.seeds : 0.0;
  j["cycle_single_root_rate"] = o.seeds ? double(cyc1) / o.seeds : 0.0;
  j["cycle_two_roots_rate"] = o.seeds ? double(cyc2) / o.seeds : 0.0;
  j["results"] = rows;
  std::cout << j.dump(1) << "\n";
  return 0;
}

struct Check {
  std::string name;
  bool ok;
  std::string detail;
};

void run_instance_checks(const std::string& tag, const Instance& inst,
                         bool expect_feasible, double expect_r,
                         double expect_r_alt, std::vector<Check>& checks) {
  auto add = [&](const std::string& name, bool ok, double value) {
    std::ostringstream d;
    d.precision(12);
    d << value;
    checks.push_back({tag + ": " + name, ok, d.str()});
  };
  const altnet::Network& g = inst.net;
  add("connected", g.connected(), double(g.num_vertices()));

  altnet::FlowSolution sol = altnet::electrical_flow(g);
  altnet::VertexPotential vp = altnet::vertex_potential(g, sol);
  double worst_div = 0;
  for (int u = 0; u < g.num_vertices(); ++u) {
    double target = u == g.s() ? 1.0 : (u == g.t() ? -1.0 : 0.0);
    worst_div = std::max(worst_div,
                         std::abs(altnet::divergence(g, sol.flow, u) - target));
  }
  add("unit-flow conservation", worst_div <= 1e-8, worst_div);
  double worst_ohm = 0;
  for (int a = 0; a < g.num_edges(); ++a) {
    const altnet::Arc& arc = g.arc(a);
    worst_ohm = std::max(worst_ohm, std::abs(vp.p[arc.u] - vp.p[arc.v] -
                                             sol.flow.theta[a] / arc.w));
  }
  add("ohm", worst_ohm <= 1e-8, worst_ohm);
  add("p_s - p_t = R",
      std::abs(vp.p[g.s()] - vp.p[g.t()] - sol.resistance) <= 1e-8,
      sol.resistance);
  if (expect_r > 0)
    add("R pinned", std::abs(sol.resistance - expect_r) <= 1e-8,
        sol.resistance);

  altnet::AltFlowResult ares = altnet::alt_electrical_flow(g, inst.alt);
  bool feasible = std::holds_alternative<altnet::AltFlowSolution>(ares);
  add("alt feasibility as expected", feasible == expect_feasible,
      feasible ? 1.0 : 0.0);
  if (feasible) {
    const auto& asol = std::get<altnet::AltFlowSolution>(ares);
    double kcl = altnet::check_alt_kirchhoff(g, inst.alt, asol.flow);
    add("alt neighbourhood constraints", kcl <= 1e-8, kcl);
    add("R_alt >= R", asol.resistance >= sol.resistance - 1e-8,
        asol.resistance);
    if (expect_r_alt > 0)
      add("R_alt pinned", std::abs(asol.resistance - expect_r_alt) <= 1e-8,
          asol.resistance);
    altnet::AltPotential pot = altnet::alt_edge_potential(g, inst.alt, asol);
    double worst_alt_ohm = 0;
    for (int a = 0; a < g.num_edges(); ++a)
      worst_alt_ohm = std::max(
          worst_alt_ohm, std::abs(pot.pe.tail[a] - pot.pe.head[a] -
                                  asol.flow.theta[a] / g.arc(a).w));
    add("alternative ohm", worst_alt_ohm <= 1e-8, worst_alt_ohm);
    // make_walk verifies the projector identities and the eigendecomposition
    altnet::WalkOperator walk = altnet::make_walk(g, inst.alt);
    add("walk spectrum verified", true, double(walk.spectrum.phases.size()));
  }
}

int cmd_verify(const std::string& in) {
  std::vector<Check> checks;
  if (!in.empty()) {
    Instance inst = load_instance(in);
    bool feasible = std::holds_alternative<altnet::AltFlowSolution>(
        altnet::alt_electrical_flow(inst.net, inst.alt));
    run_instance_checks(inst.family, inst, feasible, 0, 0, checks);
    if (!feasible) {
      for (const Check& c : checks)
        std::cout << (c.ok ? "OK   " : "FAIL ") << c.name << " (" << c.detail
                  << ")\n";
      std::cout << "instance infeasible\n";
      return 2;
    }
  } else {
    run_instance_checks("fig-normal", altnet::fig_normal(), true, 11.0 / 3.0,
                        4.0, checks);
    run_instance_checks("counterexample", altnet::fig_counterexample(), false,
                        0, 0, checks);
    run_instance_checks("g1", altnet::graph_G1(), true, 0, 47.0 / 9.0, checks);
    run_instance_checks("welded h=1", altnet::welded_tree(1, 11), true, 3.5,
                        3.5, checks);
    run_instance_checks("welded h=2", altnet::welded_tree(2, 12), true, 2.75,
                        2.75, checks);
    run_instance_checks("circuit n=1", altnet::welded_circuit(1, 13), true, 0,
                        99.0 / 13.0, checks);
  }
  int fails = 0;
  for (const Check& c : checks) {
    std::cout << (c.ok ? "OK   " : "FAIL ") << c.name << " (" << c.detail
              << ")\n";
    fails += c.ok ? 0 : 1;
  }
  std::cout << (fails == 0 ? "all checks passed" : "checks failed") << "\n";
  return fails == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"electrical networks with alternative neighbourhoods"};
  app.require_subcommand(1);

  GenOpts gen;
  CLI::App* cgen = app.add_subcommand("gen", "generate an instance");
  cgen->set_help_flag("--help", "print help");  // frees -h for --h below
  cgen->add_option("--family", gen.family,
                   "welded|hierarchical|circuit|g2|g1|fig-normal|counterexample")
      ->required();
  cgen->add_option("--n", gen.n, "layer count (circuit/g2)");
  cgen->add_option("--h", gen.h, "tree height (welded)");
  cgen->add_option("--depth", gen.depth, "gadget tree depth (g2)");
  cgen->add_option("--seed", gen.seed, "generator seed");
  cgen->add_option("--out", gen.out, "output path (default stdout)");
  cgen->add_option("--s-profile", gen.s_profile, "vertex counts, comma list");
  cgen->add_option("--e-profile", gen.e_profile, "edge counts, comma list");

  std::string flow_in, flow_out;
  CLI::App* cflow = app.add_subcommand("flow", "unit electrical flow");
  cflow->add_option("--in", flow_in)->required();
  cflow->add_option("--out", flow_out);

  std::string alt_in, alt_out;
  CLI::App* calt = app.add_subcommand("altflow", "alternative-network flow");
  calt->add_option("--in", alt_in)->required();
  calt->add_option("--out", alt_out);

  std::string ws_in, ws_out;
  CLI::App* cws = app.add_subcommand("walk-spectrum", "walk eigenphases");
  cws->add_option("--in", ws_in)->required();
  cws->add_option("--out", ws_out);

  std::string pe_in, pe_out;
  long pe_T = 100;
  CLI::App* cpe = app.add_subcommand("pe", "phase estimation statistics");
  cpe->add_option("--in", pe_in)->required();
  cpe->add_option("--T", pe_T, "phase estimation steps");
  cpe->add_option("--out", pe_out);

  RunOpts a1, a2, bl;
  CLI::App* c1 = app.add_subcommand("run-alg1", "target finding");
  c1->add_option("--in", a1.in)->required();
  c1->add_option("--seeds", a1.seeds);
  c1->add_option("--seed0", a1.seed0);
  c1->add_option("--delta", a1.delta);
  c1->add_option("--c1", a1.c1, "T1 constant override");
  c1->add_option("--c2", a1.c2, "T2 constant override");
  c1->add_option("--mode", a1.mode, "analytic|faithful");
  c1->add_option("--jobs", a1.jobs);
  c1->add_option("--out", a1.out, "per-seed csv path");

  CLI::App* c2 = app.add_subcommand("run-alg2", "path finding");
  c2->add_option("--in", a2.in)->required();
  c2->add_option("--seeds", a2.seeds);
  c2->add_option("--seed0", a2.seed0);
  c2->add_option("--delta", a2.delta);
  c2->add_option("--c1", a2.c1, "T1 constant override");
  c2->add_option("--c2", a2.c2, "T2 constant override");
  c2->add_option("--mode", a2.mode, "analytic|faithful");
  c2->add_option("--jobs", a2.jobs);
  c2->add_option("--out", a2.out, "per-seed csv path");

  CLI::App* cbl = app.add_subcommand("run-baseline", "classical embedding game");
  cbl->add_option("--in", bl.in)->required();
  cbl->add_option("--budget", bl.budget, "query budget (default 2^(n/6))");
  cbl->add_option("--seeds", bl.seeds);
  cbl->add_option("--seed0", bl.seed0);
  cbl->add_option("--jobs", bl.jobs);
  cbl->add_option("--out", bl.out, "per-seed csv path");

  std::string verify_in;
  CLI::App* cver = app.add_subcommand("verify", "invariant battery");
  cver->add_option("--in", verify_in, "instance to verify (default: built-ins)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*cgen) return cmd_gen(gen);
    if (*cflow) return cmd_flow(flow_in, flow_out);
    if (*calt) return cmd_altflow(alt_in, alt_out);
    if (*cws) return cmd_walk_spectrum(ws_in, ws_out);
    if (*cpe) return cmd_pe(pe_in, pe_T, pe_out);
    if (*c1) return cmd_run_alg1(a1);
    if (*c2) return cmd_run_alg2(a2);
    if (*cbl) return cmd_run_baseline(bl);
    if (*cver) return cmd_verify(verify_in);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
