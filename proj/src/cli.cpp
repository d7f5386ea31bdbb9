#include "pwsync/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pwsync/error.hpp"
#include "pwsync/experiment.hpp"
#include "pwsync/graph.hpp"
#include "pwsync/matrix_measures.hpp"
#include "pwsync/min_density.hpp"
#include "pwsync/simulator.hpp"
#include "pwsync/thresholds.hpp"

namespace pwsync {

using nlohmann::ordered_json;

namespace {

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(v[i]);
  }
  return s;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void row(std::ostream& out, const std::string& label, const std::string& value) {
  out << "  " << std::left << std::setw(26) << label << value << '\n';
}

std::string num(double x) { return format_double(x); }

ordered_json graph_json(const Graph& g) {
  return ordered_json{{"n_vertices", g.n_vertices()}, {"n_edges", g.n_edges()}, {"fnv1a64", hex64(graph_hash(g))}};
}

ordered_json report_json(const ThresholdReport& r) {
  ordered_json j{
      {"c_star", r.c_star},
      {"cd_star", r.cd_star},
      {"lambda2", r.lambda2},
      {"lambda2_overridden", r.lambda2_overridden},
      {"delta_d", r.delta_d},
      {"delta_method", r.delta_overridden ? "override" : to_string(r.delta_method)},
      {"delta_certified", r.delta_certified},
      {"mu2_Q", r.mu2_q},
      {"mu2_lower_PGamma", r.mu2_lower_pgamma},
      {"mu_inf_M", r.mu_inf_m},
      {"mu_inf_lower_PGammad", r.mu_inf_lower_pgammad},
      {"hypotheses",
       {{"sigma_quad", to_string(r.hypotheses.sigma_quad)},
        {"diffusive_connected", r.hypotheses.diffusive_connected},
        {"discontinuous_connected", r.hypotheses.discontinuous_connected},
        {"mu2_lower_PGamma_positive", r.hypotheses.mu2_lower_pgamma_positive},
        {"mu_inf_lower_PGammad_positive", r.hypotheses.mu_inf_lower_pgammad_positive}}},
  };
  if (r.sparsest_cut) {
    j["sparsest_cut"] = {{"part1", r.sparsest_cut->part1()},
                         {"part2", r.sparsest_cut->part2()},
                         {"b", r.sparsest_cut->crossing}};
  }
  return j;
}

void print_report(std::ostream& out, const ThresholdReport& r) {
  out << "critical coupling gains\n";
  row(out, "c*", num(r.c_star));
  row(out, "c_d*", num(r.cd_star) + (r.delta_certified || r.delta_overridden ? "" : "  (heuristic delta, not certified)"));
  out << "intermediates\n";
  row(out, "lambda2(L)", num(r.lambda2) + (r.lambda2_overridden ? "  (override)" : ""));
  row(out, "delta(G_d)",
      num(r.delta_d) + "  (" + (r.delta_overridden ? std::string("override") : to_string(r.delta_method)) + ")");
  if (r.sparsest_cut) {
    row(out, "sparsest cut N1/N2/b",
        std::to_string(r.sparsest_cut->n1) + "/" + std::to_string(r.sparsest_cut->n2) + "/" +
            std::to_string(r.sparsest_cut->crossing));
  }
  row(out, "mu2(Q)", num(r.mu2_q));
  row(out, "mu2^-(P Gamma)", num(r.mu2_lower_pgamma));
  row(out, "mu_inf(M)", num(r.mu_inf_m));
  row(out, "mu_inf^-(P Gamma_d)", num(r.mu_inf_lower_pgammad));
  out << "hypotheses\n";
  const auto& h = r.hypotheses;
  row(out, "(a)(i) sigma-QUAD", std::string(to_string(h.sigma_quad)) +
                                    (h.sigma_quad == QuadStatus::verified ? "  (sampled falsification test, not a proof)" : ""));
  row(out, "(a)(ii) mu2^-(P Gamma)>0", h.mu2_lower_pgamma_positive ? "yes" : "no");
  row(out, "(a)(ii) mu_inf^-(P Gd)>0", h.mu_inf_lower_pgammad_positive ? "yes" : "no");
  row(out, "(b) G connected", h.diffusive_connected ? "yes" : "no");
  row(out, "(b) G_d connected", h.discontinuous_connected ? "yes" : "no");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  f << text;
}

struct RunArtifacts {
  SimulationRun run;
  ordered_json metadata;
};

RunArtifacts run_and_write(const SimConfig& sim, const std::filesystem::path& csv_path, int decimation,
                           std::uint64_t seed) {
  RunArtifacts a;
  a.run = simulate(sim);
  std::ostringstream csv;
  write_csv(csv, a.run, decimation);
  write_text(csv_path, csv.str());
  a.metadata = ordered_json{
      {"csv", csv_path.filename().string()},
      {"c", sim.c},
      {"c_d", sim.c_d},
      {"dt", sim.dt},
      {"t_end", sim.t_end},
      {"seed", seed},
      {"init_amplitude", std::get<RandomInit>(sim.initial).amplitude},
      {"integrator", "explicit_euler"},
      {"sign_convention", "sign(0) = 0"},
      {"sign_mode", std::holds_alternative<ExactSign>(sim.sign_mode) ? "exact" : "smoothed"},
      {"chattering_band", a.run.chattering_band},
      {"steps", a.run.times.empty() ? 0 : a.run.times.size() - 1},
      {"diverged", a.run.diverged},
      {"e_tot_initial", a.run.e_tot.front()},
      {"e_tot_final", a.run.e_tot.back()},
      {"graphs", {{"diffusive", graph_json(sim.diffusive)}, {"discontinuous", graph_json(sim.discontinuous)}}},
  };
  if (const auto* s = std::get_if<SmoothedSign>(&sim.sign_mode)) a.metadata["sign_epsilon"] = s->epsilon;
  return a;
}

// ---- subcommands ---------------------------------------------------------

struct TopologyArgs {
  std::string kind = "ring";
  int n = 10;
  int l = 1;
  double p = 0.2;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_topology(const TopologyArgs& a, std::ostream& out) {
  Topology t;
  t.kind = topology_kind_from_string(a.kind);
  t.neighbours = a.l;
  t.probability = a.p;
  t.seed = a.seed;
  const Graph g = generate_topology(t, a.n);
  if (a.out.empty()) {
    write_graph(out, g);
    return 0;
  }
  write_graph_file(a.out, g);
  out << "wrote " << a.out << ": N = " << g.n_vertices() << ", N_E = " << g.n_edges()
      << ", lambda2 = " << num(algebraic_connectivity(g)) << '\n';
  return 0;
}

struct DensityArgs {
  std::string graph;
  bool exact = false;
  bool heuristic = false;
  std::uint64_t seed = 0;
  int cap = kExactSizeCap;
};

int cmd_mindensity(const DensityArgs& a, std::ostream& out) {
  const Graph g = read_graph_file(a.graph);
  MinDensityResult r;
  if (a.exact) {
    r = min_density_exact(g, std::max(a.cap, g.n_vertices()));
  } else if (a.heuristic) {
    r = min_density_heuristic(g, a.seed);
  } else {
    r = min_density(g, a.seed, a.cap);
  }
  out << "delta = " << num(r.delta) << '\n';
  out << "method = " << to_string(r.method) << '\n';
  out << "V1 = " << join(r.sparsest_cut.part1()) << '\n';
  out << "V2 = " << join(r.sparsest_cut.part2()) << '\n';
  out << "b = " << r.sparsest_cut.crossing << '\n';
  out << "N1 = " << r.sparsest_cut.n1 << '\n';
  out << "N2 = " << r.sparsest_cut.n2 << '\n';
  return 0;
}

struct ConfigArgs {
  std::string config;
  std::string json_out;
  std::string out_dir;
  std::optional<double> c;
  std::optional<double> c_d;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<double> lambda2;
  std::optional<double> delta;
};

ExperimentConfig load_with_overrides(const ConfigArgs& a) {
  ExperimentConfig cfg = load_experiment(a.config);
  if (a.c) cfg.c = *a.c;
  if (a.c_d) cfg.c_d = *a.c_d;
  if (a.seed) cfg.seed = *a.seed;
  if (a.dt) cfg.dt = *a.dt;
  if (a.t_end) cfg.t_end = *a.t_end;
  if (a.lambda2) cfg.lambda2_override = *a.lambda2;
  if (a.delta) cfg.delta_override = *a.delta;
  if (!a.out_dir.empty()) cfg.output_dir = a.out_dir;
  return cfg;
}

int cmd_thresholds(const ConfigArgs& a, std::ostream& out) {
  const auto cfg = load_with_overrides(a);
  const Graph gd = build_layer(cfg.diffusive, cfg.n_nodes);
  const Graph gdd = build_layer(cfg.discontinuous, cfg.n_nodes);
  const auto report = compute_thresholds(experiment_certificate(cfg), cfg.diffusive.gamma, cfg.discontinuous.gamma,
                                         gd, gdd, experiment_threshold_options(cfg));
  print_report(out, report);
  if (!a.json_out.empty()) write_text(a.json_out, report_json(report).dump(2) + "\n");
  return 0;
}

int cmd_simulate(const ConfigArgs& a, std::ostream& out) {
  const auto cfg = load_with_overrides(a);
  const Graph gd = build_layer(cfg.diffusive, cfg.n_nodes);
  const Graph gdd = build_layer(cfg.discontinuous, cfg.n_nodes);
  const auto gains = resolve_gains(cfg, gd, gdd);
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  auto artifacts = run_and_write(make_sim_config(cfg, gd, gdd, gains.c, gains.c_d), dir / "run.csv", cfg.decimation, cfg.seed);
  if (gains.report) artifacts.metadata["thresholds"] = report_json(*gains.report);
  write_text(dir / "run.json", artifacts.metadata.dump(2) + "\n");
  out << "c = " << num(gains.c) << ", c_d = " << num(gains.c_d) << '\n';
  out << "e_tot(0) = " << num(artifacts.run.e_tot.front()) << ", e_tot(" << num(artifacts.run.times.back())
      << ") = " << num(artifacts.run.e_tot.back()) << '\n';
  if (artifacts.run.diverged) out << "warning: state diverged; run truncated\n";
  out << "wrote " << (dir / "run.csv").string() << " and " << (dir / "run.json").string() << '\n';
  return artifacts.run.diverged ? 2 : 0;
}

int cmd_resilience(const ConfigArgs& a, std::ostream& out) {
  const auto cfg = load_with_overrides(a);
  const Graph gdd = build_layer(cfg.discontinuous, cfg.n_nodes);
  auto options = experiment_threshold_options(cfg);
  const auto rows = resilience_report(gdd, cfg.scenarios, experiment_certificate(cfg), cfg.discontinuous.gamma, options);
  const auto base = min_density(gdd, cfg.density_seed, cfg.exact_cap);
  out << "base graph: N_E = " << gdd.n_edges() << ", delta = " << num(base.delta) << " (" << to_string(base.method)
      << ")\n";
  out << std::left << std::setw(20) << "scenario" << std::setw(10) << "removed" << std::setw(34) << "delta"
      << "c_d*\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(20) << r.name << std::setw(10) << r.edges_removed;
    if (r.ok) {
      out << std::setw(34) << (num(r.delta) + " (" + to_string(r.method) + ")") << num(r.cd_star) << '\n';
    } else {
      out << "error: " << r.error << '\n';
    }
  }
  return 0;
}

struct DemoArgs {
  std::uint64_t seed = 7;
  std::string out_dir = "paper_demo";
  int n = 30;
  double p = 0.2;
  double dt = 1e-3;
  double t_end = 5.0;
  int decimation = 10;
};

int cmd_paper_demo(const DemoArgs& a, std::ostream& out) {
  const std::filesystem::path dir(a.out_dir);
  std::filesystem::create_directories(dir);

  const PwsVectorField relay = relay_system();
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(3, 3);
  const auto cert = certificate_from_decomposition(relay, identity);
  const Graph ring = generate_topology(Topology::ring(), a.n);
  const Graph er = generate_topology(Topology::erdos_renyi(a.p, a.seed), a.n);
  write_graph_file((dir / "diffusive_layer.txt").string(), ring);
  write_graph_file((dir / "discontinuous_layer.txt").string(), er);

  ThresholdOptions opt;
  opt.heuristic_seed = a.seed;
  opt.field = &relay;
  const auto report = compute_thresholds(cert, identity, identity, ring, er, opt);
  ThresholdOptions unit_opt = opt;
  unit_opt.lambda2_override = 1.0;
  const auto unit_report = compute_thresholds(cert, identity, identity, ring, er, unit_opt);

  // below: the small gains of the reference experiment; above: c = 51 with
  // c_d at 1.05 x the threshold of this graph instance
  const double c_below = 0.1;
  const double cd_below = 0.001;
  const double c_above = 51.0;
  const double cd_above = kAutoGainFactor * report.cd_star;

  auto sim_for = [&](double c, double c_d) {
    return SimConfig{
        .field = relay,
        .diffusive = ring,
        .discontinuous = er,
        .c = c,
        .c_d = c_d,
        .gamma = identity,
        .gamma_d = identity,
        .dt = a.dt,
        .t_end = a.t_end,
        .initial = RandomInit{a.seed, 5.0},
        .sign_mode = ExactSign{},
        .decimation = 0,
        .record_node_errors = false,
    };
  };
  auto below = run_and_write(sim_for(c_below, cd_below), dir / "below_threshold.csv", a.decimation, a.seed);
  auto above = run_and_write(sim_for(c_above, cd_above), dir / "above_threshold.csv", a.decimation, a.seed);

  std::ostringstream summary;
  summary << "relay network, N = " << a.n << ", ring diffusive layer, Erdos-Renyi(p = " << num(a.p)
          << ", seed = " << a.seed << ") discontinuous layer with " << er.n_edges() << " edges\n\n";
  summary << "thresholds with the computed algebraic connectivity\n";
  print_report(summary, report);
  summary << "\nthresholds with lambda2(L) set to 1\n";
  row(summary, "c*", num(unit_report.c_star));
  row(summary, "c_d*", num(unit_report.cd_star));
  summary << "\nsimulations (explicit Euler, dt = " << num(a.dt) << ", t_end = " << num(a.t_end) << ")\n";
  row(summary, "below: c, c_d", num(c_below) + ", " + num(cd_below));
  row(summary, "below: e_tot(0) -> end", num(below.run.e_tot.front()) + " -> " + num(below.run.e_tot.back()));
  row(summary, "above: c, c_d", num(c_above) + ", " + num(cd_above));
  row(summary, "above: e_tot(0) -> end", num(above.run.e_tot.front()) + " -> " + num(above.run.e_tot.back()));
  row(summary, "above chattering band", num(above.run.chattering_band));
  write_text(dir / "summary.txt", summary.str());

  ordered_json meta{
      {"seed", a.seed},
      {"n_nodes", a.n},
      {"erdos_renyi_p", a.p},
      {"thresholds", report_json(report)},
      {"thresholds_lambda2_unit", report_json(unit_report)},
      {"runs", {{"below", below.metadata}, {"above", above.metadata}}},
  };
  write_text(dir / "metadata.json", meta.dump(2) + "\n");

  out << summary.str();
  out << "\nwrote " << dir.string() << "/{below_threshold.csv, above_threshold.csv, summary.txt, metadata.json}\n";
  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coupling thresholds, minimum density and simulation for networks of piecewise-smooth systems",
               "pwsync"};
  app.require_subcommand(1);

  TopologyArgs topo;
  auto* topology = app.add_subcommand("topology", "Generate a named topology as a graph file");
  topology->add_option("--kind", topo.kind, "complete|star|path|ring|nearest_neighbours|erdos_renyi")->required();
  topology->add_option("--n", topo.n, "Number of vertices")->required();
  topology->add_option("--l", topo.l, "Neighbours per side (nearest_neighbours)");
  topology->add_option("--p", topo.p, "Edge probability (erdos_renyi)");
  topology->add_option("--seed", topo.seed, "Random seed (erdos_renyi)");
  topology->add_option("--out", topo.out, "Output graph file (default: stdout)");

  DensityArgs dens;
  auto* mindensity = app.add_subcommand("mindensity", "Minimum density and sparsest cut of a graph file");
  mindensity->add_option("--graph", dens.graph, "Graph file")->required();
  auto* exact_flag = mindensity->add_flag("--exact", dens.exact, "Force exhaustive enumeration");
  mindensity->add_flag("--heuristic", dens.heuristic, "Force Kernighan-Lin local search")->excludes(exact_flag);
  mindensity->add_option("--seed", dens.seed, "Heuristic seed");
  mindensity->add_option("--cap", dens.cap, "Largest N solved exactly in automatic mode");

  ConfigArgs cfg_args;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", cfg_args.config, "Experiment document (JSON)")->required();
    sub->add_option("--seed", cfg_args.seed, "Override sim.seed");
    sub->add_option("--lambda2", cfg_args.lambda2, "Override the algebraic connectivity of the diffusive layer");
    sub->add_option("--delta", cfg_args.delta, "Override the minimum density of the discontinuous layer");
  };
  auto* thresholds = app.add_subcommand("thresholds", "Critical coupling gains for an experiment");
  add_config(thresholds);
  thresholds->add_option("--json", cfg_args.json_out, "Also write the report as JSON");

  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate the coupled network");
  add_config(simulate_cmd);
  simulate_cmd->add_option("--out", cfg_args.out_dir, "Override output.directory");
  simulate_cmd->add_option("--c", cfg_args.c, "Override gains.c");
  simulate_cmd->add_option("--cd", cfg_args.c_d, "Override gains.c_d");
  simulate_cmd->add_option("--dt", cfg_args.dt, "Override sim.dt");
  simulate_cmd->add_option("--t-end", cfg_args.t_end, "Override sim.t_end");

  auto* resilience = app.add_subcommand("resilience", "Minimum density and c_d* after edge-removal scenarios");
  add_config(resilience);

  DemoArgs demo;
  auto* paper_demo = app.add_subcommand("paper-demo", "Relay-network example end to end");
  paper_demo->add_option("--seed", demo.seed, "Seed for the random layer and initial states");
  paper_demo->add_option("--out", demo.out_dir, "Output directory");
  paper_demo->add_option("--n", demo.n, "Number of nodes");
  paper_demo->add_option("--dt", demo.dt, "Integration step");
  paper_demo->add_option("--t-end", demo.t_end, "Horizon");
  paper_demo->add_option("--decimation", demo.decimation, "CSV row decimation");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*topology) return cmd_topology(topo, out);
    if (*mindensity) return cmd_mindensity(dens, out);
    if (*thresholds) return cmd_thresholds(cfg_args, out);
    if (*simulate_cmd) return cmd_simulate(cfg_args, out);
    if (*resilience) return cmd_resilience(cfg_args, out);
    if (*paper_demo) return cmd_paper_demo(demo, out);
  } catch (const HypothesisError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace pwsync
