#include "pwsync/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pwsync/error.hpp"

namespace pwsync {

using nlohmann::json;

namespace {

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& object_at(const json& obj, const char* key, const std::string& path) {
  const json* v = find(obj, key);
  if (v == nullptr) throw ConfigError(path + "." + key, "missing");
  if (!v->is_object()) throw ConfigError(path + "." + key, "expected an object");
  return *v;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& path) {
  const json* v = find(obj, key);
  return v ? number(*v, path + "." + key) : fallback;
}

std::int64_t integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<std::int64_t>();
}

std::uint64_t seed_or(const json& obj, const char* key, std::uint64_t fallback, const std::string& path) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
    throw ConfigError(path + "." + key, "expected a nonnegative integer");
  }
  return v->get<std::uint64_t>();
}

Eigen::MatrixXd matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(v.size());
  if (!v[0].is_array() || v[0].empty()) throw ConfigError(path, "expected rows to be nonempty arrays");
  const auto cols = static_cast<Eigen::Index>(v[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = v[static_cast<std::size_t>(i)];
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw ConfigError(rp, "ragged matrix row");
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = number(row[static_cast<std::size_t>(j)], rp + "[" + std::to_string(j) + "]");
  }
  return m;
}

Eigen::VectorXd vector(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = number(v[i], path + "[" + std::to_string(i) + "]");
  return out;
}

Eigen::MatrixXd square(const json& v, int n, const std::string& path) {
  Eigen::MatrixXd m = matrix(v, path);
  if (m.rows() != n || m.cols() != n) {
    throw ConfigError(path, "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  }
  return m;
}

LayerSpec parse_layer(const json& obj, int dim, const std::string& base_dir, const std::string& path) {
  LayerSpec layer;
  layer.gamma = Eigen::MatrixXd::Identity(dim, dim);
  if (const json* g = find(obj, "gamma")) layer.gamma = square(*g, dim, path + ".gamma");
  const json* topo = find(obj, "topology");
  const json* file = find(obj, "file");
  if ((topo == nullptr) == (file == nullptr)) throw ConfigError(path, "give exactly one of 'topology' or 'file'");
  if (file) {
    if (!file->is_string()) throw ConfigError(path + ".file", "expected a string");
    std::filesystem::path p(file->get<std::string>());
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    layer.file = p.string();
    return layer;
  }
  if (!topo->is_string()) throw ConfigError(path + ".topology", "expected a string");
  Topology t;
  try {
    t.kind = topology_kind_from_string(topo->get<std::string>());
  } catch (const Error& e) {
    throw ConfigError(path + ".topology", e.what());
  }
  if (const json* l = find(obj, "l")) t.neighbours = static_cast<int>(integer(*l, path + ".l"));
  t.probability = number_or(obj, "p", t.probability, path);
  t.seed = seed_or(obj, "seed", 0, path);
  layer.topology = t;
  return layer;
}

}  // namespace

ExperimentConfig parse_experiment(std::string_view json_text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("<document>", "expected a JSON object");

  ExperimentConfig cfg;
  if (const json* v = find(doc, "schema_version")) {
    if (integer(*v, "schema_version") != kExperimentSchemaVersion) {
      throw ConfigError("schema_version", "unsupported version (expected " + std::to_string(kExperimentSchemaVersion) + ")");
    }
  }

  const json& sys = object_at(doc, "system", "<document>");
  const json* a_json = find(sys, "A");
  if (!a_json) throw ConfigError("system.A", "missing");
  const Eigen::MatrixXd a = matrix(*a_json, "system.A");
  if (a.rows() != a.cols()) throw ConfigError("system.A", "must be square");
  const int dim = static_cast<int>(a.rows());
  Eigen::VectorXd d = Eigen::VectorXd::Zero(dim);
  if (const json* v = find(sys, "d")) {
    d = vector(*v, "system.d");
    if (d.size() != dim) throw ConfigError("system.d", "expected length " + std::to_string(dim));
  }
  std::vector<SwitchTerm> switches;
  if (const json* v = find(sys, "switches")) {
    if (!v->is_array()) throw ConfigError("system.switches", "expected an array");
    for (std::size_t k = 0; k < v->size(); ++k) {
      const std::string sp = "system.switches[" + std::to_string(k) + "]";
      const json& s = (*v)[k];
      if (!s.is_object()) throw ConfigError(sp, "expected an object");
      const json* gain = find(s, "gain");
      const json* coord = find(s, "coordinate");
      if (!gain) throw ConfigError(sp + ".gain", "missing");
      if (!coord) throw ConfigError(sp + ".coordinate", "missing");
      SwitchTerm term{vector(*gain, sp + ".gain"), static_cast<int>(integer(*coord, sp + ".coordinate"))};
      if (term.gain.size() != dim) throw ConfigError(sp + ".gain", "expected length " + std::to_string(dim));
      if (term.coordinate < 0 || term.coordinate >= dim) throw ConfigError(sp + ".coordinate", "out of range");
      switches.push_back(std::move(term));
    }
  }
  cfg.field = PwsVectorField(a, d, std::move(switches));
  cfg.p = Eigen::MatrixXd::Identity(dim, dim);
  if (const json* v = find(sys, "P")) cfg.p = square(*v, dim, "system.P");
  try {
    require_positive_definite(cfg.p);
  } catch (const Error& e) {
    throw ConfigError("system.P", e.what());
  }
  if (const json* v = find(sys, "M")) cfg.m_override = square(*v, dim, "system.M");

  const json& layers = object_at(doc, "layers", "<document>");
  const json* n = find(layers, "n");
  if (!n) throw ConfigError("layers.n", "missing");
  cfg.n_nodes = static_cast<int>(integer(*n, "layers.n"));
  if (cfg.n_nodes < 2) throw ConfigError("layers.n", "need at least 2 nodes");
  cfg.diffusive = parse_layer(object_at(layers, "diffusive", "layers"), dim, base_dir, "layers.diffusive");
  cfg.discontinuous = parse_layer(object_at(layers, "discontinuous", "layers"), dim, base_dir, "layers.discontinuous");

  if (const json* gains = find(doc, "gains")) {
    if (!gains->is_object()) throw ConfigError("gains", "expected an object");
    auto gain = [&](const char* key) -> std::optional<double> {
      const json* v = find(*gains, key);
      const std::string gp = std::string("gains.") + key;
      if (!v || (v->is_string() && v->get<std::string>() == "auto")) return std::nullopt;
      const double g = number(*v, gp);
      if (g < 0.0) throw ConfigError(gp, "must be nonnegative");
      return g;
    };
    cfg.c = gain("c");
    cfg.c_d = gain("c_d");
  }

  if (const json* th = find(doc, "thresholds")) {
    if (!th->is_object()) throw ConfigError("thresholds", "expected an object");
    if (const json* v = find(*th, "exact_cap")) cfg.exact_cap = static_cast<int>(integer(*v, "thresholds.exact_cap"));
    cfg.density_seed = seed_or(*th, "seed", 0, "thresholds");
    if (const json* v = find(*th, "lambda2")) cfg.lambda2_override = number(*v, "thresholds.lambda2");
    if (const json* v = find(*th, "delta")) cfg.delta_override = number(*v, "thresholds.delta");
    if (const json* v = find(*th, "quad_samples")) cfg.quad_samples = static_cast<long>(integer(*v, "thresholds.quad_samples"));
  }

  if (const json* sim = find(doc, "sim")) {
    if (!sim->is_object()) throw ConfigError("sim", "expected an object");
    cfg.dt = number_or(*sim, "dt", cfg.dt, "sim");
    cfg.t_end = number_or(*sim, "t_end", cfg.t_end, "sim");
    cfg.seed = seed_or(*sim, "seed", cfg.seed, "sim");
    cfg.init_amplitude = number_or(*sim, "init_amplitude", cfg.init_amplitude, "sim");
    if (const json* v = find(*sim, "sign_mode")) {
      const std::string mode = v->is_string() ? v->get<std::string>() : "";
      if (mode == "exact") {
        cfg.sign_mode = ExactSign{};
      } else if (mode == "smoothed") {
        cfg.sign_mode = SmoothedSign{number_or(*sim, "epsilon", 1e-3, "sim")};
      } else {
        throw ConfigError("sim.sign_mode", "expected \"exact\" or \"smoothed\"");
      }
    }
    if (!(cfg.dt > 0.0)) throw ConfigError("sim.dt", "must be positive");
    if (!(cfg.t_end > cfg.dt)) throw ConfigError("sim.t_end", "must exceed dt");
  }

  if (const json* out = find(doc, "output")) {
    if (!out->is_object()) throw ConfigError("output", "expected an object");
    if (const json* v = find(*out, "directory")) {
      if (!v->is_string()) throw ConfigError("output.directory", "expected a string");
      cfg.output_dir = v->get<std::string>();
    }
    if (const json* v = find(*out, "decimation")) cfg.decimation = static_cast<int>(integer(*v, "output.decimation"));
    if (cfg.decimation < 1) throw ConfigError("output.decimation", "must be >= 1");
    if (const json* v = find(*out, "node_errors")) {
      if (!v->is_boolean()) throw ConfigError("output.node_errors", "expected a boolean");
      cfg.node_errors = v->get<bool>();
    }
  }

  if (const json* res = find(doc, "resilience")) {
    const json* list = res->is_object() ? find(*res, "scenarios") : nullptr;
    if (!list || !list->is_array()) throw ConfigError("resilience.scenarios", "expected an array");
    for (std::size_t k = 0; k < list->size(); ++k) {
      const std::string sp = "resilience.scenarios[" + std::to_string(k) + "]";
      const json& s = (*list)[k];
      if (!s.is_object()) throw ConfigError(sp, "expected an object");
      RemovalScenario scenario;
      scenario.name = s.value("name", "scenario " + std::to_string(k));
      const json* rm = find(s, "remove");
      if (!rm || !rm->is_array()) throw ConfigError(sp + ".remove", "expected an array of [i, j] pairs");
      for (std::size_t e = 0; e < rm->size(); ++e) {
        const json& pair = (*rm)[e];
        const std::string ep = sp + ".remove[" + std::to_string(e) + "]";
        if (!pair.is_array() || pair.size() != 2) throw ConfigError(ep, "expected [i, j]");
        scenario.edges.emplace_back(static_cast<int>(integer(pair[0], ep)), static_cast<int>(integer(pair[1], ep)));
      }
      cfg.scenarios.push_back(std::move(scenario));
    }
  }
  return cfg;
}

ExperimentConfig load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const auto parent = std::filesystem::path(path).parent_path();
  return parse_experiment(ss.str(), parent.empty() ? "." : parent.string());
}

Graph build_layer(const LayerSpec& layer, int n_nodes) {
  if (layer.topology) return generate_topology(*layer.topology, n_nodes);
  Graph g = read_graph_file(layer.file);
  if (g.n_vertices() != n_nodes) {
    throw GraphError("graph file '" + layer.file + "' has " + std::to_string(g.n_vertices()) +
                     " vertices, expected " + std::to_string(n_nodes));
  }
  return g;
}

SigmaQuadCertificate experiment_certificate(const ExperimentConfig& cfg) {
  auto cert = certificate_from_decomposition(cfg.field, cfg.p);
  if (cfg.m_override) cert.m = *cfg.m_override;
  return cert;
}

ThresholdOptions experiment_threshold_options(const ExperimentConfig& cfg) {
  ThresholdOptions opt;
  opt.exact_cap = cfg.exact_cap;
  opt.heuristic_seed = cfg.density_seed;
  opt.lambda2_override = cfg.lambda2_override;
  opt.delta_override = cfg.delta_override;
  opt.field = &cfg.field;
  opt.quad_samples = cfg.quad_samples;
  return opt;
}

ResolvedGains resolve_gains(const ExperimentConfig& cfg, const Graph& diffusive, const Graph& discontinuous) {
  ResolvedGains gains;
  if (cfg.c && cfg.c_d) {
    gains.c = *cfg.c;
    gains.c_d = *cfg.c_d;
    return gains;
  }
  const auto cert = experiment_certificate(cfg);
  const auto options = experiment_threshold_options(cfg);
  auto report = compute_thresholds(cert, cfg.diffusive.gamma, cfg.discontinuous.gamma, diffusive, discontinuous, options);
  if (report.hypotheses.sigma_quad == QuadStatus::falsified) {
    throw HypothesisError("(a)(i)", "sampled counterexample to sigma-QUAD(P, Q, M); \"auto\" gains unavailable");
  }
  gains.c = cfg.c ? *cfg.c : std::max(0.0, kAutoGainFactor * report.c_star);
  gains.c_d = cfg.c_d ? *cfg.c_d : std::max(0.0, kAutoGainFactor * report.cd_star);
  gains.report = std::move(report);
  return gains;
}

SimConfig make_sim_config(const ExperimentConfig& cfg, const Graph& diffusive, const Graph& discontinuous, double c,
                          double c_d) {
  SimConfig sim{
      .field = cfg.field,
      .diffusive = diffusive,
      .discontinuous = discontinuous,
      .c = c,
      .c_d = c_d,
      .gamma = cfg.diffusive.gamma,
      .gamma_d = cfg.discontinuous.gamma,
      .dt = cfg.dt,
      .t_end = cfg.t_end,
      .initial = RandomInit{cfg.seed, cfg.init_amplitude},
      .sign_mode = cfg.sign_mode,
      .decimation = 0,
      .record_node_errors = cfg.node_errors,
  };
  return sim;
}

}  // namespace pwsync
