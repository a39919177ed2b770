#include "qnewton/cli/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "qnewton/poly_text.hpp"
#include "qnewton/polysys.hpp"

namespace qn::cli {

namespace {

using nlohmann::json;

Variant parse_variant(const std::string& name) {
  if (name == "NQN") return Variant::NQN;
  if (name == "NQNB") return Variant::NQNB;
  if (name == "NQNB_S") return Variant::NQNB_S;
  if (name == "G") return Variant::G;
  throw ConfigError("unknown variant '" + name + "' (expected NQN, NQNB, NQNB_S, or G)");
}

BasisKind parse_basis_kind(const std::string& name) {
  if (name == "eigen") return BasisKind::Eigen;
  if (name == "fixed") return BasisKind::Fixed;
  if (name == "gradient_aligned") return BasisKind::GradientAligned;
  if (name == "hybrid") return BasisKind::Hybrid;
  throw ConfigError("unknown basis_strategy '" + name +
                    "' (expected eigen, fixed, gradient_aligned, or hybrid)");
}

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

}  // namespace

RunConfig parse_run_config_text(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");

  static const std::set<std::string> known = {
      "objective",     "dim",          "quadratic_q",      "quadratic_b",
      "variant",       "tau",          "gamma0",           "armijo_constant",
      "backtrack_factor", "basis_strategy", "deltas",      "delta_seed",
      "random_delta_mode", "x0",       "start_box",        "num_starts",
      "start_seed",    "max_iterations", "grad_tolerance", "divergence_bound",
      "trace",         "summary"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");

  RunConfig rc;
  if (!j.contains("objective")) throw ConfigError("config requires an 'objective' key");
  rc.objective = get_as<std::string>(j["objective"], "objective");

  if (j.contains("dim")) rc.dim = get_as<int>(j["dim"], "dim");
  if (j.contains("quadratic_q"))
    rc.quadratic_q = get_as<std::vector<std::vector<double>>>(j["quadratic_q"], "quadratic_q");
  if (j.contains("quadratic_b")) rc.quadratic_b = get_as<Vector>(j["quadratic_b"], "quadratic_b");
  if (j.contains("variant")) rc.variant = parse_variant(get_as<std::string>(j["variant"], "variant"));
  if (j.contains("tau")) rc.tau = get_as<double>(j["tau"], "tau");
  if (j.contains("gamma0")) rc.gamma0 = get_as<double>(j["gamma0"], "gamma0");
  if (j.contains("armijo_constant"))
    rc.armijo_constant = get_as<double>(j["armijo_constant"], "armijo_constant");
  if (j.contains("backtrack_factor"))
    rc.backtrack_factor = get_as<double>(j["backtrack_factor"], "backtrack_factor");
  if (j.contains("basis_strategy"))
    rc.basis_strategy = get_as<std::string>(j["basis_strategy"], "basis_strategy");
  if (j.contains("deltas")) rc.deltas = get_as<std::vector<double>>(j["deltas"], "deltas");
  if (j.contains("delta_seed")) rc.delta_seed = get_as<std::uint64_t>(j["delta_seed"], "delta_seed");
  if (j.contains("random_delta_mode"))
    rc.random_delta_mode = get_as<bool>(j["random_delta_mode"], "random_delta_mode");
  if (j.contains("x0")) rc.x0 = get_as<Vector>(j["x0"], "x0");
  if (j.contains("start_box")) {
    const auto box = get_as<std::vector<double>>(j["start_box"], "start_box");
    if (box.size() != 2 || !(box[0] < box[1]))
      throw ConfigError("start_box must be [lo, hi] with lo < hi");
    rc.start_box = std::array<double, 2>{box[0], box[1]};
  }
  if (j.contains("num_starts")) rc.num_starts = get_as<int>(j["num_starts"], "num_starts");
  if (j.contains("start_seed")) rc.start_seed = get_as<std::uint64_t>(j["start_seed"], "start_seed");
  if (j.contains("max_iterations"))
    rc.max_iterations = get_as<int>(j["max_iterations"], "max_iterations");
  if (j.contains("grad_tolerance"))
    rc.grad_tolerance = get_as<double>(j["grad_tolerance"], "grad_tolerance");
  if (j.contains("divergence_bound"))
    rc.divergence_bound = get_as<double>(j["divergence_bound"], "divergence_bound");
  if (j.contains("trace")) rc.trace = get_as<std::string>(j["trace"], "trace");
  if (j.contains("summary")) rc.summary = get_as<std::string>(j["summary"], "summary");
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config_text(buf.str());
}

CostFunction make_objective(const RunConfig& config) {
  const std::string& name = config.objective;
  if (name == "rosenbrock") return rosenbrock();
  if (name == "double_well_saddle") return double_well_saddle();
  if (name == "quartic_degenerate") {
    const int dim = config.x0 ? static_cast<int>(config.x0->size()) : config.dim;
    return quartic_degenerate(dim);
  }
  if (name == "quadratic") {
    int dim = config.dim;
    if (config.quadratic_q)
      dim = static_cast<int>(config.quadratic_q->size());
    else if (config.x0)
      dim = static_cast<int>(config.x0->size());
    SymmetricMatrix q = SymmetricMatrix::identity(dim);
    if (config.quadratic_q) {
      std::vector<double> entries;
      for (const auto& row : *config.quadratic_q) {
        if (static_cast<int>(row.size()) != dim) throw ConfigError("quadratic_q must be square");
        entries.insert(entries.end(), row.begin(), row.end());
      }
      q = SymmetricMatrix(dim, std::move(entries));
    }
    Vector b(static_cast<std::size_t>(dim), 0.0);
    if (config.quadratic_b) {
      if (static_cast<int>(config.quadratic_b->size()) != dim)
        throw ConfigError("quadratic_b dimension does not match quadratic_q");
      b = *config.quadratic_b;
    }
    return quadratic(q, b);
  }
  // Anything else is a path to a polynomial-system file.
  try {
    return system_cost(parse_system_file(name));
  } catch (const ParseError& e) {
    throw ConfigError(std::string("objective file: ") + e.what());
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
}

StepperConfig make_stepper_config(const RunConfig& config) {
  StepperConfig sc = StepperConfig::defaults(config.variant);
  if (config.tau) sc.tau = *config.tau;
  if (config.gamma0) sc.gamma0 = *config.gamma0;
  if (config.armijo_constant) sc.armijo_constant = *config.armijo_constant;
  if (config.backtrack_factor) sc.backtrack_factor = *config.backtrack_factor;
  if (config.basis_strategy) sc.basis.kind = parse_basis_kind(*config.basis_strategy);
  if (config.deltas) sc.deltas = *config.deltas;
  if (config.delta_seed) sc.delta_seed = *config.delta_seed;
  sc.random_delta_mode = config.random_delta_mode;
  if (config.max_iterations) sc.max_iterations = *config.max_iterations;
  if (config.grad_tolerance) sc.grad_tolerance = *config.grad_tolerance;
  if (config.divergence_bound) sc.divergence_bound = *config.divergence_bound;
  return sc;
}

}  // namespace qn::cli
