#include "app.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "cpovm/cpovm.hpp"
#include "cpovm/io.hpp"

namespace cpovm::cli {
namespace {

using io::Json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RegimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> tol{
      {"completeness", 1e-10},  {"effect_eigenvalue", 1e-10}, {"covariance", 1e-11},
      {"convexity", 1e-11},     {"cocycle", 1e-12},           {"parseval", 1e-11},
      {"hs_round_trip", 1e-11}, {"coherent_isometry", 1e-11}, {"tomography", 1e-9},
      {"partial_trace", 1e-10}, {"channel", 1e-10},           {"entropy", 1e-9},
      {"normalization", 1e-10}, {"resolution", 1e-3},         {"phase", 1e-6},
  };
  return tol;
}

struct Flags {
  std::string config;
  std::string group;
  std::string fiducial;
  std::string state;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> tol;
  std::string out;
  bool bits = false;
  int samples = 10;
  std::string what = "weyl";
  std::string probabilities;
  // cv
  int dim = cv::kDefaultDim;
  double radius = 0.0;
  double step = 0.0;
  int block = 0;
  double x = 0.0;
  double y = 0.0;
};

struct ExperimentConfig {
  std::optional<FiniteLCAGroup> group;
  Json fiducial = "random";
  Json state = "plus";
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances = default_tolerances();

  double tol(const std::string& name) const { return tolerances.at(name); }
};

// A flag value is JSON when it parses as JSON, a bare word otherwise.
Json parse_flag_value(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error&) {
    return text;
  }
}

FiniteLCAGroup parse_group(const Json& spec) {
  try {
    if (spec.is_string()) {
      std::vector<int> moduli;
      std::stringstream ss(spec.get<std::string>());
      std::string item;
      while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        const int n = std::stoi(item, &used);
        if (used != item.size()) throw ConfigError("bad modulus '" + item + "'");
        moduli.push_back(n);
      }
      return FiniteLCAGroup(std::move(moduli));
    }
    if (spec.is_number_integer()) return FiniteLCAGroup({spec.get<int>()});
    return io::group_from_json(spec);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid group: ") + e.what());
  }
}

void apply_tolerance_overrides(ExperimentConfig& cfg, const Json& overrides) {
  for (auto it = overrides.begin(); it != overrides.end(); ++it) {
    if (!cfg.tolerances.contains(it.key())) throw ConfigError("unknown tolerance '" + it.key() + "'");
    cfg.tolerances[it.key()] = it.value().get<double>();
  }
}

ExperimentConfig load_config(const Flags& f) {
  ExperimentConfig cfg;
  try {
    if (!f.config.empty()) {
      std::ifstream in(f.config);
      if (!in) throw ConfigError("cannot open config file " + f.config);
      const Json j = Json::parse(in);
      if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
      if (j.contains("group")) cfg.group = parse_group(j.at("group"));
      if (j.contains("fiducial")) cfg.fiducial = j.at("fiducial");
      if (j.contains("state")) cfg.state = j.at("state");
      if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
      if (j.contains("tolerances")) apply_tolerance_overrides(cfg, j.at("tolerances"));
    }
    if (!f.group.empty()) cfg.group = parse_group(parse_flag_value(f.group));
    if (!f.fiducial.empty()) cfg.fiducial = parse_flag_value(f.fiducial);
    if (!f.state.empty()) cfg.state = parse_flag_value(f.state);
    if (f.seed) cfg.seed = *f.seed;
    for (const std::string& t : f.tol) {
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw ConfigError("--tol expects name=value, got '" + t + "'");
      Json one;
      one[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
      apply_tolerance_overrides(cfg, one);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return cfg;
}

const FiniteLCAGroup& require_group(const ExperimentConfig& cfg, std::size_t limit) {
  if (!cfg.group) throw ConfigError("a group is required (--group or config \"group\")");
  if (cfg.group->order() > limit) {
    throw ConfigError("group order " + std::to_string(cfg.group->order()) + " exceeds the dense-matrix limit of " +
                      std::to_string(limit) + " for this command");
  }
  return *cfg.group;
}

// Independent deterministic streams per purpose.
Rng make_rng(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
  return Rng(seq);
}

enum Stream : std::uint32_t { kFiducialStream = 1, kStateStream = 2, kSuiteStream = 3 };

StateVector normalized(StateVector v, const char* what, std::ostream& err) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw ConfigError(std::string(what) + " vector has zero norm");
  if (std::abs(n - 1.0) > 1e-8) {
    err << "warning: " << what << " vector had norm " << io::format_double(n) << "; renormalized\n";
  }
  return v / n;
}

StateVector preset_vector(const std::string& name, Eigen::Index dim) {
  if (name == "delta0") {
    StateVector v = StateVector::Zero(dim);
    v(0) = 1.0;
    return v;
  }
  if (name == "uniform" || name == "plus") {
    return StateVector::Constant(dim, Complex{1.0 / std::sqrt(static_cast<double>(dim)), 0.0});
  }
  throw ConfigError("unknown preset '" + name + "'");
}

StateVector resolve_fiducial(const ExperimentConfig& cfg, const FiniteLCAGroup& group, std::ostream& err) {
  const auto dim = static_cast<Eigen::Index>(group.order());
  const Json& spec = cfg.fiducial;
  if (spec.is_string()) {
    const auto name = spec.get<std::string>();
    if (name == "random") {
      Rng rng = make_rng(cfg.seed, kFiducialStream);
      return random_state_vector(dim, rng);
    }
    if (name == "delta0" || name == "uniform") return preset_vector(name, dim);
    throw ConfigError("unknown fiducial preset '" + name + "' (delta0, uniform, random, or a vector)");
  }
  StateVector v;
  try {
    v = io::vector_from_json(spec);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid fiducial: ") + e.what());
  }
  if (v.size() != dim) {
    throw ConfigError("fiducial has length " + std::to_string(v.size()) + " but the group order is " +
                      std::to_string(dim));
  }
  return normalized(std::move(v), "fiducial", err);
}

std::string fiducial_label(const ExperimentConfig& cfg) {
  return cfg.fiducial.is_string() ? cfg.fiducial.get<std::string>() : std::string("explicit");
}

struct ResolvedState {
  Operator rho;
  std::optional<StateVector> pure;
};

ResolvedState resolve_state(const ExperimentConfig& cfg, const FiniteLCAGroup& group, const StateVector& fiducial,
                            std::ostream& err) {
  const auto dim = static_cast<Eigen::Index>(group.order());
  const Json& spec = cfg.state;
  const auto pure = [](StateVector v) { return ResolvedState{projector(v), std::move(v)}; };
  if (spec.is_string()) {
    const auto name = spec.get<std::string>();
    if (name == "plus" || name == "delta0") return pure(preset_vector(name, dim));
    if (name == "fiducial") return pure(fiducial);
    if (name == "maximally_mixed") {
      return {Operator::Identity(dim, dim) / static_cast<double>(dim), std::nullopt};
    }
    if (name == "random") {
      Rng rng = make_rng(cfg.seed, kStateStream);
      return pure(random_state_vector(dim, rng));
    }
    if (name == "random_mixed") {
      Rng rng = make_rng(cfg.seed, kStateStream);
      return {random_density_matrix(dim, dim, rng), std::nullopt};
    }
    throw ConfigError("unknown state preset '" + name +
                      "' (plus, delta0, fiducial, maximally_mixed, random, random_mixed, or explicit)");
  }
  try {
    // {"vector": [...]} and {"matrix": ...} are explicit; a bare dim x dim
    // array of arrays is a matrix, anything else a vector
    const bool tagged_vector = spec.is_object() && spec.contains("vector");
    const bool tagged_matrix = spec.is_object() && spec.contains("matrix");
    const Json& body = tagged_vector ? spec.at("vector") : tagged_matrix ? spec.at("matrix") : spec;
    bool is_matrix = tagged_matrix || (body.is_object() && body.contains("data"));
    if (!tagged_vector && !is_matrix && body.is_array() && static_cast<Eigen::Index>(body.size()) == dim) {
      is_matrix = std::all_of(body.begin(), body.end(), [dim](const Json& row) {
        return row.is_array() && static_cast<Eigen::Index>(row.size()) == dim &&
               std::all_of(row.begin(), row.end(), [](const Json& z) { return io::is_complex_literal(z); });
      });
    }
    if (!is_matrix) {
      StateVector v = io::vector_from_json(body);
      if (v.size() != dim) throw ConfigError("state vector length does not match the group order");
      return pure(normalized(std::move(v), "state", err));
    }
    Operator rho = io::matrix_from_json(body);
    if (rho.rows() != dim || rho.cols() != dim) throw ConfigError("state matrix size does not match the group order");
    require_density_matrix(rho, kStateTolerance, "state");
    return {std::move(rho), std::nullopt};
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid state: ") + e.what());
  }
}

Json check(const std::string& name, double value, double tol, bool lower_bound = false) {
  const bool pass = lower_bound ? value >= -tol : value <= tol;
  return Json{{"name", name}, {"value", value}, {"tolerance", tol}, {"pass", pass}};
}

// ---------------------------------------------------------------------------

int cmd_verify(const ExperimentConfig& cfg, const Flags& f, std::ostream& out, std::ostream& err) {
  const FiniteLCAGroup& group = require_group(cfg, kMaxPovmOrder);
  const StateVector fid = resolve_fiducial(cfg, group, err);
  const auto dim = static_cast<Eigen::Index>(group.order());
  const std::size_t points = phase_point_count(group);
  const int samples = std::max(1, f.samples);
  Rng rng = make_rng(cfg.seed, kSuiteStream);
  std::uniform_int_distribution<std::size_t> pick(0, points - 1);

  // pairs (p, q): exhaustive for |G| <= 4, 64 random otherwise
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (group.order() <= 4) {
    for (std::size_t p = 0; p < points; ++p)
      for (std::size_t q = 0; q < points; ++q) pairs.emplace_back(p, q);
  } else {
    for (int i = 0; i < 64; ++i) pairs.emplace_back(pick(rng), pick(rng));
  }

  const CovariantPOVM povm = build_povm(group, fid);
  const double completeness = completeness_error(povm);
  const double min_eig = min_effect_eigenvalue(povm);

  double covariance = 0.0;
  double cocycle = 0.0;
  for (const auto& [pi, qi] : pairs) {
    const PhasePoint p = phase_point(group, pi);
    const PhasePoint q = phase_point(group, qi);
    covariance = std::max(covariance, covariance_deviation(povm, p, q));
    const ProductLaw law = weyl_product_phase(group, p, q);
    const Operator lhs = weyl_matrix(group, p).matrix * weyl_matrix(group, q).matrix;
    cocycle = std::max(cocycle, max_abs(lhs - law.phase * weyl_matrix(group, law.point).matrix));
  }

  const StateVector other = random_state_vector(dim, rng);
  const std::vector<double> mix_weights{0.3, 0.7};
  const std::vector<StateVector> mix_vectors{fid, other};
  const double convexity = convexity_deviation(group, mix_weights, mix_vectors);

  double parseval = 0.0;
  double polarized = 0.0;
  double round_trip = 0.0;
  double isometry = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Operator a = random_operator(dim, rng);
    const Operator b = random_operator(dim, rng);
    const double hs = (a.adjoint() * a).trace().real();
    parseval = std::max(parseval, std::abs(hs_transform(group, a).norm_squared() - hs) / hs);
    const Complex direct = (a * b.adjoint()).trace();
    polarized = std::max(polarized, std::abs(parseval_pairing(group, a, b) - direct) / (a.norm() * b.norm()));
    round_trip = std::max(round_trip, max_abs(hs_inverse(group, hs_transform(group, a)) - a));
    const StateVector xi = random_state_vector(dim, rng);
    const PhaseSpaceFunction v = coherent_transform(group, fid, xi);
    isometry = std::max(isometry, std::abs(v.norm_squared() - 1.0));
    isometry = std::max(isometry, max_abs(coherent_synthesis(group, fid, v) - xi));
  }

  Json tomography_check;
  {
    const Operator rho = random_density_matrix(dim, dim, rng);
    try {
      const RealVector probs = measure(group, fid, rho).probabilities();
      const ReconstructionResult rec = reconstruct_state(group, probs, fid);
      const double err_state = max_abs(rec.rho - rho);
      tomography_check = check("tomography_round_trip", std::max(err_state, rec.residual), cfg.tol("tomography"));
    } catch (const ReconstructionError& e) {
      tomography_check = Json{{"name", "tomography_round_trip"},
                              {"value", nullptr},
                              {"tolerance", cfg.tol("tomography")},
                              {"pass", true},
                              {"skipped", "fiducial is not informationally complete"}};
    }
  }

  ComplementarityReport comp;
  for (int s = 0; s < samples; ++s) {
    const ComplementarityReport r = verify_complementarity(group, fid, random_state_vector(dim, rng));
    comp.partial_trace_dev = std::max(comp.partial_trace_dev, r.partial_trace_dev);
    comp.channel_dev = std::max(comp.channel_dev, r.channel_dev);
    comp.entropy_dev = std::max(comp.entropy_dev, r.entropy_dev);
  }

  Json checks = Json::array();
  checks.push_back(check("completeness", completeness, cfg.tol("completeness")));
  checks.push_back(check("min_effect_eigenvalue", min_eig, cfg.tol("effect_eigenvalue"), true));
  checks.push_back(check("covariance", covariance, cfg.tol("covariance")));
  checks.push_back(check("convexity", convexity, cfg.tol("convexity")));
  checks.push_back(check("cocycle", cocycle, cfg.tol("cocycle")));
  checks.push_back(check("parseval", parseval, cfg.tol("parseval")));
  checks.push_back(check("polarized_parseval", polarized, cfg.tol("parseval")));
  checks.push_back(check("hs_round_trip", round_trip, cfg.tol("hs_round_trip")));
  checks.push_back(check("coherent_isometry", isometry, cfg.tol("coherent_isometry")));
  checks.push_back(tomography_check);
  checks.push_back(check("complementarity_partial_trace", comp.partial_trace_dev, cfg.tol("partial_trace")));
  checks.push_back(check("complementarity_channel", comp.channel_dev, cfg.tol("channel")));
  checks.push_back(check("complementarity_entropy", comp.entropy_dev, cfg.tol("entropy")));

  bool pass = true;
  for (const auto& c : checks) pass = pass && c.at("pass").get<bool>();

  Json report;
  report["group"] = io::to_json(group);
  report["seed"] = cfg.seed;
  report["fiducial"] = fiducial_label(cfg);
  report["samples"] = samples;
  report["pairs_checked"] = pairs.size();
  report["completeness_error"] = completeness;
  report["min_effect_eigenvalue"] = min_eig;
  report["covariance_max_deviation"] = covariance;
  report["convexity_error"] = convexity;
  report["checks"] = std::move(checks);
  report["pass"] = pass;
  io::write_json(out, report);
  if (!pass) err << "verify: one or more invariants exceeded tolerance\n";
  return pass ? kPass : kInvariantFailure;
}

int cmd_measure(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  const FiniteLCAGroup& group = require_group(cfg, kMaxOrder);
  const StateVector fid = resolve_fiducial(cfg, group, err);
  const ResolvedState state = resolve_state(cfg, group, fid, err);
  const ProbabilityDensity p = measure(group, fid, state.rho);
  const RealVector probs = p.probabilities();

  Json pts = Json::array();
  for (std::size_t i = 0; i < phase_point_count(group); ++i) {
    Json rec = io::point_to_json(group, i);
    rec["weight"] = p.weight();
    rec["density"] = p.density()(static_cast<Eigen::Index>(i));
    rec["probability"] = probs(static_cast<Eigen::Index>(i));
    pts.push_back(std::move(rec));
  }
  const double s = classical_entropy(p);
  Json report;
  report["group"] = io::to_json(group);
  report["points"] = std::move(pts);
  report["entropy_nats"] = s;
  report["entropy_bits"] = nats_to_bits(s);
  io::write_json(out, report);

  const double total = probs.sum();
  if (std::abs(total - 1.0) > cfg.tol("normalization")) {
    err << "measure: probabilities sum to " << io::format_double(total) << "\n";
    return kInvariantFailure;
  }
  return kPass;
}

int cmd_complementarity(const ExperimentConfig& cfg, const Flags& f, std::ostream& out, std::ostream& err) {
  const FiniteLCAGroup& group = require_group(cfg, kMaxOrder);
  const StateVector fid = resolve_fiducial(cfg, group, err);
  const ResolvedState state = resolve_state(cfg, group, fid, err);
  if (!state.pure) throw ConfigError("complementarity needs a pure input state");
  const ComplementarityReport r = verify_complementarity(group, fid, *state.pure);
  const auto unit = [&](double nats) { return f.bits ? nats_to_bits(nats) : nats; };

  Json report;
  report["partial_trace_dev"] = r.partial_trace_dev;
  report["channel_dev"] = r.channel_dev;
  report["entropy_dev"] = unit(r.entropy_dev);
  report["entropy_measurement"] = unit(r.entropy_measurement);
  report["entropy_ensemble"] = unit(r.entropy_ensemble);
  report["units"] = f.bits ? "bits" : "nats";
  io::write_json(out, report);
  const bool pass = r.partial_trace_dev <= cfg.tol("partial_trace") && r.channel_dev <= cfg.tol("channel") &&
                    r.entropy_dev <= cfg.tol("entropy");
  return pass ? kPass : kInvariantFailure;
}

RealVector read_probabilities(const Json& j, const FiniteLCAGroup& group) {
  const std::size_t points = phase_point_count(group);
  const double w = group.weights().phase;
  const Json& records = j.is_object() ? j.at("points") : j;
  if (!records.is_array() || records.size() != points) {
    throw ConfigError("probabilities file must hold " + std::to_string(points) + " phase points");
  }
  RealVector probs(static_cast<Eigen::Index>(points));
  if (records.front().is_number()) {
    for (std::size_t i = 0; i < points; ++i) probs(static_cast<Eigen::Index>(i)) = records[i].get<double>();
    return probs;
  }
  std::vector<char> seen(points, 0);
  for (const Json& rec : records) {
    const PhasePoint p = make_phase_point(group, Character{rec.at("chi").get<std::vector<int>>()},
                                          GroupElement{rec.at("g").get<std::vector<int>>()});
    const std::size_t idx = phase_index(group, p);
    if (seen[idx]) throw ConfigError("duplicate phase point in probabilities file");
    seen[idx] = 1;
    probs(static_cast<Eigen::Index>(idx)) =
        rec.contains("probability") ? rec.at("probability").get<double>() : rec.at("density").get<double>() * w;
  }
  return probs;
}

int cmd_reconstruct(ExperimentConfig cfg, const Flags& f, std::ostream& out, std::ostream& err) {
  if (f.probabilities.empty()) throw ConfigError("reconstruct needs --probabilities FILE");
  Json data;
  try {
    std::ifstream in(f.probabilities);
    if (!in) throw ConfigError("cannot open probabilities file " + f.probabilities);
    data = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("invalid probabilities file: ") + e.what());
  }
  if (!cfg.group && data.is_object() && data.contains("group")) cfg.group = parse_group(data.at("group"));
  const FiniteLCAGroup& group = require_group(cfg, kMaxOrder);
  const StateVector fid = resolve_fiducial(cfg, group, err);
  RealVector probs;
  try {
    probs = read_probabilities(data, group);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid probabilities file: ") + e.what());
  }

  try {
    const ReconstructionResult rec = reconstruct_state(group, probs, fid);
    Json report;
    report["group"] = io::to_json(group);
    report["rho"] = io::matrix_to_json(rec.rho);
    report["residual"] = rec.residual;
    report["min_eigenvalue"] = rec.min_eigenvalue;
    report["negative"] = rec.negative;
    report["used_least_squares"] = rec.used_least_squares;
    report["condition"] = rec.condition;
    io::write_json(out, report);
    if (rec.negative) err << "reconstruct: reconstructed matrix has eigenvalue " << io::format_double(rec.min_eigenvalue) << "\n";
    if (rec.residual > cfg.tol("tomography")) {
      err << "reconstruct: residual " << io::format_double(rec.residual) << " exceeds tolerance\n";
      return kInvariantFailure;
    }
    return kPass;
  } catch (const ReconstructionError& e) {
    Json report;
    report["error"] = e.what();
    Json vanishing = Json::array();
    for (std::size_t idx : e.vanishing_points()) vanishing.push_back(io::point_to_json(group, idx));
    report["vanishing_points"] = std::move(vanishing);
    io::write_json(out, report);
    err << "reconstruct: " << e.what() << "\n";
    return kReconstructionImpossible;
  }
}

int cmd_dump(const ExperimentConfig& cfg, const Flags& f, std::ostream& out, std::ostream& err) {
  Json report;
  if (f.what == "weyl") {
    const FiniteLCAGroup& group = require_group(cfg, kMaxOrder);
    report["group"] = io::to_json(group);
    Json ops = Json::array();
    for (std::size_t i = 0; i < phase_point_count(group); ++i) {
      Json rec = io::point_to_json(group, i);
      rec["matrix"] = io::matrix_to_json(weyl_matrix(group, phase_point(group, i)).matrix);
      ops.push_back(std::move(rec));
    }
    report["operators"] = std::move(ops);
  } else if (f.what == "povm") {
    const FiniteLCAGroup& group = require_group(cfg, kMaxPovmOrder);
    const CovariantPOVM povm = build_povm(group, resolve_fiducial(cfg, group, err));
    report["group"] = io::to_json(group);
    report["weight"] = povm.weight();
    Json effects = Json::array();
    for (std::size_t i = 0; i < povm.size(); ++i) {
      Json rec = io::point_to_json(group, i);
      rec["matrix"] = io::matrix_to_json(povm.effect(i));
      effects.push_back(std::move(rec));
    }
    report["effects"] = std::move(effects);
  } else if (f.what == "transform") {
    const FiniteLCAGroup& group = require_group(cfg, kMaxOrder);
    const StateVector fid = resolve_fiducial(cfg, group, err);
    report["group"] = io::to_json(group);
    report["function"] = io::to_json(hs_transform(group, resolve_state(cfg, group, fid, err).rho));
  } else if (f.what == "coherent") {
    const FiniteLCAGroup& group = require_group(cfg, kMaxOrder);
    const StateVector fid = resolve_fiducial(cfg, group, err);
    const ResolvedState state = resolve_state(cfg, group, fid, err);
    if (!state.pure) throw ConfigError("dump coherent needs a pure state");
    report["group"] = io::to_json(group);
    report["function"] = io::to_json(coherent_transform(group, fid, *state.pure));
  } else {
    throw ConfigError("--what must be one of weyl, povm, transform, coherent");
  }
  io::write_json(out, report);
  return kPass;
}

// --- cv ---------------------------------------------------------------------

Operator cv_state(const std::string& spec, int dim) {
  const auto fock = [dim](int n) {
    if (n < 0 || n >= dim) throw RegimeError("Fock level " + std::to_string(n) + " lies outside the truncation");
    Operator rho = Operator::Zero(dim, dim);
    rho(n, n) = 1.0;
    return rho;
  };
  if (spec.empty() || spec == "vacuum") return fock(0);
  if (spec.rfind("fock:", 0) == 0) return fock(std::stoi(spec.substr(5)));
  if (spec.rfind("coherent:", 0) == 0) {
    const std::string rest = spec.substr(9);
    const auto comma = rest.find(',');
    const double re = std::stod(rest.substr(0, comma));
    const double im = comma == std::string::npos ? 0.0 : std::stod(rest.substr(comma + 1));
    const Complex alpha{re, im};
    if (!cv::FockSpace(dim).in_regime(alpha)) {
      throw RegimeError("coherent amplitude |alpha|^2 = " + io::format_double(std::norm(alpha)) +
                        " exceeds N/4 = " + io::format_double(dim / 4.0));
    }
    return projector(cv::coherent_state(alpha, dim).vector);
  }
  throw ConfigError("unknown cv state '" + spec + "' (vacuum, fock:n, coherent:re,im)");
}

int cmd_husimi_grid(const Flags& f, std::ostream& out) {
  const int dim = f.dim;
  if (dim < 2) throw ConfigError("--N must be at least 2");
  const cv::Grid grid{f.radius > 0.0 ? f.radius : 3.0, f.step > 0.0 ? f.step : 0.1};
  const Operator rho = cv_state(f.state, dim);
  out << "re,im,q\n";
  for (const auto& s : cv::husimi_grid(rho, grid)) {
    out << io::format_double(s.re) << ',' << io::format_double(s.im) << ',' << io::format_double(s.q) << '\n';
  }
  return kPass;
}

int cmd_resolution_check(const ExperimentConfig& cfg, const Flags& f, std::ostream& out) {
  const int dim = f.dim;
  if (dim < 2) throw ConfigError("--N must be at least 2");
  const int block = f.block > 0 ? f.block : std::min(10, dim);
  if (block > dim) throw RegimeError("--block exceeds the truncation N");
  const cv::Grid grid{f.radius > 0.0 ? f.radius : 6.0, f.step > 0.0 ? f.step : 0.05};
  const cv::ResolutionReport r = cv::resolution_check(dim, grid, block);
  const double tol = cfg.tol("resolution");
  Json report;
  report["N"] = r.dim;
  report["radius"] = r.grid.radius;
  report["step"] = r.grid.step;
  report["block"] = r.block;
  report["points"] = r.points;
  report["max_deviation"] = r.max_deviation;
  report["vacuum_deviation"] = r.vacuum_deviation;
  report["tolerance"] = tol;
  report["pass"] = r.max_deviation <= tol;
  io::write_json(out, report);
  return r.max_deviation <= tol ? kPass : kInvariantFailure;
}

int cmd_phase_check(const ExperimentConfig& cfg, const Flags& f, std::ostream& out, std::ostream& err) {
  if (f.dim < 2) throw ConfigError("--N must be at least 2");
  if (f.block > f.dim) throw RegimeError("--block exceeds the truncation N");
  const cv::PhaseCheckReport r = cv::weyl_phase_check(f.x, f.y, f.dim, f.block);
  const double tol = cfg.tol("phase");
  Json report;
  report["x"] = r.x;
  report["y"] = r.y;
  report["N"] = r.dim;
  report["block"] = r.block;
  report["alpha"] = io::to_json(r.alpha);
  report["omega"] = io::to_json(r.omega);
  report["abs_omega"] = std::abs(r.omega);
  report["fit_residual"] = r.fit_residual;
  report["bch_phase"] = io::to_json(r.bch_phase);
  report["bch_deviation"] = r.bch_deviation;
  report["quadratic_phase"] = io::to_json(r.quadratic_phase);
  report["quadratic_deviation"] = r.quadratic_deviation;
  report["scalar_relation_holds"] = r.scalar_relation_holds(tol);
  report["in_regime"] = r.in_regime;
  io::write_json(out, report);
  if (!r.in_regime) {
    err << "phase-check: outside the validity regime (|x|,|y| <= 2, N >= 40)\n";
    return kRegimeError;
  }
  if (!r.scalar_relation_holds(tol)) {
    err << "phase-check: truncation error, e^{ixq}e^{iyp} is not a scalar multiple of D(alpha) to "
        << io::format_double(tol) << "\n";
    return kRegimeError;
  }
  return kPass;
}

void add_common(CLI::App* cmd, Flags& f, bool state, bool fiducial = true) {
  cmd->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--group", f.group, "moduli, e.g. 3,2 or {\"moduli\":[3,2]}");
  if (fiducial) cmd->add_option("--fiducial", f.fiducial, "delta0 | uniform | random | JSON vector");
  if (state) {
    cmd->add_option("--state", f.state,
                    "plus | delta0 | fiducial | maximally_mixed | random | random_mixed | JSON vector/matrix");
  }
  cmd->add_option("--seed", f.seed, "seed for random presets and suites");
  cmd->add_option("--tol", f.tol, "tolerance override name=value (repeatable)");
  cmd->add_option("--out", f.out, "write the report to this file instead of stdout");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Covariant POVMs on finite phase spaces dual(G) x G, and the oscillator example"};
  app.require_subcommand(1);
  Flags f;

  auto* verify = app.add_subcommand("verify", "run the completeness, covariance, isometry and complementarity suites");
  add_common(verify, f, false);
  verify->add_option("--samples", f.samples, "random operators/states per randomized check");

  auto* measure_cmd = app.add_subcommand("measure", "outcome density of the covariant POVM");
  add_common(measure_cmd, f, true);

  auto* comp = app.add_subcommand("complementarity", "compare measurement and ensemble channels on a pure state");
  add_common(comp, f, true);
  comp->add_flag("--bits", f.bits, "report entropies in bits");

  auto* rec = app.add_subcommand("reconstruct", "linear-inversion state reconstruction from probabilities");
  add_common(rec, f, false);
  rec->add_option("--probabilities", f.probabilities, "JSON file (measure output or records)");

  auto* dump = app.add_subcommand("dump", "print Weyl operators, POVM effects or phase-space transforms");
  add_common(dump, f, true);
  dump->add_option("--what", f.what, "weyl | povm | transform | coherent");

  auto* cvcmd = app.add_subcommand("cv", "truncated Fock-space oscillator checks");
  cvcmd->require_subcommand(1);
  auto* hgrid = cvcmd->add_subcommand("husimi-grid", "CSV of the Husimi function on a square grid");
  auto* rcheck = cvcmd->add_subcommand("resolution-check", "quadrature of (1/pi) |a><a| d^2a against the identity");
  auto* pcheck = cvcmd->add_subcommand("phase-check", "scalar relating e^{ixq}e^{iyp} and D(alpha)");
  for (auto* c : {hgrid, rcheck, pcheck}) {
    c->add_option("--N", f.dim, "Fock truncation");
    c->add_option("--tol", f.tol, "tolerance override name=value");
    c->add_option("--out", f.out, "output file");
  }
  hgrid->add_option("--state", f.state, "vacuum | fock:n | coherent:re,im");
  for (auto* c : {hgrid, rcheck}) {
    c->add_option("--radius", f.radius, "grid half-width");
    c->add_option("--step", f.step, "grid spacing");
  }
  rcheck->add_option("--block", f.block, "compare the top-left block of this size");
  pcheck->add_option("--x", f.x, "position-shift parameter");
  pcheck->add_option("--y", f.y, "momentum-shift parameter");
  pcheck->add_option("--block", f.block, "number of low Fock columns used in the fit");

  std::vector<const char*> argv{"cpovm"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kPass;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kPass;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  std::ofstream file;
  try {
    if (!f.out.empty()) {
      file.open(f.out);
      if (!file) throw ConfigError("cannot open output file " + f.out);
    }
    std::ostream& sink = f.out.empty() ? out : file;
    const ExperimentConfig cfg = load_config(f);
    if (verify->parsed()) return cmd_verify(cfg, f, sink, err);
    if (measure_cmd->parsed()) return cmd_measure(cfg, sink, err);
    if (comp->parsed()) return cmd_complementarity(cfg, f, sink, err);
    if (rec->parsed()) return cmd_reconstruct(cfg, f, sink, err);
    if (dump->parsed()) return cmd_dump(cfg, f, sink, err);
    if (hgrid->parsed()) return cmd_husimi_grid(f, sink);
    if (rcheck->parsed()) return cmd_resolution_check(cfg, f, sink);
    if (pcheck->parsed()) return cmd_phase_check(cfg, f, sink, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const RegimeError& e) {
    err << "error: " << e.what() << "\n";
    return kRegimeError;
  } catch (const StructuralError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace cpovm::cli
