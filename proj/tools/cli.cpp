#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "gatefid/channel.hpp"
#include "gatefid/fidelity.hpp"
#include "gatefid/io.hpp"
#include "gatefid/minimum.hpp"
#include "gatefid/nonuniqueness.hpp"
#include "gatefid/sampling.hpp"

namespace gatefid::cli {

namespace {

using io::json;

/// Thrown by commands whose result is a failed check rather than an error.
struct CheckFailed {
  std::string artifact;
  std::string summary;
};

struct Output {
  std::string artifact;
  std::string summary;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::uint64_t parse_seed(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used, 0);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw CLI::ValidationError(what, "expected an unsigned integer, got '" + text + "'");
  }
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("GATEFID_SEED"); env != nullptr && *env != '\0') {
    return parse_seed(env, "GATEFID_SEED");
  }
  return kDefaultSeed;
}

struct Config {
  std::string seed_text;
  unsigned threads = 0;
  std::string out;
  std::string format = "json";

  // channel source
  std::string channel;
  std::optional<double> p;
  std::optional<Index> d;
  std::string unitary;

  std::string other;
  std::string state;
  std::optional<Index> basis;
  std::string net;
  std::string to = "choi";
  std::string channel_out;

  Index n = 10000;
  std::optional<double> eps;
  std::optional<double> tol;
  std::optional<int> qubits;
  std::optional<double> q;
  std::optional<double> avg;
  double lipschitz = lipschitz_constant();
  double confidence = 0.99;
  std::int64_t max_states = 100000;
  std::int64_t patience = 256;
  Index starts = 8;
  std::string family = "unital";
  std::vector<Index> dims{2, 4, 8, 16, 32, 64, 128, 256};
  std::vector<double> eps_grid = kDefaultEpsGrid;
  Index terms = 8;

  RngSpec rng() const {
    RngSpec spec;
    spec.seed = seed_text.empty() ? default_seed() : parse_seed(seed_text, "--seed");
    return spec;
  }
};

struct LoadedChannel {
  QuantumChannel channel;
  json description;  // canonical form used for input hashes
};

LoadedChannel load_channel(const Config& c, double tol = kChannelTolerance) {
  if (!c.channel.empty()) {
    if (c.p) throw CLI::ValidationError("--channel", "give either --channel or --p/--d, not both");
    QuantumChannel ch = io::channel_from_json(io::read_json(c.channel), tol);
    if (ch.dim_in() != ch.dim_out()) {
      throw DimensionError("channel: the command line tool requires dim_in == dim_out");
    }
    json desc = io::channel_to_json(ch);
    return {std::move(ch), std::move(desc)};
  }
  if (!c.p || !c.d) throw CLI::RequiredError("--channel or --p with --d");
  QuantumChannel ch = depolarizing(*c.p, *c.d);
  return {ch, json{{"depolarizing", {{"p", *c.p}, {"d", *c.d}}}}};
}

Matrix load_unitary(const Config& c, Index d) {
  if (c.unitary.empty()) return Matrix::Identity(d, d);
  const json j = io::read_json(c.unitary);
  const Matrix u = j.is_object() && j.contains("unitary") ? io::matrix_from_json(j["unitary"], "unitary")
                                                          : io::matrix_from_json(j, "unitary");
  if (u.rows() != d || u.cols() != d) {
    throw DimensionError("unitary: expected " + std::to_string(d) + "x" + std::to_string(d));
  }
  require_unitary(u, "unitary");
  return u;
}

PureState load_state(const Config& c, Index d) {
  if (!c.state.empty()) {
    const json j = io::read_json(c.state);
    Vector v = j.is_object() && j.contains("amplitudes") ? io::vector_from_json(j["amplitudes"], "amplitudes")
                                                          : io::vector_from_json(j, "amplitudes");
    if (v.size() != d) throw DimensionError("state: expected " + std::to_string(d) + " amplitudes");
    return PureState(std::move(v));
  }
  if (!c.basis) throw CLI::RequiredError("--state or --basis");
  return PureState::basis(d, *c.basis);
}

json record(const std::string& quantity, double value, Index d, const json& inputs,
            std::optional<std::uint64_t> seed = std::nullopt) {
  json r{{"quantity", quantity}, {"value", value}, {"d", d}, {"inputs_hash", io::inputs_hash(inputs)}};
  if (seed) r["seed"] = *seed;
  return r;
}

json report_json(const CptpReport& r) {
  return {{"is_cp", r.is_cp},
          {"is_tp", r.is_tp},
          {"min_eigenvalue", r.min_eigenvalue},
          {"tp_residual", r.tp_residual},
          {"hermitian_residual", r.hermitian_residual},
          {"tolerance", r.tolerance}};
}

json stats_json(const FidelityStats& s) {
  return {{"n", s.n},
          {"mean", s.mean},
          {"variance", s.variance},
          {"min", s.min},
          {"max", s.max},
          {"std_error", s.std_error},
          {"seed", s.rng.seed},
          {"algorithm_id", s.rng.algorithm_id}};
}

// channel ---------------------------------------------------------------

Output channel_validate(const Config& c) {
  if (c.channel.empty()) throw CLI::RequiredError("--channel");
  const double tol = c.tol.value_or(kChannelTolerance);
  const KrausMap map = io::kraus_map_from_json(io::read_json(c.channel));
  const CptpReport r = validate_cptp(choi_from_kraus(map), tol);
  json j = report_json(r);
  j["dim_in"] = map.dim_in();
  j["dim_out"] = map.dim_out();
  j["kraus_count"] = map.size();
  j["ok"] = r.ok();
  std::string summary = r.ok() ? "valid channel" : "invalid channel";
  summary += ": dim " + std::to_string(map.dim_in()) + " -> " + std::to_string(map.dim_out()) +
             ", min eigenvalue " + fmt(r.min_eigenvalue) + ", tp residual " + fmt(r.tp_residual);
  if (!r.ok()) {
    summary += r.is_cp ? " (not trace preserving)" : " (not completely positive)";
    throw CheckFailed{dump(j), summary};
  }
  return {dump(j), summary};
}

Output channel_make_depolarizing(const Config& c) {
  if (!c.p || !c.d) throw CLI::RequiredError("--p and --d");
  const QuantumChannel ch = depolarizing(*c.p, *c.d);
  return {dump(io::channel_to_json(ch)), "depolarizing channel p=" + fmt(*c.p) + " d=" +
                                             std::to_string(*c.d) + " with " +
                                             std::to_string(ch.size()) + " Kraus operators"};
}

Output channel_convert(const Config& c) {
  if (c.channel.empty()) throw CLI::RequiredError("--channel");
  const json in = io::read_json(c.channel);
  const QuantumChannel ch = io::channel_from_json(in, c.tol.value_or(kChannelTolerance));
  const ChoiMatrix choi = choi_from_kraus(ch);
  const QuantumChannel back = kraus_from_choi(choi);
  const double distance = choi_distance(ch, back);
  json out;
  if (c.to == "choi") {
    out = io::choi_to_json(choi);
  } else if (c.to == "kraus") {
    out = io::channel_to_json(back);
  } else {
    throw CLI::ValidationError("--to", "expected choi or kraus");
  }
  return {dump(out), "converted to " + c.to + " form; round-trip Choi distance " + fmt(distance)};
}

// fidelity --------------------------------------------------------------

Output fidelity_point(const Config& c) {
  const LoadedChannel e = load_channel(c);
  const Index d = e.channel.dim_in();
  const Matrix u = load_unitary(c, d);
  const PureState phi = load_state(c, d);
  const double f = gate_fidelity_pure(e.channel, u, phi);
  const json inputs{{"command", "fidelity point"},
                    {"channel", e.description},
                    {"unitary", io::to_json(u)},
                    {"state", io::to_json(phi.amplitudes())}};
  return {dump(record("gate_fidelity", f, d, inputs)), "gate_fidelity = " + fmt(f)};
}

Output fidelity_avg(const Config& c) {
  const LoadedChannel e = load_channel(c);
  const Index d = e.channel.dim_in();
  const Matrix u = load_unitary(c, d);
  const double f = average_gate_fidelity(e.channel, u);
  const json inputs{{"command", "fidelity avg"}, {"channel", e.description}, {"unitary", io::to_json(u)}};
  return {dump(record("average_gate_fidelity", f, d, inputs)), "average_gate_fidelity = " + fmt(f)};
}

Output fidelity_stats(const Config& c) {
  const LoadedChannel e = load_channel(c);
  const Index d = e.channel.dim_in();
  const Matrix u = load_unitary(c, d);
  const RngSpec rng = c.rng();
  const FidelityStats s = mc_fidelity_stats(e.channel, u, c.n, rng, c.threads);
  const double average = average_gate_fidelity(e.channel, u);
  const json inputs{{"command", "fidelity stats"},
                    {"channel", e.description},
                    {"unitary", io::to_json(u)},
                    {"n", c.n},
                    {"seed", rng.seed}};
  json j = record("gate_fidelity_stats", s.mean, d, inputs, rng.seed);
  j["stats"] = stats_json(s);
  j["average_closed_form"] = average;
  j["variance_bound_exact"] = variance_bound_exact(static_cast<double>(d));
  j["variance_bound_concentration"] = variance_bound_concentration(static_cast<double>(d));
  j["l2_distance_to_depolarizing"] = l2_distance_to_depolarizing(s);
  return {dump(j), "mean = " + fmt(s.mean) + " +- " + fmt(s.std_error) + ", variance = " + fmt(s.variance) +
                       ", closed-form average = " + fmt(average)};
}

// bounds ----------------------------------------------------------------

Output bounds_variance(const Config& c) {
  if (c.d.has_value() == c.qubits.has_value()) throw CLI::ValidationError("give exactly one of --d and --qubits");
  json j;
  double exact = 0.0;
  double conc = 0.0;
  if (c.qubits) {
    if (*c.qubits < 1 || *c.qubits > 1000) throw CLI::ValidationError("--qubits", "expected 1..1000");
    const double d = std::ldexp(1.0, *c.qubits);
    exact = variance_bound_exact(d);
    conc = variance_bound_concentration_qubits(*c.qubits);
    j = {{"qubits", *c.qubits}, {"d", d}};
  } else {
    const FidelityBoundSet b = variance_bounds(static_cast<double>(*c.d));
    exact = b.variance_bound_exact;
    conc = b.variance_bound_concentration;
    j = {{"d", *c.d}};
  }
  j["quantity"] = "variance_bounds";
  j["variance_bound_exact"] = exact;
  j["variance_bound_concentration"] = conc;
  j["constant"] = concentration_constant();
  j["inputs_hash"] = io::inputs_hash(json{{"command", "bounds variance"}, {"d", c.d ? json(*c.d) : json()},
                                          {"qubits", c.qubits ? json(*c.qubits) : json()}});
  char line[160];
  std::snprintf(line, sizeof line, "variance_bound_concentration = %.3g\nvariance_bound_exact = %.3g", conc,
                exact);
  return {dump(j), line};
}

Output bounds_levy(const Config& c) {
  if (!c.d || !c.eps) throw CLI::RequiredError("--d and --eps");
  const ConcentrationBound b = levy_bound(static_cast<double>(*c.d), *c.eps, c.lipschitz);
  json j{{"quantity", "levy_bound"},
         {"d", *c.d},
         {"epsilon", b.epsilon},
         {"lipschitz", b.lipschitz},
         {"two_sided_bound", b.two_sided_bound},
         {"one_sided_bound", b.one_sided_bound},
         {"effective_bound", std::min(1.0, b.two_sided_bound)}};
  j["inputs_hash"] = io::inputs_hash(json{{"command", "bounds levy"}, {"d", *c.d}, {"eps", *c.eps},
                                          {"lipschitz", c.lipschitz}});
  return {dump(j), "P(|F - avg| >= " + fmt(b.epsilon) + ") <= " + fmt(std::min(1.0, b.two_sided_bound))};
}

// nonuniq ---------------------------------------------------------------

json verification_json(const PairVerification& v) {
  return {{"samples", v.samples},
          {"fidelity_residual_max", v.fidelity_residual_max},
          {"fidelity_std_R", v.fidelity_std_r},
          {"choi_distance", v.choi_distance},
          {"adjoint_choi_distance", v.adjoint_choi_distance},
          {"depolarizing_distance_R", v.depolarizing_distance_r},
          {"cptp_reports", {{"Q", report_json(v.q_report)}, {"R", report_json(v.r_report)}}}};
}

Output nonuniq_construct(const Config& c) {
  const LoadedChannel q = load_channel(c);
  const Index d = q.channel.dim_in();
  const GOperator g = build_g_operator(d);
  VerifyOptions options;
  options.samples = c.n;
  options.rng = c.rng();
  options.threads = c.threads;
  const NonUniqPair pair = c.eps ? perturb_channel(q.channel, *c.eps, g, options)
                                 : perturb_channel(q.channel, g, options);
  const PairVerification& v = pair.verification;
  json cert = verification_json(v);
  cert["d"] = d;
  cert["p_or_channel_hash"] =
      c.channel.empty() ? json(*c.p) : json(io::inputs_hash(q.description));
  cert["epsilon"] = pair.epsilon;
  cert["max_epsilon"] = pair.max_epsilon;
  cert["choi_normalization"] = kChoiNormalization;
  cert["seed"] = options.rng.seed;
  cert["R"] = io::channel_to_json(pair.r);
  if (!c.channel_out.empty()) io::write_text(c.channel_out, dump(io::channel_to_json(pair.r)));
  return {dump(cert), "R = Q + eps G with eps = " + fmt(pair.epsilon) + ": fidelity_residual_max = " +
                          fmt(v.fidelity_residual_max) + ", choi_distance = " + fmt(v.choi_distance) +
                          ", depolarizing_distance_R = " + fmt(v.depolarizing_distance_r)};
}

Output nonuniq_verify(const Config& c) {
  if (c.other.empty()) throw CLI::RequiredError("--other");
  const LoadedChannel q = load_channel(c);
  const QuantumChannel r = io::channel_from_json(io::read_json(c.other));
  VerifyOptions options;
  options.samples = c.n;
  options.rng = c.rng();
  options.threads = c.threads;
  const PairVerification v = verify_pair(q.channel, r, options);
  const double tol = c.tol.value_or(1e-10);
  const bool same = v.fidelity_residual_max <= tol;
  const bool distinct = v.choi_distance > 1e-6;
  json j = verification_json(v);
  j["d"] = q.channel.dim_in();
  j["tolerance"] = tol;
  j["same_fidelity"] = same;
  j["distinct"] = distinct;
  j["seed"] = options.rng.seed;
  std::string summary = "fidelity_residual_max = " + fmt(v.fidelity_residual_max) + ", choi_distance = " +
                        fmt(v.choi_distance);
  if (!same || !distinct || !v.q_report.ok() || !v.r_report.ok()) {
    throw CheckFailed{dump(j), summary + " (not a valid equal-fidelity pair)"};
  }
  return {dump(j), summary + " (equal gate fidelity, distinct channels)"};
}

// min -------------------------------------------------------------------

Output min_net_build(const Config& c) {
  if (!c.d || !c.eps) throw CLI::RequiredError("--d and --eps");
  NetOptions options;
  options.confidence = c.confidence;
  options.max_states = c.max_states;
  options.patience = c.patience;
  const StateNet net = build_net(*c.d, *c.eps, c.rng(), options);
  return {dump(io::net_to_json(net)), "net with " + std::to_string(net.states.size()) + " states, coverage " +
                                          fmt(net.coverage_confidence) + " from " +
                                          std::to_string(net.validation_samples) + " validation samples"};
}

Output min_net_min(const Config& c) {
  if (c.net.empty()) throw CLI::RequiredError("--net");
  const LoadedChannel e = load_channel(c);
  const Matrix u = load_unitary(c, e.channel.dim_in());
  const json net_json = io::read_json(c.net);
  const StateNet net = io::net_from_json(net_json);
  const MinEstimate m = net_minimum(e.channel, u, net, c.threads);
  json j{{"quantity", "net_minimum"},
         {"d", net.d},
         {"net_min", m.net_min},
         {"lipschitz_lower_bound", m.lipschitz_lower_bound},
         {"epsilon", net.epsilon},
         {"argmin_index", m.argmin_index},
         {"argmin_state", io::to_json(m.argmin_state.amplitudes())},
         {"method", m.method}};
  j["inputs_hash"] = io::inputs_hash(
      json{{"command", "min net-min"}, {"channel", e.description}, {"unitary", io::to_json(u)}, {"net", net_json}});
  return {dump(j), "net_min = " + fmt(m.net_min) + ", lower bound = " + fmt(m.lipschitz_lower_bound)};
}

Output min_effective(const Config& c) {
  if (!c.q) throw CLI::RequiredError("--q");
  double average = 0.0;
  double d = 0.0;
  json inputs{{"command", "min effective"}, {"q", *c.q}};
  if (c.avg) {
    if (!c.d) throw CLI::RequiredError("--d");
    average = *c.avg;
    d = static_cast<double>(*c.d);
    inputs["avg"] = average;
    inputs["d"] = *c.d;
  } else {
    const LoadedChannel e = load_channel(c);
    const Matrix u = load_unitary(c, e.channel.dim_in());
    average = average_gate_fidelity(e.channel, u);
    d = static_cast<double>(e.channel.dim_in());
    inputs["channel"] = e.description;
    inputs["unitary"] = io::to_json(u);
  }
  const EffectiveMinimum m = effective_minimum(average, *c.q, d);
  json j{{"quantity", "effective_minimum"},
         {"d", d},
         {"average", m.average},
         {"q", m.q},
         {"epsilon", m.epsilon},
         {"lower", m.lower},
         {"upper", m.upper},
         {"vacuous", m.vacuous},
         {"inputs_hash", io::inputs_hash(inputs)}};
  return {dump(j), "effective minimum in [" + fmt(m.lower) + ", " + fmt(m.upper) + "] (eps = " + fmt(m.epsilon) +
                       (m.vacuous ? ", vacuous)" : ")")};
}

Output min_reference(const Config& c) {
  const LoadedChannel e = load_channel(c);
  const Matrix u = load_unitary(c, e.channel.dim_in());
  const RngSpec rng = c.rng();
  const ReferenceMinimum m = reference_minimum(e.channel, u, c.starts, rng);
  const json inputs{{"command", "min reference"},
                    {"channel", e.description},
                    {"unitary", io::to_json(u)},
                    {"starts", c.starts},
                    {"seed", rng.seed}};
  json j = record("reference_minimum", m.value, e.channel.dim_in(), inputs, rng.seed);
  j["state"] = io::to_json(m.state.amplitudes());
  j["starts"] = m.starts;
  return {dump(j), "reference_minimum = " + fmt(m.value)};
}

// report ----------------------------------------------------------------

Output report_convergence(const Config& c) {
  ChannelFamily family;
  if (c.family == "unital") {
    const Index terms = c.terms;
    family = [terms](Index d, Rng& rng) { return random_unital_channel(d, terms, rng); };
  } else if (c.family == "depolarizing") {
    family = [](Index d, Rng& rng) { return depolarizing(rng.uniform(), d); };
  } else {
    throw CLI::ValidationError("--family", "expected unital or depolarizing");
  }
  const RngSpec rng = c.rng();
  const auto rows = convergence_report(family, c.dims, c.n, rng, c.eps_grid, c.threads);
  std::string artifact;
  if (c.format == "csv") {
    artifact = convergence_csv(rows);
  } else {
    json list = json::array();
    for (const ConvergenceRow& r : rows) {
      list.push_back({{"d", r.d},
                      {"n", r.n},
                      {"mean", r.mean},
                      {"variance", r.variance},
                      {"std", r.stddev},
                      {"var_bound_exact", r.var_bound_exact},
                      {"var_bound_conc", r.var_bound_conc},
                      {"eps", r.eps},
                      {"levy_bound", r.levy_bound},
                      {"emp_fraction", r.emp_fraction},
                      {"seed", r.seed}});
    }
    artifact = dump(json{{"family", c.family}, {"rows", std::move(list)}});
  }
  return {artifact, std::to_string(rows.size()) + " rows for " + std::to_string(c.dims.size()) +
                        " dimensions, family " + c.family};
}

// wiring ----------------------------------------------------------------

void add_channel_source(CLI::App* cmd, Config& c) {
  cmd->add_option("--channel", c.channel, "Channel JSON file (Kraus or Choi layout)");
  cmd->add_option("--p", c.p, "Depolarizing parameter, instead of --channel");
  cmd->add_option("--d", c.d, "Dimension")->check(CLI::PositiveNumber);
  cmd->add_option("--unitary", c.unitary, "Target unitary JSON file (default identity)");
}

void add_sampling(CLI::App* cmd, Config& c) {
  cmd->add_option("--n", c.n, "Number of Haar samples")->capture_default_str()->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  std::function<Output(const Config&)> action;
  CLI::App app{"Gate fidelity analysis of quantum channels", "gatefid"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", c.seed_text, "RNG seed (default 0x5EED, or GATEFID_SEED)");
  app.add_option("--threads", c.threads, "Worker threads (0 = available parallelism)");
  app.add_option("--out", c.out, "Artifact path (default stdout)");
  app.add_option("--format", c.format, "Artifact format")->check(CLI::IsMember({"json", "csv"}));

  auto bind = [&](CLI::App* cmd, Output (*fn)(const Config&)) { cmd->callback([&action, fn] { action = fn; }); };

  CLI::App* channel = app.add_subcommand("channel", "Channel files")->require_subcommand(1);
  {
    CLI::App* v = channel->add_subcommand("validate", "Check complete positivity and trace preservation");
    v->add_option("--channel", c.channel, "Channel JSON file")->required();
    v->add_option("--tol", c.tol, "Tolerance");
    bind(v, channel_validate);
    CLI::App* m = channel->add_subcommand("make-depolarizing", "Write a depolarizing channel");
    m->add_option("--p", c.p, "Depolarizing parameter")->required();
    m->add_option("--d", c.d, "Dimension")->required()->check(CLI::PositiveNumber);
    bind(m, channel_make_depolarizing);
    CLI::App* k = channel->add_subcommand("convert", "Convert between Kraus and Choi layouts");
    k->add_option("--channel", c.channel, "Channel JSON file")->required();
    k->add_option("--to", c.to, "Target layout")->capture_default_str()->check(CLI::IsMember({"choi", "kraus"}));
    k->add_option("--tol", c.tol, "Tolerance");
    bind(k, channel_convert);
  }

  CLI::App* fidelity = app.add_subcommand("fidelity", "Gate fidelity")->require_subcommand(1);
  {
    CLI::App* p = fidelity->add_subcommand("point", "Gate fidelity at one pure state");
    add_channel_source(p, c);
    p->add_option("--state", c.state, "State JSON file");
    p->add_option("--basis", c.basis, "Computational basis state index");
    bind(p, fidelity_point);
    CLI::App* a = fidelity->add_subcommand("avg", "Closed-form Haar average");
    add_channel_source(a, c);
    bind(a, fidelity_avg);
    CLI::App* s = fidelity->add_subcommand("stats", "Monte Carlo statistics over Haar states");
    add_channel_source(s, c);
    add_sampling(s, c);
    bind(s, fidelity_stats);
  }

  CLI::App* bounds = app.add_subcommand("bounds", "Analytic bounds")->require_subcommand(1);
  {
    CLI::App* v = bounds->add_subcommand("variance", "Variance bounds");
    v->add_option("--d", c.d, "Dimension")->check(CLI::Range(Index{2}, std::numeric_limits<Index>::max()));
    v->add_option("--qubits", c.qubits, "Number of qubits (d = 2^n)");
    bind(v, bounds_variance);
    CLI::App* l = bounds->add_subcommand("levy", "Two-sided concentration bound");
    l->add_option("--d", c.d, "Dimension")->required();
    l->add_option("--eps", c.eps, "Deviation")->required();
    l->add_option("--lipschitz", c.lipschitz, "Lipschitz constant")->capture_default_str();
    bind(l, bounds_levy);
  }

  CLI::App* nonuniq = app.add_subcommand("nonuniq", "Channels with equal gate fidelity")->require_subcommand(1);
  {
    CLI::App* k = nonuniq->add_subcommand("construct", "Build R = Q + eps G and certify it");
    add_channel_source(k, c);
    k->add_option("--eps", c.eps, "Perturbation size (default: largest admissible)");
    k->add_option("--channel-out", c.channel_out, "Also write R to this file");
    add_sampling(k, c);
    bind(k, nonuniq_construct);
    CLI::App* v = nonuniq->add_subcommand("verify", "Compare the gate fidelity of two channels");
    add_channel_source(v, c);
    v->add_option("--other", c.other, "Second channel JSON file")->required();
    v->add_option("--tol", c.tol, "Fidelity tolerance (default 1e-10)");
    add_sampling(v, c);
    bind(v, nonuniq_verify);
  }

  CLI::App* min = app.add_subcommand("min", "Minimum gate fidelity")->require_subcommand(1);
  {
    CLI::App* b = min->add_subcommand("net-build", "Build a validated epsilon-net of pure states");
    b->add_option("--d", c.d, "Dimension")->required()->check(CLI::PositiveNumber);
    b->add_option("--eps", c.eps, "Resolution")->required();
    b->add_option("--confidence", c.confidence, "Coverage confidence")->capture_default_str();
    b->add_option("--max-states", c.max_states, "State budget")->capture_default_str();
    b->add_option("--patience", c.patience, "Consecutive rejections that end packing")->capture_default_str();
    bind(b, min_net_build);
    CLI::App* m = min->add_subcommand("net-min", "Minimum over a net with the Lipschitz lower bound");
    add_channel_source(m, c);
    m->add_option("--net", c.net, "Net JSON file")->required();
    bind(m, min_net_min);
    CLI::App* e = min->add_subcommand("effective", "Effective minimum interval");
    add_channel_source(e, c);
    e->add_option("--avg", c.avg, "Average fidelity, instead of a channel");
    e->add_option("--q", c.q, "Tolerated measure Q in (0, 1)")->required();
    bind(e, min_effective);
    CLI::App* r = min->add_subcommand("reference", "Multi-start local search for the minimum");
    add_channel_source(r, c);
    r->add_option("--starts", c.starts, "Haar starting states")->capture_default_str();
    bind(r, min_reference);
  }

  CLI::App* report = app.add_subcommand("report", "Tabular reports")->require_subcommand(1);
  {
    CLI::App* v = report->add_subcommand("convergence", "Fidelity spread against dimension");
    v->add_option("--family", c.family, "unital or depolarizing")->capture_default_str();
    v->add_option("--dims", c.dims, "Ascending dimensions")->delimiter(',');
    v->add_option("--eps", c.eps_grid, "Deviation grid")->delimiter(',');
    v->add_option("--terms", c.terms, "Unitaries per unital channel")->capture_default_str();
    add_sampling(v, c);
    bind(v, report_convergence);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream e_out;
    const int code = app.exit(e, o, e_out);
    out << o.str();
    err << e_out.str();
    return code == 0 ? kOk : kUsage;
  }

  try {
    const Output result = action(c);
    if (c.out.empty()) {
      out << result.artifact;
      err << result.summary << "\n";
    } else {
      io::write_text(c.out, result.artifact);
      out << result.summary << "\n";
    }
    return kOk;
  } catch (const CheckFailed& f) {
    if (c.out.empty()) {
      out << f.artifact;
    } else {
      io::write_text(c.out, f.artifact);
    }
    err << f.summary << "\n";
    return kValidation;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const gatefid::Error& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const io::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
}

}  // namespace gatefid::cli
