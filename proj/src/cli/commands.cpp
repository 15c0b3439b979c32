#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "sepwitness/casestudy.hpp"
#include "sepwitness/cli.hpp"

namespace sepwitness::cli {

using nlohmann::json;

namespace {

struct CommonFlags {
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 42;
  std::optional<int> jmax;
  std::optional<int> cutoff;
  double tolerance = kViolation;
  bool timing = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, const std::string& default_format) {
  f.format = default_format;
  cmd->add_option("--out", f.out, "write the report here (atomically) instead of stdout");
  cmd->add_option("--format", f.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--seed", f.seed, "random seed")->capture_default_str();
  cmd->add_option("--jmax", f.jmax, "largest 2j accepted by the d-matrix engine")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--cutoff", f.cutoff, "Fock cutoff for oscillator states")->check(CLI::Range(2, 400));
  cmd->add_option("--tolerance", f.tolerance, "violation threshold on the margin")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_flag("--timing", f.timing, "add wall-clock timing to the report (not reproducible)");
}

WignerConfig wigner_config(const CommonFlags& f) {
  WignerConfig cfg;
  if (const char* env = std::getenv("SEPWITNESS_JMAX")) {
    try {
      std::size_t used = 0;
      cfg.j_max = std::stoi(env, &used);
      if (used != std::string(env).size() || cfg.j_max < 0) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw ValidationError(std::string("SEPWITNESS_JMAX is not a nonnegative integer: ") + env);
    }
  }
  if (f.jmax) cfg.j_max = *f.jmax;
  return cfg;
}

// NaN and infinities are not JSON numbers; they become null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string csv_line(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ',';
    s += cells[i];
  }
  return s + '\n';
}

void emit(const CommonFlags& f, const std::string& content, std::ostream& out) {
  if (f.out.empty()) {
    out << content;
  } else {
    write_atomically(f.out, content);
  }
}

json envelope(const std::string& command, const std::string& digest, json inputs, json result) {
  return json{{"tool", "sepwitness"},
              {"version", kToolVersion},
              {"command", command},
              {"input_digest", "sha256:" + digest},
              {"inputs", std::move(inputs)},
              {"result", std::move(result)}};
}

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// witness

struct WitnessFlags {
  std::string state_path;
  std::string criterion;
  double alpha = 1.0;
  double beta = 1.0;
  std::string rhs = "general";
  std::string hw_mode = "fixed";
};

// Criterion names. The numbered ids are accepted for compatibility with
// earlier scripts.
const std::map<std::string, std::string>& criterion_names() {
  static const std::map<std::string, std::string> names{
      {"hw", "hw"},       {"general", "general"}, {"sum", "sum"},   {"spin", "spin"},
      {"eq2", "hw"},      {"eq7", "general"},     {"eq8", "sum"},   {"eq9", "spin"}};
  return names;
}

json witness_json(const WitnessReport& r, double tol) {
  return json{{"lhs", num(r.lhs)},       {"rhs", num(r.rhs)},       {"margin", num(r.margin)},
              {"violated", r.margin < -tol}, {"c1", num(r.c1)},     {"c2", num(r.c2)},
              {"var_u", num(r.var_u)},   {"var_v", num(r.var_v)},   {"alpha", num(r.config.alpha)},
              {"beta", num(r.config.beta)}};
}

const ObservablePair& pairs_for(const StateSpec& spec, std::optional<ObservablePair>& storage) {
  if (spec.pairs) return *spec.pairs;
  if (spec.spins) {
    storage = jkp_pairs(spec.spins->first, spec.spins->second);
  } else if (spec.cutoff) {
    storage = quadrature_pairs(*spec.cutoff);
  } else {
    throw ValidationError("state has no default observables; add \"pairs\" to the state file");
  }
  return *storage;
}

int cmd_witness(const CommonFlags& f, const WitnessFlags& w, std::ostream& out) {
  const auto t0 = Clock::now();
  const std::string canonical = criterion_names().at(w.criterion);
  std::ifstream in(w.state_path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + w.state_path);
  std::stringstream raw;
  raw << in.rdbuf();
  json state_json;
  try {
    state_json = json::parse(raw.str());
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  const auto spec = parse_state_spec(state_json, ParseOptions{f.cutoff, f.seed});

  json result;
  WitnessReport verdict;
  if (canonical == "hw") {
    if (!spec.cutoff) throw ValidationError("the hw criterion needs an oscillator state");
    const HwMode mode = w.hw_mode == "fixed" ? HwMode::FixedBound : HwMode::StateDependent;
    verdict = hw_criterion(spec.state, *spec.cutoff, mode);
    result = witness_json(verdict, f.tolerance);
    result["mode"] = to_string(mode);
    result["cutoff"] = *spec.cutoff;
    result["edge_weight"] = num(fock_edge_weight(spec.state, *spec.cutoff));
  } else if (canonical == "spin") {
    if (!spec.spins) throw ValidationError("the spin criterion needs a two-spin state");
    const auto jkp = jkp_scenario(spec.state, spec.spins->first, spec.spins->second);
    const SpinRhsMode mode = w.rhs == "symmetric" ? SpinRhsMode::Symmetric : SpinRhsMode::General;
    verdict = jkp.witness.in(mode);
    result = witness_json(verdict, f.tolerance);
    result["rhs_mode"] = to_string(mode);
    result["general"] = witness_json(jkp.witness.general, f.tolerance);
    result["symmetric"] = witness_json(jkp.witness.symmetric, f.tolerance);
    result["jx1"] = num(jkp.jx1);
    result["jx2"] = num(jkp.jx2);
    result["jx_symmetric"] = jkp.symmetric;
    result["two_j1"] = spec.spins->first.two_j();
    result["two_j2"] = spec.spins->second.two_j();
  } else {
    std::optional<ObservablePair> storage;
    const auto& pairs = pairs_for(spec, storage);
    const WitnessConfig cfg = canonical == "sum" ? WitnessConfig{1.0, 1.0} : WitnessConfig{w.alpha, w.beta};
    verdict = canonical == "sum" ? sum_criterion(spec.state, pairs) : general_criterion(spec.state, pairs, cfg);
    result = witness_json(verdict, f.tolerance);
    const auto opt = optimize_alpha_beta(spec.state, pairs);
    result["optimal"] = json{{"alpha", num(opt.alpha)},
                             {"beta", num(opt.beta)},
                             {"min_eigenvalue", num(opt.min_eigenvalue)},
                             {"violated", opt.min_eigenvalue < -f.tolerance}};
    if (spec.ensemble) {
      const auto dec = decomposition_check(*spec.ensemble, pairs, cfg);
      result["decomposition"] = json{{"s", num(dec.s)},
                                     {"s_u", num(dec.s_u)},
                                     {"s_v", num(dec.s_v)},
                                     {"term_variance_sum", num(dec.term_variance_sum)},
                                     {"residual", num(dec.residual)}};
    }
  }
  result["criterion"] = canonical;
  result["tolerance"] = f.tolerance;
  result["state_kind"] = spec.kind;
  result["dims"] = dims_of(spec.state).to_string();

  json inputs{{"state_file", std::filesystem::path(w.state_path).filename().string()},
              {"criterion", canonical},
              {"alpha", w.alpha},
              {"beta", w.beta},
              {"rhs", w.rhs},
              {"hw_mode", w.hw_mode},
              {"seed", f.seed}};
  if (f.cutoff) inputs["cutoff"] = *f.cutoff;

  if (f.format == "csv") {
    std::string s = csv_line({"criterion", "lhs", "rhs", "margin", "violated"});
    s += csv_line({canonical, format_double(verdict.lhs), format_double(verdict.rhs),
                   format_double(verdict.margin), verdict.margin < -f.tolerance ? "true" : "false"});
    emit(f, s, out);
    return 0;
  }
  auto report = envelope("witness", sha256_hex(raw.str()), std::move(inputs), std::move(result));
  if (f.timing) report["timing_ms"] = elapsed_ms(t0);
  emit(f, report.dump(2) + "\n", out);
  return 0;
}

// ---------------------------------------------------------------------------
// appendix

struct AppendixFlags {
  double mean_j = 400.0;
  double phi_offset = std::numbers::pi / 2;
  double window = 6.0;
  int sweep = 0;
  double sweep_span = 0.09;
  bool force = false;
};

json appendix_json(const AppendixReport& r) {
  return json{{"alpha1", complex_json(r.alpha1)},
              {"alpha2", complex_json(r.alpha2)},
              {"phi_offset", num(r.phi_offset)},
              {"mean_j", num(r.mean_j)},
              {"mean_jx", num(r.mean_jx)},
              {"mean_jy", num(r.mean_jy)},
              {"mean_jz", num(r.mean_jz)},
              {"in_regime", r.in_regime},
              {"exact_mz", num(r.exact_mz)},
              {"exact_formula_mz", num(r.exact_formula_mz)},
              {"provisional_mz", num(r.provisional_mz)},
              {"predicted_provisional", num(r.predicted_provisional)},
              {"discrepancy_ratio", num(r.discrepancy_ratio)},
              {"diagnostics",
               json{{"two_j_min", r.two_j_min},
                    {"two_j_max", r.two_j_max},
                    {"discarded_weight", num(r.discarded_weight)},
                    {"rotation_error", num(r.rotation_error)},
                    {"exact_norm", num(r.exact_norm)},
                    {"provisional_outside_weight", num(r.provisional_outside_weight)},
                    {"resampling_error", num(r.resampling_error)},
                    {"provisional_overlap", num(r.provisional_overlap)}}}};
}

int cmd_appendix(const CommonFlags& f, const AppendixFlags& a, std::ostream& out) {
  const auto t0 = Clock::now();
  AppendixOptions opts;
  opts.truncation.window = a.window;
  opts.wigner = wigner_config(f);
  opts.force = a.force;

  const std::vector<double> offsets =
      a.sweep > 0 ? offset_grid(a.phi_offset, a.sweep_span, a.sweep) : std::vector<double>{a.phi_offset};
  const double mod = std::sqrt(a.mean_j);
  if (!(a.mean_j > 0.0)) throw ValidationError("--mean-j must be positive");
  if (!a.force) {
    for (double off : offsets) {
      if (!in_extremum_regime(coherent_means({Complex(mod, 0.0), std::polar(mod, off)}))) {
        throw ValidationError("phase offset " + format_double(off) +
                              " is outside the near-Jx-pole regime; pass --force to run anyway");
      }
    }
  }
  const auto reports = appendix_sweep(a.mean_j, offsets, opts);

  if (f.format == "csv") {
    std::string s = csv_line({"phi_offset", "exact_mz", "provisional_mz", "predicted_provisional",
                              "discrepancy_ratio", "out_of_regime"});
    for (const auto& r : reports) {
      s += csv_line({format_double(r.phi_offset), format_double(r.exact_mz),
                     format_double(r.provisional_mz), format_double(r.predicted_provisional),
                     format_double(r.discrepancy_ratio), r.in_regime ? "false" : "true"});
    }
    emit(f, s, out);
    return 0;
  }
  json points = json::array();
  for (const auto& r : reports) points.push_back(appendix_json(r));
  json inputs{{"mean_j", a.mean_j},   {"phi_offset", a.phi_offset}, {"window", a.window},
              {"sweep", a.sweep},     {"sweep_span", a.sweep_span}, {"force", a.force},
              {"j_max", opts.wigner.j_max}};
  const std::string digest = sha256_hex("appendix\n" + inputs.dump());
  auto report = envelope("appendix", digest, std::move(inputs), json{{"points", std::move(points)}});
  if (f.timing) report["timing_ms"] = elapsed_ms(t0);
  emit(f, report.dump(2) + "\n", out);
  return 0;
}

// ---------------------------------------------------------------------------
// dmatrix

struct DmatrixFlags {
  std::string j;
  std::string method = "auto";
  std::optional<double> m_window;
  bool compare_asymptotic = false;
};

int parse_two_j(const std::string& text) {
  double value = 0.0;
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      if (text.substr(slash + 1) != "2") throw std::invalid_argument(text);
      std::size_t used = 0;
      const int num = std::stoi(text.substr(0, slash), &used);
      if (used != slash) throw std::invalid_argument(text);
      value = 0.5 * num;
    } else {
      std::size_t used = 0;
      value = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    }
  } catch (const std::exception&) {
    throw ValidationError("--j must be a nonnegative half-integer such as 3, 1/2 or 2.5");
  }
  const double twice = 2.0 * value;
  if (!(twice >= 0.0) || std::abs(twice - std::round(twice)) > 1e-12 || twice > 1e7) {
    throw ValidationError("--j must be a nonnegative half-integer");
  }
  return static_cast<int>(std::lround(twice));
}

int cmd_dmatrix(const CommonFlags& f, const DmatrixFlags& d, std::ostream& out) {
  const auto t0 = Clock::now();
  const int two_j = parse_two_j(d.j);
  const WignerConfig cfg = wigner_config(f);
  if (two_j > cfg.j_max) {
    throw CapabilityError("2j = " + std::to_string(two_j) + " exceeds j_max " + std::to_string(cfg.j_max));
  }
  const Irrep irrep(two_j);
  json inputs{{"two_j", two_j}, {"method", d.method}, {"compare_asymptotic", d.compare_asymptotic},
              {"j_max", cfg.j_max}};
  if (d.m_window) inputs["m_window"] = *d.m_window;
  const std::string digest = sha256_hex("dmatrix\n" + inputs.dump());

  if (d.compare_asymptotic) {
    const auto table = asymptotic_dmatrix_report({two_j}, d.m_window.value_or(3.0), cfg);
    if (f.format == "csv") {
      std::string s = csv_line({"two_j", "two_m", "two_mp", "exact", "asymptotic", "relative_error",
                                "even_parity"});
      for (const auto& r : table.rows) {
        s += csv_line({std::to_string(r.two_j), std::to_string(r.two_m), std::to_string(r.two_mp),
                       format_double(r.exact), format_double(r.asymptotic),
                       format_double(r.relative_error), r.even_parity ? "true" : "false"});
      }
      emit(f, s, out);
      return 0;
    }
    json rows = json::array();
    for (const auto& r : table.rows) {
      rows.push_back(json{{"two_m", r.two_m},
                          {"two_mp", r.two_mp},
                          {"exact", num(r.exact)},
                          {"asymptotic", num(r.asymptotic)},
                          {"relative_error", num(r.relative_error)},
                          {"even_parity", r.even_parity}});
    }
    auto report = envelope("dmatrix", digest, std::move(inputs), json{{"two_j", two_j}, {"rows", rows}});
    if (f.timing) report["timing_ms"] = elapsed_ms(t0);
    emit(f, report.dump(2) + "\n", out);
    return 0;
  }

  std::shared_ptr<const WignerDMatrix> mat;
  if (d.method == "auto") {
    mat = wigner_d_stable(irrep, cfg);
  } else {
    const WignerMethod method = d.method == "exact"        ? WignerMethod::ExactRational
                                : d.method == "log-domain" ? WignerMethod::LogDomain
                                                           : WignerMethod::Recursion;
    if (method == WignerMethod::ExactRational && two_j > cfg.exact_cap) {
      throw CapabilityError("2j = " + std::to_string(two_j) + " exceeds the exact-arithmetic cap " +
                            std::to_string(cfg.exact_cap));
    }
    if (method == WignerMethod::LogDomain && two_j > cfg.log_domain_cap) {
      throw CapabilityError("2j = " + std::to_string(two_j) + " exceeds the log-domain cap " +
                            std::to_string(cfg.log_domain_cap));
    }
    mat = std::make_shared<const WignerDMatrix>(wigner_d_with(irrep, method));
  }
  const double unitarity = unitarity_deviation(mat->d);
  const int reach = d.m_window ? static_cast<int>(std::floor(2.0 * *d.m_window)) : two_j;

  std::vector<std::tuple<int, int, double>> entries;
  for (int tm = two_j; tm >= -two_j; tm -= 2) {
    if (std::abs(tm) > reach) continue;
    for (int tmp = two_j; tmp >= -two_j; tmp -= 2) {
      if (std::abs(tmp) > reach) continue;
      entries.emplace_back(tm, tmp, mat->at(tm, tmp));
    }
  }
  if (f.format == "csv") {
    std::string s = csv_line({"row", "two_m", "two_mp", "value"});
    for (const auto& [tm, tmp, v] : entries) {
      s += csv_line({"entry", std::to_string(tm), std::to_string(tmp), format_double(v)});
    }
    s += csv_line({"unitarity_deviation", "", "", format_double(unitarity)});
    emit(f, s, out);
    return 0;
  }
  json rows = json::array();
  for (const auto& [tm, tmp, v] : entries) rows.push_back(json::array({tm, tmp, num(v)}));
  json result{{"two_j", two_j},
              {"method", to_string(mat->method)},
              {"unitarity_deviation", num(unitarity)},
              {"error_estimate", num(mat->error_estimate)},
              {"entries", std::move(rows)}};
  auto report = envelope("dmatrix", digest, std::move(inputs), std::move(result));
  if (f.timing) report["timing_ms"] = elapsed_ms(t0);
  emit(f, report.dump(2) + "\n", out);
  return 0;
}

// ---------------------------------------------------------------------------
// proptest

struct ProptestFlags {
  int count = 1000;
  int draws = 10;
};

struct Tally {
  int evaluated = 0;
  int violations = 0;
  double worst = std::numeric_limits<double>::infinity();

  void add(double margin, double tol) {
    ++evaluated;
    if (margin < -tol) ++violations;
    worst = std::min(worst, margin);
  }
  json to_json() const {
    return json{{"evaluated", evaluated}, {"violations", violations}, {"worst_margin", num(worst)}};
  }
};

std::mt19937_64 task_rng(std::uint64_t seed, int stream, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

int cmd_proptest(const CommonFlags& f, const ProptestFlags& p, std::ostream& out, std::ostream& err) {
  const auto t0 = Clock::now();
  NecessityBatchConfig cfg;
  cfg.ensembles = p.count;
  cfg.draws = p.draws;
  cfg.seed = f.seed;
  const auto general = necessity_batch(cfg);

  // unit-weight sums with random observables
  Tally sum;
  for (int i = 0; i < p.count; ++i) {
    auto rng = task_rng(f.seed, 8, i);
    const auto [d1, d2] = cfg.dims[i % cfg.dims.size()];
    std::uniform_int_distribution<int> n_terms(1, cfg.max_terms);
    const State rho = ensemble_to_density(random_separable(d1, d2, n_terms(rng), rng));
    sum.add(sum_criterion(rho, random_pairs(d1, d2, rng)).margin, f.tolerance);
  }

  // spin criterion on separable two-spin states
  const std::vector<std::pair<int, int>> spins{{1, 1}, {1, 2}, {2, 2}, {2, 3}, {3, 3}};
  Tally spin_general, spin_symmetric;
  for (int i = 0; i < p.count; ++i) {
    auto rng = task_rng(f.seed, 9, i);
    const auto [t1, t2] = spins[i % spins.size()];
    std::uniform_int_distribution<int> n_terms(1, cfg.max_terms);
    const State rho = ensemble_to_density(random_separable(t1 + 1, t2 + 1, n_terms(rng), rng));
    const auto rep = spin_criterion(rho, Irrep(t1), Irrep(t2));
    spin_general.add(rep.general.margin, f.tolerance);
    spin_symmetric.add(rep.symmetric.margin, f.tolerance);
  }

  const int violations = general.violations + sum.violations + spin_general.violations;
  const double worst = std::min({general.min_normalized_margin, sum.worst, spin_general.worst});
  json result{
      {"general",
       json{{"evaluated", general.evaluated},
            {"violations", general.violations},
            {"worst_normalized_margin", num(general.min_normalized_margin)},
            {"max_decomposition_residual", num(general.max_decomposition_residual)},
            {"min_s", num(general.min_s)}}},
      {"sum", sum.to_json()},
      {"spin", spin_general.to_json()},
      // the 2|<Jx1>| shorthand assumes |<Jx1>| = |<Jx2>|; informational only
      {"spin_symmetric_rhs", spin_symmetric.to_json()},
      {"worst_margin", num(worst)},
      {"violations", violations},
      {"passed", violations == 0}};
  json inputs{{"count", p.count}, {"draws", p.draws}, {"seed", f.seed}, {"tolerance", f.tolerance}};
  const std::string digest = sha256_hex("proptest\n" + inputs.dump());

  if (f.format == "csv") {
    std::string s = csv_line({"criterion", "evaluated", "violations", "worst_margin"});
    s += csv_line({"general", std::to_string(general.evaluated), std::to_string(general.violations),
                   format_double(general.min_normalized_margin)});
    s += csv_line({"sum", std::to_string(sum.evaluated), std::to_string(sum.violations),
                   format_double(sum.worst)});
    s += csv_line({"spin", std::to_string(spin_general.evaluated),
                   std::to_string(spin_general.violations), format_double(spin_general.worst)});
    emit(f, s, out);
  } else {
    auto report = envelope("proptest", digest, std::move(inputs), std::move(result));
    if (f.timing) report["timing_ms"] = elapsed_ms(t0);
    emit(f, report.dump(2) + "\n", out);
  }
  if (violations > 0) {
    err << "proptest: " << violations << " separable states violated a criterion\n";
    return 1;
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variance-sum separability witnesses and SU(2) basis-change case studies",
               "sepwitness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  WitnessFlags wf;
  auto* witness = app.add_subcommand("witness", "evaluate a separability criterion on a state file");
  CommonFlags witness_common;
  add_common(witness, witness_common, "json");
  witness->add_option("--state", wf.state_path, "JSON state file")->required();
  std::vector<std::string> crit_names;
  for (const auto& [k, _] : criterion_names()) crit_names.push_back(k);
  witness->add_option("--criterion", wf.criterion, "hw, general, sum or spin")
      ->required()
      ->check(CLI::IsMember(crit_names));
  witness->add_option("--alpha", wf.alpha, "weight of system 1")->capture_default_str();
  witness->add_option("--beta", wf.beta, "weight of system 2")->capture_default_str();
  witness->add_option("--rhs", wf.rhs, "spin-criterion bound: general or symmetric")
      ->check(CLI::IsMember({"general", "symmetric"}))
      ->capture_default_str();
  witness->add_option("--hw-mode", wf.hw_mode, "fixed (bound 2) or state (measured commutators)")
      ->check(CLI::IsMember({"fixed", "state"}))
      ->capture_default_str();

  AppendixFlags af;
  auto* appendix = app.add_subcommand("appendix", "exact vs Fourier-shortcut basis change");
  CommonFlags appendix_common;
  add_common(appendix, appendix_common, "json");
  appendix->add_option("--mean-j", af.mean_j, "mean j of the coherent state")->capture_default_str();
  appendix->add_option("--phi-offset", af.phi_offset, "phi2 - phi1")->capture_default_str();
  appendix->add_option("--window", af.window, "j-window half width in units of sqrt(jbar)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  appendix->add_option("--sweep", af.sweep, "number of phase offsets around --phi-offset")
      ->check(CLI::NonNegativeNumber);
  appendix->add_option("--sweep-span", af.sweep_span, "half span of the sweep")->capture_default_str();
  appendix->add_flag("--force", af.force, "run outside the near-Jx-pole regime and flag the rows");

  DmatrixFlags df;
  auto* dmatrix = app.add_subcommand("dmatrix", "Wigner d^j(pi/2) elements or asymptotic error table");
  CommonFlags dmatrix_common;
  add_common(dmatrix, dmatrix_common, "csv");
  dmatrix->add_option("--j", df.j, "j, e.g. 3, 1/2, 2.5")->required();
  dmatrix->add_option("--method", df.method, "auto, exact, log-domain or recursion")
      ->check(CLI::IsMember({"auto", "exact", "log-domain", "recursion"}))
      ->capture_default_str();
  dmatrix->add_option("--m-window", df.m_window, "only |m|, |m'| <= window")->check(CLI::NonNegativeNumber);
  dmatrix->add_flag("--compare-asymptotic", df.compare_asymptotic,
                    "compare with the large-j asymptotic form (j >= 50)");

  ProptestFlags pf;
  auto* proptest = app.add_subcommand("proptest", "necessity property suite on random separable states");
  CommonFlags proptest_common;
  add_common(proptest, proptest_common, "json");
  proptest->add_option("--count", pf.count, "ensembles per criterion")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  proptest->add_option("--draws", pf.draws, "observable draws per ensemble")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*witness) return cmd_witness(witness_common, wf, out);
    if (*appendix) return cmd_appendix(appendix_common, af, out);
    if (*dmatrix) return cmd_dmatrix(dmatrix_common, df, out);
    if (*proptest) return cmd_proptest(proptest_common, pf, out, err);
  } catch (const std::exception& e) {
    err << "sepwitness: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace sepwitness::cli
