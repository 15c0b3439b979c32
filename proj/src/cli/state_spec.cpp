#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "sepwitness/cli.hpp"
#include "sepwitness/states.hpp"

namespace sepwitness::cli {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* name) {
  if (!j.contains(name)) throw ValidationError(std::string("state spec is missing \"") + name + "\"");
  return j.at(name);
}

HilbertDims parse_dims(const json& j) {
  const auto& d = field(j, "dims");
  if (!d.is_array() || d.size() != 2) throw ValidationError("\"dims\" must be [d1, d2]");
  return HilbertDims::bipartite(d.at(0).get<int>(), d.at(1).get<int>());
}

Vector parse_vector(const json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("expected a non-empty array of [re, im]");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_complex(j[i]);
  return v;
}

// Either a density matrix or a pure vector, under "rho" or "psi".
DensityOperator parse_factor(const json& term, const char* rho_key, const char* psi_key) {
  if (term.contains(rho_key)) {
    const Matrix m = parse_matrix(term.at(rho_key));
    return DensityOperator(HilbertDims::single(static_cast<int>(m.rows())), m);
  }
  if (term.contains(psi_key)) {
    Vector v = parse_vector(term.at(psi_key));
    return DensityOperator::from_pure(PureState(HilbertDims::single(static_cast<int>(v.size())), v));
  }
  throw ValidationError(std::string("ensemble term needs \"") + rho_key + "\" or \"" + psi_key + "\"");
}

Irrep parse_irrep(const json& j, const char* name) {
  const int two_j = field(j, name).get<int>();
  if (two_j < 0) throw ValidationError(std::string(name) + " must be >= 0");
  return Irrep(two_j);
}

StateSpec spin_product(const std::string& kind, Irrep j1, Irrep j2, const PureState& a,
                       const PureState& b) {
  StateSpec s{kind, State(tensor(a, b)), std::nullopt, std::pair{j1, j2}, std::nullopt, std::nullopt};
  return s;
}

StateSpec oscillator(const std::string& kind, double r, int cutoff) {
  return {kind, State(tmsv_state({r, cutoff})), cutoff, std::nullopt, std::nullopt, std::nullopt};
}

StateSpec named_fixture(const std::string& name, const ParseOptions& opts) {
  const Irrep half(1);
  const Irrep one(2);
  const auto plus_x = spin_coherent_state(half, std::numbers::pi / 2, 0.0);
  if (name == "plus_x_pair") return spin_product("named_fixture", half, half, plus_x, plus_x);
  if (name == "singlet") {
    Vector v = Vector::Zero(4);
    v(1) = 1.0 / std::sqrt(2.0);
    v(2) = -1.0 / std::sqrt(2.0);
    return {"named_fixture", State(PureState(HilbertDims::bipartite(2, 2), v)), std::nullopt,
            std::pair{half, half}, std::nullopt, std::nullopt};
  }
  if (name == "asymmetric_product") {
    const auto rho = tensor(DensityOperator::from_pure(plus_x),
                            DensityOperator::maximally_mixed(HilbertDims::single(2)));
    return {"named_fixture", State(rho), std::nullopt, std::pair{half, half}, std::nullopt,
            std::nullopt};
  }
  if (name == "qubit_min_margin" || name == "spin1_min_margin") {
    const Irrep j = name == "qubit_min_margin" ? half : one;
    auto bf = brute_force_min_margin(j, j, SpinRhsMode::General, 20, opts.seed);
    return {"named_fixture", State(std::move(bf.state)), std::nullopt, std::pair{j, j},
            std::nullopt, std::nullopt};
  }
  if (name == "vacuum") return oscillator("named_fixture", 0.0, opts.cutoff.value_or(20));
  if (name == "tmsv_r05") return oscillator("named_fixture", 0.5, opts.cutoff.value_or(40));
  throw ValidationError("unknown fixture \"" + name + "\"");
}

std::optional<ObservablePair> parse_pairs(const json& j, const HilbertDims& dims) {
  if (!j.contains("pairs")) return std::nullopt;
  const auto& p = j.at("pairs");
  auto pairs = ObservablePair::from_local(parse_matrix(field(p, "A1")), parse_matrix(field(p, "B1")),
                                          parse_matrix(field(p, "A2")), parse_matrix(field(p, "B2")));
  if (!(pairs.dims() == dims)) throw DimensionError("\"pairs\" do not match the state dims");
  return pairs;
}

}  // namespace

Complex parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ValidationError("complex numbers are written [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

Matrix parse_matrix(const json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("expected a non-empty matrix (array of rows)");
  const auto n = static_cast<Eigen::Index>(j.size());
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw ValidationError("matrix must be square");
    }
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = parse_complex(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"asymmetric_product", "plus_x_pair", "qubit_min_margin",
                                              "singlet",            "spin1_min_margin", "tmsv_r05",
                                              "vacuum"};
  return names;
}

StateSpec parse_state_spec(const json& j, const ParseOptions& opts) {
  if (!j.is_object()) throw ValidationError("state spec must be a JSON object");
  const std::string kind = field(j, "kind").get<std::string>();

  if (kind == "dense_density") {
    const auto dims = parse_dims(j);
    StateSpec s{kind, State(DensityOperator(dims, parse_matrix(field(j, "matrix")))), std::nullopt,
                std::nullopt, parse_pairs(j, dims), std::nullopt};
    return s;
  }
  if (kind == "pure_vector") {
    const auto dims = parse_dims(j);
    StateSpec s{kind, State(PureState(dims, parse_vector(field(j, "amplitudes")))), std::nullopt,
                std::nullopt, parse_pairs(j, dims), std::nullopt};
    return s;
  }
  if (kind == "coherent_spin") {
    const Irrep j1 = parse_irrep(j, "two_j1");
    const Irrep j2 = parse_irrep(j, "two_j2");
    const auto a = spin_coherent_state(j1, field(j, "theta1").get<double>(), field(j, "phi1").get<double>());
    const auto b = spin_coherent_state(j2, field(j, "theta2").get<double>(), field(j, "phi2").get<double>());
    return spin_product(kind, j1, j2, a, b);
  }
  if (kind == "tmsv") {
    const int cutoff = opts.cutoff.value_or(j.value("cutoff", 40));
    return oscillator(kind, field(j, "r").get<double>(), cutoff);
  }
  if (kind == "ensemble") {
    const auto& terms_json = field(j, "terms");
    if (!terms_json.is_array()) throw ValidationError("\"terms\" must be an array");
    std::vector<EnsembleTerm> terms;
    for (const auto& t : terms_json) {
      terms.push_back({field(t, "p").get<double>(), parse_factor(t, "rho1", "psi1"),
                       parse_factor(t, "rho2", "psi2")});
    }
    SeparableEnsemble e(std::move(terms));
    const auto dims = e.dims();
    if (j.contains("dims") && !(parse_dims(j) == dims)) {
      throw DimensionError("\"dims\" disagree with the ensemble factors");
    }
    State rho(ensemble_to_density(e));
    return {kind, std::move(rho), std::nullopt, std::nullopt, parse_pairs(j, dims), std::move(e)};
  }
  if (kind == "named_fixture") return named_fixture(field(j, "name").get<std::string>(), opts);
  throw ValidationError("unknown state kind \"" + kind + "\"");
}

StateSpec load_state_spec(const std::filesystem::path& path, const ParseOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  return parse_state_spec(j, opts);
}

}  // namespace sepwitness::cli
