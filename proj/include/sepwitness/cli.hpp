#pragma once

// Command-line front end: JSON state files, subcommand drivers, and report
// serialization. run_cli is the whole program; the tool binary only forwards
// argv to it.

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>

#include <json.hpp>

#include "sepwitness/hilbert.hpp"
#include "sepwitness/spin.hpp"
#include "sepwitness/witness.hpp"

namespace sepwitness::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// A parsed and validated state file.
struct StateSpec {
  std::string kind;
  State state;
  /// Set for two-mode oscillator states.
  std::optional<int> cutoff;
  /// Set when the state lives on two spin irreps.
  std::optional<std::pair<Irrep, Irrep>> spins;
  /// Optional explicit observables from the file.
  std::optional<ObservablePair> pairs;
  /// Set for ensemble specs.
  std::optional<SeparableEnsemble> ensemble;
};

struct ParseOptions {
  /// Replaces the cutoff of oscillator specs.
  std::optional<int> cutoff;
  std::uint64_t seed = 1;
};

/// Throws ValidationError / DimensionError on malformed or unknown input.
StateSpec parse_state_spec(const nlohmann::json& j, const ParseOptions& opts = {});
StateSpec load_state_spec(const std::filesystem::path& path, const ParseOptions& opts = {});

/// Names accepted by the named_fixture kind.
const std::vector<std::string>& fixture_names();

/// [re, im] pairs.
Complex parse_complex(const nlohmann::json& j);
nlohmann::json complex_json(Complex z);
Matrix parse_matrix(const nlohmann::json& j);

/// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& bytes);

/// Writes to a sibling temp file, then renames over the target.
void write_atomically(const std::filesystem::path& path, const std::string& content);

/// Shortest round-trip decimal form; "nan"/"inf" spelled out.
std::string format_double(double v);

/// Runs one command. Returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sepwitness::cli
