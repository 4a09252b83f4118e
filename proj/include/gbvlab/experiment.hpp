// experiment.hpp — batch experiment front end: JSON configs in, CSV/JSON
// artifacts out.  The CLI is a thin shell around run_experiment; tests drive
// the same entry points directly.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "gbvlab/common.hpp"
#include "gbvlab/prufer.hpp"

namespace gbv {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes: distinct failure classes for scripting.
enum ExitCode : int {
    kExitOk = 0,
    kExitSchema = 2,
    kExitIo = 3,
    kExitDomain = 4,
    kExitInternal = 5,
};

struct ExperimentConfig {
    std::string task;
    Model model = Model::opuc;
    nlohmann::json raw;
};

// Validates the config against the task's schema (unknown fields rejected)
// and returns the parsed form.  Throws SchemaError.
ExperimentConfig parse_config(const nlohmann::json& config);
ExperimentConfig load_config(const std::filesystem::path& path);

// Builds a coefficient sequence from its JSON spec, e.g.
//   {"type":"wvn","terms":[{"lambda":1.0,"phi":1.57,"alpha":0.0,"gamma":1.0}],"n0":1}
//   {"type":"power_law_rotated","z":[1.0,0.0],"phase":1.1,"p":2,"n0":2}
//   {"type":"constant","value":[0.5,0.0]} | {"type":"zero"}
CoeffSequence sequence_from_json(const nlohmann::json& spec);

// opuc: the spec is the Verblunsky sequence itself (zero below its start).
// oprl: {"b": <spec>} with optional {"a_sq_minus_one": <spec>}.
Coefficients coefficients_from_json(Model model, const nlohmann::json& spec);

struct RunResult {
    std::vector<std::string> artifacts;  // file names written under out_dir
};

// Dispatches the config to the appropriate module and writes the declared
// artifacts plus manifest.json into out_dir.  Throws on failure; the CLI maps
// exception classes to exit codes.
RunResult run_experiment(const ExperimentConfig& config,
                         const std::filesystem::path& out_dir, std::uint64_t seed,
                         int threads);

// FNV-1a 64-bit hash, hex-encoded; used for config fingerprints.
std::string fnv1a_hex(const std::string& data);

}  // namespace gbv
