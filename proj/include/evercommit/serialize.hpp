// JSON wire format.
//
// Matrices are row-major arrays of [re, im] pairs. A DenseState is
// {"n": int, "rho": matrix}. Bit strings are hex, LSB-first (see bits.hpp).
// Qubit indices and challenge numbers are 1-based on the wire.
#pragma once

#include <filesystem>
#include <string>

#include "evercommit/experiments.hpp"
#include "json.hpp"

namespace evercommit {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const Matrix& m);
/// Accepts a bare matrix or a {"n", "rho"} object.
Matrix matrix_from_json(const Json& j);

Json state_to_json(const DenseState& state);
DenseState state_from_json(const Json& j);

/// {"n", "kind", "name", "checks": [{"support", "projector"}], "witness"?}
Json instance_to_json(const Instance& instance);
/// Throws Error on malformed input or a failed Instance::validate().
Instance instance_from_json(const Json& j);
Instance load_instance(const std::filesystem::path& path);

Json params_to_json(const CcdParams& params);
Json transcript_to_json(const Transcript& t);
Json sequential_to_json(const SequentialResult& r);
Json game_result_to_json(const GameResult& r);

/// Reads a JSON file; throws Error when missing or unparsable.
Json read_json_file(const std::filesystem::path& path);
/// Two-space indented, trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace evercommit
