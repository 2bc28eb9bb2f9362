#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "rgm/adam.hpp"
#include "rgm/mlp.hpp"
#include "rgm/rng.hpp"
#include "rgm/tensor.hpp"

namespace rgm {

using json = nlohmann::json;

json tensor_to_json(const Tensor& t);
Tensor tensor_from_json(const json& j);

json mlp_to_json(const MlpParams& p);
MlpParams mlp_from_json(const json& j);

json adam_state_to_json(const AdamState& s);
AdamState adam_state_from_json(const json& j);

json mlp_adam_to_json(const MlpAdam& a);
MlpAdam mlp_adam_from_json(const json& j);

std::string u64_to_hex(std::uint64_t v);
std::uint64_t u64_from_hex(const std::string& s);

// FNV-1a over the canonical dump; stamped into every output file.
std::string config_hash(const json& config);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Parses with a CorruptFile error instead of nlohmann's parse_error.
json parse_json_file(const std::string& path);

// Shortest representation that parses back to the identical double.
std::string format_double(double v);

// Sample matrices as CSV, one row per sample, leading provenance comment.
void write_samples_csv(const std::string& path, const Tensor& samples,
                       const std::string& hash, std::uint64_t seed);
Tensor read_samples_csv(const std::string& path);

}  // namespace rgm
