#pragma once

#include <optional>
#include <string>

#include "rgm/evaldata.hpp"
#include "rgm/inverse.hpp"
#include "rgm/training.hpp"

namespace rgm::cli {

// Exit-code contract: 0 ok, 2 usage, 3 config/schedule mismatch,
// 4 numerical abort, 5 IO.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitMismatch = 3;
inline constexpr int kExitNumerical = 4;
inline constexpr int kExitIo = 5;

// Dataset section of a training config file.
struct DatasetConfig {
  std::string type = "gmm8";  // gmm8 | toy_images
  Gmm8Spec gmm;
  ToyImageSpec images;
  std::size_t n = 10000;
  std::uint64_t seed = 99;
};

json dataset_config_to_json(const DatasetConfig& c);
DatasetConfig dataset_config_from_json(const json& j);
Tensor build_dataset(const DatasetConfig& c);

// "16x16x3", "16x16" (1 channel) or a bare vector dim like "2".
DataShape parse_shape(const std::string& s);

struct ScheduleOptions {
  std::string kind = "d";
  int steps = 4;
  std::string shape = "2";
  std::string out_path;  // empty: stdout only
};
int cmd_schedule(const ScheduleOptions& o);

struct TrainOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;  // overrides the config seed
  std::string resume_from;            // optional checkpoint path
};
int cmd_train(const TrainOptions& o);

struct SampleOptions {
  std::string ckpt_path;
  std::size_t n = 1000;
  std::string out_dir;
  std::uint64_t seed = 1234;
};
int cmd_sample(const SampleOptions& o);

struct InvertOptions {
  std::string ckpt_path;
  std::string task = "denoise";  // denoise | sr | color
  double sigma = 40.0 / 255.0 * 2.0;
  int factor = 2;
  std::size_t n = 10;
  std::string family = "blobs";
  std::uint64_t image_seed = 777;
  std::string out_dir;
  std::uint64_t seed = 1234;
  // Solver hyperparameters; defaults follow the per-task table when the
  // caller leaves them unset.
  std::optional<int> repeats;
  std::optional<double> prox_lambda;
  std::optional<double> alpha;
  std::optional<int> depth;
};
int cmd_invert(const InvertOptions& o);

struct EvalOptions {
  std::string samples_path;
  std::string reference_path;
  std::string out_dir;
  double gmm_radius = 2.0;
  double gmm_std = 0.1;
  bool gmm_standardize = true;
};
int cmd_eval(const EvalOptions& o);

// Parses argv and dispatches; returns a contract exit code.
int run(int argc, const char* const* argv);

// Maps a thrown exception onto the exit-code contract.
int exit_code_for_current_exception();

SolverConfig default_solver_config(TaskKind kind, double sigma, int factor);

}  // namespace rgm::cli
