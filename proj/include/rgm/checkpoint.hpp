#pragma once

#include <array>
#include <optional>
#include <string>

#include "rgm/models.hpp"
#include "rgm/schedule.hpp"

namespace rgm {

inline constexpr int kCheckpointVersion = 1;

// Everything needed to rebuild a schedule identically.
struct ScheduleDescriptor {
  ScheduleKind kind = ScheduleKind::Denoise;
  int total_steps = 4;
  DataShape shape;
  BetaParams beta;

  DegradationSchedule build() const {
    return build_schedule(kind, total_steps, shape, beta);
  }
  bool operator==(const ScheduleDescriptor& o) const {
    return kind == o.kind && total_steps == o.total_steps && shape == o.shape &&
           beta.beta_max == o.beta.beta_max && beta.beta_min == o.beta.beta_min;
  }
};

struct RngSnapshot {
  std::uint64_t seed = 0;
  std::array<std::uint64_t, 4> words{};
  std::uint64_t draws = 0;

  static RngSnapshot of(const Rng& rng) {
    return {rng.seed(), rng.state_words(), rng.draw_count()};
  }
  Rng restore() const {
    Rng r(seed);
    r.restore(words, draws);
    return r;
  }
  bool operator==(const RngSnapshot&) const = default;
};

// Optimizer and stream state needed to continue a run bit-identically.
struct ResumeState {
  MlpAdam gen_opt;
  std::optional<MlpAdam> disc_opt;
  std::optional<MlpAdam> dswd_opt;
  RngSnapshot rng;
};

struct Checkpoint {
  int version = kCheckpointVersion;
  ScheduleDescriptor schedule;
  std::string algorithm = "relaxed";  // relaxed | posterior | mmse | direct
  std::string prior = "kld";          // kld | mmd | dswd | none
  GeneratorConfig gen_cfg;
  MlpParams gen;
  std::optional<MlpParams> disc;
  std::optional<MlpParams> dswd_sampler;
  std::uint64_t step = 0;
  std::uint64_t seed = 0;
  std::optional<ResumeState> resume;
};

bool operator==(const Checkpoint& a, const Checkpoint& b);

void save_checkpoint(const Checkpoint& c, const std::string& path);
// Throws VersionMismatch for unknown versions and CorruptFile for anything
// that does not parse back into a complete checkpoint.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace rgm
