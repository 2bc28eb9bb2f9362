#pragma once

#include "rgm/models.hpp"

namespace rgm {

struct SampleResult {
  Tensor samples;         // n x data_dim
  std::uint64_t nfe = 0;  // generator evaluations per sample
};

// Hierarchical generation: start at the latent law, repeatedly restore and
// re-degrade one step down. Exactly total_steps generator calls per sample.
// Works for any generator config, including the z-free regression baseline.
SampleResult generate(const MlpParams& gen, const GeneratorConfig& cfg,
                      const DegradationSchedule& s, std::size_t n, Rng& rng);

struct RestoreVariants {
  Tensor y_k;           // the single degraded observation used
  Tensor restorations;  // z_count x data_dim
  double spread = 0.0;  // mean pairwise distance between restorations
};

// Degrades x once to step k, then restores it z_count times with fresh
// auxiliary draws.
RestoreVariants restore_variants(const MlpParams& gen,
                                 const GeneratorConfig& cfg,
                                 const DegradationSchedule& s, const Tensor& x,
                                 int k, std::size_t z_count, Rng& rng);

}  // namespace rgm
