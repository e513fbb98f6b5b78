#pragma once

// Model generators and a seeded Gaussian sampler.
//
// Random numbers come from std::mt19937_64, whose output sequence is fixed by
// the standard. Uniforms and normals are derived here (53-bit uniforms,
// Marsaglia polar normals) rather than through <random> distributions, whose
// algorithms vary between standard libraries, so samples are identical
// across platforms.

#include <cstdint>
#include <random>
#include <string>

#include "gelato/core.hpp"

namespace gelato {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  double normal();
  /// Uniform on {0, ..., bound - 1}.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t x);
/// Seed for stream `stream` below `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

enum class ModelFamily { ar1_block, random_precision, exp_decay };

const char* to_string(ModelFamily family);
ModelFamily parse_model_family(const std::string& name);

struct ModelSpec {
  ModelFamily family = ModelFamily::ar1_block;
  Index p = 0;
  Index block_size = 0;  // ar1_block; 0 means a single block
  double rho = 0.9;
  double pi = 0.1;
  double entry_value = 0.5;
  std::uint64_t seed = 0;
};

struct TrueModel {
  SymMatrix sigma0;
  SymMatrix theta0;
  /// Structural support of theta0 (off-diagonal pairs meant to be nonzero).
  EdgeSet edges;
};

/// Validates the family-specific invariants; throws config_error.
void validate(const ModelSpec& spec);

TrueModel gen_ar1_block(Index p, Index block_size, double rho);
TrueModel gen_random_precision(Index p, double pi, double entry_value, std::uint64_t seed);
TrueModel gen_exp_decay(Index p);
TrueModel generate_model(const ModelSpec& spec);

/// n draws from N(0, sigma0) as rows L z, then standardized.
DataSet sample_gaussian(const SymMatrix& sigma0, Index n, std::uint64_t seed);
/// The raw draws, before standardization.
Matrix sample_gaussian_raw(const SymMatrix& sigma0, Index n, std::uint64_t seed);

}  // namespace gelato
