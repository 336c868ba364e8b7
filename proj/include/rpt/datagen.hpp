#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rpt/random.hpp"
#include "rpt/types.hpp"

namespace rpt {

// gaussian: N(0,1). t1: standard Cauchy, no finite mean. t2: finite mean,
// infinite variance.
enum class NoiseLaw { gaussian, t1, t2 };

std::string_view to_string(NoiseLaw law);
NoiseLaw parse_noise_law(std::string_view name);  // ConfigError on unknown names

Vector sample_noise(NoiseLaw law, Index n, SeededRng& rng);
// Fills an n x p matrix row by row with i.i.d. draws.
Matrix sample_noise_matrix(NoiseLaw law, Index rows, Index cols, SeededRng& rng);

// Symmetric S with S * S = Sigma, Sigma[j, k] = 2^{-|j - k|}.
Matrix toeplitz_sqrt(Index p);

// Y = X beta + b Z + eps,  Z = X beta_z + e,  X = W Sigma^{1/2} (or W).
struct ModelConfig {
  Index n = 300;
  Index p = 100;
  double b = 0.0;
  Vector beta;    // empty -> default_coefficients(p)
  Vector beta_z;  // empty -> default_coefficients(p)
  NoiseLaw x_law = NoiseLaw::gaussian;
  NoiseLaw noise_law = NoiseLaw::gaussian;
  NoiseLaw z_noise_law = NoiseLaw::gaussian;
  bool toeplitz = true;

  void validate() const;  // ConfigError naming the bad field
};

// First min(10, p) entries 1/sqrt(10), the rest 0.
Vector default_coefficients(Index p);

struct Dataset {
  Matrix x;
  Vector z;
  Vector y;
};

// Holds a validated config and the cached Toeplitz root. Draw order within a
// stream is W, then e, then eps.
class DataGenerator {
 public:
  explicit DataGenerator(ModelConfig cfg);

  const ModelConfig& config() const noexcept { return cfg_; }

  Matrix design(SeededRng& rng) const;
  // Draws (Z, Y) for a given design.
  Dataset responses(const Matrix& x, SeededRng& rng) const;
  Dataset dataset(SeededRng& rng) const;

 private:
  ModelConfig cfg_;
  Vector beta_;
  Vector beta_z_;
  Matrix mixing_;
};

Dataset generate_dataset(const ModelConfig& cfg, SeededRng& rng);

// Rows (0-based, ascending) removed so that (K+1) divides the remaining count,
// chosen uniformly among subsets of size n mod (K+1).
std::vector<Index> rows_to_drop(Index n, Index k_count, SeededRng& rng);
// Copy of d without the listed rows (sorted, 0-based).
Dataset without_rows(const Dataset& d, const std::vector<Index>& dropped);

}  // namespace rpt
