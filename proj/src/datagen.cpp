#include "rpt/datagen.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "rpt/errors.hpp"

namespace rpt {

std::string_view to_string(NoiseLaw law) {
  switch (law) {
    case NoiseLaw::gaussian: return "gaussian";
    case NoiseLaw::t1: return "t1";
    case NoiseLaw::t2: return "t2";
  }
  return "unknown";
}

NoiseLaw parse_noise_law(std::string_view name) {
  if (name == "gaussian" || name == "normal") return NoiseLaw::gaussian;
  if (name == "t1" || name == "cauchy") return NoiseLaw::t1;
  if (name == "t2") return NoiseLaw::t2;
  throw ConfigError("unknown noise law '" + std::string(name) +
                    "' (expected gaussian, t1 or t2)");
}

namespace {

double draw(NoiseLaw law, SeededRng& rng) {
  switch (law) {
    case NoiseLaw::gaussian:
      return rng.normal();
    case NoiseLaw::t1: {
      const double num = rng.normal();
      const double g = rng.normal();
      return num / std::sqrt(g * g);
    }
    case NoiseLaw::t2: {
      const double num = rng.normal();
      const double g1 = rng.normal();
      const double g2 = rng.normal();
      return num / std::sqrt((g1 * g1 + g2 * g2) / 2.0);
    }
  }
  return 0.0;
}

}  // namespace

Vector sample_noise(NoiseLaw law, Index n, SeededRng& rng) {
  Vector out(n);
  for (Index i = 0; i < n; ++i) out[i] = draw(law, rng);
  return out;
}

Matrix sample_noise_matrix(NoiseLaw law, Index rows, Index cols, SeededRng& rng) {
  Matrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) out(i, j) = draw(law, rng);
  }
  return out;
}

Matrix toeplitz_sqrt(Index p) {
  if (p < 1) throw ConfigError("toeplitz_sqrt: p must be positive");
  Matrix sigma(p, p);
  for (Index j = 0; j < p; ++j) {
    for (Index k = 0; k < p; ++k) {
      sigma(j, k) = std::ldexp(1.0, -static_cast<int>(std::abs(j - k)));
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    throw NumericalError("Toeplitz covariance is not numerically positive definite");
  }
  const Matrix& v = eig.eigenvectors();
  Matrix root = v * eig.eigenvalues().cwiseSqrt().asDiagonal() * v.transpose();
  return (root + root.transpose()) / 2.0;
}

void ModelConfig::validate() const {
  if (n < 1) throw ConfigError("n: must be positive");
  if (p < 1 || p >= n) throw ConfigError("p: must satisfy 0 < p < n");
  if (beta.size() != 0 && beta.size() != p) throw ConfigError("beta: must have length p");
  if (beta_z.size() != 0 && beta_z.size() != p) throw ConfigError("beta_z: must have length p");
  if (!std::isfinite(b)) throw ConfigError("b: must be finite");
}

Vector default_coefficients(Index p) {
  Vector beta = Vector::Zero(p);
  beta.head(std::min<Index>(10, p)).setConstant(1.0 / std::sqrt(10.0));
  return beta;
}

DataGenerator::DataGenerator(ModelConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  beta_ = cfg_.beta.size() ? cfg_.beta : default_coefficients(cfg_.p);
  beta_z_ = cfg_.beta_z.size() ? cfg_.beta_z : default_coefficients(cfg_.p);
  if (cfg_.toeplitz) mixing_ = toeplitz_sqrt(cfg_.p);
}

Matrix DataGenerator::design(SeededRng& rng) const {
  Matrix w = sample_noise_matrix(cfg_.x_law, cfg_.n, cfg_.p, rng);
  if (!cfg_.toeplitz) return w;
  return w * mixing_;
}

Dataset DataGenerator::responses(const Matrix& x, SeededRng& rng) const {
  if (x.rows() != cfg_.n || x.cols() != cfg_.p) {
    throw DimensionError("design does not match the configured n x p");
  }
  const Vector e = sample_noise(cfg_.z_noise_law, cfg_.n, rng);
  const Vector eps = sample_noise(cfg_.noise_law, cfg_.n, rng);
  Dataset d;
  d.x = x;
  d.z = x * beta_z_ + e;
  d.y = x * beta_ + cfg_.b * d.z + eps;
  return d;
}

Dataset DataGenerator::dataset(SeededRng& rng) const {
  const Matrix x = design(rng);
  return responses(x, rng);
}

Dataset generate_dataset(const ModelConfig& cfg, SeededRng& rng) {
  return DataGenerator(cfg).dataset(rng);
}

std::vector<Index> rows_to_drop(Index n, Index k_count, SeededRng& rng) {
  const Index drop = n % (k_count + 1);
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  // partial Fisher-Yates: the first `drop` slots are a uniform subset
  for (Index i = 0; i < drop; ++i) {
    const Index j = i + rng.uniform_index(n - i);
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  std::vector<Index> dropped(order.begin(), order.begin() + drop);
  std::sort(dropped.begin(), dropped.end());
  return dropped;
}

Dataset without_rows(const Dataset& d, const std::vector<Index>& dropped) {
  if (dropped.empty()) return d;
  std::vector<Index> kept;
  kept.reserve(static_cast<std::size_t>(d.x.rows()));
  std::size_t j = 0;
  for (Index i = 0; i < d.x.rows(); ++i) {
    if (j < dropped.size() && dropped[j] == i) {
      ++j;
    } else {
      kept.push_back(i);
    }
  }
  return {d.x(kept, Eigen::all), d.z(kept), d.y(kept)};
}

}  // namespace rpt
