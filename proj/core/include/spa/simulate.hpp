#pragma once

#include "spa/dataset.hpp"

#include <cstdint>
#include <variant>
#include <vector>

namespace spa {

/// A fixed nonzero coefficient; `index` is 1-based.
struct FixedEffect
{
  Index index;
  double coefficient;
};

/// `count` loci chosen uniformly at random with Normal(0, spread)
/// coefficients. `spread` is a standard deviation unless
/// `spread_is_variance` is set.
struct RandomEffects
{
  Index count = 5;
  double spread = 0.2;
  bool spread_is_variance = false;
};

/// Synthetic genotype study: LD blocks of `block_size` adjacent markers
/// sharing a latent factor with correlation `within_block_corr`.
struct SimSpec
{
  Index n = 500;
  Index p = 50;
  Index block_size = 10;
  double within_block_corr = 0.0;
  std::variant<std::vector<FixedEffect>, RandomEffects> nonzero = std::vector<FixedEffect>{};
  std::uint64_t seed = 1;
};

/// Throws std::invalid_argument describing the first violated constraint.
void validate(const SimSpec& spec);

/// n x p genotype counts in {0, 1, 2}.
Eigen::MatrixXd simulate_genotypes(const SimSpec& spec);

/// Length-p coefficient vector implied by spec.nonzero (zeros elsewhere).
Eigen::VectorXd true_coefficients(const SimSpec& spec);

/// y_i ~ Bernoulli(logistic(x_i . beta)).
Eigen::VectorXd simulate_phenotypes(const Eigen::MatrixXd& X,
                                    const Eigen::VectorXd& beta,
                                    std::uint64_t seed);

struct Simulation
{
  Dataset data;
  Eigen::VectorXd beta_true;
};

/// Genotypes, standardization, coefficients and phenotypes in one call.
Simulation simulate_dataset(const SimSpec& spec);

/// n=500, p=50 design with five signal loci at 10, 14, 24, 31, 37.
SimSpec scenario_a(std::uint64_t seed = 1);

/// n=1859, p=184 design with five signal loci at 108, 22, 5, 117, 162.
SimSpec scenario_b(std::uint64_t seed = 1);

} // namespace spa
