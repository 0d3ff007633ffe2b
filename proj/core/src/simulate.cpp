#include "spa/simulate.hpp"

#include "spa/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace spa {

namespace {

const std::vector<double> kReferenceEffects = {-0.2538, 0.4578, -0.1873, -0.1498, 0.0996};

double normal_cdf(double z)
{
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

} // namespace

void validate(const SimSpec& spec)
{
  if (spec.n < 2)
    throw std::invalid_argument("simulation needs n >= 2");
  if (spec.p < 1)
    throw std::invalid_argument("simulation needs p >= 1");
  if (spec.block_size < 1)
    throw std::invalid_argument("block size must be >= 1");
  if (spec.block_size > spec.p)
    throw std::invalid_argument("block size " + std::to_string(spec.block_size)
                                + " exceeds p = " + std::to_string(spec.p));
  if (!(spec.within_block_corr >= 0.0 && spec.within_block_corr < 1.0))
    throw std::invalid_argument("within-block correlation must lie in [0, 1)");

  if (const auto* fixed = std::get_if<std::vector<FixedEffect>>(&spec.nonzero)) {
    std::set<Index> seen;
    for (const auto& effect : *fixed) {
      if (effect.index < 1 || effect.index > spec.p)
        throw std::invalid_argument("nonzero index " + std::to_string(effect.index)
                                    + " outside [1, " + std::to_string(spec.p) + "]");
      if (!seen.insert(effect.index).second)
        throw std::invalid_argument("nonzero index " + std::to_string(effect.index) + " repeated");
    }
  } else {
    const auto& random = std::get<RandomEffects>(spec.nonzero);
    if (random.count < 0 || random.count > spec.p)
      throw std::invalid_argument("random nonzero count must lie in [0, p]");
    if (!(random.spread >= 0.0))
      throw std::invalid_argument("coefficient spread must be >= 0");
  }
}

Eigen::MatrixXd simulate_genotypes(const SimSpec& spec)
{
  validate(spec);
  auto rng = stream_engine(spec.seed, Stream::genotypes);
  std::uniform_real_distribution<double> freq_dist(0.1, 0.5);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<double> freq(static_cast<std::size_t>(spec.p));
  for (auto& q : freq)
    q = freq_dist(rng);

  const double load = std::sqrt(spec.within_block_corr);
  const double resid = std::sqrt(1.0 - spec.within_block_corr);

  Eigen::MatrixXd G(spec.n, spec.p);
  for (Index i = 0; i < spec.n; ++i) {
    for (Index start = 0; start < spec.p; start += spec.block_size) {
      const double factor = normal(rng);
      const Index stop = std::min(spec.p, start + spec.block_size);
      for (Index j = start; j < stop; ++j) {
        const double u = normal_cdf(load * factor + resid * normal(rng));
        const double q = freq[static_cast<std::size_t>(j)];
        // Hardy-Weinberg genotype probabilities (1-q)^2, 2q(1-q), q^2.
        const double p0 = (1.0 - q) * (1.0 - q);
        const double p1 = p0 + 2.0 * q * (1.0 - q);
        G(i, j) = u < p0 ? 0.0 : (u < p1 ? 1.0 : 2.0);
      }
    }
  }
  return G;
}

Eigen::VectorXd true_coefficients(const SimSpec& spec)
{
  validate(spec);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(spec.p);
  if (const auto* fixed = std::get_if<std::vector<FixedEffect>>(&spec.nonzero)) {
    for (const auto& effect : *fixed)
      beta[effect.index - 1] = effect.coefficient;
    return beta;
  }

  const auto& random = std::get<RandomEffects>(spec.nonzero);
  auto rng = stream_engine(spec.seed, Stream::coefficients);
  std::vector<Index> order(static_cast<std::size_t>(spec.p));
  std::iota(order.begin(), order.end(), Index{0});
  // Partial Fisher-Yates so the draw does not depend on std::shuffle details.
  for (Index k = 0; k < random.count; ++k) {
    std::uniform_int_distribution<Index> pick(k, spec.p - 1);
    std::swap(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(pick(rng))]);
  }
  const double sd = random.spread_is_variance ? std::sqrt(random.spread) : random.spread;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Index k = 0; k < random.count; ++k)
    beta[order[static_cast<std::size_t>(k)]] = sd * normal(rng);
  return beta;
}

Eigen::VectorXd simulate_phenotypes(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta, std::uint64_t seed)
{
  if (X.cols() != beta.size())
    throw std::invalid_argument("phenotype simulation: X has " + std::to_string(X.cols())
                                + " columns but beta has length " + std::to_string(beta.size()));
  auto rng = stream_engine(seed, Stream::phenotypes);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Eigen::VectorXd eta = X * beta;
  Eigen::VectorXd y(X.rows());
  for (Index i = 0; i < X.rows(); ++i) {
    const double prob = 1.0 / (1.0 + std::exp(-eta[i]));
    y[i] = unif(rng) < prob ? 1.0 : 0.0;
  }
  return y;
}

Simulation simulate_dataset(const SimSpec& spec)
{
  const auto names = default_column_names(spec.p);
  Eigen::MatrixXd X = standardize(simulate_genotypes(spec), names);
  Eigen::VectorXd beta = true_coefficients(spec);
  Eigen::VectorXd y = simulate_phenotypes(X, beta, spec.seed);
  return {make_dataset(std::move(X), std::move(y), names), std::move(beta)};
}

SimSpec scenario_a(std::uint64_t seed)
{
  SimSpec spec;
  spec.n = 500;
  spec.p = 50;
  spec.block_size = 10;
  spec.within_block_corr = 0.6;
  const std::vector<Index> loci = {10, 14, 24, 31, 37};
  std::vector<FixedEffect> effects;
  for (std::size_t k = 0; k < loci.size(); ++k)
    effects.push_back({loci[k], kReferenceEffects[k]});
  spec.nonzero = effects;
  spec.seed = seed;
  return spec;
}

SimSpec scenario_b(std::uint64_t seed)
{
  SimSpec spec;
  spec.n = 1859;
  spec.p = 184;
  spec.block_size = 10;
  spec.within_block_corr = 0.6;
  const std::vector<Index> loci = {108, 22, 5, 117, 162};
  std::vector<FixedEffect> effects;
  for (std::size_t k = 0; k < loci.size(); ++k)
    effects.push_back({loci[k], kReferenceEffects[k]});
  spec.nonzero = effects;
  spec.seed = seed;
  return spec;
}

} // namespace spa
