#pragma once

#include "kv_file.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace spa::cli {

const char* version();

struct SimulateOptions
{
  std::string scenario;               // "", "a" or "b"
  std::optional<long> n, p, block_size;
  std::optional<double> ld_corr;
  std::vector<long> nonzero_index;    // 1-based
  std::vector<double> nonzero_coef;
  std::optional<long> random_effects;
  double effect_sd = 0.2;
  bool effect_variance = false;
  std::uint64_t seed = 1;
  std::filesystem::path out;
  std::filesystem::path truth;        // empty: truth.csv next to `out`
};

void cmd_simulate(const SimulateOptions& o, std::ostream& out);

struct RunOptions
{
  std::filesystem::path data;
  std::filesystem::path out;
  double a = 4.0;
  double b1 = 2.0;
  double ratio = 0.98;
  std::size_t steps = 350;
  std::size_t particles = 8192;
  int cycles = 5;
  double step_sd = 0.5;
  double ess_frac = 0.75;
  std::uint64_t seed = 1;
  int burn_in = 2000;
  int thin = 5;
  std::size_t snapshot_every = 1;
  bool intercept = false;
  unsigned threads = 0;
  bool quiet = false;
};

/// Everything that determines the run's output, in flag spelling.
KvFile run_manifest(const RunOptions& o);

void cmd_run(const RunOptions& o, std::ostream& out);

struct SummarizeOptions
{
  std::filesystem::path run;
  std::filesystem::path out;          // empty: <run>/summary
  std::vector<double> deltas = {0.05, 0.1};
  double level = 0.9;
  std::size_t kde_points = 201;
  std::size_t kde_steps = 8;
  bool no_map = false;
  unsigned threads = 0;
};

void cmd_summarize(const SummarizeOptions& o, std::ostream& out);

struct McmcCheckOptions
{
  std::filesystem::path data;         // default: the run's dataset
  std::filesystem::path run;          // comparison run; optional
  std::filesystem::path out;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<std::size_t> step;    // pick b from this step of the run
  bool intercept = false;
  int iterations = 100000;
  int burn_in = 2000;
  int thin = 1;
  double step_sd = 0.5;
  double level = 0.9;
  std::uint64_t seed = 1;
};

void cmd_mcmc_check(const McmcCheckOptions& o, std::ostream& out);

struct PlotOptions
{
  std::filesystem::path summary;
  std::filesystem::path out;          // empty: <summary>/plots
  std::string kind = "all";           // spa, bands, densities, marginal, all
  std::filesystem::path truth;        // highlights true nonzeros when given
  std::vector<std::string> coefficients; // band and density plots; empty: all
};

void cmd_plot(const PlotOptions& o, std::ostream& out);

} // namespace spa::cli
