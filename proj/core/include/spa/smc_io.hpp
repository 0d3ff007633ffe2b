#pragma once

#include "spa/smc.hpp"

#include <filesystem>

namespace spa {

// Run directory layout:
//   steps.csv                    t,b,ess,log_z_ratio_cum,acceptance_rate
//   particles/step_0001.csv      particle_index,weight,<coefficient names>

std::filesystem::path snapshot_path(const std::filesystem::path& run_dir, std::size_t t);

void write_steps(const std::vector<StepRecord>& steps, const std::filesystem::path& run_dir);

void write_snapshot(const Snapshot& snapshot,
                    const std::vector<std::string>& names,
                    const std::filesystem::path& run_dir);

void write_smc_output(const SmcOutput& output, const std::filesystem::path& run_dir);

/// Reads whatever snapshots exist next to steps.csv. `a` is not stored in the
/// run files; callers take it from the run manifest.
SmcOutput read_smc_output(const std::filesystem::path& run_dir, double a);

} // namespace spa
