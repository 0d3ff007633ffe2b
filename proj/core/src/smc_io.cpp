#include "spa/smc_io.hpp"

#include "spa/csv.hpp"
#include "spa/error.hpp"

#include <cstdio>

namespace spa {

namespace fs = std::filesystem;

fs::path snapshot_path(const fs::path& run_dir, std::size_t t)
{
  char name[32];
  std::snprintf(name, sizeof(name), "step_%04zu.csv", t);
  return run_dir / "particles" / name;
}

void write_steps(const std::vector<StepRecord>& steps, const fs::path& run_dir)
{
  auto out = csv::open_for_write(run_dir / "steps.csv");
  csv::write_row(out, {"t", "b", "ess", "log_z_ratio_cum", "acceptance_rate"});
  for (const auto& s : steps)
    csv::write_row(out, {std::to_string(s.t), csv::format_double(s.b), csv::format_double(s.ess),
                         csv::format_double(s.log_z_ratio), csv::format_double(s.acceptance_rate)});
  if (!out)
    throw IoError("failed writing steps.csv in " + run_dir.string());
}

void write_snapshot(const Snapshot& snapshot, const std::vector<std::string>& names, const fs::path& run_dir)
{
  const auto path = snapshot_path(run_dir, snapshot.t);
  auto out = csv::open_for_write(path);
  std::vector<std::string> fields{"particle_index", "weight"};
  fields.insert(fields.end(), names.begin(), names.end());
  csv::write_row(out, fields);
  for (Index i = 0; i < snapshot.betas.rows(); ++i) {
    fields.clear();
    fields.push_back(std::to_string(i));
    fields.push_back(csv::format_double(snapshot.weights[i]));
    for (Index j = 0; j < snapshot.betas.cols(); ++j)
      fields.push_back(csv::format_double(snapshot.betas(i, j)));
    csv::write_row(out, fields);
  }
  if (!out)
    throw IoError("failed writing " + path.string());
}

void write_smc_output(const SmcOutput& output, const fs::path& run_dir)
{
  write_steps(output.steps, run_dir);
  for (const auto& snap : output.snapshots)
    write_snapshot(snap, output.names, run_dir);
}

namespace {

Snapshot read_snapshot(const fs::path& path, std::size_t t, double b, std::vector<std::string>& names)
{
  const std::string label = path.string();
  const auto table = csv::read_table(path);
  if (table.rows.empty() || table.rows.front().size() < 3 || table.rows.front()[0] != "particle_index")
    throw ParseError(label, 1, "expected header particle_index,weight,<coefficients>");
  const auto& header = table.rows.front();
  std::vector<std::string> file_names(header.begin() + 2, header.end());
  if (names.empty())
    names = file_names;
  else if (names != file_names)
    throw ParseError(label, 1, "coefficient names differ from earlier snapshots");

  const auto N = static_cast<Index>(table.rows.size() - 1);
  const auto p = static_cast<Index>(file_names.size());
  Snapshot snap;
  snap.t = t;
  snap.b = b;
  snap.weights.resize(N);
  snap.betas.resize(N, p);
  for (Index i = 0; i < N; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i + 1)];
    const auto line = table.lines[static_cast<std::size_t>(i + 1)];
    if (static_cast<Index>(row.size()) != p + 2)
      throw ParseError(label, line, "ragged particle row");
    snap.weights[i] = csv::parse_double(row[1], label, line);
    for (Index j = 0; j < p; ++j)
      snap.betas(i, j) = csv::parse_double(row[static_cast<std::size_t>(j + 2)], label, line);
  }
  return snap;
}

} // namespace

SmcOutput read_smc_output(const fs::path& run_dir, double a)
{
  const auto steps_path = run_dir / "steps.csv";
  if (!fs::exists(steps_path))
    throw IoError("no steps.csv in " + run_dir.string());
  const std::string label = steps_path.string();
  const auto table = csv::read_table(steps_path);
  if (table.rows.empty() || table.rows.front().size() != 5 || table.rows.front()[0] != "t")
    throw ParseError(label, 1, "expected header t,b,ess,log_z_ratio_cum,acceptance_rate");

  SmcOutput out;
  out.a = a;
  for (std::size_t r = 1; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto line = table.lines[r];
    if (row.size() != 5)
      throw ParseError(label, line, "expected 5 fields");
    StepRecord rec;
    const auto t = csv::parse_integer(row[0], label, line);
    if (t < 1)
      throw ParseError(label, line, "step index must be >= 1");
    rec.t = static_cast<std::size_t>(t);
    rec.b = csv::parse_double(row[1], label, line);
    rec.ess = csv::parse_double(row[2], label, line);
    rec.log_z_ratio = csv::parse_double(row[3], label, line);
    rec.acceptance_rate = csv::parse_double(row[4], label, line);
    out.steps.push_back(rec);
  }

  for (const auto& rec : out.steps) {
    const auto path = snapshot_path(run_dir, rec.t);
    if (fs::exists(path))
      out.snapshots.push_back(read_snapshot(path, rec.t, rec.b, out.names));
  }
  return out;
}

} // namespace spa
