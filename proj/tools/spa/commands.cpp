#include "commands.hpp"

#include "plots.hpp"
#include "spa/csv.hpp"
#include "spa/dataset.hpp"
#include "spa/error.hpp"
#include "spa/schedule.hpp"
#include "spa/simulate.hpp"
#include "spa/smc.hpp"
#include "spa/smc_io.hpp"
#include "spa/summary.hpp"
#include "spa/summary_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace spa::cli {

namespace fs = std::filesystem;

const char* version()
{
  return SPA_VERSION;
}

namespace {

std::string fmt(double v)
{
  return csv::format_double(v);
}

std::string flag(bool v)
{
  return v ? "true" : "false";
}

bool parse_bool(const std::string& key, const std::string& v)
{
  if (v == "true" || v == "1")
    return true;
  if (v == "false" || v == "0")
    return false;
  throw std::invalid_argument("manifest key '" + key + "' must be true or false, got '" + v + "'");
}

double parse_number(const std::string& key, const std::string& v)
{
  try {
    return csv::parse_double(v, "manifest", 0);
  } catch (const ParseError&) {
    throw std::invalid_argument("manifest key '" + key + "' is not a number: '" + v + "'");
  }
}

void write_text(const fs::path& path, const std::string& content)
{
  auto out = csv::open_for_write(path);
  out << content;
  if (!out)
    throw IoError("failed writing " + path.string());
}

std::string file_stem_for(const std::string& name)
{
  std::string s;
  for (char ch : name)
    s += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_') ? ch : '_';
  return s.empty() ? "coef" : s;
}

struct RunInputs
{
  KvFile manifest;
  double a = 0.0;
  fs::path data;
  bool intercept = false;
};

RunInputs read_run_inputs(const fs::path& run)
{
  if (!fs::exists(run / "steps.csv"))
    throw IoError("no sampler run in " + run.string() + " (steps.csv missing)");
  const auto manifest_path = run / "manifest.txt";
  if (!fs::exists(manifest_path))
    throw IoError("no manifest.txt in " + run.string());
  RunInputs in;
  in.manifest = KvFile::read(manifest_path);
  in.a = parse_number("a", in.manifest.require("a"));
  in.data = in.manifest.require("data");
  in.intercept = parse_bool("intercept", in.manifest.get("intercept").value_or("false"));
  return in;
}

Dataset load_design(const fs::path& path, bool intercept)
{
  auto data = load_dataset(path);
  return intercept ? with_intercept(data) : data;
}

struct Interval
{
  double median, lower, upper;
};

Interval interval(std::span<const double> values, std::span<const double> weights, double level)
{
  const WeightedSample s(values, weights);
  return {s.quantile(0.5), s.quantile(0.5 * (1.0 - level)), s.quantile(0.5 * (1.0 + level))};
}

} // namespace

void cmd_simulate(const SimulateOptions& o, std::ostream& out)
{
  SimSpec spec;
  if (o.scenario == "a")
    spec = scenario_a(o.seed);
  else if (o.scenario == "b")
    spec = scenario_b(o.seed);
  else if (!o.scenario.empty())
    throw std::invalid_argument("unknown scenario '" + o.scenario + "' (expected a or b)");
  spec.seed = o.seed;
  if (o.n)
    spec.n = *o.n;
  if (o.p)
    spec.p = *o.p;
  if (o.block_size)
    spec.block_size = *o.block_size;
  if (o.ld_corr)
    spec.within_block_corr = *o.ld_corr;

  if (!o.nonzero_index.empty() && o.random_effects)
    throw std::invalid_argument("--nonzero-index and --random-effects are mutually exclusive");
  if (!o.nonzero_index.empty() || !o.nonzero_coef.empty()) {
    if (o.nonzero_index.size() != o.nonzero_coef.size())
      throw std::invalid_argument("need one --nonzero-coef per --nonzero-index");
    std::vector<FixedEffect> fixed;
    for (std::size_t k = 0; k < o.nonzero_index.size(); ++k)
      fixed.push_back({o.nonzero_index[k], o.nonzero_coef[k]});
    spec.nonzero = fixed;
  } else if (o.random_effects) {
    spec.nonzero = RandomEffects{*o.random_effects, o.effect_sd, o.effect_variance};
  }
  validate(spec);

  const auto sim = simulate_dataset(spec);
  save_dataset(sim.data, o.out);
  const fs::path truth = o.truth.empty() ? o.out.parent_path() / "truth.csv" : o.truth;
  {
    auto t = csv::open_for_write(truth);
    csv::write_row(t, {"index", "beta"});
    for (Index j = 0; j < sim.beta_true.size(); ++j)
      csv::write_row(t, {std::to_string(j + 1), fmt(sim.beta_true[j])});
    if (!t)
      throw IoError("failed writing " + truth.string());
  }
  const double cases = sim.data.y.sum();
  char line[160];
  std::snprintf(line, sizeof(line), "n=%ld p=%ld cases=%.0f (%.3f)\n", static_cast<long>(sim.data.n()),
                static_cast<long>(sim.data.p()), cases, cases / static_cast<double>(sim.data.n()));
  out << "wrote " << o.out.string() << " and " << truth.string() << '\n' << line;
}

KvFile run_manifest(const RunOptions& o)
{
  KvFile m;
  m.set("spa-version", version());
  m.set("data", o.data.string());
  m.set("out", o.out.string());
  m.set("a", fmt(o.a));
  m.set("b1", fmt(o.b1));
  m.set("ratio", fmt(o.ratio));
  m.set("steps", std::to_string(o.steps));
  m.set("particles", std::to_string(o.particles));
  m.set("cycles", std::to_string(o.cycles));
  m.set("step-sd", fmt(o.step_sd));
  m.set("ess-frac", fmt(o.ess_frac));
  m.set("seed", std::to_string(o.seed));
  m.set("burn-in", std::to_string(o.burn_in));
  m.set("thin", std::to_string(o.thin));
  m.set("snapshot-every", std::to_string(o.snapshot_every));
  m.set("intercept", flag(o.intercept));
  return m;
}

void cmd_run(const RunOptions& o, std::ostream& out)
{
  if (!(o.a > 0.0 && std::isfinite(o.a)))
    throw std::invalid_argument("--a must be finite and > 0");
  const Schedule schedule(o.b1, o.ratio, o.steps);
  SmcConfig config;
  config.particles = o.particles;
  config.cycles = o.cycles;
  config.step_sd = o.step_sd;
  config.ess_threshold_frac = o.ess_frac;
  config.seed = o.seed;
  config.burn_in = o.burn_in;
  config.thin = o.thin;
  config.threads = o.threads;
  config.snapshot_every = o.snapshot_every;
  config.retain_snapshots = false;
  validate(config);

  const auto data = load_design(o.data, o.intercept);

  fs::create_directories(o.out);
  if (fs::exists(o.out / "particles"))
    for (const auto& entry : fs::directory_iterator(o.out / "particles")) {
      const auto name = entry.path().filename().string();
      if (name.rfind("step_", 0) == 0 && entry.path().extension() == ".csv")
        fs::remove(entry.path());
    }
  run_manifest(o).write(o.out / "manifest.txt", "spa run manifest");

  const std::size_t T = schedule.size();
  const auto output = run_sampler(data, o.a, schedule, config, [&](const StepRecord& rec, const ParticleSystem& sys) {
    if (keeps_snapshot(rec.t, T, o.snapshot_every))
      write_snapshot(take_snapshot(sys), data.names, o.out);
    if (!o.quiet && (rec.t % 25 == 0 || rec.t == T)) {
      char line[160];
      std::snprintf(line, sizeof(line), "step %zu/%zu  b=%.5g  ess=%.1f  log Z ratio=%.4f  accept=%.3f\n", rec.t, T,
                    rec.b, rec.ess, rec.log_z_ratio, rec.acceptance_rate);
      out << line << std::flush;
    }
  });
  write_steps(output.steps, o.out);
  out << "wrote " << T << " steps to " << o.out.string() << '\n';
}

void cmd_summarize(const SummarizeOptions& o, std::ostream& out)
{
  const auto inputs = read_run_inputs(o.run);
  const auto output = read_smc_output(o.run, inputs.a);
  if (!output.has_all_snapshots())
    throw std::invalid_argument("run in " + o.run.string()
                                + " lacks particle snapshots for some steps; rerun `spa run` with --snapshot-every 1");

  SummaryOptions options;
  options.deltas = o.deltas;
  options.level = o.level;
  options.kde_points = o.kde_points;
  options.kde_steps = o.kde_steps;
  options.compute_map = !o.no_map;
  options.threads = o.threads;
  validate(options);

  std::optional<Dataset> data;
  if (options.compute_map)
    data = load_design(inputs.data, inputs.intercept);

  const auto result = summarize(output, data ? &*data : nullptr, options);
  const fs::path dir = o.out.empty() ? o.run / "summary" : o.out;
  write_spa_result(result, dir);
  out << format_report(result);
}

void cmd_mcmc_check(const McmcCheckOptions& o, std::ostream& out)
{
  std::optional<RunInputs> inputs;
  std::optional<SmcOutput> run;
  if (!o.run.empty()) {
    inputs = read_run_inputs(o.run);
    run = read_smc_output(o.run, inputs->a);
    if (run->snapshots.empty())
      throw std::invalid_argument("run in " + o.run.string() + " has no particle snapshots");
  }
  const double a = o.a ? *o.a : inputs ? inputs->a : throw std::invalid_argument("--a is required without --run");
  fs::path data_path = o.data;
  if (data_path.empty()) {
    if (!inputs)
      throw std::invalid_argument("--data is required without --run");
    data_path = inputs->data;
  }
  const bool intercept = inputs ? inputs->intercept : o.intercept;

  double b = 0.0;
  if (o.step) {
    if (!run)
      throw std::invalid_argument("--step needs --run");
    const auto* snap = run->snapshot_at(*o.step);
    if (!snap)
      throw std::invalid_argument("run has no snapshot for step " + std::to_string(*o.step));
    b = snap->b;
  } else if (o.b) {
    b = *o.b;
  } else {
    throw std::invalid_argument("one of --b or --step is required");
  }
  if (o.b && o.step)
    throw std::invalid_argument("--b and --step are mutually exclusive");

  const auto data = load_design(data_path, intercept);
  const auto prior = GtPrior::from_rate(a, b);
  McmcOptions mo;
  mo.iterations = o.iterations;
  mo.burn_in = o.burn_in;
  mo.thin = o.thin;
  mo.step_sd = o.step_sd;
  mo.seed = o.seed;
  const auto chain = fixed_b_mcmc(data, prior, mo);

  {
    auto s = csv::open_for_write(o.out / "samples.csv");
    csv::write_row(s, data.names);
    std::vector<std::string> row;
    for (Index i = 0; i < chain.samples.rows(); ++i) {
      row.clear();
      for (Index j = 0; j < chain.samples.cols(); ++j)
        row.push_back(fmt(chain.samples(i, j)));
      csv::write_row(s, row);
    }
    if (!s)
      throw IoError("failed writing samples.csv");
  }

  const Index p = data.p();
  const Eigen::VectorXd flat = Eigen::VectorXd::Ones(chain.samples.rows());
  const Snapshot* snap = nullptr;
  if (run) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : run->snapshots) {
      const double gap = std::abs(std::log(s.b) - std::log(b));
      if (gap < best) {
        best = gap;
        snap = &s;
      }
    }
    if (snap->betas.cols() != p)
      throw std::invalid_argument("run and dataset have different numbers of coefficients");
  }

  const std::string pct = csv::format_double(100.0 * o.level);
  const fs::path table = o.out / (snap ? "comparison.csv" : "mcmc_summary.csv");
  auto t = csv::open_for_write(table);
  if (snap)
    csv::write_row(t, {"coefficient", "smc_t", "smc_b", "smc_median", "mcmc_median", "median_diff", "smc_lo" + pct,
                       "mcmc_lo" + pct, "lo_diff", "smc_hi" + pct, "mcmc_hi" + pct, "hi_diff"});
  else
    csv::write_row(t, {"coefficient", "median", "lo" + pct, "hi" + pct});

  char line[256];
  out << "fixed-b chain: a=" << fmt(a) << " b=" << fmt(b) << " draws=" << chain.samples.rows()
      << " acceptance=" << fmt(std::round(chain.acceptance_rate * 1000.0) / 1000.0) << '\n';
  if (snap) {
    out << "compared with step " << snap->t << " (b=" << fmt(snap->b) << ")\n";
    std::snprintf(line, sizeof(line), "%-16s %10s %10s %10s %10s\n", "coefficient", "smc_med", "mcmc_med", "|d_lo|",
                  "|d_hi|");
    out << line;
  }
  for (Index j = 0; j < p; ++j) {
    const auto m = interval({chain.samples.col(j).data(), static_cast<std::size_t>(chain.samples.rows())},
                            {flat.data(), static_cast<std::size_t>(flat.size())}, o.level);
    if (!snap) {
      csv::write_row(t, {data.names[static_cast<std::size_t>(j)], fmt(m.median), fmt(m.lower), fmt(m.upper)});
      continue;
    }
    const auto s = interval({snap->betas.col(j).data(), static_cast<std::size_t>(snap->betas.rows())},
                            {snap->weights.data(), static_cast<std::size_t>(snap->weights.size())}, o.level);
    csv::write_row(t, {data.names[static_cast<std::size_t>(j)], std::to_string(snap->t), fmt(snap->b), fmt(s.median),
                       fmt(m.median), fmt(s.median - m.median), fmt(s.lower), fmt(m.lower), fmt(s.lower - m.lower),
                       fmt(s.upper), fmt(m.upper), fmt(s.upper - m.upper)});
    std::snprintf(line, sizeof(line), "%-16s %10.4f %10.4f %10.4f %10.4f\n", data.names[static_cast<std::size_t>(j)].c_str(),
                  s.median, m.median, std::abs(s.lower - m.lower), std::abs(s.upper - m.upper));
    out << line;
  }
  if (!t)
    throw IoError("failed writing " + table.string());
}

void cmd_plot(const PlotOptions& o, std::ostream& out)
{
  static const std::vector<std::string> kinds = {"all", "spa", "bands", "densities", "marginal"};
  if (std::find(kinds.begin(), kinds.end(), o.kind) == kinds.end())
    throw std::invalid_argument("unknown plot kind '" + o.kind + "'");
  const auto result = read_spa_result(o.summary);
  const fs::path dir = o.out.empty() ? o.summary / "plots" : o.out;
  const auto want = [&](const char* k) { return o.kind == "all" || o.kind == k; };
  const std::size_t p = result.names.size();
  const std::size_t d = ranking_delta_index(result.deltas);

  std::vector<std::size_t> selected;
  for (const auto& name : o.coefficients) {
    const auto it = std::find(result.names.begin(), result.names.end(), name);
    if (it == result.names.end())
      throw std::invalid_argument("unknown coefficient '" + name + "'");
    selected.push_back(static_cast<std::size_t>(it - result.names.begin()));
  }
  if (o.coefficients.empty())
    for (std::size_t j = 0; j < p; ++j)
      selected.push_back(j);

  std::size_t written = 0;
  if (want("spa")) {
    std::vector<std::size_t> highlight;
    if (!o.truth.empty()) {
      const auto table = csv::read_table(o.truth);
      const std::size_t offset = (!result.names.empty() && result.names.front() == "(intercept)") ? 1 : 0;
      for (std::size_t r = 1; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != 2)
          throw ParseError(o.truth.string(), table.lines[r], "expected index,beta");
        const auto idx = csv::parse_integer(row[0], o.truth.string(), table.lines[r]);
        const double beta = csv::parse_double(row[1], o.truth.string(), table.lines[r]);
        const auto j = static_cast<std::size_t>(idx) - 1 + offset;
        if (idx < 1 || j >= p)
          throw ParseError(o.truth.string(), table.lines[r], "index out of range");
        if (beta != 0.0)
          highlight.push_back(j);
      }
    } else {
      const auto order = result.ranking(d);
      highlight.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(5, p)));
    }
    write_text(dir / "spa.svg", spa_plot(result, highlight, d));
    ++written;
  }
  if (want("bands"))
    for (auto j : selected) {
      write_text(dir / "bands" / (file_stem_for(result.names[j]) + ".svg"), band_plot(result, j));
      ++written;
    }
  if (want("densities"))
    for (auto j : selected) {
      write_text(dir / "densities" / (file_stem_for(result.names[j]) + ".svg"), density_plot(result, j));
      ++written;
    }
  if (want("marginal")) {
    write_text(dir / "marginal.svg", marginal_plot(result));
    ++written;
  }
  out << "wrote " << written << " SVG files to " << dir.string() << '\n';
}

} // namespace spa::cli
