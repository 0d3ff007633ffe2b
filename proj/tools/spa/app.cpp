#include "app.hpp"

#include "commands.hpp"
#include "kv_file.hpp"
#include "spa/error.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <functional>

namespace spa::cli {

namespace {

/// Expands `--config FILE` / `--from-manifest FILE` into `--key=value`
/// arguments for every key not already given on the command line (under any
/// of the option's names), so flags override the file.
std::vector<std::string> expand_config(const std::vector<std::string>& args, const CLI::App& app)
{
  std::vector<std::string> rest;
  std::string file;
  int seen = 0;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    for (const std::string name : {"--config", "--from-manifest"}) {
      if (a == name) {
        if (i + 1 >= args.size())
          throw CLI::ArgumentMismatch(name + " needs a file");
        file = args[++i];
        ++seen;
        goto next;
      }
      if (a.rfind(name + "=", 0) == 0) {
        file = a.substr(name.size() + 1);
        ++seen;
        goto next;
      }
    }
    rest.push_back(a);
  next:;
  }
  if (seen == 0)
    return args;
  if (seen > 1)
    throw CLI::ArgumentMismatch("give at most one of --config / --from-manifest");

  const auto kv = KvFile::read(file);
  const CLI::App* sub = rest.empty() ? nullptr : app.get_subcommand_no_throw(rest.front());
  std::vector<std::string> injected;
  for (const auto& [key, value] : kv.entries()) {
    const std::string opt = "--" + key;
    const CLI::Option* option = sub ? sub->get_option_no_throw(opt) : nullptr;
    bool given = false;
    for (const auto& a : rest) {
      if (a.rfind("-", 0) != 0)
        continue;
      const std::string name = a.substr(0, a.find('='));
      if (name == opt || (option && option->check_name(name)))
        given = true;
    }
    if (!given)
      injected.push_back(opt + "=" + value);
  }
  // Subcommand name first, then file values, then the explicit flags.
  std::vector<std::string> out;
  if (!rest.empty()) {
    out.push_back(rest.front());
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), rest.begin() + 1, rest.end());
  }
  return out;
}

unsigned threads_from_env()
{
  const char* env = std::getenv("SPA_THREADS");
  if (!env || !*env)
    return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 0)
    throw std::invalid_argument(std::string("SPA_THREADS must be a non-negative integer, got '") + env + "'");
  return static_cast<unsigned>(v);
}

void add_config_options(CLI::App* cmd)
{
  cmd->add_option("--config", "flat key=value file; explicit flags take precedence");
}

} // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Sparsity path analysis for logistic regression under generalized t priors", "spa"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version());

  std::function<void()> action;
  std::optional<unsigned> threads;

  // simulate
  SimulateOptions sim;
  auto* s = app.add_subcommand("simulate", "simulate a genotype study");
  add_config_options(s);
  s->add_option("--scenario", sim.scenario, "preset design: a (n=500, p=50) or b (n=1859, p=184)");
  s->add_option("--n", sim.n, "subjects");
  s->add_option("--p", sim.p, "markers");
  s->add_option("--block-size", sim.block_size, "markers per LD block");
  s->add_option("--ld-corr", sim.ld_corr, "latent correlation within a block, in [0, 1)");
  s->add_option("--nonzero-index", sim.nonzero_index, "1-based signal loci")->delimiter(',');
  s->add_option("--nonzero-coef", sim.nonzero_coef, "coefficients for --nonzero-index")->delimiter(',');
  s->add_option("--random-effects", sim.random_effects, "number of randomly placed signal loci");
  s->add_option("--effect-sd", sim.effect_sd, "spread of random effects")->capture_default_str();
  s->add_flag("--effect-variance", sim.effect_variance, "read --effect-sd as a variance");
  s->add_option("--seed", sim.seed)->capture_default_str();
  s->add_option("--out", sim.out, "dataset CSV")->required();
  s->add_option("--truth", sim.truth, "coefficient CSV (default: truth.csv next to --out)");
  s->callback([&] { action = [&] { cmd_simulate(sim, out); }; });

  // run
  RunOptions ro;
  std::string version_in_manifest;
  auto* r = app.add_subcommand("run", "run the sampler over the rate schedule");
  add_config_options(r);
  r->add_option("--from-manifest", "rerun from a manifest.txt written by an earlier run");
  r->add_option("--data", ro.data, "dataset CSV")->required();
  r->add_option("--out", ro.out, "run directory")->required();
  r->add_option("--a", ro.a, "prior degrees of freedom")->capture_default_str();
  r->add_option("--b1", ro.b1, "first (largest) rate")->capture_default_str();
  r->add_option("--ratio", ro.ratio, "geometric rate decay per step")->capture_default_str();
  r->add_option("--steps,--T", ro.steps, "number of rates")->capture_default_str();
  r->add_option("--particles,--N", ro.particles)->capture_default_str();
  r->add_option("--cycles", ro.cycles, "Metropolis-within-Gibbs sweeps per step")->capture_default_str();
  r->add_option("--step-sd", ro.step_sd, "random-walk proposal sd")->capture_default_str();
  r->add_option("--ess-frac", ro.ess_frac, "resample when ESS < frac * N")->capture_default_str();
  r->add_option("--seed", ro.seed)->capture_default_str();
  r->add_option("--burn-in", ro.burn_in, "initial chain sweeps discarded")->capture_default_str();
  r->add_option("--thin", ro.thin, "initial chain sweeps per particle")->capture_default_str();
  r->add_option("--snapshot-every", ro.snapshot_every, "keep particles every k-th step")->capture_default_str();
  r->add_flag("--intercept", ro.intercept, "add an unpenalized intercept column");
  r->add_flag("--quiet", ro.quiet, "no progress output");
  r->add_option("--spa-version", version_in_manifest)->group("");
  r->add_option("--threads", threads, "worker threads (default: SPA_THREADS or all cores)");
  r->callback([&] { action = [&] {
    ro.threads = threads ? *threads : threads_from_env();
    if (!version_in_manifest.empty() && version_in_manifest != version())
      err << "note: manifest written by spa " << version_in_manifest << ", running " << version() << '\n';
    cmd_run(ro, out);
  }; });

  // summarize
  SummarizeOptions so;
  auto* m = app.add_subcommand("summarize", "path statistics from a run directory");
  add_config_options(m);
  m->add_option("--run", so.run, "run directory")->required();
  m->add_option("--out", so.out, "summary directory (default: <run>/summary)");
  m->add_option("--deltas", so.deltas, "concentration thresholds")->delimiter(',')->capture_default_str();
  m->add_option("--level", so.level, "central credible level")->capture_default_str();
  m->add_option("--kde-points", so.kde_points)->capture_default_str();
  m->add_option("--kde-steps", so.kde_steps, "density curves per coefficient")->capture_default_str();
  m->add_flag("--no-map", so.no_map, "skip the MAP path");
  m->add_option("--threads", threads, "worker threads (default: SPA_THREADS or all cores)");
  m->callback([&] { action = [&] {
    so.threads = threads ? *threads : threads_from_env();
    cmd_summarize(so, out);
  }; });

  // mcmc-check
  McmcCheckOptions mc;
  auto* c = app.add_subcommand("mcmc-check", "fixed-rate MCMC chain, optionally compared with a run");
  add_config_options(c);
  c->add_option("--data", mc.data, "dataset CSV (default: the run's dataset)");
  c->add_option("--run", mc.run, "run directory to compare against");
  c->add_option("--out", mc.out, "output directory")->required();
  c->add_option("--a", mc.a, "prior degrees of freedom (default: the run's)");
  c->add_option("--b", mc.b, "prior rate");
  c->add_option("--step", mc.step, "take the rate of this run step");
  c->add_flag("--intercept", mc.intercept, "add an unpenalized intercept column (without --run)");
  c->add_option("--iters", mc.iterations, "sweeps after burn-in")->capture_default_str();
  c->add_option("--burn-in", mc.burn_in)->capture_default_str();
  c->add_option("--thin", mc.thin)->capture_default_str();
  c->add_option("--step-sd", mc.step_sd)->capture_default_str();
  c->add_option("--level", mc.level)->capture_default_str();
  c->add_option("--seed", mc.seed)->capture_default_str();
  c->callback([&] { action = [&] { cmd_mcmc_check(mc, out); }; });

  // plot
  PlotOptions po;
  auto* p = app.add_subcommand("plot", "SVG figures from a summary directory");
  add_config_options(p);
  p->add_option("--summary", po.summary, "summary directory")->required();
  p->add_option("--out", po.out, "plot directory (default: <summary>/plots)");
  p->add_option("--kind", po.kind, "spa, bands, densities, marginal or all")->capture_default_str();
  p->add_option("--truth", po.truth, "truth.csv; highlights its nonzero coefficients");
  p->add_option("--coefficients", po.coefficients, "restrict band and density plots")->delimiter(',');
  p->callback([&] { action = [&] { cmd_plot(po, out); }; });

  try {
    try {
      args = expand_config(args, app);
    } catch (const IoError& e) {
      err << "spa: " << e.what() << '\n';
      return exit_io;
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::CallForVersion&) {
    out << version() << '\n';
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "spa: " << e.what() << '\n';
    for (auto* sub : app.get_subcommands())
      err << "run 'spa " << sub->get_name() << " --help' for usage\n";
    return exit_usage;
  } catch (const spa::ParseError& e) {
    err << "spa: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "spa: " << e.what() << '\n';
    return exit_usage;
  }

  try {
    action();
    return exit_ok;
  } catch (const DegeneracyError& e) {
    err << "spa: weights degenerated at step " << e.step() << ": " << e.what() << '\n';
    return exit_numerical;
  } catch (const NumericalError& e) {
    err << "spa: numerical failure: " << e.what() << '\n';
    return exit_numerical;
  } catch (const IoError& e) {
    err << "spa: " << e.what() << '\n';
    return exit_io;
  } catch (const spa::ParseError& e) {
    err << "spa: " << e.what() << '\n';
    return exit_io;
  } catch (const std::invalid_argument& e) {
    err << "spa: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::out_of_range& e) {
    err << "spa: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "spa: " << e.what() << '\n';
    return exit_failure;
  }
}

} // namespace spa::cli
