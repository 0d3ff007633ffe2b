// Acceptance checks for the library and the spa tool. Prints one PASS/FAIL
// line per criterion and exits nonzero when the outcome differs from
// expectations (a failure not listed in --known-failures, or a listed one
// that unexpectedly passes).

#include "spa/csv.hpp"
#include "spa/em_map.hpp"
#include "spa/prior.hpp"
#include "spa/simulate.hpp"
#include "spa/smc.hpp"
#include "spa/summary.hpp"

#include "oracles.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using spa::Index;

namespace {

struct Outcome
{
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::string quote(const fs::path& p)
{
  return "'" + p.string() + "'";
}

int shell(const std::string& cmd)
{
  const int rc = std::system((cmd + " > /dev/null").c_str());
  if (rc != 0)
    throw std::runtime_error("command failed (" + std::to_string(rc) + "): " + cmd);
  return rc;
}

std::string slurp(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> col(const Eigen::MatrixXd& m, Index j)
{
  return {m.col(j).data(), m.col(j).data() + m.rows()};
}

std::vector<double> as_vector(const Eigen::VectorXd& v)
{
  return {v.data(), v.data() + v.size()};
}

spa::Dataset one_predictor(Index n, double beta, std::uint64_t seed)
{
  spa::SimSpec spec;
  spec.n = n;
  spec.p = 1;
  spec.block_size = 1;
  spec.nonzero = std::vector<spa::FixedEffect>{{1, beta}};
  spec.seed = seed;
  return spa::simulate_dataset(spec).data;
}

// 1. Closed-form density against the inverse-gamma scale mixture.
Outcome scale_mixture_identity()
{
  double worst = 0.0;
  for (double a : {0.5, 1.0, 4.0, 20.0})
    for (double c : {0.01, 0.1, 1.0})
      for (int k = 0; k <= 20; ++k) {
        const double beta = -5.0 + 0.5 * k;
        const spa::GtPrior prior(a, c);
        const double closed = std::exp(spa::gt_log_density(beta, prior));
        const double mixture = spa::gt_scale_mixture_oracle(beta, prior);
        worst = std::max(worst, std::abs(mixture / closed - 1.0));
      }
  return {worst < 1e-6, "max relative error " + fmt("%.3g", worst) + " over 252 points"};
}

// 2. Laplace limit at large a.
Outcome laplace_limit()
{
  double density_gap = 0.0;
  std::string log_gaps;
  for (double c : {0.1, 1.0}) {
    const spa::GtPrior prior(1e4, c);
    double log_gap = 0.0;
    for (int k = 0; k <= 10000; ++k) {
      const double beta = -5.0 + 1e-3 * k;
      const double lg = spa::gt_log_density(beta, prior);
      const double ld = spa::de_log_density(beta, c);
      density_gap = std::max(density_gap, std::abs(std::exp(lg) - std::exp(ld)));
      log_gap = std::max(log_gap, std::abs(lg - ld));
    }
    log_gaps += " c=" + fmt("%g", c) + ":" + fmt("%.3g", log_gap);
  }
  return {density_gap < 1e-3, "sup density gap " + fmt("%.3g", density_gap) + "; log-density gaps" + log_gaps};
}

// 3. Threshold formulas.
Outcome thresholds()
{
  const auto t = spa::sparsity_thresholds(4.0);
  const bool ok = std::round(t.c_sparse * 1e5) == 111803.0 && std::round(t.c_continuous * 1e5) == 55902.0;
  return {ok, "(" + fmt("%.5f", t.c_sparse) + ", " + fmt("%.5f", t.c_continuous) + ")"};
}

// 4. EM ascent from random starts.
Outcome em_ascent()
{
  const auto data = spa::simulate_dataset(spa::scenario_a(1)).data;
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> start(0.0, 0.5);
  std::uniform_real_distribution<double> log_c(std::log(0.01), std::log(1.0));
  int violations = 0;
  int not_converged = 0;
  std::size_t iterations = 0;
  for (int r = 0; r < 50; ++r) {
    Eigen::VectorXd init(data.p());
    for (Index j = 0; j < data.p(); ++j)
      init[j] = start(rng);
    const auto res = spa::em_map(data, spa::GtPrior(4.0, std::exp(log_c(rng))), init);
    for (std::size_t k = 1; k < res.trace.size(); ++k)
      violations += res.trace[k].log_post < res.trace[k - 1].log_post - 1e-10;
    not_converged += !res.converged;
    iterations += res.trace.size() - 1;
  }
  return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(iterations)
                             + " EM iterations, " + std::to_string(not_converged) + " runs hit max_iter"};
}

// 5. One-coefficient MAP against brute force.
Outcome map_oracle()
{
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> log_a(std::log(0.5), std::log(10.0));
  std::uniform_real_distribution<double> log_c(std::log(0.02), std::log(2.0));
  std::uniform_int_distribution<int> n_draw(50, 200);
  std::uniform_real_distribution<double> beta_draw(-1.5, 1.5);
  double worst = 0.0;
  for (int r = 0; r < 20; ++r) {
    const double a = std::exp(log_a(rng));
    const double c = std::exp(log_c(rng));
    const auto data = one_predictor(n_draw(rng), beta_draw(rng), 1000 + static_cast<std::uint64_t>(r));
    const spa::GtPrior prior(a, c);
    const auto from_zero = spa::em_map(data, prior, Eigen::VectorXd::Zero(1));
    const auto from_mle = spa::em_map(data, prior, oracle::newton_mle(data.X, data.y));
    const double em = from_zero.log_post >= from_mle.log_post ? from_zero.beta[0] : from_mle.beta[0];
    const double grid = oracle::grid_search(
      [&](double b) {
        return oracle::logistic_loglik(data.X, data.y, Eigen::VectorXd::Constant(1, b)) + oracle::gt_logpdf(b, a, c);
      },
      -5.0, 5.0, 1e-4);
    worst = std::max(worst, std::abs(em - grid));
  }
  return {worst < 1e-3, "max |EM - grid| " + fmt("%.3g", worst) + " over 20 draws"};
}

// 6. Shrinkage curve under Gt(1, 0.1) with unit-variance Gaussian noise.
Outcome shrinkage_curve()
{
  const spa::GtPrior prior(1.0, 0.1);
  double worst_small = 0.0;
  for (double y : {-0.5, -0.25, 0.0, 0.25, 0.5})
    worst_small = std::max(worst_small, std::abs(spa::shrinkage_posterior_mean(y, prior)));
  const double at6 = spa::shrinkage_posterior_mean(6.0, prior);
  double worst_oracle = 0.0;
  for (int k = 0; k <= 24; ++k) {
    const double y = -6.0 + 0.5 * k;
    worst_oracle = std::max(worst_oracle, std::abs(spa::shrinkage_posterior_mean(y, prior)
                                                   - oracle::riemann_shrinkage_mean(y, 1.0, 0.1)));
  }
  const bool small_ok = worst_small < 1e-3;
  const bool large_ok = std::abs(6.0 - at6) < 0.1;
  const bool oracle_ok = worst_oracle < 1e-4;
  return {small_ok && large_ok && oracle_ok,
          "max |E[beta|y]| for |y|<=0.5: " + fmt("%.4g", worst_small) + (small_ok ? "" : " (needs < 1e-3)")
            + "; 6 - E[beta|6] = " + fmt("%.4g", 6.0 - at6) + (large_ok ? "" : " (needs < 0.1)")
            + "; max gap to Riemann sum " + fmt("%.3g", worst_oracle)};
}

// 7. Evidence ratio against quadrature.
Outcome evidence_oracle()
{
  const auto data = one_predictor(50, 0.6, 7);
  const double a = 4.0;
  const spa::Schedule schedule(2.0, 0.98, 100);
  spa::SmcConfig cfg;
  cfg.particles = 8192;
  cfg.seed = 7;
  const auto out = spa::run_sampler(data, a, schedule, cfg);
  const double smc = out.steps.back().log_z_ratio;
  const auto x = col(data.X, 0);
  const auto y = as_vector(data.y);
  const oracle::PosteriorGrid first(x, y, a, schedule.at(1) / a);
  const oracle::PosteriorGrid last(x, y, a, schedule.at(100) / a);
  const double exact = last.log_evidence() - first.log_evidence();
  const double gap = std::abs(smc - exact);
  return {gap < 0.05, "log Z_T/Z_1: SMC " + fmt("%.5f", smc) + ", quadrature " + fmt("%.5f", exact) + ", gap "
                        + fmt("%.3g", gap)};
}

// 8. SMC particles at one rate against a long fixed-rate chain.
Outcome smc_vs_mcmc()
{
  spa::SimSpec spec;
  spec.n = 200;
  spec.p = 10;
  spec.block_size = 5;
  spec.within_block_corr = 0.6;
  spec.nonzero = std::vector<spa::FixedEffect>{{2, 0.4578}, {7, -0.2538}};
  spec.seed = 8;
  const auto data = spa::simulate_dataset(spec).data;
  const double a = 4.0;
  const spa::Schedule schedule(2.0, 0.98, 150);
  const std::size_t mid = 75;

  spa::SmcConfig cfg;
  cfg.particles = 2048;
  cfg.seed = 8;
  cfg.snapshot_every = mid - 1; // keeps steps 1, 75, 149, 150
  const auto out = spa::run_sampler(data, a, schedule, cfg);
  const auto* snap = out.snapshot_at(mid);
  if (!snap)
    throw std::logic_error("snapshot at the middle step was not kept");

  spa::McmcOptions mo;
  mo.iterations = 100000;
  mo.burn_in = 2000;
  mo.seed = 8;
  const auto chain = spa::fixed_b_mcmc(data, spa::GtPrior::from_rate(a, snap->b), mo);
  const Eigen::VectorXd flat = Eigen::VectorXd::Ones(chain.samples.rows());

  double med = 0.0, ends = 0.0;
  const auto w = as_vector(snap->weights);
  const auto fw = as_vector(flat);
  for (Index j = 0; j < data.p(); ++j) {
    const spa::WeightedSample s(col(snap->betas, j), w);
    const spa::WeightedSample m(col(chain.samples, j), fw);
    med = std::max(med, std::abs(s.quantile(0.5) - m.quantile(0.5)));
    ends = std::max({ends, std::abs(s.quantile(0.05) - m.quantile(0.05)), std::abs(s.quantile(0.95) - m.quantile(0.95))});
  }
  return {med < 0.05 && ends < 0.1, "at b=" + fmt("%.4g", snap->b) + ": max median gap " + fmt("%.3g", med)
                                      + ", max 90% endpoint gap " + fmt("%.3g", ends)};
}

struct Table
{
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Table read_csv(const fs::path& path)
{
  auto t = spa::csv::read_table(path);
  Table out;
  out.header = t.rows.front();
  out.rows.assign(t.rows.begin() + 1, t.rows.end());
  return out;
}

// 9. Whole pipeline through the command-line tool.
Outcome spa_recovery(const fs::path& spa_bin, const fs::path& work)
{
  const std::vector<int> signal = {3, 9, 16};
  int successes = 0;
  std::string detail;
  for (int seed = 1; seed <= 5; ++seed) {
    const auto dir = work / ("recovery_seed" + std::to_string(seed));
    fs::remove_all(dir);
    fs::create_directories(dir);
    shell(quote(spa_bin) + " simulate --n 500 --p 20 --block-size 5 --ld-corr 0.3 --nonzero-index 3,9,16"
          + " --nonzero-coef 0.5,-0.4,0.3 --seed " + std::to_string(seed) + " --out " + quote(dir / "data.csv"));
    shell(quote(spa_bin) + " run --data " + quote(dir / "data.csv") + " --out " + quote(dir / "run")
          + " --a 4 --b1 2 --ratio 0.98 --T 150 --N 2048 --quiet --seed " + std::to_string(seed));
    shell(quote(spa_bin) + " summarize --no-map --run " + quote(dir / "run"));

    const auto cp = read_csv(dir / "run" / "summary" / "c_posterior.csv");
    std::string mode_t;
    double best = -1.0;
    for (const auto& r : cp.rows)
      if (std::stod(r[2]) > best) {
        best = std::stod(r[2]);
        mode_t = r[0];
      }
    const auto conc = read_csv(dir / "run" / "summary" / "concentration.csv");
    const std::vector<std::string>* row = nullptr;
    for (const auto& r : conc.rows)
      if (r[0] == mode_t && std::stod(r[3]) == 0.1)
        row = &r;
    if (!row)
      throw std::runtime_error("no V(0.1) row at the posterior mode of c");
    double null_max = 0.0, signal_min = 1.0;
    for (int j = 1; j <= 20; ++j) {
      const double v = std::stod((*row)[static_cast<std::size_t>(3 + j)]);
      if (std::find(signal.begin(), signal.end(), j) != signal.end())
        signal_min = std::min(signal_min, v);
      else
        null_max = std::max(null_max, v);
    }
    const bool ok = signal_min > null_max;
    successes += ok;
    detail += " seed " + std::to_string(seed) + ": min signal " + fmt("%.3f", signal_min) + " vs max null "
              + fmt("%.3f", null_max) + (ok ? "" : " (miss)") + ";";
  }
  detail.pop_back();
  return {successes >= 4, std::to_string(successes) + "/5 seeds separate signal from noise at the c mode;" + detail};
}

// 10. Systematic resampling reproduces N W in expectation.
Outcome resampling_unbiased()
{
  const std::size_t N = 10;
  const int seeds = 10000;
  std::mt19937_64 rng(10);
  std::gamma_distribution<double> gamma(0.7, 1.0);
  int outside = 0;
  int checked = 0;
  double worst = 0.0;
  const auto data = one_predictor(10, 0.0, 1);
  for (int v = 0; v < 5; ++v) {
    Eigen::VectorXd w(static_cast<Index>(N));
    for (auto& x : w)
      x = gamma(rng);
    w /= w.sum();
    std::vector<double> total(N, 0.0);
    for (int s = 0; s < seeds; ++s) {
      spa::ParticleSystem sys;
      for (std::size_t i = 0; i < N; ++i) {
        spa::Particle part;
        part.beta = Eigen::VectorXd::Constant(1, static_cast<double>(i));
        sys.particles.push_back(part);
      }
      sys.weights = w;
      sys.log_weights = w.array().log();
      auto eng = spa::stream_engine(static_cast<std::uint64_t>(s) + 1, spa::Stream::resampling, 1);
      spa::systematic_resample(sys, eng);
      for (const auto& part : sys.particles)
        total[static_cast<std::size_t>(part.beta[0])] += 1.0;
    }
    for (std::size_t i = 0; i < N; ++i) {
      const double expected = static_cast<double>(N) * w[static_cast<Index>(i)];
      const double frac = expected - std::floor(expected);
      const double sd = std::sqrt(frac * (1.0 - frac) / seeds); // count is floor or ceil of N W
      const double mean = total[i] / seeds;
      const double z = sd > 0.0 ? std::abs(mean - expected) / sd : (mean == expected ? 0.0 : INFINITY);
      worst = std::max(worst, z);
      outside += z > 3.0;
      ++checked;
    }
  }
  return {outside == 0, std::to_string(outside) + " of " + std::to_string(checked)
                          + " expected copy counts outside 3 sd; largest |z| " + fmt("%.2f", worst)};
}

// 11. Byte-identical reruns from one manifest.
Outcome determinism(const fs::path& spa_bin, const fs::path& work)
{
  const auto dir = work / "determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  shell(quote(spa_bin) + " simulate --n 200 --p 8 --block-size 4 --ld-corr 0.5 --nonzero-index 2 --nonzero-coef 0.6"
        + " --seed 11 --out " + quote(dir / "data.csv"));
  const auto run = dir / "run";
  shell(quote(spa_bin) + " run --data " + quote(dir / "data.csv") + " --out " + quote(run)
        + " --N 512 --T 30 --b1 2 --ratio 0.9 --seed 11 --quiet --threads 1");
  const auto copy = dir / "first";
  fs::copy(run, copy, fs::copy_options::recursive);
  shell(quote(spa_bin) + " run --from-manifest " + quote(run / "manifest.txt") + " --quiet --threads 2");

  std::size_t files = 0, differ = 0;
  std::set<fs::path> seen;
  for (const auto& e : fs::recursive_directory_iterator(copy)) {
    if (!e.is_regular_file())
      continue;
    const auto rel = fs::relative(e.path(), copy);
    seen.insert(rel);
    ++files;
    differ += slurp(e.path()) != slurp(run / rel);
  }
  for (const auto& e : fs::recursive_directory_iterator(run))
    if (e.is_regular_file() && !seen.count(fs::relative(e.path(), run)))
      ++differ;
  return {files > 0 && differ == 0,
          std::to_string(files) + " files compared, " + std::to_string(differ) + " differ (thread counts 1 and 2)"};
}

// 12. One sweep from exact posterior draws leaves the posterior unchanged.
Outcome kernel_invariance()
{
  const auto data = one_predictor(50, 0.5, 12);
  const double a = 4.0, c = 0.25;
  const spa::GtPrior prior(a, c);
  const oracle::PosteriorGrid grid(col(data.X, 0), as_vector(data.y), a, c);
  const int bins = 20;
  std::vector<double> edges;
  for (int k = 1; k < bins; ++k)
    edges.push_back(grid.quantile(static_cast<double>(k) / bins));

  const int reps = 100000;
  std::vector<int> counts(bins, 0);
  std::mt19937_64 draw_rng(12);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto move_rng = spa::stream_engine(12, spa::Stream::moves);
  int accepted = 0;
  for (int r = 0; r < reps; ++r) {
    double u = unif(draw_rng);
    while (u == 0.0)
      u = unif(draw_rng);
    spa::Particle part;
    part.beta = Eigen::VectorXd::Constant(1, grid.quantile(u));
    part.cache = spa::log_likelihood(data, part.beta);
    accepted += spa::mwg_sweep(part, data, prior, 0.5, move_rng);
    const auto bin = std::upper_bound(edges.begin(), edges.end(), part.beta[0]) - edges.begin();
    ++counts[static_cast<std::size_t>(bin)];
  }
  const double expected = static_cast<double>(reps) / bins;
  double chi2 = 0.0;
  for (int n : counts)
    chi2 += (n - expected) * (n - expected) / expected;
  const double pval = boost::math::cdf(boost::math::complement(boost::math::chi_squared(bins - 1), chi2));
  return {pval > 0.01, "chi2 " + fmt("%.2f", chi2) + " on 19 df, p = " + fmt("%.3f", pval) + ", acceptance "
                         + fmt("%.3f", static_cast<double>(accepted) / reps)};
}

} // namespace

int main(int argc, char** argv)
{
  fs::path spa_bin;
  fs::path work = fs::temp_directory_path() / "spa_acceptance";
  std::set<int> known;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    auto next = [&]() -> std::string {
      if (i + 1 >= argc) {
        std::cerr << arg << " needs a value\n";
        std::exit(2);
      }
      return argv[++i];
    };
    auto ints = [](const std::string& list, std::set<int>& into) {
      std::stringstream ss(list);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty())
          into.insert(std::stoi(item));
    };
    if (arg == "--spa")
      spa_bin = next();
    else if (arg == "--workdir")
      work = next();
    else if (arg == "--known-failures")
      ints(next(), known);
    else if (arg == "--only")
      ints(next(), only);
    else {
      std::cerr << "usage: spa_acceptance --spa PATH [--workdir DIR] [--known-failures 6,...] [--only 1,2,...]\n";
      return 2;
    }
  }
  if (spa_bin.empty()) {
    std::cerr << "--spa is required\n";
    return 2;
  }
  spa_bin = fs::absolute(spa_bin);
  fs::create_directories(work);

  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
    {1, scale_mixture_identity},
    {2, laplace_limit},
    {3, thresholds},
    {4, em_ascent},
    {5, map_oracle},
    {6, shrinkage_curve},
    {7, evidence_oracle},
    {8, smc_vs_mcmc},
    {9, [&] { return spa_recovery(spa_bin, work); }},
    {10, resampling_unbiased},
    {11, [&] { return determinism(spa_bin, work); }},
    {12, kernel_invariance},
  };

  int unexpected = 0;
  for (const auto& [id, check] : criteria) {
    if (!only.empty() && !only.count(id))
      continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome res;
    try {
      res = check();
    } catch (const std::exception& e) {
      res = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool listed = known.count(id) > 0;
    std::string note;
    if (!res.pass && listed)
      note = " [known failure]";
    if (res.pass && listed)
      note = " [listed as known failure but passed]";
    unexpected += res.pass == listed;
    std::cout << (res.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << res.detail << " ("
              << fmt("%.1f", secs) << " s)" << note << std::endl;
  }
  return unexpected == 0 ? 0 : 1;
}
