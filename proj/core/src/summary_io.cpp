#include "spa/summary_io.hpp"

#include "spa/csv.hpp"
#include "spa/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

namespace spa {

namespace fs = std::filesystem;

namespace {

std::string short_number(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::vector<std::string> step_prefix(std::size_t t, double b, double c)
{
  return {std::to_string(t), csv::format_double(b), csv::format_double(c)};
}

void check(std::ofstream& out, const fs::path& path)
{
  if (!out)
    throw IoError("failed writing " + path.string());
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& name, const std::string& label)
{
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end())
    throw ParseError(label, 1, "missing column " + name);
  return static_cast<std::size_t>(it - header.begin());
}

csv::Table load(const fs::path& path, std::size_t min_columns, const std::string& first)
{
  if (!fs::exists(path))
    throw IoError("missing summary file " + path.string());
  auto table = csv::read_table(path);
  if (table.rows.empty() || table.rows.front().size() < min_columns || table.rows.front()[0] != first)
    throw ParseError(path.string(), 1, "unexpected header");
  for (std::size_t r = 1; r < table.rows.size(); ++r)
    if (table.rows[r].size() != table.rows.front().size())
      throw ParseError(path.string(), table.lines[r], "ragged row");
  return table;
}

} // namespace

std::string concentration_label(double delta)
{
  return "V_" + short_number(delta);
}

std::size_t ranking_delta_index(const std::vector<double>& deltas)
{
  if (deltas.empty())
    throw std::invalid_argument("no concentration deltas");
  for (std::size_t d = 0; d < deltas.size(); ++d)
    if (deltas[d] == 0.1)
      return d;
  return static_cast<std::size_t>(std::max_element(deltas.begin(), deltas.end()) - deltas.begin());
}

std::string format_report(const SpaResult& result)
{
  const auto& cp = result.c_posterior;
  const std::size_t d = ranking_delta_index(result.deltas);
  const auto order = result.ranking(d);
  const std::string pct = short_number(100.0 * result.level);

  std::ostringstream os;
  os << "posterior mode of c: " << csv::format_double(cp.mode_c()) << " (step " << cp.t.at(cp.mode)
     << ", mass " << csv::format_double(cp.mass.at(cp.mode)) << ")\n";
  os << "steps: " << cp.t.size() << ", c range [" << csv::format_double(cp.c.front()) << ", "
     << csv::format_double(cp.c.back()) << "]\n";
  if (result.map) {
    const auto bad = std::count(result.map->converged.begin(), result.map->converged.end(), false);
    os << "MAP path: " << result.map->t.size() << " steps, " << bad << " not converged\n";
  }
  os << "\ncoefficients ranked by pooled concentration " << concentration_label(result.deltas[d]) << ":\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%5s  %-16s %10s %10s %10s %10s %10s\n", "rank", "coefficient",
                concentration_label(result.deltas[d]).c_str(), "median", ("lo" + pct).c_str(),
                ("hi" + pct).c_str(), "map");
  os << line;
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto& pc = result.pooled[order[r]];
    std::snprintf(line, sizeof(line), "%5zu  %-16s %10.4f %10.4f %10.4f %10.4f %10.4f\n", r + 1,
                  result.names[order[r]].c_str(), pc.concentration[d], pc.median, pc.lower, pc.upper, pc.map);
    os << line;
  }
  return os.str();
}

void write_spa_result(const SpaResult& result, const fs::path& dir)
{
  const auto p = result.names.size();

  if (result.map) {
    const auto path = dir / "map_path.csv";
    auto out = csv::open_for_write(path);
    std::vector<std::string> header{"t", "b", "c"};
    header.insert(header.end(), result.names.begin(), result.names.end());
    csv::write_row(out, header);
    for (std::size_t k = 0; k < result.steps.size(); ++k) {
      const auto& s = result.steps[k];
      auto row = step_prefix(s.t, s.b, s.c);
      for (std::size_t j = 0; j < p; ++j)
        row.push_back(csv::format_double(result.map->beta(static_cast<Index>(k), static_cast<Index>(j))));
      csv::write_row(out, row);
    }
    check(out, path);
  }

  {
    const auto path = dir / "medians.csv";
    auto out = csv::open_for_write(path);
    std::vector<std::string> header{"t", "b", "c"};
    header.insert(header.end(), result.names.begin(), result.names.end());
    csv::write_row(out, header);
    for (const auto& s : result.steps) {
      auto row = step_prefix(s.t, s.b, s.c);
      for (std::size_t j = 0; j < p; ++j)
        row.push_back(csv::format_double(std::abs(s.median[static_cast<Index>(j)])));
      csv::write_row(out, row);
    }
    check(out, path);
  }

  {
    const auto path = dir / "concentration.csv";
    auto out = csv::open_for_write(path);
    std::vector<std::string> header{"t", "b", "c", "delta"};
    header.insert(header.end(), result.names.begin(), result.names.end());
    csv::write_row(out, header);
    for (const auto& s : result.steps)
      for (std::size_t d = 0; d < result.deltas.size(); ++d) {
        auto row = step_prefix(s.t, s.b, s.c);
        row.push_back(csv::format_double(result.deltas[d]));
        for (std::size_t j = 0; j < p; ++j)
          row.push_back(csv::format_double(s.concentration(static_cast<Index>(d), static_cast<Index>(j))));
        csv::write_row(out, row);
      }
    check(out, path);
  }

  {
    const auto path = dir / "bands.csv";
    auto out = csv::open_for_write(path);
    csv::write_row(out, {"t", "b", "c", "coefficient", "mean", "median", "lower", "upper", "map"});
    for (std::size_t k = 0; k < result.steps.size(); ++k) {
      const auto& s = result.steps[k];
      for (std::size_t j = 0; j < p; ++j) {
        const auto jj = static_cast<Index>(j);
        auto row = step_prefix(s.t, s.b, s.c);
        row.push_back(result.names[j]);
        row.push_back(csv::format_double(s.mean[jj]));
        row.push_back(csv::format_double(s.median[jj]));
        row.push_back(csv::format_double(s.lower[jj]));
        row.push_back(csv::format_double(s.upper[jj]));
        row.push_back(csv::format_double(result.map ? result.map->beta(static_cast<Index>(k), jj)
                                                    : std::numeric_limits<double>::quiet_NaN()));
        csv::write_row(out, row);
      }
    }
    check(out, path);
  }

  {
    const auto path = dir / "c_posterior.csv";
    auto out = csv::open_for_write(path);
    csv::write_row(out, {"t", "c", "mass"});
    const auto& cp = result.c_posterior;
    for (std::size_t k = 0; k < cp.t.size(); ++k)
      csv::write_row(out, {std::to_string(cp.t[k]), csv::format_double(cp.c[k]), csv::format_double(cp.mass[k])});
    check(out, path);
  }

  {
    const auto path = dir / "pooled_summary.csv";
    auto out = csv::open_for_write(path);
    const std::string pct = short_number(100.0 * result.level);
    std::vector<std::string> header{"coefficient", "map", "median", "lo" + pct, "hi" + pct};
    for (double delta : result.deltas)
      header.push_back(concentration_label(delta));
    csv::write_row(out, header);
    for (std::size_t j = 0; j < p; ++j) {
      const auto& pc = result.pooled[j];
      std::vector<std::string> row{result.names[j], csv::format_double(pc.map), csv::format_double(pc.median),
                                   csv::format_double(pc.lower), csv::format_double(pc.upper)};
      for (double v : pc.concentration)
        row.push_back(csv::format_double(v));
      csv::write_row(out, row);
    }
    check(out, path);
  }

  {
    const auto path = dir / "densities.csv";
    auto out = csv::open_for_write(path);
    csv::write_row(out, {"coefficient", "t", "c", "x", "density"});
    for (const auto& curve : result.densities)
      for (std::size_t g = 0; g < curve.x.size(); ++g)
        csv::write_row(out, {result.names[curve.coefficient], std::to_string(curve.t), csv::format_double(curve.c),
                             csv::format_double(curve.x[g]), csv::format_double(curve.density[g])});
    check(out, path);
  }

  {
    const auto path = dir / "report.txt";
    auto out = csv::open_for_write(path);
    out << format_report(result);
    check(out, path);
  }
}

SpaResult read_spa_result(const fs::path& dir)
{
  SpaResult result;

  // c posterior fixes the step grid.
  {
    const auto path = dir / "c_posterior.csv";
    const auto label = path.string();
    const auto table = load(path, 3, "t");
    auto& cp = result.c_posterior;
    for (std::size_t r = 1; r < table.rows.size(); ++r) {
      const auto& row = table.rows[r];
      const auto line = table.lines[r];
      const auto t = csv::parse_integer(row[0], label, line);
      if (t < 1)
        throw ParseError(label, line, "step index must be >= 1");
      cp.t.push_back(static_cast<std::size_t>(t));
      cp.c.push_back(csv::parse_double(row[1], label, line));
      cp.mass.push_back(csv::parse_double(row[2], label, line));
    }
    if (cp.t.empty())
      throw ParseError(label, 1, "no steps");
    cp.mode = static_cast<std::size_t>(std::max_element(cp.mass.begin(), cp.mass.end()) - cp.mass.begin());
  }
  const std::size_t K = result.c_posterior.t.size();
  std::map<std::size_t, std::size_t> step_index;
  for (std::size_t k = 0; k < K; ++k)
    step_index[result.c_posterior.t[k]] = k;

  // Pooled summary gives names, level and deltas.
  {
    const auto path = dir / "pooled_summary.csv";
    const auto label = path.string();
    const auto table = load(path, 6, "coefficient");
    const auto& header = table.rows.front();
    if (header[1] != "map" || header[2] != "median" || header[3].rfind("lo", 0) != 0)
      throw ParseError(label, 1, "unexpected header");
    result.level = csv::parse_double(std::string_view(header[3]).substr(2), label, 1) / 100.0;
    for (std::size_t col = 5; col < header.size(); ++col) {
      if (header[col].rfind("V_", 0) != 0)
        throw ParseError(label, 1, "unexpected column " + header[col]);
      result.deltas.push_back(csv::parse_double(std::string_view(header[col]).substr(2), label, 1));
    }
    for (std::size_t r = 1; r < table.rows.size(); ++r) {
      const auto& row = table.rows[r];
      const auto line = table.lines[r];
      result.names.push_back(row[0]);
      PooledCoefficient pc;
      pc.map = csv::parse_double(row[1], label, line);
      pc.median = csv::parse_double(row[2], label, line);
      pc.lower = csv::parse_double(row[3], label, line);
      pc.upper = csv::parse_double(row[4], label, line);
      for (std::size_t col = 5; col < row.size(); ++col)
        pc.concentration.push_back(csv::parse_double(row[col], label, line));
      result.pooled.push_back(std::move(pc));
    }
  }
  const auto p = static_cast<Index>(result.names.size());
  const auto D = static_cast<Index>(result.deltas.size());
  std::map<std::string, Index> coef_index;
  for (Index j = 0; j < p; ++j)
    coef_index[result.names[static_cast<std::size_t>(j)]] = j;

  result.steps.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    auto& s = result.steps[k];
    s.t = result.c_posterior.t[k];
    s.c = result.c_posterior.c[k];
    s.log_z_ratio = std::log(result.c_posterior.mass[k]);
    s.mean = s.median = s.lower = s.upper = Eigen::VectorXd::Constant(p, std::numeric_limits<double>::quiet_NaN());
    s.concentration = Eigen::MatrixXd::Constant(D, p, std::numeric_limits<double>::quiet_NaN());
  }

  auto lookup_step = [&](const std::string& field, const std::string& label, std::size_t line) {
    const auto t = csv::parse_integer(field, label, line);
    const auto it = step_index.find(static_cast<std::size_t>(std::max<long long>(t, 0)));
    if (it == step_index.end())
      throw ParseError(label, line, "step " + field + " is not in c_posterior.csv");
    return it->second;
  };
  auto lookup_coef = [&](const std::string& name, const std::string& label, std::size_t line) {
    const auto it = coef_index.find(name);
    if (it == coef_index.end())
      throw ParseError(label, line, "unknown coefficient " + name);
    return it->second;
  };

  {
    const auto path = dir / "bands.csv";
    const auto label = path.string();
    const auto table = load(path, 9, "t");
    const auto& h = table.rows.front();
    const auto cb = find_column(h, "b", label), cc = find_column(h, "coefficient", label),
               cm = find_column(h, "mean", label), cmed = find_column(h, "median", label),
               clo = find_column(h, "lower", label), chi = find_column(h, "upper", label),
               cmap = find_column(h, "map", label);
    bool any_map = false;
    Eigen::MatrixXd map_beta = Eigen::MatrixXd::Constant(static_cast<Index>(K), p, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t r = 1; r < table.rows.size(); ++r) {
      const auto& row = table.rows[r];
      const auto line = table.lines[r];
      const auto k = lookup_step(row[0], label, line);
      const auto j = lookup_coef(row[cc], label, line);
      auto& s = result.steps[k];
      s.b = csv::parse_double(row[cb], label, line);
      s.mean[j] = csv::parse_double(row[cm], label, line);
      s.median[j] = csv::parse_double(row[cmed], label, line);
      s.lower[j] = csv::parse_double(row[clo], label, line);
      s.upper[j] = csv::parse_double(row[chi], label, line);
      map_beta(static_cast<Index>(k), j) = csv::parse_double(row[cmap], label, line);
      any_map = any_map || !std::isnan(map_beta(static_cast<Index>(k), j));
    }
    if (any_map) {
      MapPath mp;
      mp.t = result.c_posterior.t;
      mp.beta = map_beta;
      mp.log_post.assign(K, std::numeric_limits<double>::quiet_NaN());
      mp.converged.assign(K, true);
      mp.from_previous.assign(K, false);
      result.map = std::move(mp);
    }
  }

  {
    const auto path = dir / "concentration.csv";
    const auto label = path.string();
    const auto table = load(path, 5, "t");
    const auto& h = table.rows.front();
    if (static_cast<Index>(h.size()) != 4 + p)
      throw ParseError(label, 1, "coefficient columns differ from pooled_summary.csv");
    for (std::size_t r = 1; r < table.rows.size(); ++r) {
      const auto& row = table.rows[r];
      const auto line = table.lines[r];
      const auto k = lookup_step(row[0], label, line);
      const double delta = csv::parse_double(row[3], label, line);
      const auto it = std::find(result.deltas.begin(), result.deltas.end(), delta);
      if (it == result.deltas.end())
        throw ParseError(label, line, "delta " + row[3] + " is not in pooled_summary.csv");
      const auto d = static_cast<Index>(it - result.deltas.begin());
      for (Index j = 0; j < p; ++j)
        result.steps[k].concentration(d, j) = csv::parse_double(row[static_cast<std::size_t>(4 + j)], label, line);
    }
  }

  {
    const auto path = dir / "densities.csv";
    const auto label = path.string();
    const auto table = load(path, 5, "coefficient");
    for (std::size_t r = 1; r < table.rows.size(); ++r) {
      const auto& row = table.rows[r];
      const auto line = table.lines[r];
      const auto j = static_cast<std::size_t>(lookup_coef(row[0], label, line));
      const auto t = static_cast<std::size_t>(csv::parse_integer(row[1], label, line));
      if (result.densities.empty() || result.densities.back().coefficient != j || result.densities.back().t != t) {
        DensityCurve curve;
        curve.coefficient = j;
        curve.t = t;
        curve.c = csv::parse_double(row[2], label, line);
        result.densities.push_back(std::move(curve));
      }
      result.densities.back().x.push_back(csv::parse_double(row[3], label, line));
      result.densities.back().density.push_back(csv::parse_double(row[4], label, line));
    }
  }
  return result;
}

} // namespace spa
