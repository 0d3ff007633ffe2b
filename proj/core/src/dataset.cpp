#include "spa/dataset.hpp"

#include "spa/csv.hpp"
#include "spa/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spa {

std::vector<std::string> default_column_names(Index p)
{
  const auto digits = std::max<std::size_t>(3, std::to_string(p).size());
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(p));
  for (Index j = 1; j <= p; ++j) {
    auto num = std::to_string(j);
    names.push_back("snp_" + std::string(digits - num.size(), '0') + num);
  }
  return names;
}

Dataset make_dataset(Eigen::MatrixXd X, Eigen::VectorXd y, std::vector<std::string> names)
{
  if (X.rows() != y.size())
    throw std::invalid_argument("dataset has " + std::to_string(X.rows()) + " rows but "
                                + std::to_string(y.size()) + " responses");
  for (Index i = 0; i < y.size(); ++i)
    if (y[i] != 0.0 && y[i] != 1.0)
      throw std::invalid_argument("response " + std::to_string(i + 1) + " is not 0 or 1");
  if (names.empty())
    names = default_column_names(X.cols());
  if (static_cast<Index>(names.size()) != X.cols())
    throw std::invalid_argument("column name count does not match the design matrix");
  return Dataset{std::move(X), std::move(y), std::move(names), false};
}

Dataset with_intercept(const Dataset& data)
{
  if (data.intercept)
    return data;
  Dataset out;
  out.X.resize(data.n(), data.p() + 1);
  out.X.col(0).setOnes();
  out.X.rightCols(data.p()) = data.X;
  out.y = data.y;
  out.names.reserve(data.names.size() + 1);
  out.names.push_back("(intercept)");
  out.names.insert(out.names.end(), data.names.begin(), data.names.end());
  out.intercept = true;
  return out;
}

Eigen::MatrixXd standardize(const Eigen::MatrixXd& raw, const std::vector<std::string>& names)
{
  const Index n = raw.rows();
  if (n < 2)
    throw std::invalid_argument("standardize needs at least two rows");
  Eigen::MatrixXd out(raw.rows(), raw.cols());
  for (Index j = 0; j < raw.cols(); ++j) {
    const double mean = raw.col(j).mean();
    Eigen::VectorXd centred = raw.col(j).array() - mean;
    const double sd = std::sqrt(centred.squaredNorm() / static_cast<double>(n - 1));
    // Relative test so that columns of huge magnitude with rounding noise
    // still count as constant.
    const double magnitude = std::max(1.0, raw.col(j).cwiseAbs().maxCoeff());
    if (!(sd > 1e-12 * magnitude)) {
      const std::string label = static_cast<Index>(names.size()) == raw.cols()
                                  ? names[static_cast<std::size_t>(j)]
                                  : "column " + std::to_string(j + 1);
      throw std::invalid_argument("cannot standardize constant predictor " + label);
    }
    out.col(j) = centred / sd;
  }
  return out;
}

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& X)
{
  const Eigen::RowVectorXd means = X.colwise().mean();
  Eigen::MatrixXd centred = X.rowwise() - means;
  const Eigen::VectorXd norms = centred.colwise().norm();
  for (Index j = 0; j < X.cols(); ++j)
    centred.col(j) /= norms[j];
  Eigen::MatrixXd corr = centred.transpose() * centred;
  for (Index j = 0; j < corr.rows(); ++j)
    corr(j, j) = 1.0;
  return corr;
}

Dataset load_dataset(const std::filesystem::path& path)
{
  const std::string label = path.string();
  const auto table = csv::read_table(path);
  if (table.rows.empty())
    throw ParseError(label, 1, "empty file; expected header row starting with 'y'");

  const auto& header = table.rows.front();
  if (header.empty() || header.front() != "y")
    throw ParseError(label, table.lines.front(), "missing header: first column must be named 'y'");
  const std::size_t width = header.size();
  if (width < 2)
    throw ParseError(label, table.lines.front(), "header names no predictor columns");

  const auto n = static_cast<Index>(table.rows.size() - 1);
  const auto p = static_cast<Index>(width - 1);
  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd y(n);
  for (Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i + 1)];
    const auto line = table.lines[static_cast<std::size_t>(i + 1)];
    if (row.size() != width)
      throw ParseError(label, line, "expected " + std::to_string(width) + " fields, found "
                                      + std::to_string(row.size()));
    const double yi = csv::parse_double(row[0], label, line);
    if (yi != 0.0 && yi != 1.0)
      throw ParseError(label, line, "response must be 0 or 1, found '" + row[0] + "'");
    y[i] = yi;
    for (Index j = 0; j < p; ++j)
      X(i, j) = csv::parse_double(row[static_cast<std::size_t>(j + 1)], label, line);
  }
  std::vector<std::string> names(header.begin() + 1, header.end());
  return make_dataset(std::move(X), std::move(y), std::move(names));
}

void save_dataset(const Dataset& data, const std::filesystem::path& path)
{
  auto out = csv::open_for_write(path);
  const Index skip = data.intercept ? 1 : 0;
  std::vector<std::string> fields;
  fields.push_back("y");
  fields.insert(fields.end(), data.names.begin() + skip, data.names.end());
  csv::write_row(out, fields);
  for (Index i = 0; i < data.n(); ++i) {
    fields.clear();
    fields.push_back(data.y[i] != 0.0 ? "1" : "0");
    for (Index j = skip; j < data.p(); ++j)
      fields.push_back(csv::format_double(data.X(i, j)));
    csv::write_row(out, fields);
  }
  if (!out)
    throw IoError("failed writing " + path.string());
}

} // namespace spa
