#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

namespace spa {

using Index = Eigen::Index;

/// Design matrix and binary response for logistic regression.
///
/// Predictor columns are expected to be standardized (see standardize()).
/// When `intercept` is set, column 0 holds ones and is excluded from every
/// prior term.
struct Dataset
{
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<std::string> names;
  bool intercept = false;

  Index n() const noexcept { return X.rows(); }
  Index p() const noexcept { return X.cols(); }
  Index first_penalized() const noexcept { return intercept ? 1 : 0; }
  bool penalized(Index j) const noexcept { return j >= first_penalized(); }
};

/// Validates shapes and that y is 0/1. Empty names are filled with snp_001...
Dataset make_dataset(Eigen::MatrixXd X, Eigen::VectorXd y, std::vector<std::string> names = {});

/// Copy of `data` with a leading all-ones column named "(intercept)".
Dataset with_intercept(const Dataset& data);

/// snp_001, snp_002, ... zero padded to at least three digits.
std::vector<std::string> default_column_names(Index p);

/// Centres every column and scales it to unit sample standard deviation.
/// Throws std::invalid_argument naming the first constant column.
Eigen::MatrixXd standardize(const Eigen::MatrixXd& raw, const std::vector<std::string>& names = {});

/// Sample Pearson correlation matrix of the columns of X.
Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& X);

/// CSV with header `y,<name>,...`, one row per subject. Throws ParseError
/// with the offending line number on malformed input and IoError when the
/// file cannot be opened.
Dataset load_dataset(const std::filesystem::path& path);

void save_dataset(const Dataset& data, const std::filesystem::path& path);

} // namespace spa
