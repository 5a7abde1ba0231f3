#pragma once

#include <string>
#include <vector>

#include "nbreg/model.hpp"

namespace nbreg {

// Rectangular CSV table: header row, comma separated, '.' decimal point.
struct Dataset {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;  // column major

  Eigen::Index rows() const { return columns.empty() ? 0 : static_cast<Eigen::Index>(columns[0].size()); }
  const std::vector<double>& column(const std::string& name) const;  // throws InputError
  bool has_column(const std::string& name) const;
};

Dataset read_csv(const std::string& path);

// A covariate term: a plain column or the derived transform log(col + shift).
struct ColumnSpec {
  enum class Kind { Plain, LogShift };
  Kind kind = Kind::Plain;
  std::string column;
  double shift = 0.0;

  static ColumnSpec parse(const std::string& token);  // accepts "name" or "log(name+c)"
  std::string label() const;
};

// Assemble a model from a dataset: intercept column plus the requested
// covariate terms. The response must hold nonnegative integers; errors name
// the offending column.
ModelSpec build_model(const Dataset& data, const std::string& response,
                      const std::vector<ColumnSpec>& covariates, const std::string& weight_column,
                      Link link, DispersionTransform transform);

}  // namespace nbreg
