#include "nbreg/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "nbreg/errors.hpp"

namespace nbreg {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream stream(line);
  while (std::getline(stream, field, ',')) {
    // trim surrounding whitespace
    const auto begin = field.find_first_not_of(" \t\r");
    const auto end = field.find_last_not_of(" \t\r");
    fields.push_back(begin == std::string::npos ? "" : field.substr(begin, end - begin + 1));
  }
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double parse_number(const std::string& text, const std::string& column, Eigen::Index row) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &consumed);
  } catch (const std::exception&) {
    throw InputError("column '" + column + "' row " + std::to_string(row + 1) +
                     ": cannot parse '" + text + "' as a number");
  }
  if (consumed != text.size())
    throw InputError("column '" + column + "' row " + std::to_string(row + 1) +
                     ": cannot parse '" + text + "' as a number");
  return value;
}

}  // namespace

const std::vector<double>& Dataset::column(const std::string& name) const {
  for (std::size_t j = 0; j < names.size(); ++j)
    if (names[j] == name) return columns[j];
  throw InputError("unknown column '" + name + "'");
}

bool Dataset::has_column(const std::string& name) const {
  for (const std::string& n : names)
    if (n == name) return true;
  return false;
}

Dataset read_csv(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw InputError("cannot open '" + path + "'");

  Dataset data;
  std::string line;
  if (!std::getline(file, line)) throw InputError("'" + path + "' is empty");
  data.names = split_csv_line(line);
  if (data.names.empty()) throw InputError("'" + path + "' has no header columns");
  data.columns.resize(data.names.size());

  Eigen::Index row = 0;
  while (std::getline(file, line)) {
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != data.names.size())
      throw InputError("'" + path + "' row " + std::to_string(row + 1) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(data.names.size()));
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (fields[j].empty())
        throw InputError("column '" + data.names[j] + "' row " + std::to_string(row + 1) +
                         ": missing value");
      data.columns[j].push_back(parse_number(fields[j], data.names[j], row));
    }
    ++row;
  }
  if (row == 0) throw InputError("'" + path + "' has no data rows");
  return data;
}

ColumnSpec ColumnSpec::parse(const std::string& token) {
  ColumnSpec spec;
  if (token.rfind("log(", 0) == 0 && token.back() == ')') {
    const std::string inner = token.substr(4, token.size() - 5);
    const std::size_t plus = inner.rfind('+');
    if (plus == std::string::npos)
      throw InputError("transform '" + token + "' must have the form log(column+c)");
    spec.kind = Kind::LogShift;
    spec.column = inner.substr(0, plus);
    try {
      spec.shift = std::stod(inner.substr(plus + 1));
    } catch (const std::exception&) {
      throw InputError("transform '" + token + "' has a non-numeric shift");
    }
    if (spec.column.empty()) throw InputError("transform '" + token + "' names no column");
    return spec;
  }
  if (token.empty()) throw InputError("empty covariate name");
  spec.column = token;
  return spec;
}

std::string ColumnSpec::label() const {
  if (kind == Kind::LogShift) {
    std::ostringstream out;
    out << "log(" << column << "+" << shift << ")";
    return out.str();
  }
  return column;
}

ModelSpec build_model(const Dataset& data, const std::string& response,
                      const std::vector<ColumnSpec>& covariates, const std::string& weight_column,
                      Link link, DispersionTransform transform) {
  const std::vector<double>& y_raw = data.column(response);
  const Eigen::Index n = static_cast<Eigen::Index>(y_raw.size());

  ModelSpec spec;
  spec.link = link;
  spec.transform = transform;
  spec.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = y_raw[i];
    if (!(v >= 0.0) || std::floor(v) != v || !std::isfinite(v))
      throw InputError("response column '" + response + "' must hold nonnegative integers; row " +
                       std::to_string(i + 1) + " is " + std::to_string(v));
    spec.y[i] = static_cast<int>(v);
  }

  spec.X.resize(n, static_cast<Eigen::Index>(covariates.size()) + 1);
  spec.X.col(0).setOnes();
  for (std::size_t j = 0; j < covariates.size(); ++j) {
    const std::vector<double>& raw = data.column(covariates[j].column);
    for (Eigen::Index i = 0; i < n; ++i) {
      double v = raw[i];
      if (covariates[j].kind == ColumnSpec::Kind::LogShift) {
        const double shifted = v + covariates[j].shift;
        if (!(shifted > 0.0))
          throw InputError("covariate '" + covariates[j].label() + "' row " +
                           std::to_string(i + 1) + ": log argument is not positive");
        v = std::log(shifted);
      }
      spec.X(i, static_cast<Eigen::Index>(j) + 1) = v;
    }
  }

  if (!weight_column.empty()) {
    const std::vector<double>& w = data.column(weight_column);
    spec.m.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(w[i] > 0.0))
        throw InputError("weight column '" + weight_column + "' row " + std::to_string(i + 1) +
                         ": weights must be positive");
      spec.m[i] = w[i];
    }
  } else {
    spec.m = Eigen::VectorXd::Ones(n);
  }

  spec.validate();
  return spec;
}

}  // namespace nbreg
