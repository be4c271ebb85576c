#include "roqs/model_io.hpp"

#include <fstream>

namespace roqs {

using json = nlohmann::ordered_json;

namespace {

Eigen::Index read_even_count(const json& doc, const std::string& field) {
  if (!doc.contains(field) || !doc[field].is_number_integer()) {
    throw ParseError("model: field '" + field + "' must be an integer");
  }
  const auto value = doc[field].get<std::int64_t>();
  if (value <= 0 || value % 2 != 0) {
    throw ParseError("model: field '" + field + "' must be even and positive, got " +
                     std::to_string(value));
  }
  return static_cast<Eigen::Index>(value);
}

}  // namespace

Eigen::MatrixXd matrix_from_json(const json& node, const std::string& field,
                                 Eigen::Index rows, Eigen::Index cols) {
  if (!node.is_array() || static_cast<Eigen::Index>(node.size()) != rows) {
    throw ParseError("model: field '" + field + "' must be an array of " +
                     std::to_string(rows) + " rows");
  }
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = node[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError("model: field '" + field + "', row " + std::to_string(i) +
                       ": expected " + std::to_string(cols) + " numbers");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      const json& cell = row[static_cast<std::size_t>(j)];
      if (!cell.is_number()) {
        throw ParseError("model: field '" + field + "', entry (" + std::to_string(i) + ", " +
                         std::to_string(j) + ") is not a number");
      }
      M(i, j) = cell.get<double>();
    }
  }
  return M;
}

nlohmann::ordered_json matrix_to_json(const Eigen::Ref<const Eigen::MatrixXd>& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

OqhoParams parse_model_json(const json& doc) {
  if (!doc.is_object()) {
    throw ParseError("model: document must be a JSON object");
  }
  const Eigen::Index n = read_even_count(doc, "n");
  const Eigen::Index m = read_even_count(doc, "m");
  for (const char* field : {"Theta", "K", "M", "Pi"}) {
    if (!doc.contains(field)) {
      throw ParseError(std::string("model: missing field '") + field + "'");
    }
  }
  OqhoParams params;
  params.Theta = matrix_from_json(doc["Theta"], "Theta", n, n);
  params.K = matrix_from_json(doc["K"], "K", n, n);
  params.M = matrix_from_json(doc["M"], "M", m, n);
  params.Pi = matrix_from_json(doc["Pi"], "Pi", n, n);
  return params;
}

OqhoParams parse_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("model: cannot open '" + path + "'");
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("model: '" + path + "': " + e.what());
  }
  return parse_model_json(doc);
}

nlohmann::ordered_json model_to_json(const OqhoParams& params) {
  json doc;
  doc["n"] = params.n();
  doc["m"] = params.m();
  doc["Theta"] = matrix_to_json(params.Theta);
  doc["K"] = matrix_to_json(params.K);
  doc["M"] = matrix_to_json(params.M);
  doc["Pi"] = matrix_to_json(params.Pi);
  return doc;
}

}  // namespace roqs
