#pragma once

// Model file format: a single JSON document with integer fields n, m and the
// four parameter matrices as row-major nested arrays of numbers, e.g.
//
//   { "n": 2, "m": 2,
//     "Theta": [[0, 1], [-1, 0]],
//     "K":     [[0, 0], [0, 0]],
//     "M":     [[1, 0], [0, 1]],
//     "Pi":    [[1, 0], [0, 1]] }
//
// Shapes are validated against n and m before any physical invariant is
// checked; violations raise ParseError with the offending field named.

#include <string>

#include <json.hpp>

#include "roqs/oqho.hpp"

namespace roqs {

OqhoParams parse_model_file(const std::string& path);
OqhoParams parse_model_json(const nlohmann::ordered_json& doc);

nlohmann::ordered_json model_to_json(const OqhoParams& params);

nlohmann::ordered_json matrix_to_json(const Eigen::Ref<const Eigen::MatrixXd>& M);
Eigen::MatrixXd matrix_from_json(const nlohmann::ordered_json& node, const std::string& field,
                                 Eigen::Index rows, Eigen::Index cols);

}  // namespace roqs
