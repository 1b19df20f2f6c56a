#pragma once

// JSON encodings of matrices, weights, maps, and verdicts.
//
// Square matrix:      {"dim": n, "re": [[...]], "im": [[...]]}
// Rectangular matrix: {"rows": r, "cols": c, "re": [[...]], "im": [[...]]}
// "im" may be omitted on input; it is written only when nonzero.

#include <string>
#include <vector>

#include <json.hpp>

#include "meanforge/inequalities.hpp"
#include "meanforge/maps.hpp"
#include "meanforge/means.hpp"

namespace meanforge {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const Matrix& a);
Matrix matrix_from_json(const Json& j);

Json weights_to_json(const WeightVector& w);
WeightVector weights_from_json(const Json& j);

/// Accepts {"matrices": [...]} or a bare array of matrix objects.
std::vector<HpdMatrix> matrices_from_json(const Json& j);
Json matrices_to_json(const std::vector<HpdMatrix>& matrices);

Json map_to_json(const UcpMap& phi);
UcpMap map_from_json(const Json& j);

Json params_to_json(const CheckParams& params, unsigned uses);
Json verdict_to_json(const Verdict& v);

/// Throws Io on missing files or malformed JSON.
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace meanforge
