#include "meanforge/io.hpp"

#include <fstream>

namespace meanforge {

namespace {

Json rows_of(const Matrix& a, bool imag) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(imag ? a(r, c).imag() : a(r, c).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

void fill(Matrix& out, const Json& rows, bool imag) {
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != out.rows()) {
    throw Error(ErrorCode::Io, "matrix rows do not match the declared shape");
  }
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    const Json& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != out.cols()) {
      throw Error(ErrorCode::Io, "matrix columns do not match the declared shape");
    }
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
      const double x = row[static_cast<std::size_t>(c)].get<double>();
      if (imag) out(r, c).imag(x);
      else out(r, c).real(x);
    }
  }
}

}  // namespace

Json matrix_to_json(const Matrix& a) {
  Json j;
  if (a.rows() == a.cols()) {
    j["dim"] = a.rows();
  } else {
    j["rows"] = a.rows();
    j["cols"] = a.cols();
  }
  j["re"] = rows_of(a, false);
  if (a.imag().cwiseAbs().maxCoeff() > 0.0) j["im"] = rows_of(a, true);
  return j;
}

Matrix matrix_from_json(const Json& j) {
  try {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    if (j.contains("dim")) {
      rows = cols = j.at("dim").get<Eigen::Index>();
    } else {
      rows = j.at("rows").get<Eigen::Index>();
      cols = j.at("cols").get<Eigen::Index>();
    }
    if (rows < 1 || cols < 1) throw Error(ErrorCode::Io, "matrix shape must be positive");
    Matrix out = Matrix::Zero(rows, cols);
    fill(out, j.at("re"), false);
    if (j.contains("im")) fill(out, j.at("im"), true);
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, std::string("bad matrix JSON: ") + e.what());
  }
}

Json weights_to_json(const WeightVector& w) { return Json{{"w", w.values()}}; }

WeightVector weights_from_json(const Json& j) {
  try {
    return WeightVector(j.at("w").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, std::string("bad weights JSON: ") + e.what());
  }
}

std::vector<HpdMatrix> matrices_from_json(const Json& j) {
  const Json& list = j.is_object() && j.contains("matrices") ? j.at("matrices") : j;
  if (!list.is_array() || list.empty()) throw Error(ErrorCode::Io, "expected a list of matrices");
  std::vector<HpdMatrix> out;
  for (const Json& item : list) out.push_back(HpdMatrix::checked(matrix_from_json(item)));
  return out;
}

Json matrices_to_json(const std::vector<HpdMatrix>& matrices) {
  Json list = Json::array();
  for (const auto& a : matrices) list.push_back(matrix_to_json(a.matrix()));
  return Json{{"matrices", std::move(list)}};
}

Json map_to_json(const UcpMap& phi) {
  Json kraus = Json::array();
  for (const auto& v : phi.kraus()) kraus.push_back(matrix_to_json(v));
  return Json{{"in_dim", phi.in_dim()}, {"out_dim", phi.out_dim()}, {"label", phi.label()},
              {"kraus", std::move(kraus)}};
}

UcpMap map_from_json(const Json& j) {
  try {
    std::vector<Matrix> kraus;
    for (const Json& item : j.at("kraus")) kraus.push_back(matrix_from_json(item));
    UcpMap phi(std::move(kraus), j.value("label", std::string("kraus")));
    if (phi.in_dim() != j.at("in_dim").get<int>() || phi.out_dim() != j.at("out_dim").get<int>()) {
      throw Error(ErrorCode::Io, "Kraus shapes disagree with in_dim/out_dim");
    }
    return phi;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, std::string("bad map JSON: ") + e.what());
  }
}

Json params_to_json(const CheckParams& params, unsigned uses) {
  Json j = Json::object();
  j["t"] = (uses & kUsesT) ? Json(params.t) : Json(nullptr);
  j["p"] = (uses & kUsesP) ? Json(params.p) : Json(nullptr);
  j["alpha"] = (uses & kUsesAlpha) ? Json(params.alpha_lemma) : Json(nullptr);
  j["norm"] = (uses & kUsesNorm) ? Json(params.norm.name()) : Json(nullptr);
  return j;
}

Json verdict_to_json(const Verdict& v) {
  Json j;
  j["id"] = v.check_id;
  j["status"] = to_string(v.status);
  j["outcome"] = to_string(v.outcome);
  j["holds"] = v.holds;
  j["slack"] = v.slack;
  j["relative_slack"] = v.relative_slack;
  j["constant"] = v.constant_value;
  const Json params = params_to_json(v.params_used, v.uses);
  for (const auto& [key, value] : params.items()) j[key] = value;
  j["lhs_extremes"] = {v.lhs_extremes.min, v.lhs_extremes.max};
  j["rhs_extremes"] = {v.rhs_extremes.min, v.rhs_extremes.max};
  j["notes"] = v.notes;
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace meanforge
