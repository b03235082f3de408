#include "douglaskit/io.hpp"

#include <cmath>

#include <json.hpp>

namespace douglaskit::io {

namespace {

using nlohmann::json;

json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back({v(i).real(), v(i).imag()});
  return out;
}

json shape_to_json(const ModuleShape& s) {
  return {{"algebra", s.algebra.block_dims}, {"rows", s.row_dims}};
}

json element_to_json(const AlgebraElement& x) {
  json blocks = json::array();
  for (const Matrix& b : x.blocks) blocks.push_back(matrix_to_json(b));
  return {{"shape", x.shape.block_dims}, {"blocks", std::move(blocks)}};
}

json module_element_to_json(const ModuleElement& x) {
  json blocks = json::array();
  for (const Matrix& b : x.blocks) blocks.push_back(matrix_to_json(b));
  return {{"shape", shape_to_json(x.shape)}, {"blocks", std::move(blocks)}};
}

json operator_to_json(const AdjointableOperator& t) {
  json mats = json::array();
  for (const Matrix& m : t.mats) mats.push_back(matrix_to_json(m));
  return {{"domain", shape_to_json(t.domain)},
          {"codomain", shape_to_json(t.codomain)},
          {"mats", std::move(mats)}};
}

json submodule_to_json(const Submodule& f) {
  json bases = json::array();
  for (const Matrix& b : f.bases) bases.push_back(matrix_to_json(b));
  return {{"ambient", shape_to_json(f.ambient)}, {"bases", std::move(bases)}};
}

std::string pretty(const json& j) { return j.dump(2) + "\n"; }

// --- parsing ------------------------------------------------------------

[[noreturn]] void rethrow_with_position(const json::parse_error& e,
                                        std::string_view text) {
  std::size_t line = 1, col = 1;
  const std::size_t stop = std::min<std::size_t>(
      e.byte > 0 ? e.byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < stop; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  throw FormatError(e.what(), e.byte, line, col);
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    rethrow_with_position(e, text);
  }
}

const json& member(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end())
    throw FormatError(std::string("missing key \"") + key + '"');
  return *it;
}

std::vector<int> int_list(const json& j, const char* what) {
  if (!j.is_array())
    throw FormatError(std::string(what) + ": expected an array of integers");
  std::vector<int> out;
  out.reserve(j.size());
  for (const json& v : j) {
    if (!v.is_number_integer())
      throw FormatError(std::string(what) + ": entries must be integers");
    out.push_back(v.get<int>());
  }
  return out;
}

Complex entry_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw FormatError("matrix entry: expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Matrix matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array()) throw FormatError("matrix: expected an array of rows");
  if (static_cast<Eigen::Index>(j.size()) != rows)
    throw FormatError("matrix: wrong number of rows");
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw FormatError("matrix: wrong number of columns");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = entry_from_json(row[k]);
  }
  return m;
}

/// Matrix with a known row count whose column count is read off the data.
Matrix matrix_from_json_free_cols(const json& j, Eigen::Index rows) {
  if (!j.is_array()) throw FormatError("matrix: expected an array of rows");
  if (static_cast<Eigen::Index>(j.size()) != rows)
    throw FormatError("matrix: wrong number of rows");
  const Eigen::Index cols =
      rows == 0 ? 0 : static_cast<Eigen::Index>(j[0].size());
  return matrix_from_json(j, rows, cols);
}

ModuleShape shape_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("module shape: expected an object");
  return ModuleShape(AlgebraShape(int_list(member(j, "algebra"), "algebra")),
                     int_list(member(j, "rows"), "rows"));
}

AlgebraElement algebra_element_from_json(const json& j) {
  const AlgebraShape shape(int_list(member(j, "shape"), "shape"));
  const json& blocks = member(j, "blocks");
  if (!blocks.is_array() || blocks.size() != shape.block_dims.size())
    throw FormatError("algebra element: blocks do not match shape");
  std::vector<Matrix> mats;
  mats.reserve(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i)
    mats.push_back(matrix_from_json(blocks[i], shape.block_dims[i],
                                    shape.block_dims[i]));
  return {shape, std::move(mats)};
}

ModuleElement module_element_from_json(const json& j) {
  const ModuleShape shape = shape_from_json(member(j, "shape"));
  const json& blocks = member(j, "blocks");
  if (!blocks.is_array() || blocks.size() != shape.row_dims.size())
    throw FormatError("module element: blocks do not match shape");
  std::vector<Matrix> mats;
  mats.reserve(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i)
    mats.push_back(matrix_from_json(blocks[i], shape.row_dims[i],
                                    shape.algebra.block_dims[i]));
  return {shape, std::move(mats)};
}

AdjointableOperator operator_from_json(const json& j) {
  const ModuleShape domain = shape_from_json(member(j, "domain"));
  const ModuleShape codomain = shape_from_json(member(j, "codomain"));
  const json& mats = member(j, "mats");
  if (!mats.is_array() || mats.size() != domain.row_dims.size())
    throw FormatError("operator: mats do not match shapes");
  std::vector<Matrix> out;
  out.reserve(mats.size());
  for (std::size_t i = 0; i < mats.size(); ++i)
    out.push_back(matrix_from_json(mats[i], codomain.row_dims[i],
                                   domain.row_dims[i]));
  return {domain, codomain, std::move(out)};
}

Submodule submodule_from_json(const json& j) {
  const ModuleShape ambient = shape_from_json(member(j, "ambient"));
  const json& bases = member(j, "bases");
  if (!bases.is_array() || bases.size() != ambient.row_dims.size())
    throw FormatError("submodule: bases do not match ambient");
  std::vector<Matrix> out;
  out.reserve(bases.size());
  for (std::size_t i = 0; i < bases.size(); ++i)
    out.push_back(matrix_from_json_free_cols(bases[i], ambient.row_dims[i]));
  return {ambient, std::move(out)};
}

}  // namespace

std::string dump(const AlgebraElement& x) { return pretty(element_to_json(x)); }

std::string dump(const ModuleElement& x) {
  return pretty(module_element_to_json(x));
}

std::string dump(const AdjointableOperator& t) {
  return pretty(operator_to_json(t));
}

std::string dump(const Submodule& f) { return pretty(submodule_to_json(f)); }

std::string dump(const MajorizationReport& rep) {
  json j;
  j["holds"] = {{"i", rep.holds_i},
                {"ii", rep.holds_ii},
                {"iii", rep.holds_iii},
                {"iv", rep.holds_iv}};
  j["lambda_star"] = finite_or_null(rep.lambda_star);
  j["mu_star"] = finite_or_null(rep.mu_star);
  j["consistent"] = rep.consistent;
  j["flags"] = rep.flags;
  if (rep.witness) j["witness"] = module_element_to_json(*rep.witness);
  j["evidence"] = {{"lambda_pinv", finite_or_null(rep.lambda_pinv)},
                   {"empirical_ratio_sup", rep.empirical_ratio_sup},
                   {"solve_residual", rep.solve_residual},
                   {"samples", rep.samples}};
  return pretty(j);
}

std::string dump(const DouglasSolution& sol) {
  json j;
  j["D"] = operator_to_json(sol.D);
  j["residual"] = sol.residual;
  j["reduced"] = sol.reduced;
  j["reduced_residual"] = sol.reduced_residual;
  j["norm_sq"] = sol.norm_sq;
  j["lambda_star"] = sol.lambda_star;
  j["flags"] =
      sol.rank_marginal ? json::array({"rank-marginal"}) : json::array();
  return pretty(j);
}

std::string dump(const WitnessBundle& bundle) {
  json j;
  j["a"] = element_to_json(bundle.a);
  j["b"] = element_to_json(bundle.b);
  j["c"] = element_to_json(bundle.c);
  j["scale"] = bundle.scale;
  j["m"] = bundle.m;
  j["rho"] = {{"block", bundle.rho.block_index},
              {"vector", vector_to_json(bundle.rho.unit_vector)}};
  j["lhs_norm"] = bundle.lhs_norm;
  j["rhs_norm"] = bundle.rhs_norm;
  j["chain"] = {{"top_norm_residual", bundle.chain.top_norm_residual},
                {"psd_margin", bundle.chain.psd_margin},
                {"state_gap", bundle.chain.state_gap},
                {"b_branch_zero", bundle.chain.b_branch_zero}};
  return pretty(j);
}

std::string dump_no_solution(const ModuleElement& witness) {
  json j;
  j["no_solution"] = true;
  j["witness"] = module_element_to_json(witness);
  return pretty(j);
}

AlgebraElement parse_algebra_element(std::string_view text) {
  return algebra_element_from_json(parse_text(text));
}

ModuleElement parse_module_element(std::string_view text) {
  return module_element_from_json(parse_text(text));
}

AdjointableOperator parse_operator(std::string_view text) {
  return operator_from_json(parse_text(text));
}

Submodule parse_submodule(std::string_view text) {
  return submodule_from_json(parse_text(text));
}

PayloadKind detect_kind(std::string_view text) {
  const json j = parse_text(text);
  if (!j.is_object()) throw FormatError("expected a JSON object");
  if (j.contains("mats")) return PayloadKind::Operator;
  if (j.contains("bases")) return PayloadKind::Submodule;
  if (j.contains("blocks") && j.contains("shape")) {
    if (j["shape"].is_object()) return PayloadKind::ModuleElement;
    return PayloadKind::AlgebraElement;
  }
  throw FormatError("unrecognized document: expected an element, operator or submodule");
}

const char* payload_kind_name(PayloadKind kind) {
  switch (kind) {
    case PayloadKind::AlgebraElement: return "algebra-element";
    case PayloadKind::ModuleElement: return "module-element";
    case PayloadKind::Operator: return "operator";
    case PayloadKind::Submodule: return "submodule";
  }
  return "unknown";
}

}  // namespace douglaskit::io
