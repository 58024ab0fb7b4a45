#include "qcap/io.hpp"

#include <fstream>
#include <sstream>

namespace qcap {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ParseError("field '" + field + "': " + what);
}

int line_of_offset(const std::string& text, std::size_t offset) {
  int line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_of_offset(text, e.byte)) + ": " + e.what());
  }
}

const json& member(const json& j, const std::string& field) {
  if (!j.is_object()) fail(field, "enclosing value is not an object");
  auto it = j.find(field);
  if (it == j.end()) fail(field, "missing");
  return *it;
}

std::vector<int> int_list(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail(field, "expected a non-empty array of integers");
  std::vector<int> out;
  for (const auto& e : j) {
    if (!e.is_number_integer()) fail(field, "entries must be integers");
    out.push_back(e.get<int>());
  }
  return out;
}

}  // namespace

Matrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of rows");
  const int rows = static_cast<int>(j.size());
  int cols = -1;
  std::vector<double> entries;
  for (const auto& row : j) {
    if (!row.is_array()) fail(field, "rows must be arrays of numbers");
    if (cols < 0)
      cols = static_cast<int>(row.size());
    else if (static_cast<int>(row.size()) != cols)
      fail(field, "rows have inconsistent lengths");
    for (const auto& e : row) {
      if (!e.is_number()) fail(field, "entries must be numbers");
      entries.push_back(e.get<double>());
    }
  }
  if (rows == 0) return Matrix(0, 0);
  return Matrix(rows, std::max(cols, 0), std::move(entries));
}

ordered_json matrix_to_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

AjnDatum ajn_from_json(const json& j) {
  AjnDatum a;
  a.d = int_list(member(j, "d"), "d");
  a.n = int_list(member(j, "n"), "n");
  a.c = int_list(member(j, "c"), "c");
  a.p = int_list(member(j, "p"), "p");
  const json& table = member(j, "A");
  if (!table.is_array() || table.size() != a.d.size())
    fail("A", "expected one row of maps per source");
  for (std::size_t i = 0; i < table.size(); ++i) {
    const json& row = table[i];
    if (!row.is_array() || row.size() != a.n.size())
      fail("A[" + std::to_string(i + 1) + "]", "expected one map per sink");
    std::vector<Matrix> maps;
    for (std::size_t jj = 0; jj < row.size(); ++jj)
      maps.push_back(matrix_from_json(
          row[jj], "A[" + std::to_string(i + 1) + "][" + std::to_string(jj + 1) + "]"));
    a.A.push_back(std::move(maps));
  }
  const std::vector<Finding> findings = validate_ajn(a);
  for (const Finding& f : findings)
    if (f.severity == Finding::Severity::Error) throw InvalidAjn(describe(findings));
  return a;
}

QuiverDatum quiver_from_json(const json& j) {
  QuiverDatum d;
  d.beta.beta_plus = int_list(member(j, "beta_plus"), "beta_plus");
  d.beta.beta_minus = int_list(member(j, "beta_minus"), "beta_minus");
  d.sigma.sigma_plus = int_list(member(j, "sigma_plus"), "sigma_plus");
  d.sigma.sigma_minus = int_list(member(j, "sigma_minus"), "sigma_minus");
  d.quiver.k = static_cast<int>(d.beta.beta_plus.size());
  d.quiver.m = static_cast<int>(d.beta.beta_minus.size());

  const json& arrows = member(j, "arrows");
  if (!arrows.is_array()) fail("arrows", "expected an array");
  for (std::size_t a = 0; a < arrows.size(); ++a) {
    const std::string field = "arrows[" + std::to_string(a + 1) + "]";
    const json& e = arrows[a];
    if (!e.is_object()) fail(field, "expected an object");
    const json& ji = member(e, "i");
    const json& jj = member(e, "j");
    if (!ji.is_number_integer() || !jj.is_number_integer()) fail(field, "i and j must be integers");
    const int i1 = ji.get<int>();
    const int j1 = jj.get<int>();
    if (i1 < 1 || i1 > d.quiver.k) fail(field, "source index out of range (1-based)");
    if (j1 < 1 || j1 > d.quiver.m) fail(field, "sink index out of range (1-based)");
    d.quiver.arrows.push_back({i1 - 1, j1 - 1});
    d.rep.maps.push_back(matrix_from_json(member(e, "matrix"), field + ".matrix"));
  }

  const std::vector<Finding> findings = validate(d);
  std::vector<Finding> errors;
  for (const Finding& f : findings)
    if (f.severity == Finding::Severity::Error) errors.push_back(f);
  if (!errors.empty()) throw ParseError("invalid quiver datum: " + describe(errors));
  return d;
}

}  // namespace

LoadedDatum parse_datum(const std::string& text) {
  const json j = parse_text(text);
  const json& kind = member(j, "kind");
  if (!kind.is_string()) fail("kind", "expected \"ajn\" or \"quiver\"");
  LoadedDatum out;
  if (kind.get<std::string>() == "ajn") {
    out.ajn = ajn_from_json(j);
    out.datum = from_ajn(*out.ajn);
  } else if (kind.get<std::string>() == "quiver") {
    out.datum = quiver_from_json(j);
  } else {
    fail("kind", "unknown kind '" + kind.get<std::string>() + "'");
  }
  return out;
}

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

LoadedDatum load_datum_file(const std::string& path) { return parse_datum(slurp(path)); }

std::vector<SpdMatrix> parse_spd_list(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_array()) throw ParseError("sigma file must be a JSON array of matrices");
  std::vector<SpdMatrix> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Matrix m = matrix_from_json(j[i], "sigma[" + std::to_string(i + 1) + "]");
    if (m.rows() != m.cols())
      throw ParseError("sigma[" + std::to_string(i + 1) + "] is not square");
    const Matrix sym = symmetrize(m);
    if (frobenius_norm(m - sym) > 1e-12 * std::max(1.0, frobenius_norm(m)))
      throw ParseError("sigma[" + std::to_string(i + 1) + "] is not symmetric");
    out.push_back(SpdMatrix(sym));
  }
  return out;
}

std::vector<SpdMatrix> load_spd_file(const std::string& path) { return parse_spd_list(slurp(path)); }

ordered_json tuple_to_json(const SpdTuple& t) {
  ordered_json arr = ordered_json::array();
  for (const SpdMatrix& m : t) arr.push_back(matrix_to_json(m.mat()));
  return arr;
}

ordered_json group_to_json(const GroupElement& g) {
  ordered_json j;
  ordered_json gv = ordered_json::array();
  for (const Matrix& m : g.gv) gv.push_back(matrix_to_json(m));
  ordered_json gw = ordered_json::array();
  for (const Matrix& m : g.gw) gw.push_back(matrix_to_json(m));
  j["gv"] = std::move(gv);
  j["gw"] = std::move(gw);
  return j;
}

ordered_json quiver_datum_to_json(const QuiverDatum& d) {
  ordered_json j;
  j["kind"] = "quiver";
  j["beta_plus"] = d.beta.beta_plus;
  j["beta_minus"] = d.beta.beta_minus;
  j["sigma_plus"] = d.sigma.sigma_plus;
  j["sigma_minus"] = d.sigma.sigma_minus;
  ordered_json arrows = ordered_json::array();
  for (std::size_t a = 0; a < d.quiver.arrows.size(); ++a) {
    ordered_json e;
    e["i"] = d.quiver.arrows[a].source + 1;
    e["j"] = d.quiver.arrows[a].sink + 1;
    e["matrix"] = matrix_to_json(d.rep.maps[a]);
    arrows.push_back(std::move(e));
  }
  j["arrows"] = std::move(arrows);
  return j;
}

ordered_json ajn_to_json(const AjnDatum& a) {
  ordered_json j;
  j["kind"] = "ajn";
  j["d"] = a.d;
  j["n"] = a.n;
  j["c"] = a.c;
  j["p"] = a.p;
  ordered_json table = ordered_json::array();
  for (const auto& row : a.A) {
    ordered_json r = ordered_json::array();
    for (const Matrix& m : row) r.push_back(matrix_to_json(m));
    table.push_back(std::move(r));
  }
  j["A"] = std::move(table);
  return j;
}

ordered_json violation_to_json(const ViolationReport& v) {
  ordered_json j;
  ordered_json bases = ordered_json::array();
  for (const Matrix& b : v.subspaces.bases) bases.push_back(matrix_to_json(b));
  j["subspaces"] = std::move(bases);
  j["lhs"] = v.lhs;
  j["rhs"] = v.rhs;
  j["slack"] = v.slack;
  return j;
}

std::string status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged:
      return "converged";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::MaxIterations:
      return "max_iterations";
  }
  return "unknown";
}

}  // namespace qcap
