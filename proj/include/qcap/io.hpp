#pragma once

// JSON (de)serialization for datum files, SPD tuple files, and report
// fragments. Key order is fixed (ordered_json) so identical inputs always
// produce byte-identical output.

#include <optional>
#include <string>

#include <json.hpp>

#include "qcap/capacity.hpp"
#include "qcap/quiver.hpp"
#include "qcap/scaling.hpp"
#include "qcap/stability.hpp"

namespace qcap {

using ordered_json = nlohmann::ordered_json;

struct LoadedDatum {
  std::optional<AjnDatum> ajn;  // present when kind == "ajn"
  QuiverDatum datum;            // the quiver view, for either kind
};

// Throws ParseError (with line/field context) on malformed input and
// InvalidAjn when an AJN datum fails balance or surjectivity.
LoadedDatum parse_datum(const std::string& text);
LoadedDatum load_datum_file(const std::string& path);

// A sigma file is a bare JSON array of matrices.
std::vector<SpdMatrix> parse_spd_list(const std::string& text);
std::vector<SpdMatrix> load_spd_file(const std::string& path);

ordered_json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j, const std::string& field);

ordered_json tuple_to_json(const SpdTuple& t);
ordered_json group_to_json(const GroupElement& g);
ordered_json quiver_datum_to_json(const QuiverDatum& d);
ordered_json ajn_to_json(const AjnDatum& a);
ordered_json violation_to_json(const ViolationReport& v);

std::string status_name(SolveStatus s);

}  // namespace qcap
