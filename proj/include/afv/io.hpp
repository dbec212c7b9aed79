#ifndef AFV_IO_HPP
#define AFV_IO_HPP

#include <array>
#include <cctype>
#include <istream>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "afv/error.hpp"
#include "afv/geom.hpp"
#include "afv/matrix.hpp"
#include "afv/rational.hpp"

// JSON-lines input: one tagged record per line.
//
//   {"type":"box","dim":2,"sides":[1,"1/2"],"anchor":[0,0]}
//   {"type":"zonotope","dim":2,"generators":[[1,0],[1,1]]}
//   {"type":"polygon_fan","angles":[0,"pi/2","pi","3pi/2"],"support":["1/2","1/2","1/2","1/2"]}
//   {"type":"polygon_fan","vertices":[[0,0],[1,0],[1,1],[0,1]]}
//   {"type":"matrix","data":[[2,0],[0,3]],"weights":[1,1],"reference":[1,1]}
//   {"type":"diagonal_operator","n":4,"matrices":[[[2,1,0,0],...]]}
//
// Numbers are JSON numbers or strings holding "p/q" or a decimal. Angles may
// also be written as rational multiples of pi ("pi/3", "-pi/2", "5*pi/4").
// Blank lines and lines starting with '#' are skipped.
namespace afv::io {

using json = nlohmann::json;

struct MatrixRecord {
  Matrix<Rational> data;
  std::optional<Vector<Rational>> weights;
  std::optional<Vector<double>> reference;
};

struct DiagonalRecord {
  std::size_t n = 0;
  std::vector<Matrix<Rational>> matrices;
};

using Payload = std::variant<ConvexBody, MatrixRecord, DiagonalRecord>;

struct Record {
  std::size_t line = 0;
  std::string type;
  Payload payload;
};

struct InputDocument {
  std::string source;
  std::vector<Record> records;
};

/// Error anchored at "source:line".
inline InputError line_error(const std::string& source, std::size_t line, const std::string& msg) {
  return InputError(source + ":" + std::to_string(line) + ": " + msg);
}

inline Rational to_rational(const json& v, const char* field) {
  if (v.is_number_integer()) {
    if (v.is_number_unsigned()) return Rational(Integer(v.get<std::uint64_t>()));
    return Rational(Integer(v.get<std::int64_t>()));
  }
  if (v.is_number_float()) return rational_from_double(v.get<double>());
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const InputError& e) {
      throw InputError(std::string(field) + ": " + e.what());
    }
  }
  throw InputError(std::string(field) + ": expected a number or a \"p/q\" string");
}

/// A number, or "[c][*]pi[/d]" with rational c, d.
inline double to_angle(const json& v) {
  if (!v.is_string()) return to_double(to_rational(v, "angles"));
  std::string s;
  for (char c : v.get<std::string>())
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  const auto pos = s.find("pi");
  if (pos == std::string::npos) return to_double(parse_rational(s));
  std::string head = s.substr(0, pos), tail = s.substr(pos + 2);
  if (!head.empty() && head.back() == '*') head.pop_back();
  Rational coef = 1;
  if (head == "-")
    coef = -1;
  else if (!head.empty() && head != "+")
    coef = parse_rational(head);
  if (!tail.empty()) {
    if (tail.front() != '/') throw InputError("angles: cannot parse '" + v.get<std::string>() + "'");
    coef /= parse_rational(tail.substr(1));
  }
  return to_double(coef) * std::numbers::pi;
}

inline std::vector<Rational> rational_list(const json& v, const char* field) {
  if (!v.is_array()) throw InputError(std::string(field) + ": expected an array");
  std::vector<Rational> out;
  for (const auto& x : v) out.push_back(to_rational(x, field));
  return out;
}

inline std::vector<double> double_list(const json& v, const char* field) {
  std::vector<double> out;
  for (const auto& r : rational_list(v, field)) out.push_back(to_double(r));
  return out;
}

inline Matrix<Rational> rational_matrix(const json& v, const char* field) {
  if (!v.is_array() || v.empty()) throw InputError(std::string(field) + ": expected a nonempty array of rows");
  const std::size_t rows = v.size();
  if (!v[0].is_array()) throw InputError(std::string(field) + ": expected an array of rows");
  const std::size_t cols = v[0].size();
  Matrix<Rational> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto row = rational_list(v[i], field);
    if (row.size() != cols) throw InputError(std::string(field) + ": ragged rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = row[j];
  }
  return m;
}

inline const json& require(const json& obj, const char* key) {
  if (!obj.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return obj.at(key);
}

inline std::size_t check_dim(const json& obj, std::size_t actual) {
  if (obj.contains("dim")) {
    const auto& d = obj.at("dim");
    if (!d.is_number_unsigned() || d.get<std::size_t>() != actual)
      throw InputError("dim does not match the data (" + std::to_string(actual) + ")");
  }
  return actual;
}

inline Payload parse_payload(const json& obj, const std::string& type) {
  if (type == "box") {
    auto sides = rational_list(require(obj, "sides"), "sides");
    check_dim(obj, sides.size());
    std::vector<Rational> anchor;
    if (obj.contains("anchor")) anchor = rational_list(obj.at("anchor"), "anchor");
    return ConvexBody(Box(std::move(sides), std::move(anchor)));
  }
  if (type == "zonotope") {
    const auto& g = require(obj, "generators");
    if (!g.is_array()) throw InputError("generators: expected an array of vectors");
    std::vector<std::vector<Rational>> gens;
    for (const auto& v : g) gens.push_back(rational_list(v, "generators"));
    std::size_t dim = 0;
    if (obj.contains("dim") && obj.at("dim").is_number_unsigned())
      dim = obj.at("dim").get<std::size_t>();
    else if (!gens.empty())
      dim = gens.front().size();
    else
      throw InputError("zonotope: need \"dim\" when there are no generators");
    std::vector<Rational> anchor;
    if (obj.contains("anchor")) anchor = rational_list(obj.at("anchor"), "anchor");
    return ConvexBody(Zonotope(dim, std::move(gens), std::move(anchor)));
  }
  if (type == "polygon_fan") {
    if (obj.contains("vertices")) {
      std::vector<std::array<double, 2>> pts;
      for (const auto& p : obj.at("vertices")) {
        const auto xy = double_list(p, "vertices");
        if (xy.size() != 2) throw InputError("vertices: expected [x, y] pairs");
        pts.push_back({xy[0], xy[1]});
      }
      return ConvexBody(fan_from_vertices(std::move(pts)));
    }
    const auto& a = require(obj, "angles");
    if (!a.is_array()) throw InputError("angles: expected an array");
    std::vector<double> angles;
    for (const auto& x : a) angles.push_back(to_angle(x));
    return ConvexBody(PolygonFan(std::move(angles), double_list(require(obj, "support"), "support")));
  }
  if (type == "matrix") {
    MatrixRecord rec{rational_matrix(require(obj, "data"), "data"), std::nullopt, std::nullopt};
    if (obj.contains("weights")) rec.weights = rational_list(obj.at("weights"), "weights");
    if (obj.contains("reference")) rec.reference = double_list(obj.at("reference"), "reference");
    return rec;
  }
  if (type == "diagonal_operator") {
    DiagonalRecord rec;
    const auto& n = require(obj, "n");
    if (!n.is_number_unsigned()) throw InputError("n: expected a positive integer");
    rec.n = n.get<std::size_t>();
    if (obj.contains("matrices"))
      for (const auto& m : obj.at("matrices")) rec.matrices.push_back(rational_matrix(m, "matrices"));
    return rec;
  }
  throw InputError("unknown record type \"" + type + "\"");
}

inline InputDocument parse_document(std::istream& in, const std::string& source) {
  InputDocument doc{source, {}};
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos || text[first] == '#') continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      throw line_error(source, line, std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object() || !obj.contains("type") || !obj.at("type").is_string())
      throw line_error(source, line, "expected an object with a string \"type\" field");
    const std::string type = obj.at("type").get<std::string>();
    try {
      doc.records.push_back({line, type, parse_payload(obj, type)});
    } catch (const InputError& e) {
      throw line_error(source, line, e.what());
    } catch (const json::exception& e) {
      throw line_error(source, line, e.what());
    }
  }
  if (doc.records.empty()) throw InputError(source + ": no records");
  return doc;
}

// Typed views over a document.

inline std::vector<ConvexBody> bodies(const InputDocument& doc) {
  std::vector<ConvexBody> out;
  for (const auto& r : doc.records) {
    const auto* b = std::get_if<ConvexBody>(&r.payload);
    if (!b) throw line_error(doc.source, r.line, "expected a body record, got \"" + r.type + "\"");
    out.push_back(*b);
  }
  return out;
}

inline std::vector<Matrix<Rational>> matrices(const InputDocument& doc) {
  std::vector<Matrix<Rational>> out;
  for (const auto& r : doc.records) {
    const auto* m = std::get_if<MatrixRecord>(&r.payload);
    if (!m) throw line_error(doc.source, r.line, "expected a matrix record, got \"" + r.type + "\"");
    if (!m->data.square()) throw line_error(doc.source, r.line, "matrix must be square");
    if (!is_symmetric(m->data)) throw line_error(doc.source, r.line, "matrix must be symmetric");
    out.push_back(m->data);
  }
  return out;
}

}  // namespace afv::io

#endif  // AFV_IO_HPP
