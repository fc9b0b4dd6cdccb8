#pragma once

// JSON encodings shared by the CLI and tests.
//
//   group             {"moduli": [n1, ...]}
//   element/character integer residue arrays
//   complex scalar    {"re": x, "im": y}
//   matrix            {"rows": r, "cols": c, "data": [[re, im], ...]}   (row-major)
//   phase function    [{"chi": [...], "g": [...], "re": x, "im": y}, ...]
//
// write_json() prints doubles with 17 significant digits and keeps insertion
// order, so equal inputs give byte-identical text.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cpovm/hs_isometry.hpp"
#include "cpovm/types.hpp"

namespace cpovm::io {

using Json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

inline void write(std::ostream& os, const Json& j, int indent, int depth) {
  const auto pad = [&](int d) {
    if (indent > 0) os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) { os << "{}"; return; }
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        pad(depth + 1);
        os << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write(os, it.value(), indent, depth + 1);
      }
      pad(depth);
      os << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) { os << "[]"; return; }
      // arrays of scalars stay on one line
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      os << '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << (flat && indent > 0 ? ", " : ",");
        first = false;
        if (!flat) pad(depth + 1);
        write(os, e, indent, depth + 1);
      }
      if (!flat) pad(depth);
      os << ']';
      return;
    }
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace detail

inline void write_json(std::ostream& os, const Json& j, int indent = 2) {
  detail::write(os, j, indent, 0);
  os << '\n';
}

inline std::string to_string(const Json& j, int indent = 2) {
  std::ostringstream os;
  write_json(os, j, indent);
  return os.str();
}

inline Json to_json(const FiniteLCAGroup& group) {
  return Json{{"moduli", group.moduli()}};
}

inline FiniteLCAGroup group_from_json(const Json& j) {
  if (j.is_array()) return FiniteLCAGroup(j.get<std::vector<int>>());
  if (j.is_object() && j.contains("moduli")) return FiniteLCAGroup(j.at("moduli").get<std::vector<int>>());
  throw StructuralError("group must be {\"moduli\": [...]} or an array of moduli");
}

inline Json to_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

/// Accepts a number, [re, im] or {"re": .., "im": ..}.
inline Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  if (j.is_object() && j.contains("re")) {
    return {j.at("re").get<double>(), j.value("im", 0.0)};
  }
  throw StructuralError("cannot read complex number from " + j.dump());
}

inline Json matrix_to_json(const Operator& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) data.push_back(Json::array({m(i, k).real(), m(i, k).imag()}));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline Json vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (const Complex& z : v) out.push_back(Json::array({z.real(), z.imag()}));
  return out;
}

inline bool is_complex_literal(const Json& j) {
  return j.is_number() || j.is_object() ||
         (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number());
}

inline ComplexVector vector_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw StructuralError("vector must be a non-empty array");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

/// Accepts {"rows", "cols", "data"} (row-major) or an array of rows.
inline Operator matrix_from_json(const Json& j) {
  if (j.is_object() && j.contains("data")) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const Json& data = j.at("data");
    if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != rows * cols) {
      throw StructuralError("matrix data length does not match rows x cols");
    }
    Operator m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index k = 0; k < cols; ++k) {
        m(i, k) = complex_from_json(data[static_cast<std::size_t>(i * cols + k)]);
      }
    }
    return m;
  }
  if (!j.is_array() || j.empty()) throw StructuralError("matrix must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Operator m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw StructuralError("matrix rows have different lengths");
    }
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

inline Json point_to_json(const FiniteLCAGroup& group, std::size_t index) {
  const PhasePoint p = phase_point(group, index);
  return Json{{"chi", p.chi.residues}, {"g", p.g.residues}};
}

inline Json to_json(const PhaseSpaceFunction& f) {
  Json out = Json::array();
  for (std::size_t i = 0; i < f.size(); ++i) {
    Json rec = point_to_json(f.group(), i);
    rec["re"] = f[i].real();
    rec["im"] = f[i].imag();
    out.push_back(std::move(rec));
  }
  return out;
}

/// Records may come in any order but must cover every phase point exactly once.
inline PhaseSpaceFunction phase_function_from_json(const FiniteLCAGroup& group, const Json& j) {
  if (!j.is_array() || j.size() != phase_point_count(group)) {
    throw StructuralError("phase-space function needs one record per phase point");
  }
  ComplexVector values(static_cast<Eigen::Index>(j.size()));
  std::vector<char> seen(j.size(), 0);
  for (const Json& rec : j) {
    const PhasePoint p = make_phase_point(group, Character{rec.at("chi").get<std::vector<int>>()},
                                          GroupElement{rec.at("g").get<std::vector<int>>()});
    const std::size_t idx = phase_index(group, p);
    if (seen[idx]) throw StructuralError("duplicate phase point in phase-space function");
    seen[idx] = 1;
    values(static_cast<Eigen::Index>(idx)) = {rec.at("re").get<double>(), rec.value("im", 0.0)};
  }
  return {group, std::move(values)};
}

}  // namespace cpovm::io
