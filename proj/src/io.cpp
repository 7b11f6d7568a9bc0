// SPDX-License-Identifier: MIT
#include "qc/io.hpp"

#include "qc/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace qc {

// ============================ rationals =============================

nlohmann::json rat_to_json(const Rat& r) {
  if (denominator(r) == 1) {
    const Int num = numerator(r);
    if (num >= std::numeric_limits<std::int64_t>::min() &&
        num <= std::numeric_limits<std::int64_t>::max()) {
      return nlohmann::json(num.convert_to<std::int64_t>());
    }
  }
  return nlohmann::json(rat_to_string(r));
}

Rat rat_from_json(const nlohmann::json& j, const std::string& context) {
  if (j.is_number_integer()) {
    return Rat(Int(j.get<std::int64_t>()));
  }
  if (j.is_number_unsigned()) {
    return Rat(Int(j.get<std::uint64_t>()));
  }
  if (j.is_string()) {
    try {
      return rat_from_string(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(context + ": " + e.what());
    }
  }
  throw std::invalid_argument(context + ": expected an integer or a \"p/q\" string");
}

std::string rat_to_decimal_string(const Rat& r, int digits) {
  if (digits < 0) throw std::invalid_argument("rat_to_decimal_string: negative digit count");
  const bool negative = r < 0;
  const Rat a = negative ? Rat(-r) : r;
  Int pow10(1);
  for (int i = 0; i < digits; ++i) pow10 *= 10;
  const Int rounded = floor_rat(a * Rat(pow10) + Rat(1, 2));
  const Int whole = rounded / pow10;
  const Int frac = rounded % pow10;
  std::string out = negative && rounded != 0 ? "-" : "";
  out += whole.str();
  if (digits > 0) {
    std::string f = frac.str();
    out += ".";
    out += std::string(static_cast<std::size_t>(digits) - f.size(), '0');
    out += f;
  }
  return out;
}

// ============================== grids ===============================

nlohmann::json grid_to_json(const MassGrid& g) {
  nlohmann::json bps = nlohmann::json::array();
  for (const auto& axis : g.breakpoints()) {
    nlohmann::json a = nlohmann::json::array();
    for (const Rat& r : axis) a.push_back(rat_to_json(r));
    bps.push_back(std::move(a));
  }
  nlohmann::json mass = nlohmann::json::array();
  for (const Rat& r : g.mass()) mass.push_back(rat_to_json(r));
  return nlohmann::json{{"dim", g.dim()},
                        {"breakpoints", std::move(bps)},
                        {"mass", std::move(mass)},
                        {"normalized", g.normalized()}};
}

MassGrid grid_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("grid: expected a JSON object");
  if (!j.contains("dim") || !j["dim"].is_number_integer()) {
    throw std::invalid_argument("grid: missing integer key \"dim\"");
  }
  const std::int64_t dim = j["dim"].get<std::int64_t>();
  if (dim < 1) throw std::invalid_argument("grid: \"dim\" must be at least 1");
  if (!j.contains("breakpoints") || !j["breakpoints"].is_array() ||
      j["breakpoints"].size() != static_cast<std::size_t>(dim)) {
    throw std::invalid_argument("grid: \"breakpoints\" must be an array of dim axis arrays");
  }
  std::vector<std::vector<Rat>> bps;
  for (std::size_t k = 0; k < static_cast<std::size_t>(dim); ++k) {
    const nlohmann::json& axis = j["breakpoints"][k];
    if (!axis.is_array()) {
      throw std::invalid_argument("grid: breakpoints axis " + std::to_string(k + 1) +
                                  " is not an array");
    }
    std::vector<Rat> a;
    for (std::size_t t = 0; t < axis.size(); ++t) {
      a.push_back(rat_from_json(axis[t], "grid: breakpoints axis " + std::to_string(k + 1) +
                                             " entry " + std::to_string(t + 1)));
    }
    bps.push_back(std::move(a));
  }
  if (!j.contains("mass") || !j["mass"].is_array()) {
    throw std::invalid_argument("grid: missing array key \"mass\"");
  }
  std::vector<Rat> mass;
  for (std::size_t t = 0; t < j["mass"].size(); ++t) {
    mass.push_back(rat_from_json(j["mass"][t], "grid: mass entry " + std::to_string(t + 1)));
  }
  bool normalized = false;
  if (j.contains("normalized")) {
    if (!j["normalized"].is_boolean()) {
      throw std::invalid_argument("grid: \"normalized\" must be a boolean");
    }
    normalized = j["normalized"].get<bool>();
  }
  return MassGrid::create(std::move(bps), std::move(mass), normalized);
}

// ============================= shuffles =============================

nlohmann::json shuffle_spec_to_json(const ShuffleSpec& s) {
  nlohmann::json axes = nlohmann::json::array();
  for (const ShuffleAxis& ax : s.axes) {
    nlohmann::json lengths = nlohmann::json::array();
    for (const Rat& r : ax.lengths) lengths.push_back(rat_to_json(r));
    nlohmann::json perm = nlohmann::json::array();
    for (int p : ax.perm) perm.push_back(p + 1);
    axes.push_back(nlohmann::json{{"lengths", std::move(lengths)}, {"perm", std::move(perm)}});
  }
  return nlohmann::json{{"axes", std::move(axes)}};
}

ShuffleSpec shuffle_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("axes") || !j["axes"].is_array()) {
    throw std::invalid_argument("shuffle spec: expected an object with an \"axes\" array");
  }
  ShuffleSpec s;
  for (std::size_t k = 0; k < j["axes"].size(); ++k) {
    const nlohmann::json& ja = j["axes"][k];
    const std::string where = "shuffle spec: axis " + std::to_string(k + 1);
    if (!ja.is_object() || !ja.contains("lengths") || !ja["lengths"].is_array() ||
        !ja.contains("perm") || !ja["perm"].is_array()) {
      throw std::invalid_argument(where + " needs \"lengths\" and \"perm\" arrays");
    }
    ShuffleAxis ax;
    for (std::size_t t = 0; t < ja["lengths"].size(); ++t) {
      ax.lengths.push_back(
          rat_from_json(ja["lengths"][t], where + " length " + std::to_string(t + 1)));
    }
    for (std::size_t t = 0; t < ja["perm"].size(); ++t) {
      if (!ja["perm"][t].is_number_integer()) {
        throw std::invalid_argument(where + " perm entries must be integers");
      }
      const std::int64_t p = ja["perm"][t].get<std::int64_t>();
      if (p < 1 || p > static_cast<std::int64_t>(ja["perm"].size())) {
        throw std::invalid_argument(where + " perm entries must be 1-based positions");
      }
      ax.perm.push_back(static_cast<int>(p - 1));
    }
    s.axes.push_back(std::move(ax));
  }
  return s;
}

// ========================== shuffle of min ==========================

nlohmann::json som_to_json(const ShuffleOfMin& s) {
  nlohmann::json segments = nlohmann::json::array();
  for (const SomSegment& seg : s.segments) {
    nlohmann::json start = nlohmann::json::array();
    for (const Rat& r : seg.start) start.push_back(rat_to_json(r));
    segments.push_back(
        nlohmann::json{{"start", std::move(start)}, {"mass", rat_to_json(seg.mass)}});
  }
  return nlohmann::json{{"segments", std::move(segments)}};
}

ShuffleOfMin som_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("segments") || !j["segments"].is_array() ||
      j["segments"].empty()) {
    throw std::invalid_argument(
        "shuffle of min: expected an object with a nonempty \"segments\" array");
  }
  ShuffleOfMin s;
  for (std::size_t t = 0; t < j["segments"].size(); ++t) {
    const nlohmann::json& js = j["segments"][t];
    const std::string where = "shuffle of min: segment " + std::to_string(t + 1);
    if (!js.is_object() || !js.contains("start") || !js["start"].is_array() ||
        !js.contains("mass")) {
      throw std::invalid_argument(where + " needs a \"start\" array and a \"mass\"");
    }
    SomSegment seg;
    for (std::size_t k = 0; k < js["start"].size(); ++k) {
      seg.start.push_back(
          rat_from_json(js["start"][k], where + " start coordinate " + std::to_string(k + 1)));
    }
    seg.mass = rat_from_json(js["mass"], where + " mass");
    if (t == 0) {
      s.dim = static_cast<int>(seg.start.size());
    } else if (seg.start.size() != static_cast<std::size_t>(s.dim)) {
      throw std::invalid_argument(where + " has mismatched dimension");
    }
    s.segments.push_back(std::move(seg));
  }
  return s;
}

// ============================= reports ==============================

nlohmann::json report_to_json(const VerifyReport& r) {
  nlohmann::json failures = nlohmann::json::array();
  for (const VerifyFailure& f : r.failures) {
    failures.push_back(nlohmann::json{{"condition", f.condition},
                                      {"witness", f.witness},
                                      {"value", rat_to_json(f.value)}});
  }
  return nlohmann::json{{"passed", r.passed}, {"failures", std::move(failures)}};
}

// ============================== points ==============================

std::vector<Point> points_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("points: expected a JSON array");
  std::vector<Point> pts;
  for (std::size_t t = 0; t < j.size(); ++t) {
    const std::string where = "points: point " + std::to_string(t + 1);
    if (!j[t].is_array() || j[t].empty()) {
      throw std::invalid_argument(where + " must be a nonempty array of coordinates");
    }
    Point p;
    for (std::size_t k = 0; k < j[t].size(); ++k) {
      p.push_back(rat_from_json(j[t][k], where + " coordinate " + std::to_string(k + 1)));
    }
    if (!pts.empty() && p.size() != pts.front().size()) {
      throw std::invalid_argument(where + " has mismatched dimension");
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

// =============================== CSV ================================

namespace {

[[nodiscard]] std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return s.substr(b, e - b);
}

}  // namespace

PatchPattern pattern_from_csv(const std::string& text) {
  std::vector<std::vector<Rat>> rows_north_first;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string line =
        nl == std::string::npos ? text.substr(pos) : text.substr(pos, nl - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) {
      if (pos <= text.size()) {
        for (std::size_t t = pos; t < text.size(); ++t) {
          if (text[t] != '\n' && text[t] != '\r' && text[t] != ' ' && text[t] != '\t') {
            throw std::invalid_argument("pattern CSV line " + std::to_string(line_no) +
                                        ": empty row");
          }
        }
      }
      break;
    }
    std::vector<Rat> row;
    std::size_t cpos = 0;
    while (cpos <= line.size()) {
      const std::size_t comma = line.find(',', cpos);
      const std::string cellstr = trim(
          comma == std::string::npos ? line.substr(cpos) : line.substr(cpos, comma - cpos));
      try {
        row.push_back(rat_from_string(cellstr));
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("pattern CSV line " + std::to_string(line_no) + ": " +
                                    e.what());
      }
      if (comma == std::string::npos) break;
      cpos = comma + 1;
    }
    if (!rows_north_first.empty() && row.size() != rows_north_first.front().size()) {
      throw std::invalid_argument("pattern CSV line " + std::to_string(line_no) +
                                  ": row width differs from the first row");
    }
    rows_north_first.push_back(std::move(row));
  }
  if (rows_north_first.empty()) {
    throw std::invalid_argument("pattern CSV: no rows");
  }
  PatchPattern p;
  p.n = static_cast<int>(rows_north_first.size());
  p.m = static_cast<int>(rows_north_first.front().size());
  // File rows run north to south; storage is bottom row first.
  for (auto it = rows_north_first.rbegin(); it != rows_north_first.rend(); ++it) {
    for (const Rat& r : *it) p.values.push_back(r);
  }
  return p;
}

std::string table_to_csv(const ExtensionResult& r) {
  std::string out;
  for (int row = r.N; row >= 1; --row) {
    for (int col = 1; col <= r.N; ++col) {
      if (col > 1) out += ",";
      out += rat_to_string(r.table[static_cast<std::size_t>((row - 1) * r.N + (col - 1))]);
    }
    out += "\n";
  }
  return out;
}

// ============================ JSON text =============================

std::string json_to_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

nlohmann::json parse_json_text(const std::string& text, const std::string& source_name) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw std::invalid_argument(source_name + ":" + std::to_string(line) + ":" +
                                std::to_string(col) + ": " + e.what());
  }
}

}  // namespace qc
