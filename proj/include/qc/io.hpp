// SPDX-License-Identifier: MIT
#pragma once

#include "qc/grid.hpp"
#include "qc/patch.hpp"
#include "qc/shuffle.hpp"
#include "qc/verify.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace qc {

// Canonical rational rendering: a JSON integer when the value is integral and
// fits in 64 bits, otherwise the reduced string "p/q".
[[nodiscard]] nlohmann::json rat_to_json(const Rat& r);

// Accepts JSON integers and "p/q" strings; anything else (floats, booleans)
// throws std::invalid_argument naming `context`.
[[nodiscard]] Rat rat_from_json(const nlohmann::json& j, const std::string& context);

// Decimal rendering with `digits` places after the point, rounded half away
// from zero.
[[nodiscard]] std::string rat_to_decimal_string(const Rat& r, int digits);

// Grid JSON: {"dim": d, "breakpoints": [d arrays], "mass": [flat,
// last-axis-fastest], "normalized": bool}. Serialization always includes
// "normalized"; parsing defaults it to false.
[[nodiscard]] nlohmann::json grid_to_json(const MassGrid& g);
[[nodiscard]] MassGrid grid_from_json(const nlohmann::json& j);

// ShuffleSpec JSON: {"axes": [{"lengths": [...], "perm": [1-based ints]}]}.
// Permutations are 1-based in files, 0-based in memory.
[[nodiscard]] nlohmann::json shuffle_spec_to_json(const ShuffleSpec& s);
[[nodiscard]] ShuffleSpec shuffle_spec_from_json(const nlohmann::json& j);

// ShuffleOfMin JSON: {"segments": [{"start": [...], "mass": ...}]}.
[[nodiscard]] nlohmann::json som_to_json(const ShuffleOfMin& s);
[[nodiscard]] ShuffleOfMin som_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json report_to_json(const VerifyReport& r);

// JSON array of points, each an array of rationals of equal length.
[[nodiscard]] std::vector<Point> points_from_json(const nlohmann::json& j);

// Pattern CSV: comma-separated rational entries, rows listed north to south.
// Throws std::invalid_argument with a 1-based line number on malformed input.
[[nodiscard]] PatchPattern pattern_from_csv(const std::string& text);

// Extended table as CSV, rows north to south, one trailing newline.
[[nodiscard]] std::string table_to_csv(const ExtensionResult& r);

// Canonical text form: two-space indent, sorted keys, trailing newline.
[[nodiscard]] std::string json_to_text(const nlohmann::json& j);

// Parse with a "<source>:<line>:<col>: <message>" diagnostic on failure.
[[nodiscard]] nlohmann::json parse_json_text(const std::string& text,
                                             const std::string& source_name);

}  // namespace qc
