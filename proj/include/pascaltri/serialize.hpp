#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "pascaltri/cloud.hpp"
#include "pascaltri/moments.hpp"

namespace pascaltri {

// Complex numbers travel as [re, im]. Tables are {"order", "max_degree",
// "entries"} with entries[j][l]; unknown entries are null. Triangles are
// {"order", "frame_tags", "rows"} plus optional "frame" and "affine" blocks.
nlohmann::json to_json(const MomentTable& table);
nlohmann::json to_json(const PascalTriangle& triangle);

MomentTable table_from_json(const nlohmann::json& doc);
PascalTriangle triangle_from_json(const nlohmann::json& doc);

// Writes doubles with 17 significant digits so they round-trip exactly.
std::string dump_json(const nlohmann::json& doc);

// Cloud CSV: header "x,y,intensity", one pixel per row, 17 significant digits.
void write_cloud_csv(std::ostream& out, const PixelCloud& cloud);
std::string format_double(double value);

}  // namespace pascaltri
