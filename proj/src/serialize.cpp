#include "pascaltri/serialize.hpp"

#include <cstdio>
#include <ostream>

#include "pascaltri/error.hpp"

namespace pascaltri {

using nlohmann::json;

namespace {

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ValidationError("expected a complex number as [re, im], got " + v.dump());
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

const json& require(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw ValidationError(std::string("missing field '") + key + "'");
  }
  return doc.at(key);
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

json to_json(const MomentTable& table) {
  json entries = json::array();
  for (int j = 0; j <= table.order(); ++j) {
    json row = json::array();
    for (int l = 0; l <= table.order(); ++l) {
      row.push_back(table.has(j, l) ? complex_to_json(table(j, l)) : json(nullptr));
    }
    entries.push_back(std::move(row));
  }
  return {{"order", table.order()}, {"max_degree", table.max_degree()}, {"entries", entries}};
}

MomentTable table_from_json(const json& doc) {
  try {
    const int order = require(doc, "order").get<int>();
    const int degree = doc.contains("max_degree") ? doc.at("max_degree").get<int>() : 2 * order;
    MomentTable table(order, degree);
    const auto& entries = require(doc, "entries");
    if (!entries.is_array() || static_cast<int>(entries.size()) != order + 1) {
      throw ValidationError("table entries must have order + 1 rows");
    }
    for (int j = 0; j <= order; ++j) {
      const auto& row = entries[static_cast<std::size_t>(j)];
      if (!row.is_array() || static_cast<int>(row.size()) != order + 1) {
        throw ValidationError("table row " + std::to_string(j) + " has the wrong length");
      }
      for (int l = 0; l <= order; ++l) {
        if (table.has(j, l)) table(j, l) = complex_from_json(row[static_cast<std::size_t>(l)]);
      }
    }
    return table;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed moment table: ") + e.what());
  }
}

json to_json(const PascalTriangle& triangle) {
  json tags = json::array();
  for (auto tag : triangle.frame_tags) tags.push_back(to_string(tag));
  json rows = json::array();
  for (const auto& row : triangle.rows) {
    json r = json::array();
    for (const auto& v : row) r.push_back(complex_to_json(v));
    rows.push_back(std::move(r));
  }
  json doc = {{"order", triangle.order}, {"frame_tags", tags}, {"rows", rows}};
  if (triangle.frame) {
    const auto& f = *triangle.frame;
    doc["frame"] = {{"z0", complex_to_json(f.z0)},
                    {"lambda", f.lambda},
                    {"theta0", f.theta0},
                    {"degenerate_rotation", f.degenerate_rotation},
                    {"degenerate_scale", f.degenerate_scale}};
  }
  if (triangle.affine) {
    doc["affine"] = {{"shift", complex_to_json(triangle.affine->shift)},
                     {"scale", triangle.affine->scale}};
  }
  return doc;
}

PascalTriangle triangle_from_json(const json& doc) {
  try {
    PascalTriangle triangle;
    triangle.order = require(doc, "order").get<int>();
    if (triangle.order < 0) throw ValidationError("triangle order must be nonnegative");
    if (doc.contains("frame_tags")) {
      for (const auto& tag : doc.at("frame_tags")) {
        triangle.frame_tags.insert(frame_tag_from_string(tag.get<std::string>()));
      }
    }
    const auto& rows = require(doc, "rows");
    if (!rows.is_array() || static_cast<int>(rows.size()) != triangle.order + 1) {
      throw ValidationError("triangle must have order + 1 rows");
    }
    for (std::size_t n = 0; n < rows.size(); ++n) {
      if (!rows[n].is_array() || rows[n].size() != n + 1) {
        throw ValidationError("triangle row " + std::to_string(n) + " must have " +
                              std::to_string(n + 1) + " entries");
      }
      std::vector<Complex> row;
      for (const auto& v : rows[n]) row.push_back(complex_from_json(v));
      triangle.rows.push_back(std::move(row));
    }
    if (doc.contains("frame")) {
      const auto& f = doc.at("frame");
      MovingFrame frame;
      frame.z0 = complex_from_json(require(f, "z0"));
      frame.lambda = require(f, "lambda").get<double>();
      frame.theta0 = require(f, "theta0").get<double>();
      frame.degenerate_rotation = f.value("degenerate_rotation", false);
      frame.degenerate_scale = f.value("degenerate_scale", false);
      triangle.frame = frame;
    }
    if (doc.contains("affine")) {
      const auto& a = doc.at("affine");
      AffineRecord record{complex_from_json(require(a, "shift")), require(a, "scale").get<double>()};
      if (!(record.scale > 0.0)) throw ValidationError("affine scale must be positive");
      triangle.affine = record;
    }
    return triangle;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed triangle: ") + e.what());
  }
}

std::string dump_json(const json& doc) { return doc.dump(2); }

void write_cloud_csv(std::ostream& out, const PixelCloud& cloud) {
  out << "x,y,intensity\n";
  for (const auto& p : cloud.pixels()) {
    out << format_double(p.location.real()) << ',' << format_double(p.location.imag()) << ','
        << format_double(p.intensity) << '\n';
  }
}

}  // namespace pascaltri
