#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "pascaltri/cloud.hpp"

namespace pascaltri {

enum class ImageFormat { pgm_ascii, pgm_binary, csv_points };
enum class YAxis { up, down };

std::string to_string(ImageFormat format);
ImageFormat image_format_from_string(const std::string& name);

struct ImageSource {
  std::filesystem::path path;
  std::optional<ImageFormat> format;
  YAxis y_axis = YAxis::up;
};

// Format from the magic bytes ("P2", "P5"), else from the extension.
ImageFormat detect_format(const std::filesystem::path& path, std::string_view bytes);

// PGM: pixel (col, row) lands at col + i(H-1-row) with y up, col + i*row with
// y down; zero pixels are dropped. CSV: rows x,y,intensity with an optional
// header line and '#' comments; zero rows are kept.
PixelCloud load_image(const ImageSource& source);

PixelCloud parse_pgm(std::string_view bytes, YAxis y_axis = YAxis::up);
PixelCloud parse_cloud_csv(std::string_view text);

void save_cloud_csv(const std::filesystem::path& path, const PixelCloud& cloud);

std::string read_file(const std::filesystem::path& path);

}  // namespace pascaltri
