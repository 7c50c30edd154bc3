#include "pascaltri/image_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "pascaltri/error.hpp"
#include "pascaltri/serialize.hpp"

namespace pascaltri {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view field) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || end != field.data() + field.size() || field.empty()) return std::nullopt;
  return value;
}

// Reads PGM header tokens, skipping whitespace and '#' comments.
class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  long next_integer(const char* what) {
    skip();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (start == pos_) throw ValidationError(std::string("malformed PGM header: expected ") + what);
    long value = 0;
    const auto [end, ec] = std::from_chars(bytes_.data() + start, bytes_.data() + pos_, value);
    if (ec != std::errc()) throw ValidationError(std::string("malformed PGM header: bad ") + what);
    return value;
  }

  void skip() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(ImageFormat format) {
  switch (format) {
    case ImageFormat::pgm_ascii: return "pgm-ascii";
    case ImageFormat::pgm_binary: return "pgm-binary";
    case ImageFormat::csv_points: return "csv-points";
  }
  return "unknown";
}

ImageFormat image_format_from_string(const std::string& name) {
  if (name == "pgm-ascii") return ImageFormat::pgm_ascii;
  if (name == "pgm-binary") return ImageFormat::pgm_binary;
  if (name == "csv-points" || name == "csv") return ImageFormat::csv_points;
  throw ValidationError("unknown image format '" + name + "'");
}

ImageFormat detect_format(const std::filesystem::path& path, std::string_view bytes) {
  if (bytes.size() >= 2 && bytes[0] == 'P') {
    if (bytes[1] == '2') return ImageFormat::pgm_ascii;
    if (bytes[1] == '5') return ImageFormat::pgm_binary;
  }
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".pgm") throw ValidationError(path.string() + ": not a P2/P5 PGM file");
  if (ext == ".csv" || ext == ".txt") return ImageFormat::csv_points;
  throw ValidationError(path.string() + ": cannot infer the image format");
}

PixelCloud parse_pgm(std::string_view bytes, YAxis y_axis) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw ValidationError("malformed PGM header: missing P2/P5 magic");
  }
  const bool binary = bytes[1] == '5';
  HeaderReader reader(bytes);
  reader.advance(2);
  const long width = reader.next_integer("width");
  const long height = reader.next_integer("height");
  const long maxval = reader.next_integer("maxval");
  if (width <= 0 || height <= 0) throw ValidationError("malformed PGM header: empty raster");
  if (maxval <= 0 || maxval > 65535) {
    throw ValidationError("PGM maxval must be in 1..65535, got " + std::to_string(maxval));
  }
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<long> values;
  values.reserve(count);

  if (binary) {
    std::size_t pos = reader.pos();
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
      throw ValidationError("malformed PGM header: no separator before raster");
    }
    ++pos;
    const std::size_t depth = maxval > 255 ? 2 : 1;
    if (bytes.size() - pos < count * depth) throw ValidationError("truncated PGM raster");
    for (std::size_t k = 0; k < count; ++k) {
      const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + pos + k * depth);
      values.push_back(depth == 2 ? (long{p[0]} << 8) | long{p[1]} : long{p[0]});
    }
  } else {
    for (std::size_t k = 0; k < count; ++k) {
      reader.skip();
      if (reader.pos() >= bytes.size()) throw ValidationError("truncated PGM raster");
      values.push_back(reader.next_integer("pixel value"));
    }
  }

  std::vector<Pixel> pixels;
  for (long row = 0; row < height; ++row) {
    for (long col = 0; col < width; ++col) {
      const long v = values[static_cast<std::size_t>(row * width + col)];
      if (v > maxval) {
        throw ValidationError("PGM value " + std::to_string(v) + " exceeds maxval " +
                              std::to_string(maxval));
      }
      if (v == 0) continue;
      const double y = y_axis == YAxis::up ? static_cast<double>(height - 1 - row)
                                           : static_cast<double>(row);
      pixels.push_back({Complex(static_cast<double>(col), y), static_cast<double>(v)});
    }
  }
  return PixelCloud(std::move(pixels));
}

PixelCloud parse_cloud_csv(std::string_view text) {
  std::vector<Pixel> pixels;
  bool seen_content = false;
  int line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    const std::string where = "line " + std::to_string(line_no);
    if (fields.size() != 3) throw ValidationError(where + ": expected x,y,intensity");
    const auto x = parse_number(fields[0]);
    const auto y = parse_number(fields[1]);
    const auto rho = parse_number(fields[2]);
    if (!x || !y || !rho) {
      if (!seen_content) {
        seen_content = true;  // header row
        continue;
      }
      throw ValidationError(where + ": not a number");
    }
    seen_content = true;
    if (*rho < 0.0) throw ValidationError(where + ": negative intensity");
    pixels.push_back({Complex(*x, *y), *rho});
  }
  PixelCloud cloud(std::move(pixels));
  cloud.require_distinct();
  return cloud;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

PixelCloud load_image(const ImageSource& source) {
  const std::string bytes = read_file(source.path);
  const ImageFormat inferred = detect_format(source.path, bytes);
  if (source.format && *source.format != inferred) {
    throw ValidationError(source.path.string() + ": declared format " + to_string(*source.format) +
                          " but the file looks like " + to_string(inferred));
  }
  if (inferred == ImageFormat::csv_points) return parse_cloud_csv(bytes);
  return parse_pgm(bytes, source.y_axis);
}

void save_cloud_csv(const std::filesystem::path& path, const PixelCloud& cloud) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  write_cloud_csv(out, cloud);
}

}  // namespace pascaltri
