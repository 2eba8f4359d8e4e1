#include "dtw/image.hpp"

#include "dtw/error.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>

namespace dtw {

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> intensities)
    : width_(width), height_(height), pixels_(std::move(intensities)) {
  if (width_ < 2 || height_ < 2)
    throw std::invalid_argument("image dimensions must be at least 2x2, got " + std::to_string(width_) + "x" +
                                std::to_string(height_));
  if (pixels_.size() != width_ * height_)
    throw std::invalid_argument("intensity buffer holds " + std::to_string(pixels_.size()) + " values, expected " +
                                std::to_string(width_ * height_));
}

std::uint8_t GrayImage::at(PixelCoord p) const {
  if (!contains(p))
    throw std::out_of_range("pixel (" + std::to_string(p.x) + "," + std::to_string(p.y) + ") outside " +
                            std::to_string(height_) + "x" + std::to_string(width_) + " image");
  return pixels_[p.x * width_ + p.y];
}

std::size_t pixel_code(PixelCoord p, const GrayImage& image) {
  if (!image.contains(p))
    throw std::out_of_range("pixel (" + std::to_string(p.x) + "," + std::to_string(p.y) + ") outside image");
  return image.width() * p.x + p.y;
}

Neighborhood neighbors(PixelCoord p, const GrayImage& image) {
  if (!image.contains(p)) throw std::out_of_range("neighbors: coordinate outside image");
  Neighborhood out;
  for (const auto& off : kNeighborOffsets) {
    const auto nx = static_cast<std::ptrdiff_t>(p.x) + off.dx;
    const auto ny = static_cast<std::ptrdiff_t>(p.y) + off.dy;
    if (nx < 0 || ny < 0) continue;
    PixelCoord q{static_cast<std::size_t>(nx), static_cast<std::size_t>(ny)};
    if (image.contains(q)) out.push(q);
  }
  return out;
}

std::uint8_t weight(PixelCoord i, PixelCoord j, const GrayImage& image) {
  const int a = image.at(i);
  const int b = image.at(j);
  return static_cast<std::uint8_t>(a > b ? a - b : b - a);
}

namespace {

bool has_png_signature(const std::string& head) {
  static constexpr unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (head.size() < 8) return false;
  for (int i = 0; i < 8; ++i)
    if (static_cast<unsigned char>(head[static_cast<std::size_t>(i)]) != sig[i]) return false;
  return true;
}

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

std::size_t parse_dim(const std::string& tok, const std::filesystem::path& path, const char* what) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    throw DataError(path.string() + ": malformed PGM " + what + " '" + tok + "'");
  return std::stoull(tok);
}

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string() + ": cannot open");
  if (pgm_token(in) != "P5") throw DataError(path.string() + ": only binary PGM (P5) is supported");
  const auto width = parse_dim(pgm_token(in), path, "width");
  const auto height = parse_dim(pgm_token(in), path, "height");
  const auto maxval = parse_dim(pgm_token(in), path, "maxval");
  if (maxval == 0 || maxval > 255)
    throw DataError(path.string() + ": unsupported bit depth (maxval " + std::to_string(maxval) +
                    "); only 8-bit PGM is supported");
  if (width < 2 || height < 2)
    throw DataError(path.string() + ": image must be at least 2x2, got " + std::to_string(width) + "x" +
                    std::to_string(height));
  std::vector<std::uint8_t> px(width * height);
  in.read(reinterpret_cast<char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (in.gcount() != static_cast<std::streamsize>(px.size()))
    throw DataError(path.string() + ": truncated pixel data");
  return GrayImage(width, height, std::move(px));
}

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};

GrayImage load_png(const std::filesystem::path& path) {
  std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw DataError(path.string() + ": cannot open");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw DataError(path.string() + ": libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw DataError(path.string() + ": libpng init failed");
  }

  std::vector<std::uint8_t> raw;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0, height = 0;
  int bit_depth = 0, color_type = 0;
  std::string failure;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError(path.string() + ": corrupt PNG");
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, nullptr, nullptr, nullptr);

  if (color_type == PNG_COLOR_TYPE_PALETTE) {
    png_set_palette_to_rgb(png);
  } else if (bit_depth != 8) {
    failure = "unsupported bit depth " + std::to_string(bit_depth) + "; only 8-bit PNG is supported";
  }
  if (width < 2 || height < 2)
    failure = "image must be at least 2x2, got " + std::to_string(width) + "x" + std::to_string(height);
  if (!failure.empty()) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError(path.string() + ": " + failure);
  }
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const auto channels = png_get_channels(png, info);
  const auto stride = png_get_rowbytes(png, info);
  raw.resize(stride * height);
  rows.resize(height);
  for (png_uint_32 r = 0; r < height; ++r) rows[r] = raw.data() + r * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  std::vector<std::uint8_t> px(static_cast<std::size_t>(width) * height);
  for (png_uint_32 r = 0; r < height; ++r) {
    const std::uint8_t* row = rows[r];
    for (png_uint_32 c = 0; c < width; ++c) {
      const std::uint8_t* s = row + static_cast<std::size_t>(c) * channels;
      std::uint8_t v;
      if (channels >= 3) {
        v = static_cast<std::uint8_t>((299u * s[0] + 587u * s[1] + 114u * s[2] + 500u) / 1000u);
      } else {
        v = s[0];
      }
      px[static_cast<std::size_t>(r) * width + c] = v;
    }
  }
  return GrayImage(width, height, std::move(px));
}

} // namespace

GrayImage load_image(const std::filesystem::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw DataError(path.string() + ": cannot open");
  std::string head(8, '\0');
  probe.read(head.data(), 8);
  head.resize(static_cast<std::size_t>(probe.gcount()));
  probe.close();
  if (has_png_signature(head)) return load_png(path);
  if (head.size() >= 2 && head[0] == 'P') return load_pgm(path);
  throw DataError(path.string() + ": unrecognized image format (expected PGM P5 or PNG)");
}

void save_pgm(const GrayImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path.string() + ": cannot open for writing");
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  const auto px = image.pixels();
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (!out) throw DataError(path.string() + ": write failed");
}

} // namespace dtw
