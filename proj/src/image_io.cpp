#include "lunar/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <vector>

namespace lunar {
namespace {

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed on " + path.string());
  return bytes;
}

// Minimal cursor over a PGM header/payload: whitespace and '#' comments are
// skipped between tokens.
class PgmCursor {
 public:
  explicit PgmCursor(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool at_end() const { return pos_ >= bytes_.size(); }

  long read_uint(const char* what) {
    skip_space_and_comments();
    if (at_end() || !std::isdigit(bytes_[pos_])) {
      throw FormatError(std::string("PGM: expected ") + what);
    }
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > std::numeric_limits<int>::max()) throw FormatError(std::string("PGM: ") + what + " overflows");
      ++pos_;
    }
    return v;
  }

  // The single whitespace byte that separates a P5 header from its payload.
  void consume_header_terminator() {
    if (at_end() || !std::isspace(bytes_[pos_])) throw FormatError("PGM: malformed header");
    ++pos_;
  }

  std::size_t pos() const { return pos_; }

 private:
  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 2;
};

Image decode_pgm(const std::vector<unsigned char>& bytes) {
  const bool binary = bytes[1] == '5';
  PgmCursor cur(bytes);
  const long width = cur.read_uint("width");
  const long height = cur.read_uint("height");
  const long maxval = cur.read_uint("maxval");
  if (width < 1 || height < 1) throw FormatError("PGM: zero dimension");
  if (maxval < 1) throw FormatError("PGM: maxval must be positive");
  if (maxval > 255) throw FormatError("PGM: 16-bit images are not supported");

  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<double> px(count);
  if (binary) {
    cur.consume_header_terminator();
    const std::size_t start = cur.pos();
    if (bytes.size() - start < count) throw FormatError("PGM: truncated payload");
    if (bytes.size() - start > count) throw FormatError("PGM: payload larger than header dimensions");
    for (std::size_t i = 0; i < count; ++i) {
      const unsigned char b = bytes[start + i];
      if (b > maxval) throw FormatError("PGM: sample exceeds maxval");
      px[i] = b;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const long v = cur.read_uint("sample");
      if (v > maxval) throw FormatError("PGM: sample exceeds maxval");
      px[i] = static_cast<double>(v);
    }
    cur.skip_space_and_comments();
    if (!cur.at_end()) throw FormatError("PGM: payload larger than header dimensions");
  }
  return Image(static_cast<int>(width), static_cast<int>(height), std::move(px));
}

Image decode_png(const std::filesystem::path& path) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw FormatError("PNG: " + std::string(png.message));
  }
  const auto format = png.format;
  if (format & (PNG_FORMAT_FLAG_COLOR | PNG_FORMAT_FLAG_ALPHA)) {
    png_image_free(&png);
    throw FormatError("PNG: only grayscale images without alpha are supported");
  }
  if (format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&png);
    throw FormatError("PNG: 16-bit images are not supported");
  }
  png.format = PNG_FORMAT_GRAY;
  std::vector<png_byte> buf(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buf.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw FormatError("PNG: " + msg);
  }
  std::vector<double> px(buf.begin(), buf.end());
  return Image(static_cast<int>(png.width), static_cast<int>(png.height), std::move(px));
}

}  // namespace

Image load_image(const std::filesystem::path& path) {
  const auto bytes = read_all(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5')) {
    return decode_pgm(bytes);
  }
  static constexpr std::array<unsigned char, 8> kPngSig{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= kPngSig.size() && std::equal(kPngSig.begin(), kPngSig.end(), bytes.begin())) {
    return decode_png(path);
  }
  throw FormatError("unsupported image format: " + path.string());
}

unsigned char to_byte(double v) {
  const double clamped = std::clamp(v, 0.0, 255.0);
  return static_cast<unsigned char>(std::floor(clamped + 0.5));
}

void save_image(const Image& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  std::vector<char> bytes(img.size());
  auto px = img.pixels();
  std::transform(px.begin(), px.end(), bytes.begin(),
                 [](double v) { return static_cast<char>(to_byte(v)); });
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed on " + path.string());
}

}  // namespace lunar
