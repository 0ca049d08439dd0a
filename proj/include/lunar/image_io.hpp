#pragma once

#include <filesystem>

#include "lunar/image.hpp"

namespace lunar {

/// Reads a grayscale PGM (P2 or P5, maxval <= 255) or an 8-bit grayscale PNG.
/// Color, alpha and 16-bit inputs are rejected with FormatError; unreadable
/// files raise IoError.
Image load_image(const std::filesystem::path& path);

/// Writes a binary P5 PGM ("P5\n<w> <h>\n255\n" + w*h bytes). Each intensity
/// is clamped to [0,255] and rounded half-up.
void save_image(const Image& img, const std::filesystem::path& path);

/// The byte a real intensity becomes on disk.
unsigned char to_byte(double v);

}  // namespace lunar
