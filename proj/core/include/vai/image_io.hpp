#pragma once

#include "vai/raster.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace vai {

enum class ImageFormat { Png, Jpeg, Unknown };

ImageFormat sniff_format(std::span<const std::uint8_t> bytes) noexcept;

/// Decodes a PNG or JPEG stream into an RGB PixelBuffer. Alpha is dropped,
/// grayscale and palette images are expanded, 16-bit samples are reduced to 8.
/// Throws DecodeError (with byte offset) on malformed data and FormatError
/// when the stream is neither PNG nor JPEG.
PixelBuffer decode_image(std::span<const std::uint8_t> bytes);

/// Lossless PNG encoding of a 1- or 3-channel buffer.
std::vector<std::uint8_t> encode_png(const PixelBuffer& img);

/// Baseline JPEG encoding; quality in [1,100].
std::vector<std::uint8_t> encode_jpeg(const PixelBuffer& img, int quality = 95);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

inline PixelBuffer load_image(const std::filesystem::path& path) { return decode_image(read_file(path)); }

}  // namespace vai
