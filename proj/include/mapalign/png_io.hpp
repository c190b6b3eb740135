#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace mapalign::png_io {

/// 8-bit RGB raster, row-major, 3 bytes per pixel.
struct Image {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> rgb;

    std::uint8_t* pixel(int r, int c) {
        return rgb.data() + (static_cast<std::size_t>(r) * width + c) * 3;
    }
    const std::uint8_t* pixel(int r, int c) const {
        return rgb.data() + (static_cast<std::size_t>(r) * width + c) * 3;
    }
};

struct PngInfo {
    int height = 0;
    int width = 0;
};

// Header-only probe, no full decode.
PngInfo read_info(const std::filesystem::path& path);

// Decodes any PNG color type to 8-bit RGB.
Image read_rgb(const std::filesystem::path& path);

void write_rgb(const Image& image, const std::filesystem::path& path);

}  // namespace mapalign::png_io
