#include "mapalign/png_io.hpp"

#include <cstdio>
#include <memory>

#include <png.h>

#include "mapalign/core.hpp"

namespace mapalign::png_io {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.string().c_str(), mode));
    if (!f)
        throw IoError("cannot open " + path.string());
    return f;
}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;

    PngReader() {
        png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png) info = png_create_info_struct(png);
        if (!png || !info)
            throw IoError("libpng allocation failure");
    }
    ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;

    PngWriter() {
        png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png) info = png_create_info_struct(png);
        if (!png || !info)
            throw IoError("libpng allocation failure");
    }
    ~PngWriter() { png_destroy_write_struct(&png, &info); }
};

}  // namespace

PngInfo read_info(const std::filesystem::path& path) {
    FilePtr f = open_file(path, "rb");
    PngReader r;
    if (setjmp(png_jmpbuf(r.png)))
        throw IoError("not a valid PNG: " + path.string());
    png_init_io(r.png, f.get());
    png_read_info(r.png, r.info);
    PngInfo out;
    out.width = static_cast<int>(png_get_image_width(r.png, r.info));
    out.height = static_cast<int>(png_get_image_height(r.png, r.info));
    return out;
}

Image read_rgb(const std::filesystem::path& path) {
    FilePtr f = open_file(path, "rb");
    PngReader r;
    std::vector<png_bytep> rows;
    Image image;
    if (setjmp(png_jmpbuf(r.png)))
        throw IoError("failed to decode PNG: " + path.string());
    png_init_io(r.png, f.get());
    png_read_info(r.png, r.info);

    // Normalize every color type to 8-bit RGB.
    png_set_expand(r.png);
    png_set_strip_16(r.png);
    png_set_strip_alpha(r.png);
    png_set_gray_to_rgb(r.png);
    png_read_update_info(r.png, r.info);

    image.width = static_cast<int>(png_get_image_width(r.png, r.info));
    image.height = static_cast<int>(png_get_image_height(r.png, r.info));
    image.rgb.resize(static_cast<std::size_t>(image.width) * image.height * 3);
    rows.resize(image.height);
    for (int y = 0; y < image.height; ++y)
        rows[y] = image.rgb.data() + static_cast<std::size_t>(y) * image.width * 3;
    png_read_image(r.png, rows.data());
    png_read_end(r.png, nullptr);
    return image;
}

void write_rgb(const Image& image, const std::filesystem::path& path) {
    if (image.height <= 0 || image.width <= 0 ||
        image.rgb.size() != static_cast<std::size_t>(image.height) * image.width * 3)
        throw IoError("inconsistent image buffer for " + path.string());
    FilePtr f = open_file(path, "wb");
    PngWriter w;
    std::vector<png_bytep> rows(image.height);
    if (setjmp(png_jmpbuf(w.png)))
        throw IoError("failed to encode PNG: " + path.string());
    png_init_io(w.png, f.get());
    png_set_IHDR(w.png, w.info, static_cast<png_uint_32>(image.width),
                 static_cast<png_uint_32>(image.height), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(w.png, w.info);
    for (int y = 0; y < image.height; ++y)
        rows[y] = const_cast<png_bytep>(image.rgb.data() +
                                        static_cast<std::size_t>(y) * image.width * 3);
    png_write_image(w.png, rows.data());
    png_write_end(w.png, nullptr);
}

}  // namespace mapalign::png_io
