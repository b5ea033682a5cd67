#include "vai/image_io.hpp"

#include "vai/error.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <csetjmp>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

// jpeglib.h needs FILE and size_t declared first.
#include <jpeglib.h>
#include <jerror.h>

namespace vai {

namespace {

constexpr std::array<std::uint8_t, 8> kPngSignature = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

// ---------------------------------------------------------------------------
// PNG
// ---------------------------------------------------------------------------

struct PngReadState {
    std::span<const std::uint8_t> bytes;
    std::size_t offset = 0;
    bool overrun = false;
    char message[256] = {};
};

void png_read_cb(png_structp png, png_bytep out, png_size_t count) {
    auto* st = static_cast<PngReadState*>(png_get_io_ptr(png));
    if (st->offset + count > st->bytes.size()) {
        st->overrun = true;
        png_error(png, "unexpected end of PNG stream");
    }
    std::memcpy(out, st->bytes.data() + st->offset, count);
    st->offset += count;
}

void png_error_cb(png_structp png, png_const_charp msg) {
    auto* st = static_cast<PngReadState*>(png_get_error_ptr(png));
    std::snprintf(st->message, sizeof(st->message), "%s", msg);
    png_longjmp(png, 1);
}

void png_warning_cb(png_structp, png_const_charp) {}

PixelBuffer decode_png(std::span<const std::uint8_t> bytes) {
    PngReadState st;
    st.bytes = bytes;

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &st, png_error_cb, png_warning_cb);
    if (!png) throw Error("libpng: cannot allocate read struct");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error("libpng: cannot allocate info struct");
    }

    // Everything that must survive the longjmp lives outside this frame.
    std::vector<std::uint8_t> pixels;
    std::vector<png_bytep> rows;
    png_uint_32 width = 0;
    png_uint_32 height = 0;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DecodeError(std::string("malformed PNG: ") + st.message, std::min(st.offset, bytes.size()));
    }

    png_set_read_fn(png, &st, png_read_cb);
    png_read_info(png, info);

    width = png_get_image_width(png, info);
    height = png_get_image_height(png, info);
    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);

    if (bit_depth == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
    png_set_strip_alpha(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    if (png_get_channels(png, info) != 3) {
        png_error(png, "unexpected channel layout after expansion");
    }

    pixels.resize(static_cast<std::size_t>(width) * height * 3);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) rows[y] = pixels.data() + static_cast<std::size_t>(y) * width * 3;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    return PixelBuffer(static_cast<int>(width), static_cast<int>(height), 3, std::move(pixels));
}

struct PngWriteState {
    std::vector<std::uint8_t>* out;
    char message[256] = {};
};

void png_write_cb(png_structp png, png_bytep data, png_size_t count) {
    auto* st = static_cast<PngWriteState*>(png_get_io_ptr(png));
    st->out->insert(st->out->end(), data, data + count);
}

void png_flush_cb(png_structp) {}

void png_write_error_cb(png_structp png, png_const_charp msg) {
    auto* st = static_cast<PngWriteState*>(png_get_error_ptr(png));
    std::snprintf(st->message, sizeof(st->message), "%s", msg);
    png_longjmp(png, 1);
}

// ---------------------------------------------------------------------------
// JPEG
// ---------------------------------------------------------------------------

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX] = {};
};

void jpeg_error_exit_cb(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

void jpeg_silent_output(j_common_ptr) {}

// Treat premature end of data as fatal instead of libjpeg's default of padding
// with a fake EOI marker and emitting a warning.
void jpeg_emit_message_cb(j_common_ptr cinfo, int msg_level) {
    if (msg_level < 0 && cinfo->err->msg_code == JWRN_JPEG_EOF) {
        cinfo->err->error_exit(cinfo);
    }
}

PixelBuffer decode_jpeg(std::span<const std::uint8_t> bytes) {
    jpeg_decompress_struct cinfo{};
    JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = jpeg_error_exit_cb;
    err.pub.output_message = jpeg_silent_output;
    err.pub.emit_message = jpeg_emit_message_cb;

    std::vector<std::uint8_t> pixels;

    if (setjmp(err.jump)) {
        std::size_t offset = bytes.size();
        if (cinfo.src != nullptr) offset = bytes.size() - cinfo.src->bytes_in_buffer;
        jpeg_destroy_decompress(&cinfo);
        throw DecodeError(std::string("malformed JPEG: ") + err.message, offset);
    }

    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    const std::size_t stride = static_cast<std::size_t>(cinfo.output_width) * 3;
    pixels.resize(stride * cinfo.output_height);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = pixels.data() + stride * cinfo.output_scanline;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    const int w = static_cast<int>(cinfo.output_width);
    const int h = static_cast<int>(cinfo.output_height);
    jpeg_destroy_decompress(&cinfo);
    return PixelBuffer(w, h, 3, std::move(pixels));
}

}  // namespace

ImageFormat sniff_format(std::span<const std::uint8_t> bytes) noexcept {
    if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF) {
        return ImageFormat::Jpeg;
    }
    // A truncated signature still identifies the stream as PNG so callers get a
    // decode error rather than a format error.
    const std::size_t n = std::min(bytes.size(), kPngSignature.size());
    if (n > 0 && std::equal(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(n), kPngSignature.begin())) {
        return ImageFormat::Png;
    }
    return ImageFormat::Unknown;
}

PixelBuffer decode_image(std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) {
        throw FormatError("empty image stream");
    }
    switch (sniff_format(bytes)) {
        case ImageFormat::Png:
            if (bytes.size() < kPngSignature.size()) {
                throw DecodeError("truncated PNG signature", bytes.size());
            }
            return decode_png(bytes);
        case ImageFormat::Jpeg:
            return decode_jpeg(bytes);
        case ImageFormat::Unknown:
            break;
    }
    throw FormatError("unsupported image format (expected PNG or JPEG)");
}

std::vector<std::uint8_t> encode_png(const PixelBuffer& img) {
    if (img.empty()) throw EmptyInputError("encode_png: empty image");

    std::vector<std::uint8_t> out;
    PngWriteState st{&out};
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &st, png_write_error_cb, png_warning_cb);
    if (!png) throw Error("libpng: cannot allocate write struct");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error("libpng: cannot allocate info struct");
    }
    std::vector<png_const_bytep> rows(img.height());

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(std::string("PNG encode failed: ") + st.message);
    }

    png_set_write_fn(png, &st, png_write_cb, png_flush_cb);
    png_set_IHDR(png, info, img.width(), img.height(), 8,
                 img.channels() == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    const std::size_t stride = static_cast<std::size_t>(img.width()) * img.channels();
    for (int y = 0; y < img.height(); ++y) rows[y] = img.samples().data() + stride * y;
    png_write_rows(png, const_cast<png_bytepp>(rows.data()), img.height());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

std::vector<std::uint8_t> encode_jpeg(const PixelBuffer& img, int quality) {
    if (img.empty()) throw EmptyInputError("encode_jpeg: empty image");
    if (quality < 1 || quality > 100) throw ArgumentError("JPEG quality must be in [1,100]");

    jpeg_compress_struct cinfo{};
    JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = jpeg_error_exit_cb;
    err.pub.output_message = jpeg_silent_output;

    unsigned char* buffer = nullptr;
    unsigned long size = 0;

    if (setjmp(err.jump)) {
        jpeg_destroy_compress(&cinfo);
        std::free(buffer);
        throw Error(std::string("JPEG encode failed: ") + err.message);
    }

    jpeg_create_compress(&cinfo);
    jpeg_mem_dest(&cinfo, &buffer, &size);
    cinfo.image_width = static_cast<JDIMENSION>(img.width());
    cinfo.image_height = static_cast<JDIMENSION>(img.height());
    cinfo.input_components = img.channels();
    cinfo.in_color_space = img.channels() == 3 ? JCS_RGB : JCS_GRAYSCALE;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality, TRUE);
    jpeg_start_compress(&cinfo, TRUE);
    const std::size_t stride = static_cast<std::size_t>(img.width()) * img.channels();
    while (cinfo.next_scanline < cinfo.image_height) {
        auto* row = const_cast<JSAMPROW>(img.samples().data() + stride * cinfo.next_scanline);
        jpeg_write_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);

    std::vector<std::uint8_t> out(buffer, buffer + size);
    std::free(buffer);
    return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error("short write to " + path.string());
    }
}

}  // namespace vai
