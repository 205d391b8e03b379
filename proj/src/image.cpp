#include "lacircle/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "lacircle/errors.hpp"

namespace lacircle {

namespace {

void check_dims(int width, int height) {
    if (width <= 0 || height <= 0) {
        throw FormatError("image dimensions must be positive, got " + std::to_string(width) +
                          "x" + std::to_string(height));
    }
}

std::string lower_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

GrayImage decode_pgm(std::span<const std::uint8_t> bytes, const std::filesystem::path& path) {
    const auto header = detail::parse_pnm_header(bytes);
    if (header.kind != '5') {
        throw FormatError(path.string() + ": only binary PGM (P5) is supported");
    }
    check_dims(header.width, header.height);
    if (header.maxval <= 0 || header.maxval > 65535) {
        throw FormatError(path.string() + ": invalid PGM maxval");
    }
    const std::size_t n = static_cast<std::size_t>(header.width) * header.height;
    const std::size_t bytes_per_sample = header.maxval > 255 ? 2 : 1;
    if (bytes.size() < header.offset + n * bytes_per_sample) {
        throw FormatError(path.string() + ": truncated PGM raster");
    }

    std::vector<std::uint8_t> data(n);
    const auto* raster = bytes.data() + header.offset;
    for (std::size_t i = 0; i < n; ++i) {
        unsigned v = bytes_per_sample == 2
                         ? (static_cast<unsigned>(raster[2 * i]) << 8) | raster[2 * i + 1]
                         : raster[i];
        v = std::min<unsigned>(v, static_cast<unsigned>(header.maxval));
        if (header.maxval != 255) {
            v = (v * 255u * 2u + static_cast<unsigned>(header.maxval)) /
                (2u * static_cast<unsigned>(header.maxval));
        }
        data[i] = static_cast<std::uint8_t>(v);
    }
    return GrayImage(header.width, header.height, std::move(data));
}

GrayImage decode_png(std::span<const std::uint8_t> bytes, const std::filesystem::path& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw FormatError(path.string() + ": " + image.message);
    }
    const int width = static_cast<int>(image.width);
    const int height = static_cast<int>(image.height);
    if (width <= 0 || height <= 0) {
        png_image_free(&image);
        check_dims(width, height);
    }

    // Gray inputs are replicated into R=G=B, for which luma() is the identity.
    image.format = PNG_FORMAT_RGB;
    std::vector<std::uint8_t> rgb(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, rgb.data(), 0, nullptr)) {
        throw FormatError(path.string() + ": " + image.message);
    }

    std::vector<std::uint8_t> data(static_cast<std::size_t>(width) * height);
    for (std::size_t i = 0; i < data.size(); ++i) {
        data[i] = luma(rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]);
    }
    return GrayImage(width, height, std::move(data));
}

void encode_png(const std::filesystem::path& path, int width, int height, std::uint32_t format,
                const void* pixels) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = format;
    if (!png_image_write_to_file(&image, path.string().c_str(), 0, pixels, 0, nullptr)) {
        throw IoError(path.string() + ": " + image.message);
    }
}

}  // namespace

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
    check_dims(width, height);
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height);
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw std::invalid_argument("GrayImage: data length does not match width*height");
    }
}

RgbImage::RgbImage(int width, int height) : width_(width), height_(height) {
    check_dims(width, height);
    pixels_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
}

RgbImage::RgbImage(const GrayImage& gray) : RgbImage(gray.width(), gray.height()) {
    const auto src = gray.data();
    std::transform(src.begin(), src.end(), pixels_.begin(),
                   [](std::uint8_t v) { return Rgb{v, v, v}; });
}

std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
    const unsigned weighted = 299u * r + 587u * g + 114u * b;
    return static_cast<std::uint8_t>((weighted + 500u) / 1000u);
}

GrayImage load_gray_image(const std::filesystem::path& path) {
    const auto bytes = detail::read_file(path);
    if (detail::is_png(bytes)) {
        return decode_png(bytes, path);
    }
    if (bytes.size() >= 2 && bytes[0] == 'P') {
        return decode_pgm(bytes, path);
    }
    throw FormatError(path.string() + ": unsupported image format (expected PGM or PNG)");
}

void save_gray_image(const GrayImage& img, const std::filesystem::path& path) {
    if (lower_extension(path) == ".png") {
        encode_png(path, img.width(), img.height(), PNG_FORMAT_GRAY, img.data().data());
        return;
    }
    const std::string header = "P5\n" + std::to_string(img.width()) + " " +
                               std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> bytes(header.begin(), header.end());
    bytes.insert(bytes.end(), img.data().begin(), img.data().end());
    detail::write_file(path, bytes);
}

void save_rgb_image(const RgbImage& img, const std::filesystem::path& path) {
    std::vector<std::uint8_t> raster;
    raster.reserve(img.pixels().size() * 3);
    for (const Rgb& p : img.pixels()) {
        raster.insert(raster.end(), {p.r, p.g, p.b});
    }
    if (lower_extension(path) == ".png") {
        encode_png(path, img.width(), img.height(), PNG_FORMAT_RGB, raster.data());
        return;
    }
    const std::string header = "P6\n" + std::to_string(img.width()) + " " +
                               std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> bytes(header.begin(), header.end());
    bytes.insert(bytes.end(), raster.begin(), raster.end());
    detail::write_file(path, bytes);
}

namespace detail {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("error reading " + path.string());
    }
    return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("error writing " + path.string());
    }
}

PnmHeader parse_pnm_header(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P') {
        throw FormatError("not a PNM file");
    }
    PnmHeader header;
    header.kind = static_cast<char>(bytes[1]);
    const int fields = header.kind == '4' || header.kind == '1' ? 2 : 3;

    std::size_t pos = 2;
    int values[3] = {0, 0, 0};
    for (int f = 0; f < fields; ++f) {
        // Whitespace and '#' comments may separate header tokens.
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(bytes[pos])) {
                ++pos;
            } else {
                break;
            }
        }
        if (pos >= bytes.size() || !std::isdigit(bytes[pos])) {
            throw FormatError("malformed PNM header");
        }
        long long v = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            v = v * 10 + (bytes[pos] - '0');
            if (v > 1'000'000'000) throw FormatError("PNM header value too large");
            ++pos;
        }
        values[f] = static_cast<int>(v);
    }
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
        throw FormatError("malformed PNM header");
    }
    header.width = values[0];
    header.height = values[1];
    header.maxval = fields == 3 ? values[2] : 0;
    header.offset = pos + 1;
    return header;
}

bool is_png(std::span<const std::uint8_t> bytes) noexcept {
    static constexpr std::uint8_t signature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    return bytes.size() >= 8 && std::memcmp(bytes.data(), signature, 8) == 0;
}

}  // namespace detail

}  // namespace lacircle
