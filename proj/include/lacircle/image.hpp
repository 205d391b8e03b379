#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace lacircle {

/// Integer pixel coordinate. x is the column, y the row, origin top-left.
struct Point {
    int x = 0;
    int y = 0;

    friend bool operator==(const Point&, const Point&) = default;
    friend auto operator<=>(const Point&, const Point&) = default;
};

/// Row-major 8-bit luminance image.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, std::uint8_t fill = 0);
    GrayImage(int width, int height, std::vector<std::uint8_t> data);

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }
    [[nodiscard]] bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }

    [[nodiscard]] std::uint8_t at(int x, int y) const { return data_[index(x, y)]; }
    [[nodiscard]] std::uint8_t& at(int x, int y) { return data_[index(x, y)]; }

    [[nodiscard]] std::span<const std::uint8_t> data() const noexcept { return data_; }
    [[nodiscard]] std::span<std::uint8_t> data() noexcept { return data_; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    [[nodiscard]] std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Row-major interleaved RGB image, used for overlays.
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height);
    explicit RgbImage(const GrayImage& gray);

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] Rgb at(int x, int y) const { return pixels_[index(x, y)]; }
    [[nodiscard]] Rgb& at(int x, int y) { return pixels_[index(x, y)]; }
    [[nodiscard]] std::span<const Rgb> pixels() const noexcept { return pixels_; }

private:
    [[nodiscard]] std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<Rgb> pixels_;
};

/// BT.601 luma, rounded half-up.
[[nodiscard]] std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;

/// Loads a binary PGM (P5) or PNG file. Color PNGs are reduced with luma().
/// Throws IoError or FormatError.
[[nodiscard]] GrayImage load_gray_image(const std::filesystem::path& path);

/// Writes PGM (P5) or PNG depending on the extension (.png, anything else PGM).
void save_gray_image(const GrayImage& img, const std::filesystem::path& path);

/// Writes PPM (P6) or PNG depending on the extension.
void save_rgb_image(const RgbImage& img, const std::filesystem::path& path);

namespace detail {
[[nodiscard]] std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// Minimal PNM header: magic, width, height, maxval (0 for PBM) and the offset
/// of the first raster byte.
struct PnmHeader {
    char kind = 0;
    int width = 0;
    int height = 0;
    int maxval = 0;
    std::size_t offset = 0;
};
[[nodiscard]] PnmHeader parse_pnm_header(std::span<const std::uint8_t> bytes);

[[nodiscard]] bool is_png(std::span<const std::uint8_t> bytes) noexcept;
}  // namespace detail

}  // namespace lacircle
