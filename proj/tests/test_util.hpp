#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "lacircle/image.hpp"

namespace lacircle::testing {

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("lacircle-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const { return path_; }
    [[nodiscard]] std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline GrayImage disk_image(int w, int h, double cx, double cy, double r, std::uint8_t fg = 220,
                            std::uint8_t bg = 30) {
    GrayImage img(w, h, bg);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double dx = x - cx, dy = y - cy;
            if (dx * dx + dy * dy <= r * r) img.at(x, y) = fg;
        }
    }
    return img;
}

}  // namespace lacircle::testing
