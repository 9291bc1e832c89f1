#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ca::charts {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
};

// Fixed-palette RGB raster. All drawing is integer Bresenham/rect fills, no
// anti-aliasing, so identical inputs produce identical pixel buffers.
class Canvas {
public:
    Canvas(int width, int height, Rgb background);

    int width() const { return width_; }
    int height() const { return height_; }
    const std::vector<std::uint8_t>& pixels() const { return pixels_; }

    void set_pixel(int x, int y, Rgb c);
    void fill_rect(int x0, int y0, int x1, int y1, Rgb c);  // inclusive corners
    void vline(int x, int y0, int y1, Rgb c);
    void hline(int y, int x0, int x1, Rgb c);
    void line(int x0, int y0, int x1, int y1, Rgb c);

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> pixels_;
};

// 8-bit RGB PNG with a single IDAT chunk, zlib level pinned for byte-stable
// output under a fixed zlib build.
std::string encode_png(const Canvas& canvas);

}  // namespace ca::charts
