#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "core/metrics.hpp"

namespace pulse::render {

/// Grayscale raster painter. Intensity 0 = black, 1 = white.
class Canvas {
 public:
  Canvas(int width, int height, double background = 1.0);

  void fill_rect(int x, int y, int w, int h, double intensity);
  void rect_outline(int x, int y, int w, int h, double intensity);
  void line(int x0, int y0, int x1, int y1, double intensity);
  /// Filled disc, used for chart markers.
  void disc(int cx, int cy, int radius, double intensity);
  /// Bitmap text; (x, y) is the top-left of the first glyph cell.
  void text(int x, int y, std::string_view s, int scale, double intensity);

  const GrayImage& image() const { return image_; }

  static int text_width(std::string_view s, int scale);
  static int text_height(int scale);

 private:
  void put(int x, int y, double intensity);
  GrayImage image_;
};

/// Deterministic SVG assembly: integer coordinates, fixed attribute order.
class SvgWriter {
 public:
  SvgWriter(int width, int height);

  void comment(std::string_view text);
  void rect(int x, int y, int w, int h, std::string_view fill, std::string_view stroke);
  void line(int x0, int y0, int x1, int y1, std::string_view stroke, int stroke_width = 1);
  void polyline(const std::vector<std::pair<int, int>>& points, std::string_view stroke,
                int stroke_width = 2);
  void circle(int cx, int cy, int r, std::string_view fill);
  void text(int x, int y, std::string_view content, int font_size,
            std::string_view anchor = "start");
  std::string finish();

 private:
  std::string body_;
  bool finished_ = false;
};

std::string xml_escape(std::string_view s);

}  // namespace pulse::render
