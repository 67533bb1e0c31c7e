#include "core/render/draw.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "core/render/font5x7.hpp"

namespace pulse::render {

Canvas::Canvas(int width, int height, double background)
    : image_(make_image(width, height, background)) {}

void Canvas::put(int x, int y, double intensity) {
  if (x < 0 || y < 0 || x >= image_.width || y >= image_.height) return;
  image_.at(x, y) = intensity;
}

void Canvas::fill_rect(int x, int y, int w, int h, double intensity) {
  for (int yy = y; yy < y + h; ++yy)
    for (int xx = x; xx < x + w; ++xx) put(xx, yy, intensity);
}

void Canvas::rect_outline(int x, int y, int w, int h, double intensity) {
  if (w <= 0 || h <= 0) return;
  for (int xx = x; xx < x + w; ++xx) {
    put(xx, y, intensity);
    put(xx, y + h - 1, intensity);
  }
  for (int yy = y; yy < y + h; ++yy) {
    put(x, yy, intensity);
    put(x + w - 1, yy, intensity);
  }
}

void Canvas::line(int x0, int y0, int x1, int y1, double intensity) {
  int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
  int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    put(x0, y0, intensity);
    if (x0 == x1 && y0 == y1) break;
    int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

void Canvas::disc(int cx, int cy, int radius, double intensity) {
  for (int y = -radius; y <= radius; ++y)
    for (int x = -radius; x <= radius; ++x)
      if (x * x + y * y <= radius * radius) put(cx + x, cy + y, intensity);
}

void Canvas::text(int x, int y, std::string_view s, int scale, double intensity) {
  if (scale < 1) scale = 1;
  int pen = x;
  for (char32_t cp : decode_utf8(s)) {
    const Glyph& glyph = glyph_for(cp);
    for (int col = 0; col < 5; ++col) {
      std::uint8_t bits = glyph.columns[col];
      for (int row = 0; row < 7; ++row) {
        if (!(bits & (1u << row))) continue;
        fill_rect(pen + col * scale, y + row * scale, scale, scale, intensity);
      }
    }
    pen += 6 * scale;  // 5 columns + 1 gap
  }
}

int Canvas::text_width(std::string_view s, int scale) {
  return static_cast<int>(display_width(s)) * 6 * scale;
}

int Canvas::text_height(int scale) { return 8 * scale; }  // 7 rows + 1 gap

SvgWriter::SvgWriter(int width, int height) {
  body_ = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
          "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) +
          " " + std::to_string(height) + "\">\n";
  body_ += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(width) + "\" height=\"" +
           std::to_string(height) + "\" fill=\"#ffffff\" stroke=\"none\"/>\n";
}

void SvgWriter::comment(std::string_view text) {
  body_ += "<!-- ";
  body_ += xml_escape(text);
  body_ += " -->\n";
}

void SvgWriter::rect(int x, int y, int w, int h, std::string_view fill, std::string_view stroke) {
  body_ += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) + "\" width=\"" +
           std::to_string(w) + "\" height=\"" + std::to_string(h) + "\" fill=\"" +
           std::string(fill) + "\" stroke=\"" + std::string(stroke) + "\"/>\n";
}

void SvgWriter::line(int x0, int y0, int x1, int y1, std::string_view stroke, int stroke_width) {
  body_ += "<line x1=\"" + std::to_string(x0) + "\" y1=\"" + std::to_string(y0) + "\" x2=\"" +
           std::to_string(x1) + "\" y2=\"" + std::to_string(y1) + "\" stroke=\"" +
           std::string(stroke) + "\" stroke-width=\"" + std::to_string(stroke_width) + "\"/>\n";
}

void SvgWriter::polyline(const std::vector<std::pair<int, int>>& points, std::string_view stroke,
                         int stroke_width) {
  body_ += "<polyline points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) body_ += " ";
    body_ += std::to_string(points[i].first) + "," + std::to_string(points[i].second);
  }
  body_ += "\" fill=\"none\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"" +
           std::to_string(stroke_width) + "\"/>\n";
}

void SvgWriter::circle(int cx, int cy, int r, std::string_view fill) {
  body_ += "<circle cx=\"" + std::to_string(cx) + "\" cy=\"" + std::to_string(cy) + "\" r=\"" +
           std::to_string(r) + "\" fill=\"" + std::string(fill) + "\"/>\n";
}

void SvgWriter::text(int x, int y, std::string_view content, int font_size,
                     std::string_view anchor) {
  body_ += "<text x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
           "\" font-family=\"monospace\" font-size=\"" + std::to_string(font_size) +
           "\" text-anchor=\"" + std::string(anchor) + "\">" + xml_escape(content) + "</text>\n";
}

std::string SvgWriter::finish() {
  if (!finished_) {
    body_ += "</svg>\n";
    finished_ = true;
  }
  return body_;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace pulse::render
