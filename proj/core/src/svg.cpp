#include "hce/svg.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "hce/format.hpp"

namespace hce::viz {
namespace {

constexpr double kEdgeSlack = 1e-6;

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string svg_number(double value) { return format_fixed(value, 3); }

std::string points_attr(const std::vector<Point>& points) {
  std::string out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) out += ' ';
    out += svg_number(points[i].x);
    out += ',';
    out += svg_number(points[i].y);
  }
  return out;
}

Element& Element::fill(std::string_view color) { return attr("fill", color); }

Element& Element::stroke(std::string_view color, double width) {
  attr("stroke", color);
  return attr("stroke-width", width);
}

Element& Element::dash(std::string_view pattern) { return attr("stroke-dasharray", pattern); }

Element& Element::opacity(double value) { return attr("opacity", value); }

Element& Element::attr(std::string_view name, std::string_view value) {
  for (auto& [k, v] : attrs_) {
    if (k == name) {
      v = value;
      return *this;
    }
  }
  attrs_.emplace_back(name, value);
  return *this;
}

Element& Element::attr(std::string_view name, double value) { return attr(name, svg_number(value)); }

const std::string* Element::find_attr(std::string_view name) const {
  for (const auto& [k, v] : attrs_) {
    if (k == name) return &v;
  }
  return nullptr;
}

void Element::write(std::string& out) const {
  out += "  <";
  out += tag_;
  out += " id=\"";
  out += escape(id_);
  out += '"';
  for (const auto& [k, v] : attrs_) {
    out += ' ';
    out += k;
    out += "=\"";
    out += escape(v);
    out += '"';
  }
  if (tag_ == "text") {
    out += '>';
    out += escape(text_);
    out += "</text>\n";
  } else {
    out += "/>\n";
  }
}

SvgScene::SvgScene(double width, double height) : width_(width), height_(height), meta_(nlohmann::json::object()) {
  if (!(std::isfinite(width) && std::isfinite(height) && width > 0 && height > 0)) {
    throw std::invalid_argument("canvas size must be positive");
  }
  meta_["width"] = width;
  meta_["height"] = height;
  meta_["warnings"] = nlohmann::json::array();
}

void SvgScene::check_point(const std::string& id, Point p) const {
  if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < -kEdgeSlack || p.y < -kEdgeSlack ||
      p.x > width_ + kEdgeSlack || p.y > height_ + kEdgeSlack) {
    throw std::logic_error("element '" + id + "' has a coordinate outside the canvas (" + format_sig(p.x, 6) +
                           ", " + format_sig(p.y, 6) + ")");
  }
}

Element& SvgScene::add(std::string tag, std::string id) {
  if (id.empty() || !ids_.insert(id).second) throw std::logic_error("duplicate or empty element id '" + id + "'");
  return elements_.emplace_back(std::move(tag), std::move(id));
}

Element& SvgScene::rect(std::string id, double x, double y, double w, double h) {
  if (!(w >= 0.0) || !(h >= 0.0)) throw std::logic_error("element '" + id + "' has negative size");
  check_point(id, {x, y});
  check_point(id, {x + w, y + h});
  auto& e = add("rect", std::move(id));
  e.attr("x", x).attr("y", y).attr("width", w).attr("height", h);
  return e;
}

Element& SvgScene::line(std::string id, Point a, Point b) {
  check_point(id, a);
  check_point(id, b);
  auto& e = add("line", std::move(id));
  e.attr("x1", a.x).attr("y1", a.y).attr("x2", b.x).attr("y2", b.y);
  return e;
}

Element& SvgScene::polyline(std::string id, const std::vector<Point>& points) {
  for (const auto& p : points) check_point(id, p);
  auto& e = add("polyline", std::move(id));
  e.attr("points", points_attr(points)).fill("none");
  return e;
}

Element& SvgScene::polygon(std::string id, const std::vector<Point>& points) {
  for (const auto& p : points) check_point(id, p);
  auto& e = add("polygon", std::move(id));
  e.attr("points", points_attr(points));
  return e;
}

Element& SvgScene::circle(std::string id, Point center, double r) {
  check_point(id, center);
  auto& e = add("circle", std::move(id));
  e.attr("cx", center.x).attr("cy", center.y).attr("r", r);
  return e;
}

Element& SvgScene::text(std::string id, Point anchor, std::string_view content) {
  check_point(id, anchor);
  auto& e = add("text", std::move(id));
  e.attr("x", anchor.x).attr("y", anchor.y);
  e.text_ = content;
  return e;
}

const Element* SvgScene::find(std::string_view id) const {
  for (const auto& e : elements_) {
    if (e.id() == id) return &e;
  }
  return nullptr;
}

void SvgScene::warn(std::string message) { meta_["warnings"].push_back(std::move(message)); }

std::string SvgScene::to_svg() const {
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + svg_number(width_) +
         "\" height=\"" + svg_number(height_) + "\" viewBox=\"0 0 " + svg_number(width_) + ' ' +
         svg_number(height_) + "\" font-family=\"Helvetica, Arial, sans-serif\">\n";
  for (const auto& e : elements_) e.write(out);
  out += "</svg>\n";
  return out;
}

std::string SvgScene::meta_json() const { return meta_.dump(2) + "\n"; }

}  // namespace hce::viz
