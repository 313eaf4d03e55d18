#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace hce::viz {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// One SVG primitive. Geometry is fixed at creation; presentation
/// attributes are added through the chained setters.
class Element {
 public:
  Element(std::string tag, std::string id) : tag_(std::move(tag)), id_(std::move(id)) {}

  Element& fill(std::string_view color);
  Element& stroke(std::string_view color, double width = 1.0);
  Element& dash(std::string_view pattern);
  Element& opacity(double value);
  Element& attr(std::string_view name, std::string_view value);
  Element& attr(std::string_view name, double value);
  Element& css_class(std::string_view name) { return attr("class", name); }

  const std::string& tag() const { return tag_; }
  const std::string& id() const { return id_; }
  const std::string* find_attr(std::string_view name) const;

  void write(std::string& out) const;

 private:
  friend class SvgScene;
  std::string tag_;
  std::string id_;
  std::vector<std::pair<std::string, std::string>> attrs_;
  std::string text_;
};

/// Ordered list of primitives on a fixed canvas, serialized as a
/// standalone SVG 1.1 document. Every element has a unique id, and all
/// coordinates must be finite and on the canvas. Numbers are written with
/// three decimals so output is byte-stable.
class SvgScene {
 public:
  SvgScene(double width, double height);

  double width() const { return width_; }
  double height() const { return height_; }

  Element& rect(std::string id, double x, double y, double w, double h);
  Element& line(std::string id, Point a, Point b);
  Element& polyline(std::string id, const std::vector<Point>& points);
  Element& polygon(std::string id, const std::vector<Point>& points);
  Element& circle(std::string id, Point center, double r);
  Element& text(std::string id, Point anchor, std::string_view content);

  const Element* find(std::string_view id) const;
  const std::vector<Element>& elements() const { return elements_; }

  /// Sidecar metadata (geometry in data/unit coordinates, warnings).
  nlohmann::json& meta() { return meta_; }
  const nlohmann::json& meta() const { return meta_; }
  void warn(std::string message);

  std::string to_svg() const;
  std::string meta_json() const;

 private:
  Element& add(std::string tag, std::string id);
  void check_point(const std::string& id, Point p) const;

  double width_;
  double height_;
  std::vector<Element> elements_;
  std::unordered_set<std::string> ids_;
  nlohmann::json meta_;
};

std::string svg_number(double value);
std::string points_attr(const std::vector<Point>& points);

}  // namespace hce::viz
