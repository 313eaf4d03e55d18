#include "hce/theme.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

namespace hce::viz {
namespace {

std::uint8_t channel(double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0))); }

struct Hsl {
  double h, s, l;
};

Hsl to_hsl(Rgb c) {
  const double r = c.r / 255.0, g = c.g / 255.0, b = c.b / 255.0;
  const double mx = std::max({r, g, b}), mn = std::min({r, g, b});
  Hsl out{0.0, 0.0, (mx + mn) / 2.0};
  const double d = mx - mn;
  if (d == 0.0) return out;
  out.s = out.l > 0.5 ? d / (2.0 - mx - mn) : d / (mx + mn);
  if (mx == r) out.h = std::fmod((g - b) / d + 6.0, 6.0);
  else if (mx == g) out.h = (b - r) / d + 2.0;
  else out.h = (r - g) / d + 4.0;
  out.h *= 60.0;
  return out;
}

Rgb from_hsl(Hsl c) {
  auto f = [&](double n) {
    const double k = std::fmod(n + c.h / 30.0, 12.0);
    const double a = c.s * std::min(c.l, 1.0 - c.l);
    return c.l - a * std::max(-1.0, std::min({k - 3.0, 9.0 - k, 1.0}));
  };
  return {channel(255.0 * f(0)), channel(255.0 * f(8)), channel(255.0 * f(4))};
}

}  // namespace

std::string Rgb::hex() const {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

double Rgb::lightness() const { return to_hsl(*this).l; }

Rgb Rgb::from_hex(std::string_view hex) {
  if (hex.size() != 7 || hex[0] != '#') throw std::invalid_argument("expected #rrggbb");
  auto byte = [&](std::size_t i) {
    return static_cast<std::uint8_t>(std::stoi(std::string(hex.substr(i, 2)), nullptr, 16));
  };
  return {byte(1), byte(3), byte(5)};
}

Rgb mix(Rgb a, Rgb b, double t) {
  return {channel(a.r + (b.r - a.r) * t), channel(a.g + (b.g - a.g) * t), channel(a.b + (b.b - a.b) * t)};
}

std::vector<Rgb> PlotTheme::severity_ramp(int k) const {
  std::vector<Rgb> out;
  if (k <= 0) return out;
  const Hsl dark = to_hsl(severity_dark);
  const Hsl light = to_hsl(severity_light);
  for (int i = 0; i < k; ++i) {
    const double t = k == 1 ? 1.0 : static_cast<double>(i) / (k - 1);
    out.push_back(from_hsl({dark.h + (light.h - dark.h) * t, dark.s + (light.s - dark.s) * t,
                            dark.l + (light.l - dark.l) * t}));
  }
  return out;
}

Rgb PlotTheme::sunset_color(double win_odds, double low, double high) const {
  const double t = std::clamp((win_odds - low) / (high - low), 0.0, 1.0);
  return t < 0.5 ? mix(sunset_low, sunset_mid, t * 2.0) : mix(sunset_mid, sunset_high, (t - 0.5) * 2.0);
}

PlotTheme default_theme() {
  PlotTheme t;
  t.name = "default";
  t.active = Rgb::from_hex("#2c7fb8");
  t.control = Rgb::from_hex("#d6604d");
  t.active_light = Rgb::from_hex("#b8e3b0");
  t.control_light = Rgb::from_hex("#f4c2c9");
  t.win_region = Rgb::from_hex("#6baed6");
  t.loss_region = Rgb::from_hex("#fbb4ae");
  t.tie_grey = Rgb::from_hex("#bdbdbd");
  t.band_grey = Rgb::from_hex("#969696");
  t.severity_dark = Rgb::from_hex("#3f007d");
  t.severity_light = Rgb::from_hex("#dadaeb");
  t.sunset_low = Rgb::from_hex("#8b0000");
  t.sunset_mid = Rgb::from_hex("#f4d03f");
  t.sunset_high = Rgb::from_hex("#006400");
  return t;
}

PlotTheme colorblind_theme() {
  PlotTheme t = default_theme();
  t.name = "colorblind";
  t.active = Rgb::from_hex("#0072b2");
  t.control = Rgb::from_hex("#e69f00");
  t.active_light = Rgb::from_hex("#a6cee3");
  t.control_light = Rgb::from_hex("#fdd49e");
  t.win_region = Rgb::from_hex("#56b4e9");
  t.loss_region = Rgb::from_hex("#f0c987");
  t.severity_dark = Rgb::from_hex("#08306b");
  t.severity_light = Rgb::from_hex("#deebf7");
  t.sunset_low = Rgb::from_hex("#440154");
  t.sunset_mid = Rgb::from_hex("#21918c");
  t.sunset_high = Rgb::from_hex("#fde725");
  return t;
}

PlotTheme theme_from_env() {
  const char* value = std::getenv("HCE_THEME");
  if (value && std::string_view(value) == "colorblind") return colorblind_theme();
  return default_theme();
}

}  // namespace hce::viz
