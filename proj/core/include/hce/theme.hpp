#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hce::viz {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;

  std::string hex() const;
  /// HSL lightness in [0, 1].
  double lightness() const;
  static Rgb from_hex(std::string_view hex);
};

Rgb mix(Rgb a, Rgb b, double t);

struct Margins {
  double left = 70, right = 30, top = 50, bottom = 60;
};

struct PlotTheme {
  std::string name;
  Rgb active;
  Rgb control;
  Rgb active_light;   // tie triangles on the win side
  Rgb control_light;  // tie triangles on the loss side
  Rgb win_region;
  Rgb loss_region;
  Rgb tie_grey;
  Rgb band_grey;
  Rgb severity_dark;  // worst category
  Rgb severity_light; // best category
  Rgb sunset_low;     // win odds <= 1
  Rgb sunset_mid;
  Rgb sunset_high;    // win odds >= 1.86
  double font_size = 12;
  Margins margins;

  /// `k` colors from most to least severe, strictly increasing in
  /// lightness.
  std::vector<Rgb> severity_ramp(int k) const;

  /// Sunset color for a win-odds value, clamped to [low, high].
  Rgb sunset_color(double win_odds, double low = 1.0, double high = 1.86) const;
};

PlotTheme default_theme();
PlotTheme colorblind_theme();

/// Theme chosen by HCE_THEME (default|colorblind); unknown values fall
/// back to the default.
PlotTheme theme_from_env();

}  // namespace hce::viz
