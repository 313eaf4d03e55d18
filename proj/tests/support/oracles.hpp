// Test-only reference implementations, written independently of the
// library code they check.
#pragma once

#include <cmath>
#include <cstdint>
#include <regex>
#include <string>
#include <vector>

#include "hce/model.hpp"
#include "hce/rng.hpp"
#include "hce/svg.hpp"

namespace oracle {

inline hce::ComponentConfig mixed_config(int k_tte, double follow_up = 1095.0,
                                         hce::Direction cont = hce::Direction::HigherIsBetter) {
  std::vector<hce::ComponentSpec> specs;
  for (int i = 1; i <= k_tte; ++i) {
    specs.push_back({"Event " + std::to_string(i), hce::ComponentKind::TimeToEvent, i, hce::Direction::HigherIsBetter});
  }
  specs.push_back({"Continuous", hce::ComponentKind::Continuous, k_tte + 1, cont});
  return hce::ComponentConfig(std::move(specs), follow_up);
}

/// Random dataset. With `heavy_ties`, times and values come from a handful
/// of levels so many pairs tie.
inline hce::HceDataset random_dataset(hce::Rng& rng, const hce::ComponentConfig& config, int n, int m,
                                      bool heavy_ties) {
  std::vector<hce::SubjectRecord> subjects;
  const int k = config.size();
  for (int i = 0; i < n + m; ++i) {
    hce::SubjectRecord s;
    s.subject_id = "S" + std::to_string(i);
    s.arm = i < n ? hce::Arm::Active : hce::Arm::Control;
    s.value.category = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    if (s.value.category < k) {
      s.value.magnitude = heavy_ties ? 100.0 * double(rng.below(4)) : rng.uniform() * config.follow_up();
    } else {
      s.value.magnitude = heavy_ties ? double(rng.below(3)) - 1.0 : rng.normal(0.0, 2.0);
    }
    subjects.push_back(std::move(s));
  }
  return hce::HceDataset(config, std::move(subjects));
}

struct PairCounts {
  std::uint64_t wins = 0, losses = 0, ties = 0;
};

/// Direct pairwise enumeration from the comparison rules, not through
/// hce::compare.
inline PairCounts enumerate_pairs(const hce::HceDataset& d) {
  PairCounts out;
  const auto& cfg = d.config();
  for (const auto& a : d.subjects()) {
    if (a.arm != hce::Arm::Active) continue;
    for (const auto& c : d.subjects()) {
      if (c.arm != hce::Arm::Control) continue;
      int cmp = 0;
      if (a.value.category != c.value.category) {
        cmp = a.value.category > c.value.category ? 1 : -1;
      } else {
        const auto& spec = cfg.at_priority(a.value.category);
        double x = a.value.magnitude, y = c.value.magnitude;
        if (spec.direction == hce::Direction::LowerIsBetter) std::swap(x, y);
        cmp = x > y ? 1 : (x < y ? -1 : 0);
      }
      if (cmp > 0) ++out.wins;
      else if (cmp < 0) ++out.losses;
      else ++out.ties;
    }
  }
  return out;
}

inline double theta_of(const PairCounts& c) {
  const double pairs = double(c.wins + c.losses + c.ties);
  return (double(c.wins) + 0.5 * double(c.ties)) / pairs;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Design-model win probability by Simpson quadrature over the control
/// event time instead of the closed-form crossing probability.
inline double sunset_theta_quadrature(double hr, double delta, double p_event, double sd, double tau,
                                      int intervals = 20000) {
  const double lc = -std::log(1.0 - p_event) / tau;
  const double la = hr * lc;
  const double pc = 1.0 - std::exp(-lc * tau);
  const double pa = 1.0 - std::exp(-la * tau);
  // P(T_c <= tau, T_c < T_a <= tau): active event strictly later, both in window.
  auto f = [&](double t) { return lc * std::exp(-lc * t) * (std::exp(-la * t) - std::exp(-la * tau)); };
  const double h = tau / intervals;
  double s = f(0.0) + f(tau);
  for (int i = 1; i < intervals; ++i) s += f(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  const double both = s * h / 3.0;
  return both + (1.0 - pa) * pc + (1.0 - pa) * (1.0 - pc) * normal_cdf(delta / (sd * std::sqrt(2.0)));
}

/// Shoelace area of a closed polygon.
inline double polygon_area(const std::vector<hce::viz::Point>& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& a = p[i];
    const auto& b = p[(i + 1) % p.size()];
    s += a.x * b.y - b.x * a.y;
  }
  return std::abs(s) / 2.0;
}

/// Parses an SVG `points` attribute.
inline std::vector<hce::viz::Point> parse_points(const std::string& attr) {
  std::vector<hce::viz::Point> out;
  static const std::regex pair(R"(([-0-9.eE+]+),([-0-9.eE+]+))");
  for (auto it = std::sregex_iterator(attr.begin(), attr.end(), pair); it != std::sregex_iterator(); ++it) {
    out.push_back({std::stod((*it)[1]), std::stod((*it)[2])});
  }
  return out;
}

/// Attribute value of the element with the given id in serialized SVG.
inline std::string svg_attr(const std::string& svg, const std::string& id, const std::string& attr) {
  const auto pos = svg.find("id=\"" + id + "\"");
  if (pos == std::string::npos) return {};
  const auto start = svg.rfind('<', pos);
  const auto end = svg.find('>', pos);
  const std::string tag = svg.substr(start, end - start);
  const std::regex re("\\s" + attr + "=\"([^\"]*)\"");
  std::smatch m;
  return std::regex_search(tag, m, re) ? m[1].str() : std::string{};
}

}  // namespace oracle
