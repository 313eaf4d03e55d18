#include <algorithm>
#include <optional>
#include <cmath>
#include <cstdio>
#include <set>

#include <nlohmann/json.hpp>

#include "design_internal.hpp"
#include "hce/design.hpp"
#include "hce/error.hpp"
#include "hce/rng.hpp"

namespace hce::design {
namespace {

// Marginal per-component event probabilities q_k from the category
// probabilities P(category = k) = q_k * prod_{j<k} (1 - q_j).
std::vector<double> component_rates(const Scenario& s) {
  std::vector<double> rates;
  double remaining = 1.0;
  for (const auto& c : s.components) {
    const double q = remaining > 0.0 ? c.p_control / remaining : 0.0;
    rates.push_back(detail::rate_for_probability(q, s.follow_up));
    remaining -= c.p_control;
  }
  return rates;
}

std::string subject_id(char prefix, int index, int width) {
  std::string digits = std::to_string(index);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, std::size_t(width) - digits.size(), '0');
  return prefix + digits;
}

template <typename T>
T field(const nlohmann::json& obj, const char* key) {
  if (!obj.contains(key)) throw InputError(std::string("scenario is missing \"") + key + "\"");
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("scenario field \"") + key + "\" has the wrong type");
  }
}

}  // namespace

void Scenario::validate() const {
  if (n_per_arm < 1) throw InputError("n_per_arm must be at least 1");
  if (!(std::isfinite(sd) && sd > 0.0)) throw InputError("sd must be positive");
  if (!(std::isfinite(hr) && hr > 0.0)) throw InputError("hr must be positive");
  if (!(std::isfinite(follow_up) && follow_up > 0.0)) throw InputError("follow_up must be positive");
  if (!std::isfinite(mean_active) || !std::isfinite(mean_control)) throw InputError("means must be finite");
  if (continuous_name.empty()) throw InputError("continuous component needs a name");
  std::set<std::string> names{continuous_name};
  double total = 0.0;
  for (const auto& c : components) {
    if (c.name.empty()) throw InputError("component name must be non-empty");
    if (!names.insert(c.name).second) throw InputError("duplicate name '" + c.name + "'");
    if (!(c.p_control >= 0.0 && c.p_control <= 1.0)) {
      throw InputError("probability for '" + c.name + "' must be in [0, 1]");
    }
    total += c.p_control;
  }
  if (!(total < 1.0)) throw InputError("total event probability must be below 1");
}

Scenario parse_scenario(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("scenario must be a JSON object");
  Scenario s;
  s.n_per_arm = field<int>(doc, "n_per_arm");
  s.hr = field<double>(doc, "hr");
  s.follow_up = field<double>(doc, "follow_up_days");
  s.seed = field<std::uint64_t>(doc, "seed");
  if (!doc.contains("components") || !doc["components"].is_array()) {
    throw InputError("scenario needs a \"components\" array");
  }
  for (const auto& c : doc["components"]) {
    s.components.push_back({field<std::string>(c, "name"), field<double>(c, "p_control")});
  }
  if (!doc.contains("continuous") || !doc["continuous"].is_object()) {
    throw InputError("scenario needs a \"continuous\" object");
  }
  const auto& cont = doc["continuous"];
  s.continuous_name = field<std::string>(cont, "name");
  s.mean_active = field<double>(cont, "mean_active");
  s.mean_control = field<double>(cont, "mean_control");
  s.sd = field<double>(cont, "sd");
  s.validate();
  return s;
}

std::string scenario_to_json(const Scenario& s) {
  nlohmann::json doc;
  doc["n_per_arm"] = s.n_per_arm;
  doc["hr"] = s.hr;
  doc["follow_up_days"] = s.follow_up;
  doc["seed"] = s.seed;
  doc["components"] = nlohmann::json::array();
  for (const auto& c : s.components) doc["components"].push_back({{"name", c.name}, {"p_control", c.p_control}});
  doc["continuous"] = {{"name", s.continuous_name},
                       {"mean_active", s.mean_active},
                       {"mean_control", s.mean_control},
                       {"sd", s.sd}};
  return doc.dump(2) + "\n";
}

ComponentConfig scenario_config(const Scenario& s) {
  std::vector<ComponentSpec> specs;
  int priority = 1;
  for (const auto& c : s.components) {
    specs.push_back({c.name, ComponentKind::TimeToEvent, priority++, Direction::HigherIsBetter});
  }
  specs.push_back({s.continuous_name, ComponentKind::Continuous, priority, Direction::HigherIsBetter});
  return ComponentConfig(std::move(specs), s.follow_up);
}

HceDataset simulate_trial(const Scenario& s) {
  s.validate();
  const auto rates = component_rates(s);
  const int tte = static_cast<int>(rates.size());
  const int width = std::max(4, static_cast<int>(std::to_string(s.n_per_arm).size()));
  Rng rng(s.seed);

  std::vector<SubjectRecord> subjects;
  subjects.reserve(2 * static_cast<std::size_t>(s.n_per_arm));
  for (Arm arm : {Arm::Active, Arm::Control}) {
    const double scale = arm == Arm::Active ? s.hr : 1.0;
    const double mean = arm == Arm::Active ? s.mean_active : s.mean_control;
    for (int i = 1; i <= s.n_per_arm; ++i) {
      std::optional<HceValue> value;
      for (int k = 0; k < tte; ++k) {
        const double t = rng.exponential(scale * rates[static_cast<std::size_t>(k)]);
        if (!value && t <= s.follow_up) value = HceValue{k + 1, t};
      }
      if (!value) value = HceValue{tte + 1, rng.normal(mean, s.sd)};
      subjects.push_back({subject_id(arm == Arm::Active ? 'A' : 'C', i, width), arm, *value});
    }
  }
  return HceDataset(scenario_config(s), std::move(subjects));
}

ScenarioExpectation scenario_closed_form(const Scenario& s) {
  s.validate();
  const auto rates = component_rates(s);
  const double tau = s.follow_up;
  const std::size_t k_count = rates.size();

  // Category probabilities per arm; index k_count = event-free.
  auto category_probs = [&](double scale) {
    std::vector<double> probs;
    double survive = 1.0;
    for (double r : rates) {
      const double q = detail::event_probability(scale * r, tau);
      probs.push_back(survive * q);
      survive *= 1.0 - q;
    }
    probs.push_back(survive);
    return probs;
  };
  const auto pa = category_probs(s.hr);
  const auto pc = category_probs(1.0);

  double theta = 0.0;
  for (std::size_t k = 0; k < k_count; ++k) {
    const double ra = s.hr * rates[k];
    const double rc = rates[k];
    const double qa = detail::event_probability(ra, tau);
    const double qc = detail::event_probability(rc, tau);
    if (qa > 0.0 && qc > 0.0) {
      theta += pa[k] * pc[k] * detail::joint_later_event(ra, rc, tau) / (qa * qc);
    }
    // Active lands in a less severe category (or stays event-free).
    for (std::size_t l = k + 1; l <= k_count; ++l) theta += pa[l] * pc[k];
  }
  const double z = (s.mean_active - s.mean_control) / (s.sd * std::sqrt(2.0));
  theta += pa[k_count] * pc[k_count] * detail::normal_cdf(z);

  ScenarioExpectation out;
  out.theta = theta;
  out.win_odds = theta / (1.0 - theta);
  out.event_fraction_active = 1.0 - pa[k_count];
  out.event_fraction_control = 1.0 - pc[k_count];
  out.event_fraction_pooled = 0.5 * (out.event_fraction_active + out.event_fraction_control);
  return out;
}

}  // namespace hce::design
