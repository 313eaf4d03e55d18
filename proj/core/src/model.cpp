#include "hce/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "hce/error.hpp"
#include "hce/format.hpp"

namespace hce {
namespace {

std::string normalized(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

ComponentKind parse_kind(std::string_view text) {
  auto key = normalized(text);
  if (key == "tte" || key == "timetoevent" || key == "event") return ComponentKind::TimeToEvent;
  if (key == "continuous") return ComponentKind::Continuous;
  throw InputError("unknown component kind '" + std::string(text) + "'");
}

Direction parse_direction(std::string_view text) {
  auto key = normalized(text);
  if (key == "higher" || key == "higherisbetter") return Direction::HigherIsBetter;
  if (key == "lower" || key == "lowerisbetter") return Direction::LowerIsBetter;
  throw InputError("unknown direction '" + std::string(text) + "'");
}

}  // namespace

ComponentConfig::ComponentConfig(std::vector<ComponentSpec> components, double follow_up_days)
    : components_(std::move(components)), follow_up_(follow_up_days) {
  if (!(std::isfinite(follow_up_) && follow_up_ > 0.0)) {
    throw InputError("follow_up must be a positive number of days");
  }
  if (components_.empty()) throw InputError("component list is empty");

  std::set<std::string> names;
  int continuous = 0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const auto& c = components_[i];
    if (c.name.empty()) throw InputError("component name must be non-empty");
    if (!names.insert(c.name).second) throw InputError("duplicate name '" + c.name + "'");
    if (c.priority != static_cast<int>(i) + 1) {
      throw InputError("component priorities must be consecutive 1..K in order");
    }
    if (c.kind == ComponentKind::Continuous) {
      ++continuous;
      if (i + 1 != components_.size()) throw InputError("continuous must be last");
    }
  }
  if (continuous != 1) throw InputError("exactly one continuous component is required");
}

const ComponentSpec& ComponentConfig::at_priority(int priority) const {
  if (!valid_category(priority)) throw InputError("category out of range");
  return components_[static_cast<std::size_t>(priority - 1)];
}

bool ComponentConfig::is_kidney_shape() const {
  return size() == 7 && continuous().direction == Direction::HigherIsBetter;
}

ComponentConfig parse_component_config(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("component config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("component config must be a JSON object");
  if (!doc.contains("follow_up_days") || !doc["follow_up_days"].is_number()) {
    throw InputError("component config needs numeric \"follow_up_days\"");
  }
  if (!doc.contains("components") || !doc["components"].is_array()) {
    throw InputError("component config needs a \"components\" array");
  }

  std::vector<ComponentSpec> specs;
  int priority = 1;
  for (const auto& entry : doc["components"]) {
    if (!entry.is_object()) throw InputError("component entries must be objects");
    for (const char* key : {"name", "kind", "direction"}) {
      if (!entry.contains(key) || !entry[key].is_string()) {
        throw InputError(std::string("component entry missing string field \"") + key + "\"");
      }
    }
    ComponentSpec spec;
    spec.name = entry["name"].get<std::string>();
    spec.kind = parse_kind(entry["kind"].get<std::string>());
    spec.direction = parse_direction(entry["direction"].get<std::string>());
    spec.priority = priority++;
    specs.push_back(std::move(spec));
  }
  return ComponentConfig(std::move(specs), doc["follow_up_days"].get<double>());
}

std::string component_config_to_json(const ComponentConfig& config) {
  nlohmann::json doc;
  doc["follow_up_days"] = config.follow_up();
  doc["components"] = nlohmann::json::array();
  for (const auto& c : config.components()) {
    doc["components"].push_back({
        {"name", c.name},
        {"kind", c.kind == ComponentKind::Continuous ? "Continuous" : "TimeToEvent"},
        {"direction", c.direction == Direction::HigherIsBetter ? "HigherIsBetter" : "LowerIsBetter"},
    });
  }
  return doc.dump(2) + "\n";
}

HceDataset::HceDataset(ComponentConfig config, std::vector<SubjectRecord> subjects)
    : config_(std::move(config)), subjects_(std::move(subjects)) {
  std::unordered_set<std::string> ids;
  for (const auto& s : subjects_) {
    if (!ids.insert(s.subject_id).second) {
      throw InputError("duplicate subject id '" + s.subject_id + "'");
    }
    if (!config_.valid_category(s.value.category)) {
      throw InputError("category out of range for subject '" + s.subject_id + "'");
    }
    const auto& spec = config_.at_priority(s.value.category);
    if (!std::isfinite(s.value.magnitude)) {
      throw InputError("non-finite value for subject '" + s.subject_id + "'");
    }
    if (spec.kind == ComponentKind::TimeToEvent &&
        (s.value.magnitude < 0.0 || s.value.magnitude > config_.follow_up())) {
      throw InputError("event time outside [0, follow_up] for subject '" + s.subject_id + "'");
    }
  }
}

std::size_t HceDataset::count(Arm arm) const {
  return static_cast<std::size_t>(
      std::count_if(subjects_.begin(), subjects_.end(), [arm](const auto& s) { return s.arm == arm; }));
}

std::vector<HceValue> HceDataset::values(Arm arm) const {
  std::vector<HceValue> out;
  for (const auto& s : subjects_) {
    if (s.arm == arm) out.push_back(s.value);
  }
  return out;
}

void HceDataset::require_both_arms() const {
  if (count(Arm::Active) == 0) throw DegenerateError("active arm is empty");
  if (count(Arm::Control) == 0) throw DegenerateError("control arm is empty");
}

HceDataset HceDataset::with_arms_swapped() const {
  auto swapped = subjects_;
  for (auto& s : swapped) s.arm = s.arm == Arm::Active ? Arm::Control : Arm::Active;
  return HceDataset(config_, std::move(swapped));
}

HceValue compose_hce(const WideRow& row, const ComponentConfig& config) {
  const auto tte_count = static_cast<std::size_t>(config.size() - 1);
  if (row.events.size() != tte_count) {
    throw InputError("expected " + std::to_string(tte_count) + " event columns, got " +
                     std::to_string(row.events.size()));
  }
  std::optional<HceValue> worst;
  for (std::size_t i = 0; i < tte_count; ++i) {
    const auto& ev = row.events[i];
    if (!ev.occurred) continue;
    const auto& name = config.components()[i].name;
    if (!ev.time) throw InputError("flagged event '" + name + "' has no time");
    if (!std::isfinite(*ev.time) || *ev.time < 0.0 || *ev.time > config.follow_up()) {
      throw InputError("event time for '" + name + "' outside [0, follow_up]");
    }
    if (!worst) worst = HceValue{static_cast<int>(i) + 1, *ev.time};
  }
  if (worst) return *worst;
  if (!row.continuous_value || !std::isfinite(*row.continuous_value)) {
    throw InputError("no event flagged and continuous value missing");
  }
  return HceValue{config.size(), *row.continuous_value};
}

Outcome compare(const HceValue& a, const HceValue& b, const ComponentConfig& config) {
  if (a.category != b.category) {
    return a.category > b.category ? Outcome::AWins : Outcome::BWins;
  }
  if (a.magnitude == b.magnitude) return Outcome::Tie;
  const bool a_higher = a.magnitude > b.magnitude;
  const bool higher_better = config.at_priority(a.category).direction == Direction::HigherIsBetter;
  return a_higher == higher_better ? Outcome::AWins : Outcome::BWins;
}

OrderKey order_key(const HceValue& value, const ComponentConfig& config) {
  const auto dir = config.at_priority(value.category).direction;
  // +0.0 keeps -0.0 and 0.0 in one tie group.
  const double score = (dir == Direction::HigherIsBetter ? value.magnitude : -value.magnitude) + 0.0;
  return OrderKey{value.category, score};
}

CategoryTable category_table(const HceDataset& dataset) {
  const auto& cfg = dataset.config();
  CategoryTable table;
  for (const auto& c : cfg.components()) table.labels.push_back(c.name);
  table.active.assign(static_cast<std::size_t>(cfg.size()), 0);
  table.control.assign(static_cast<std::size_t>(cfg.size()), 0);
  for (const auto& s : dataset.subjects()) {
    auto& bucket = s.arm == Arm::Active ? table.active : table.control;
    ++bucket[static_cast<std::size_t>(s.value.category - 1)];
  }
  return table;
}

namespace {

std::vector<double> proportions_of(const std::vector<std::uint64_t>& counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  std::vector<double> out(counts.size(), 0.0);
  if (total == 0) return out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return out;
}

}  // namespace

OrdinalSummary ordinalize_8(const HceDataset& dataset) {
  const auto& cfg = dataset.config();
  if (!cfg.is_kidney_shape()) {
    throw InputError("8-category ordinalization needs a 7-component HCE with a higher-is-better continuous outcome");
  }
  OrdinalSummary out;
  for (int k = 0; k < 6; ++k) out.counts.labels.push_back(cfg.components()[static_cast<std::size_t>(k)].name);
  const auto& cont = cfg.continuous().name;
  out.counts.labels.push_back(cont + " < 0");
  out.counts.labels.push_back(cont + " >= 0");
  out.counts.active.assign(8, 0);
  out.counts.control.assign(8, 0);

  for (const auto& s : dataset.subjects()) {
    std::size_t idx = static_cast<std::size_t>(s.value.category - 1);
    if (s.value.category == 7) idx = s.value.magnitude < 0.0 ? 6 : 7;
    auto& bucket = s.arm == Arm::Active ? out.counts.active : out.counts.control;
    ++bucket[idx];
  }
  out.proportions.active = proportions_of(out.counts.active);
  out.proportions.control = proportions_of(out.counts.control);
  return out;
}

std::string_view to_string(Arm arm) { return arm == Arm::Active ? "Active" : "Control"; }

}  // namespace hce
