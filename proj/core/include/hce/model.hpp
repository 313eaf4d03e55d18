#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hce {

enum class ComponentKind { TimeToEvent, Continuous };
enum class Direction { HigherIsBetter, LowerIsBetter };
enum class Arm { Active, Control };

/// Result of comparing two composite outcomes from the point of view of
/// the first argument.
enum class Outcome { AWins, BWins, Tie };

struct ComponentSpec {
  std::string name;
  ComponentKind kind = ComponentKind::TimeToEvent;
  int priority = 1;  // 1 = most severe
  Direction direction = Direction::HigherIsBetter;
};

/// Ordered list of components (priorities 1..K) plus the fixed follow-up
/// window. Exactly one continuous component, and it is last.
class ComponentConfig {
 public:
  ComponentConfig(std::vector<ComponentSpec> components, double follow_up_days);

  std::span<const ComponentSpec> components() const { return components_; }
  int size() const { return static_cast<int>(components_.size()); }
  double follow_up() const { return follow_up_; }

  const ComponentSpec& at_priority(int priority) const;
  const ComponentSpec& continuous() const { return components_.back(); }
  bool valid_category(int category) const { return category >= 1 && category <= size(); }
  bool is_kidney_shape() const;

 private:
  std::vector<ComponentSpec> components_;
  double follow_up_;
};

/// Parses the JSON component document:
///   {"follow_up_days": 1095, "components": [{"name": .., "kind": "tte"|"continuous",
///    "direction": "higher"|"lower"}, ...]}
/// Priorities follow array order.
ComponentConfig parse_component_config(std::string_view json_text);
std::string component_config_to_json(const ComponentConfig& config);

struct HceValue {
  int category = 1;
  double magnitude = 0.0;
};

struct SubjectRecord {
  std::string subject_id;
  Arm arm = Arm::Active;
  HceValue value;
};

class HceDataset {
 public:
  HceDataset(ComponentConfig config, std::vector<SubjectRecord> subjects);

  const ComponentConfig& config() const { return config_; }
  std::span<const SubjectRecord> subjects() const { return subjects_; }

  std::size_t count(Arm arm) const;
  std::vector<HceValue> values(Arm arm) const;

  /// Throws DegenerateError unless both arms have at least one subject.
  void require_both_arms() const;

  HceDataset with_arms_swapped() const;

 private:
  ComponentConfig config_;
  std::vector<SubjectRecord> subjects_;
};

struct ArmLabels {
  std::string active = "Active";
  std::string control = "Control";
};

/// Reads the composed CSV (SUBJID,ARM,GROUPN,AVAL0). Errors carry the
/// 1-based line number.
HceDataset load_dataset(std::istream& csv, const ComponentConfig& config,
                        const ArmLabels& labels = {});
std::string dataset_to_csv(const HceDataset& dataset, const ArmLabels& labels = {});

/// One time-to-event component observation in a wide-format row.
struct EventObservation {
  bool occurred = false;
  std::optional<double> time;
};

/// Per-component flags and times in priority order (K-1 entries) plus the
/// continuous value.
struct WideRow {
  std::vector<EventObservation> events;
  std::optional<double> continuous_value;
};

HceValue compose_hce(const WideRow& row, const ComponentConfig& config);

/// Reads the wide CSV: SUBJID,ARM,<name>_EVENT,<name>_TIME...,<cont>_VALUE.
HceDataset load_wide_dataset(std::istream& csv, const ComponentConfig& config,
                             const ArmLabels& labels = {});

Outcome compare(const HceValue& a, const HceValue& b, const ComponentConfig& config);

/// Position of a value in the HCE total order: category-major, then the
/// magnitude oriented so that larger means better.
struct OrderKey {
  int category = 0;
  double score = 0.0;

  friend bool operator==(const OrderKey& a, const OrderKey& b) {
    return a.category == b.category && a.score == b.score;
  }
  friend bool operator<(const OrderKey& a, const OrderKey& b) {
    return a.category != b.category ? a.category < b.category : a.score < b.score;
  }
};

OrderKey order_key(const HceValue& value, const ComponentConfig& config);

/// Per-arm counts over an ordered set of categories (worst first).
struct CategoryTable {
  std::vector<std::string> labels;
  std::vector<std::uint64_t> active;
  std::vector<std::uint64_t> control;
};

/// Per-arm proportions over the same categories.
struct Marginals {
  std::vector<double> active;
  std::vector<double> control;
};

struct OrdinalSummary {
  CategoryTable counts;
  Marginals proportions;
};

/// Counts per HCE category 1..K.
CategoryTable category_table(const HceDataset& dataset);

/// Eight-category ordinalization of a kidney-shaped (K = 7) HCE: the six
/// event categories, then continuous change < 0, then change >= 0.
OrdinalSummary ordinalize_8(const HceDataset& dataset);

std::string_view to_string(Arm arm);

}  // namespace hce
