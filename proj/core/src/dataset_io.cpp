#include <cmath>
#include <istream>
#include <map>
#include <sstream>

#include "csv.hpp"
#include "hce/error.hpp"
#include "hce/format.hpp"
#include "hce/model.hpp"

namespace hce {
namespace {

using detail::parse_double;
using detail::parse_int;
using detail::read_line;
using detail::split_csv_line;

[[noreturn]] void fail(std::size_t line, const std::string& message) {
  throw InputError("line " + std::to_string(line) + ": " + message);
}

class HeaderIndex {
 public:
  explicit HeaderIndex(const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) columns_.emplace(header[i], i);
  }

  std::size_t require(const std::string& name) const {
    auto it = columns_.find(name);
    if (it == columns_.end()) fail(1, "missing column " + name);
    return it->second;
  }

 private:
  std::map<std::string, std::size_t> columns_;
};

Arm parse_arm(const std::string& text, const ArmLabels& labels, std::size_t line) {
  if (text == labels.active) return Arm::Active;
  if (text == labels.control) return Arm::Control;
  fail(line, "unknown arm label '" + text + "' (expected '" + labels.active + "' or '" +
                 labels.control + "')");
}

std::vector<std::string> row_fields(const std::string& line, std::size_t width, std::size_t line_no) {
  auto fields = split_csv_line(line);
  if (fields.size() < width) {
    fail(line_no, "expected " + std::to_string(width) + " fields, got " + std::to_string(fields.size()));
  }
  return fields;
}

bool blank(const std::string& line) { return detail::trim(line).empty(); }

}  // namespace

HceDataset load_dataset(std::istream& csv, const ComponentConfig& config, const ArmLabels& labels) {
  std::string line;
  if (!read_line(csv, line, true)) throw InputError("line 1: empty input, expected header");
  const auto header = split_csv_line(line);
  HeaderIndex index(header);
  const auto col_id = index.require("SUBJID");
  const auto col_arm = index.require("ARM");
  const auto col_group = index.require("GROUPN");
  const auto col_value = index.require("AVAL0");

  std::vector<SubjectRecord> subjects;
  std::size_t line_no = 1;
  while (read_line(csv, line, false)) {
    ++line_no;
    if (blank(line)) continue;
    auto fields = row_fields(line, header.size(), line_no);

    SubjectRecord rec;
    rec.subject_id = fields[col_id];
    if (rec.subject_id.empty()) fail(line_no, "empty SUBJID");
    rec.arm = parse_arm(fields[col_arm], labels, line_no);

    auto group = parse_int(fields[col_group]);
    if (!group) fail(line_no, "unparseable GROUPN '" + fields[col_group] + "'");
    if (*group < 1 || *group > config.size()) {
      fail(line_no, "category out of range (GROUPN " + std::to_string(*group) + ", K=" +
                        std::to_string(config.size()) + ")");
    }
    auto value = parse_double(fields[col_value]);
    if (!value || !std::isfinite(*value)) fail(line_no, "unparseable AVAL0 '" + fields[col_value] + "'");
    rec.value = HceValue{static_cast<int>(*group), *value};

    const auto& spec = config.at_priority(rec.value.category);
    if (spec.kind == ComponentKind::TimeToEvent && (*value < 0.0 || *value > config.follow_up())) {
      fail(line_no, "event time " + format_exact(*value) + " outside [0, " +
                        format_exact(config.follow_up()) + "]");
    }
    subjects.push_back(std::move(rec));
  }

  try {
    return HceDataset(config, std::move(subjects));
  } catch (const InputError& e) {
    throw InputError(std::string("dataset: ") + e.what());
  }
}

std::string dataset_to_csv(const HceDataset& dataset, const ArmLabels& labels) {
  std::ostringstream out;
  out << "SUBJID,ARM,GROUPN,AVAL0\n";
  for (const auto& s : dataset.subjects()) {
    out << s.subject_id << ',' << (s.arm == Arm::Active ? labels.active : labels.control) << ','
        << s.value.category << ',' << format_exact(s.value.magnitude) << '\n';
  }
  return out.str();
}

HceDataset load_wide_dataset(std::istream& csv, const ComponentConfig& config, const ArmLabels& labels) {
  std::string line;
  if (!read_line(csv, line, true)) throw InputError("line 1: empty input, expected header");
  const auto header = split_csv_line(line);
  HeaderIndex index(header);
  const auto col_id = index.require("SUBJID");
  const auto col_arm = index.require("ARM");

  const auto tte_count = static_cast<std::size_t>(config.size() - 1);
  std::vector<std::pair<std::size_t, std::size_t>> event_cols;
  for (std::size_t i = 0; i < tte_count; ++i) {
    const auto& name = config.components()[i].name;
    event_cols.emplace_back(index.require(name + "_EVENT"), index.require(name + "_TIME"));
  }
  const auto col_cont = index.require(config.continuous().name + "_VALUE");

  std::vector<SubjectRecord> subjects;
  std::size_t line_no = 1;
  while (read_line(csv, line, false)) {
    ++line_no;
    if (blank(line)) continue;
    auto fields = row_fields(line, header.size(), line_no);

    WideRow row;
    for (std::size_t i = 0; i < tte_count; ++i) {
      const auto& [ce, ct] = event_cols[i];
      auto flag = parse_int(fields[ce]);
      if (!flag || (*flag != 0 && *flag != 1)) {
        fail(line_no, "event flag must be 0 or 1, got '" + fields[ce] + "'");
      }
      EventObservation ev;
      ev.occurred = *flag == 1;
      if (!detail::trim(fields[ct]).empty()) {
        auto t = parse_double(fields[ct]);
        if (!t) fail(line_no, "unparseable time '" + fields[ct] + "'");
        ev.time = *t;
      }
      row.events.push_back(ev);
    }
    if (!detail::trim(fields[col_cont]).empty()) {
      auto v = parse_double(fields[col_cont]);
      if (!v) fail(line_no, "unparseable value '" + fields[col_cont] + "'");
      row.continuous_value = *v;
    }

    SubjectRecord rec;
    rec.subject_id = fields[col_id];
    rec.arm = parse_arm(fields[col_arm], labels, line_no);
    try {
      rec.value = compose_hce(row, config);
    } catch (const InputError& e) {
      fail(line_no, e.what());
    }
    subjects.push_back(std::move(rec));
  }
  return HceDataset(config, std::move(subjects));
}

}  // namespace hce
