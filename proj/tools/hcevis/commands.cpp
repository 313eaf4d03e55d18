#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "hce/design.hpp"
#include "hce/error.hpp"
#include "hce/format.hpp"
#include "hce/model.hpp"
#include "hce/plots.hpp"
#include "hce/report.hpp"
#include "hce/theme.hpp"
#include "hce/win_engine.hpp"

namespace hcevis {

namespace fs = std::filesystem;
using hce::DegenerateError;
using hce::InputError;

namespace {

const std::vector<std::string> kPlotKinds{"shift", "binary", "mosaic", "mosaic2d", "maraca", "components"};

struct AnalysisFlags {
  std::string input;
  std::string components;
  bool wide = false;
  std::string arm_labels = "Active,Control";
  double alpha = 0.05;
  std::string ci = "analytic";
  int boot_reps = 2000;
  std::uint64_t seed = 20240601;
  std::string out;
};

struct PlotFlags {
  std::string plots = "shift,binary,mosaic,mosaic2d,maraca,components";
  std::string tie_mode = "triangle";
  std::optional<int> split_after;
};

struct SunsetFlags {
  std::string hr_range = "0.5,1.15";
  std::string delta_range = "-0.5,2.0";
  std::string grid = "60x60";
  double p_event = 0.5;
  double sd = 4.0;
  double tau = 1095.0;
  std::string method = "cf";
  std::string iso;
  std::string overlay;
  bool hull = false;
  int mc_n = 200;
  int mc_reps = 50;
  std::uint64_t seed = 1;
  double anchor_hr = 0.8;
  double anchor_wo = 1.2;
  bool no_anchor = false;
  std::string out;
};

struct SimulateFlags {
  std::string scenario;
  std::optional<int> n;
  std::optional<std::uint64_t> seed;
  std::string out;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    parts.push_back(item);
  }
  return parts;
}

double to_double(const std::string& text, const std::string& flag) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InputError(flag + ": '" + text + "' is not a number");
  }
}

std::vector<double> number_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(to_double(p, flag));
  return out;
}

hce::design::AxisRange parse_range(const std::string& text, const std::string& flag) {
  const auto v = number_list(text, flag);
  if (v.size() != 2 || !(v[0] < v[1])) throw InputError(flag + " expects 'lo,hi' with lo < hi");
  return {v[0], v[1]};
}

std::pair<int, int> parse_grid(const std::string& text) {
  auto parts = split(text, 'x');
  if (parts.size() == 1) parts.push_back(parts[0]);
  if (parts.size() != 2) throw InputError("--grid expects N or RxC");
  int dims[2];
  for (int i = 0; i < 2; ++i) {
    const double v = to_double(parts[i], "--grid");
    if (v != std::floor(v) || v < 2 || v > 2000) throw InputError("--grid sizes must be integers in [2, 2000]");
    dims[i] = static_cast<int>(v);
  }
  return {dims[0], dims[1]};
}

std::string read_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw InputError(what + " path is required");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + what + " '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path prepare_out(const std::string& dir) {
  if (dir.empty()) throw InputError("--out directory is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw InputError("cannot create output directory '" + dir + "'");
  return fs::path(dir);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

hce::ArmLabels parse_labels(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2 || parts[0].empty() || parts[1].empty() || parts[0] == parts[1]) {
    throw InputError("--arm-labels expects two distinct labels 'ACTIVE,CONTROL'");
  }
  return {parts[0], parts[1]};
}

hce::CiOptions ci_options(const AnalysisFlags& f) {
  if (!(f.alpha > 0.0 && f.alpha < 1.0)) throw InputError("--alpha must lie in (0, 1)");
  hce::CiOptions o;
  o.alpha = f.alpha;
  if (f.ci == "analytic") {
    o.method = hce::CiMethod::Analytic;
  } else if (f.ci == "bootstrap") {
    o.method = hce::CiMethod::Bootstrap;
  } else {
    throw InputError("--ci must be 'analytic' or 'bootstrap'");
  }
  if (f.boot_reps < 1) throw InputError("--boot-reps must be positive");
  o.bootstrap_reps = f.boot_reps;
  o.seed = f.seed;
  return o;
}

hce::HceDataset load_input(const AnalysisFlags& f) {
  const auto config = hce::parse_component_config(read_file(f.components, "component config"));
  const auto labels = parse_labels(f.arm_labels);
  std::istringstream csv(read_file(f.input, "input"));
  return f.wide ? hce::load_wide_dataset(csv, config, labels) : hce::load_dataset(csv, config, labels);
}

std::string sig(double v) { return hce::format_sig(v, 4); }

std::string ci_text(const hce::Estimate& e) { return sig(e.est) + " (" + sig(e.lo) + ", " + sig(e.hi) + ")"; }

void print_stats(std::ostream& out, const hce::WinStats& s) {
  const auto& c = s.counts;
  out << "pairs " << c.pairs() << ": wins " << c.wins << ", losses " << c.losses << ", ties " << c.ties << "\n";
  out << "win probability " << ci_text(s.theta) << "\n";
  out << "win odds        " << ci_text(s.win_odds) << "\n";
  out << "win ratio       " << ci_text(s.win_ratio) << "\n";
  out << "net benefit     " << ci_text(s.net_benefit) << "\n";
  for (const auto& w : s.warnings) out << "warning: " << w << "\n";
}

int cmd_summarize(const AnalysisFlags& f, std::ostream& out) {
  const auto options = ci_options(f);
  const auto dataset = load_input(f);
  dataset.require_both_arms();
  const auto overall = hce::analyze(dataset, options);
  const auto rows = hce::cumulative_components(dataset, options);
  const std::string doc = hce::analysis_document(overall, rows).dump(2) + "\n";
  if (f.out.empty()) {
    out << doc;
  } else {
    const auto dir = prepare_out(f.out);
    write_file(dir / "stats.json", doc);
    print_stats(out, overall);
  }
  return kOk;
}

// Sample on the ordinal categories only, so the win probability matches
// the category-level curve drawn in triangle mode.
hce::ArmSample ordinal_sample(const hce::HceDataset& dataset, bool kidney) {
  hce::ArmSample sample;
  const int k = dataset.config().size();
  for (const auto& s : dataset.subjects()) {
    int cat = s.value.category;
    if (kidney && cat == k) cat = s.value.magnitude < 0.0 ? k : k + 1;
    (s.arm == hce::Arm::Active ? sample.active : sample.control).push_back({cat, 0.0});
  }
  return sample;
}

hce::viz::SvgScene render_kind(const std::string& kind, const hce::HceDataset& dataset, const hce::CiOptions& options,
                               const PlotFlags& pf, const hce::viz::PlotTheme& theme) {
  using namespace hce::viz;
  const auto& config = dataset.config();
  const int k = config.size();
  if (kind == "shift") {
    std::vector<double> a, c;
    for (const auto& s : dataset.subjects()) {
      if (s.value.category == k) (s.arm == hce::Arm::Active ? a : c).push_back(s.value.magnitude);
    }
    return render_shift_plot(a, c, theme);
  }
  if (kind == "binary") {
    EventTally a, c;
    for (const auto& s : dataset.subjects()) {
      auto& t = s.arm == hce::Arm::Active ? a : c;
      ++t.total;
      if (s.value.category < k) ++t.events;
    }
    return render_binary_bar(a, c, theme);
  }
  if (kind == "mosaic" || kind == "mosaic2d") {
    dataset.require_both_arms();
    const bool kidney = config.is_kidney_shape();
    hce::CategoryTable table = kidney ? hce::ordinalize_8(dataset).counts : hce::category_table(dataset);
    const auto marginals = hce::marginal_proportions(table);
    if (kind == "mosaic") {
      std::optional<int> split = pf.split_after;
      if (!split && table.labels.size() > 1) split = static_cast<int>(table.labels.size()) - 1;
      return render_mosaic(marginals, table.labels, split, theme);
    }
    if (pf.tie_mode == "triangle") {
      const auto stats = hce::analyze(ordinal_sample(dataset, kidney), options);
      return render_mosaic_2d(marginals, table.labels, hce::ordinal_dominance_graph(marginals), stats,
                              TieMode::TriangleSplit, theme);
    }
    const auto stats = hce::analyze(dataset, options);
    return render_mosaic_2d(marginals, table.labels, hce::ordinal_dominance_graph(dataset), stats,
                            TieMode::OrderedTieBreak, theme);
  }
  if (kind == "maraca") {
    dataset.require_both_arms();
    return render_maraca(dataset, hce::analyze(dataset, options), theme);
  }
  const auto rows = hce::cumulative_components(dataset, options);
  return render_component_plot(rows, theme);
}

int cmd_plot(const AnalysisFlags& f, const PlotFlags& pf, std::ostream& out, std::ostream& err) {
  const auto options = ci_options(f);
  if (pf.tie_mode != "triangle" && pf.tie_mode != "ordered") {
    throw InputError("--tie-mode must be 'triangle' or 'ordered'");
  }
  std::vector<std::string> kinds;
  for (const auto& k : split(pf.plots, ',')) {
    if (k.empty()) continue;
    if (std::find(kPlotKinds.begin(), kPlotKinds.end(), k) == kPlotKinds.end()) {
      throw InputError("unknown plot kind '" + k + "' (expected shift|binary|mosaic|mosaic2d|maraca|components)");
    }
    if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
  }
  if (kinds.empty()) throw InputError("--plots selects no plot");
  const auto dataset = load_input(f);
  const auto dir = prepare_out(f.out);
  const auto theme = hce::viz::theme_from_env();

  int status = kOk;
  for (const auto& kind : kinds) {
    try {
      const auto scene = render_kind(kind, dataset, options, pf, theme);
      write_file(dir / (kind + ".svg"), scene.to_svg());
      write_file(dir / (kind + ".meta.json"), scene.meta_json());
      out << "wrote " << kind << ".svg\n";
      for (const auto& w : scene.meta()["warnings"]) out << "  warning: " << w.get<std::string>() << "\n";
    } catch (const DegenerateError& e) {
      err << "error: " << kind << ": " << e.what() << "\n";
      if (status == kOk) status = kDegenerate;
    } catch (const InputError& e) {
      err << "error: " << kind << ": " << e.what() << "\n";
      if (status == kOk) status = kInputError;
    }
  }
  return status;
}

int cmd_sunset(const SunsetFlags& f, std::ostream& out) {
  namespace d = hce::design;
  d::SunsetParams params{f.p_event, f.sd, f.tau};
  params.validate();
  d::GridOptions grid_options;
  grid_options.hr = parse_range(f.hr_range, "--hr-range");
  grid_options.delta = parse_range(f.delta_range, "--delta-range");
  const auto [rows, cols] = parse_grid(f.grid);
  grid_options.delta_points = rows;
  grid_options.hr_points = cols;
  if (f.method == "cf") {
    grid_options.method = d::GridMethod::ClosedForm;
  } else if (f.method == "mc") {
    grid_options.method = d::GridMethod::MonteCarlo;
  } else {
    throw InputError("--method must be 'cf' or 'mc'");
  }
  if (f.mc_n < 1 || f.mc_reps < 2) throw InputError("--mc-n must be >= 1 and --mc-reps >= 2");
  grid_options.mc_n_per_arm = f.mc_n;
  grid_options.mc_reps = f.mc_reps;
  grid_options.seed = f.seed;

  const std::vector<double> iso = f.iso.empty() ? d::default_iso_levels() : number_list(f.iso, "--iso");
  d::FeasibilityOverlay overlay;
  if (!f.overlay.empty()) {
    std::istringstream csv(read_file(f.overlay, "overlay"));
    overlay = d::feasibility_overlay(d::parse_overlay_csv(csv), f.hull);
  } else if (f.hull) {
    throw InputError("--hull needs --overlay");
  }
  const auto dir = prepare_out(f.out);

  const auto grid = d::sunset_grid(grid_options, params);
  std::vector<hce::viz::Anchor> anchors;
  if (!f.no_anchor) {
    if (const auto delta = d::solve_delta_for_win_odds(f.anchor_hr, f.anchor_wo, params, grid_options.delta)) {
      anchors.push_back({f.anchor_hr, *delta, "WO " + sig(f.anchor_wo) + ", HR " + sig(f.anchor_hr)});
    } else {
      out << "warning: win odds " << sig(f.anchor_wo) << " is not reached at HR " << sig(f.anchor_hr)
          << " inside the delta range; anchor omitted\n";
    }
  }
  const auto scene = hce::viz::render_sunset(grid, iso, anchors, overlay, hce::viz::theme_from_env());
  write_file(dir / "sunset.svg", scene.to_svg());
  write_file(dir / "sunset.meta.json", scene.meta_json());
  write_file(dir / "sunset_grid.csv", d::grid_to_csv(grid));
  out << "grid " << rows << "x" << cols << " (" << f.method << "), win odds range " << sig(scene.meta()["grid"]["min"])
      << " to " << sig(scene.meta()["grid"]["max"]) << "\n";
  for (const auto& a : anchors) out << "anchor hr " << sig(a.hr) << ", delta " << sig(a.delta) << "\n";
  for (const auto& w : scene.meta()["warnings"]) out << "warning: " << w.get<std::string>() << "\n";
  return kOk;
}

int cmd_simulate(const SimulateFlags& f, std::ostream& out) {
  namespace d = hce::design;
  auto scenario = d::parse_scenario(read_file(f.scenario, "scenario"));
  if (f.n) scenario.n_per_arm = *f.n;
  if (f.seed) scenario.seed = *f.seed;
  scenario.validate();
  const auto dir = prepare_out(f.out);

  const auto dataset = d::simulate_trial(scenario);
  const auto config = d::scenario_config(scenario);
  const auto stats = hce::analyze(dataset);
  const auto expected = d::scenario_closed_form(scenario);

  const int k = config.size();
  double events_a = 0, events_c = 0;
  for (const auto& s : dataset.subjects()) {
    if (s.value.category < k) (s.arm == hce::Arm::Active ? events_a : events_c) += 1.0;
  }
  const double n = scenario.n_per_arm;
  nlohmann::json summary;
  summary["n_per_arm"] = scenario.n_per_arm;
  summary["seed"] = scenario.seed;
  summary["event_fraction"] = {
      {"active", events_a / n}, {"control", events_c / n}, {"pooled", (events_a + events_c) / (2 * n)}};
  summary["theta"] = hce::json_real(stats.theta.est);
  summary["win_odds"] = hce::estimate_to_json(stats.win_odds);
  summary["expected"] = {{"theta", expected.theta},
                         {"win_odds", expected.win_odds},
                         {"event_fraction_active", expected.event_fraction_active},
                         {"event_fraction_control", expected.event_fraction_control},
                         {"event_fraction_pooled", expected.event_fraction_pooled}};

  write_file(dir / "dataset.csv", hce::dataset_to_csv(dataset));
  write_file(dir / "components.json", hce::component_config_to_json(config));
  write_file(dir / "simulation_summary.json", summary.dump(2) + "\n");

  out << "subjects per arm " << scenario.n_per_arm << "\n";
  out << "event fraction: active " << sig(events_a / n) << ", control " << sig(events_c / n) << ", pooled "
      << sig((events_a + events_c) / (2 * n)) << "\n";
  out << "win probability " << sig(stats.theta.est) << ", win odds " << ci_text(stats.win_odds) << "\n";
  out << "expected: win probability " << sig(expected.theta) << ", win odds " << sig(expected.win_odds)
      << ", pooled event fraction " << sig(expected.event_fraction_pooled) << "\n";
  return kOk;
}

void add_analysis_flags(CLI::App* cmd, AnalysisFlags& f) {
  cmd->add_option("--input", f.input, "Subject-level CSV")->required();
  cmd->add_option("--components", f.components, "Component configuration JSON")->required();
  cmd->add_flag("--wide", f.wide, "Input is the wide per-component format");
  cmd->add_option("--arm-labels", f.arm_labels, "ARM values for active and control, e.g. A,C");
  cmd->add_option("--alpha", f.alpha, "Two-sided significance level");
  cmd->add_option("--ci", f.ci, "Interval method: analytic|bootstrap");
  cmd->add_option("--boot-reps", f.boot_reps, "Bootstrap replicates");
  cmd->add_option("--seed", f.seed, "Bootstrap seed");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Win statistics and visualizations for hierarchical composite endpoints", "hcevis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hcevis 0.1.0");

  AnalysisFlags analysis;
  PlotFlags plot;
  SunsetFlags sunset;
  SimulateFlags simulate;

  auto* summarize_cmd = app.add_subcommand("summarize", "Win statistics with cumulative component rows");
  add_analysis_flags(summarize_cmd, analysis);
  summarize_cmd->add_option("--out", analysis.out, "Directory for stats.json (stdout if omitted)");

  auto* plot_cmd = app.add_subcommand("plot", "Render SVG plots with metadata sidecars");
  add_analysis_flags(plot_cmd, analysis);
  plot_cmd->add_option("--out", analysis.out, "Output directory")->required();
  plot_cmd->add_option("--plots", plot.plots, "Comma list of shift,binary,mosaic,mosaic2d,maraca,components");
  plot_cmd->add_option("--tie-mode", plot.tie_mode, "2-d mosaic ties: triangle|ordered");
  plot_cmd->add_option("--split-after", plot.split_after, "Mosaic gap after this category");

  auto* sunset_cmd = app.add_subcommand("sunset", "Win-odds landscape over hazard ratio and mean difference");
  sunset_cmd->add_option("--hr-range", sunset.hr_range, "lo,hi");
  sunset_cmd->add_option("--delta-range", sunset.delta_range, "lo,hi");
  sunset_cmd->add_option("--grid", sunset.grid, "Resolution, N or ROWSxCOLS (rows = delta)");
  sunset_cmd->add_option("--p-event", sunset.p_event, "Control event probability within follow-up");
  sunset_cmd->add_option("--sd", sunset.sd, "Continuous outcome SD");
  sunset_cmd->add_option("--tau", sunset.tau, "Follow-up in days");
  sunset_cmd->add_option("--method", sunset.method, "cf (closed form) or mc (Monte Carlo)");
  sunset_cmd->add_option("--iso", sunset.iso, "Comma list of iso levels");
  sunset_cmd->add_option("--overlay", sunset.overlay, "CSV of HR,DELTA[,LABEL] trial points");
  sunset_cmd->add_flag("--hull", sunset.hull, "Shade the convex hull of the overlay points");
  sunset_cmd->add_option("--mc-n", sunset.mc_n, "Monte Carlo subjects per arm");
  sunset_cmd->add_option("--mc-reps", sunset.mc_reps, "Monte Carlo replicates per cell");
  sunset_cmd->add_option("--seed", sunset.seed, "Monte Carlo seed");
  sunset_cmd->add_option("--anchor-hr", sunset.anchor_hr, "Hazard ratio of the anchor marker");
  sunset_cmd->add_option("--anchor-wo", sunset.anchor_wo, "Win odds of the anchor marker");
  sunset_cmd->add_flag("--no-anchor", sunset.no_anchor, "Omit the anchor marker");
  sunset_cmd->add_option("--out", sunset.out, "Output directory")->required();

  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a trial from a scenario file");
  simulate_cmd->add_option("--scenario", simulate.scenario, "Scenario JSON")->required();
  simulate_cmd->add_option("--n", simulate.n, "Subjects per arm (overrides the scenario)");
  simulate_cmd->add_option("--seed", simulate.seed, "Seed (overrides the scenario)");
  simulate_cmd->add_option("--out", simulate.out, "Output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (summarize_cmd->parsed()) return cmd_summarize(analysis, out);
    if (plot_cmd->parsed()) return cmd_plot(analysis, plot, out, err);
    if (sunset_cmd->parsed()) return cmd_sunset(sunset, out);
    return cmd_simulate(simulate, out);
  } catch (const DegenerateError& e) {
    err << "error: " << e.what() << "\n";
    return kDegenerate;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace hcevis
