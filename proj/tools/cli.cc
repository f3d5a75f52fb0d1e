// Copyright 2026 The Crowdelo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "crowdelo/dataset.h"
#include "crowdelo/elo.h"
#include "crowdelo/random.h"
#include "crowdelo/scaling.h"
#include "crowdelo/simulation.h"
#include "crowdelo/spam_audit.h"
#include "crowdelo/table.h"

namespace crowdelo::cli {
namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::uint64_t seed = 0;
  std::string output;
  std::string format = "csv";
  std::string preset = "sim";
  std::string base;
  std::optional<double> k;
  std::optional<double> denom;
  std::optional<double> default_rating;
  std::optional<double> epsilon;
  std::optional<int> epochs;
  bool no_shuffle = false;

  EloConfig Elo() const {
    EloConfig config = preset == "chess" ? EloConfig::ChessPreset()
                                         : EloConfig::SimulationPreset();
    if (k) {
      config.k_factor = *k;
      config.convergence_epsilon = 1e-3 * *k;
    }
    if (denom) config.scale_denominator = *denom;
    if (default_rating) config.default_rating = *default_rating;
    if (epochs) config.epochs = *epochs;
    if (epsilon) config.convergence_epsilon = *epsilon;
    if (base == "ten") config.logistic_base = LogisticBase::kTen;
    if (base == "natural") config.logistic_base = LogisticBase::kNatural;
    if (no_shuffle) config.shuffle = false;
    try {
      config.Validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return config;
  }

  OutputFormat Format() const {
    return format == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
  }
};

// Writes a table to `path`, or to `out` when the path is empty or "-".
void Emit(const Table& table, OutputFormat format, const std::string& path,
          std::ostream& out) {
  if (path.empty() || path == "-") {
    WriteTable(table, format, out);
    out.flush();
    if (!out) throw std::runtime_error("failed to write output");
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
  WriteTable(table, format, file);
  file.flush();
  if (!file) throw std::runtime_error("failed to write '" + path + "'");
}

std::string Extension(OutputFormat format) {
  return format == OutputFormat::kJson ? ".json" : ".csv";
}

ComparisonDataset LoadInput(const std::string& path) {
  if (!fs::exists(path)) {
    throw std::runtime_error("input file '" + path + "' does not exist");
  }
  return LoadComparisonsFile(path);
}

// ---------------------------------------------------------------- rate

struct RateOptions {
  std::string input;
};

int Rate(const RateOptions& options, const CommonOptions& common,
         std::ostream& out, std::ostream& err) {
  const EloConfig config = common.Elo();
  if (config.default_rating != 0.0) {
    err << "warning: label_sign compares ratings with 0 but the default "
           "rating is "
        << FormatDouble(config.default_rating) << "\n";
  }
  const ComparisonDataset dataset = LoadInput(options.input);
  const RatingTable table =
      ReplayEpochs(dataset.records, config, common.seed, dataset.items);

  Table result;
  result.columns = {"item", "rating", "rank", "label_sign", "label_median"};
  if (!table.empty()) {
    const auto ranks = Rankings(table);
    const LabelVector by_sign = BinarizeBySign(table.ratings());
    const LabelVector by_median = BinarizeByMedian(table.ratings());
    std::vector<std::pair<int, std::size_t>> order;
    for (std::size_t i = 0; i < table.size(); ++i) {
      order.emplace_back(ranks.at(table.items()[i]), i);
    }
    std::sort(order.begin(), order.end());
    for (const auto& [rank, i] : order) {
      const auto idx = static_cast<Eigen::Index>(i);
      result.AddRow({table.items()[i], table.ratings()[idx],
                     std::int64_t{rank}, std::int64_t{by_sign[idx] ? 1 : 0},
                     std::int64_t{by_median[idx] ? 1 : 0}});
    }
  }
  Emit(result, common.Format(), common.output, out);
  return kExitOk;
}

// ------------------------------------------------------------ simulate

void AddSimOptions(CLI::App* app, SimParams& params) {
  app->add_option("--n-items", params.n_items, "Number of items")
      ->capture_default_str();
  app->add_option("--n-raters", params.n_raters, "Number of raters")
      ->capture_default_str();
  app->add_option("--perception-ambiguity", params.perception_ambiguity,
                  "Std. dev. of perceived ratings around the truth")
      ->capture_default_str();
  app->add_option("--comparison-ambiguity", params.comparison_ambiguity,
                  "Perceived difference below which a comparison is a draw")
      ->capture_default_str();
  app->add_option("--threshold-diversity", params.threshold_diversity,
                  "Std. dev. of personal vote thresholds")
      ->capture_default_str();
  app->add_option("--spam-fraction", params.spam_fraction,
                  "Fraction of raters answering at random")
      ->capture_default_str();
  app->add_flag("--bias", params.bias_enabled,
                "Give raters a weight for the discriminatory feature");
  app->add_option("--bias-alpha", params.bias_beta_alpha,
                  "Beta alpha of the feature weight 2*Beta-1")
      ->capture_default_str();
  app->add_option("--bias-beta", params.bias_beta_beta,
                  "Beta beta of the feature weight 2*Beta-1")
      ->capture_default_str();
  app->add_option("--feature-probability", params.feature_probability,
                  "Probability that an item shows the feature")
      ->capture_default_str();
  app->add_option("--votes-per-item", params.votes_per_item,
                  "Votes per item in the majority-vote method (odd)")
      ->capture_default_str();
}

using ParamSetter = std::function<void(SimParams&, double)>;

const std::map<std::string, ParamSetter>& SweepableParams() {
  static const auto* params = new std::map<std::string, ParamSetter>{
      {"perception_ambiguity",
       [](SimParams& p, double v) { p.perception_ambiguity = v; }},
      {"comparison_ambiguity",
       [](SimParams& p, double v) { p.comparison_ambiguity = v; }},
      {"threshold_diversity",
       [](SimParams& p, double v) { p.threshold_diversity = v; }},
      {"spam_fraction", [](SimParams& p, double v) { p.spam_fraction = v; }},
      {"bias_enabled", [](SimParams& p, double v) { p.bias_enabled = v != 0; }},
      {"bias_beta_alpha",
       [](SimParams& p, double v) { p.bias_beta_alpha = v; }},
      {"bias_beta_beta", [](SimParams& p, double v) { p.bias_beta_beta = v; }},
      {"feature_probability",
       [](SimParams& p, double v) { p.feature_probability = v; }},
      {"votes_per_item",
       [](SimParams& p, double v) { p.votes_per_item = static_cast<int>(v); }},
      {"n_items",
       [](SimParams& p, double v) { p.n_items = static_cast<int>(v); }},
      {"n_raters",
       [](SimParams& p, double v) { p.n_raters = static_cast<int>(v); }},
  };
  return *params;
}

struct Sweep {
  std::string parameter;
  std::vector<double> values;
};

Sweep ParseSweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) {
    throw UsageError("--sweep expects NAME=V1,V2,...");
  }
  Sweep sweep;
  sweep.parameter = text.substr(0, eq);
  if (!SweepableParams().contains(sweep.parameter)) {
    std::string known;
    for (const auto& [name, setter] : SweepableParams()) {
      known += (known.empty() ? "" : ", ") + name;
    }
    throw UsageError("unknown sweep parameter '" + sweep.parameter +
                     "' (known: " + known + ")");
  }
  std::stringstream values(text.substr(eq + 1));
  std::string token;
  while (std::getline(values, token, ',')) {
    try {
      std::size_t used = 0;
      sweep.values.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw UsageError("bad sweep value '" + token + "'");
    }
  }
  if (sweep.values.empty()) throw UsageError("empty sweep value list");
  return sweep;
}

struct SimulateOptions {
  SimParams params;
  std::vector<double> ratios = {1.0};
  std::string sweep;
  int runs = 25;
};

int Simulate(SimulateOptions options, const CommonOptions& common,
             std::ostream& out, std::ostream& err) {
  if (options.runs < 2) {
    err << "error: --runs must be at least 2; the standard error of the "
           "mean is undefined for a single run\n";
    return kExitUsage;
  }
  options.params.elo = common.Elo();
  options.params.master_seed = common.seed;
  std::optional<Sweep> sweep;
  if (!options.sweep.empty()) sweep = ParseSweep(options.sweep);

  Table result;
  result.columns = {"parameter",       "value",
                    "ratio",           "n_comparisons",
                    "n_runs",          "f1_majority",
                    "f1_majority_sem", "f1_comparison",
                    "f1_comparison_sem", "delta_f1",
                    "delta_f1_sem",    "delta_f1_lower",
                    "delta_f1_upper",  "bias_majority",
                    "bias_majority_sem", "bias_comparison",
                    "bias_comparison_sem"};

  const std::vector<double> values =
      sweep ? sweep->values : std::vector<double>{0.0};
  for (double value : values) {
    SimParams params = options.params;
    if (sweep) SweepableParams().at(sweep->parameter)(params, value);
    for (double ratio : options.ratios) {
      try {
        params.n_comparisons = params.ComparisonsForRatio(ratio);
        params.Validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const EnsembleSummary summary = RunEnsemble(params, options.runs);
      auto bias = [](const std::optional<Estimate>& e, bool sem) -> Cell {
        if (!e) return std::monostate{};
        return sem ? e->sem : e->mean;
      };
      result.AddRow({sweep ? Cell(sweep->parameter) : Cell(std::string("none")),
                     sweep ? Cell(value) : Cell(std::monostate{}), ratio,
                     std::int64_t{params.n_comparisons},
                     std::int64_t{summary.n_runs}, summary.f1_majority.mean,
                     summary.f1_majority.sem, summary.f1_comparison.mean,
                     summary.f1_comparison.sem, summary.delta_f1.mean,
                     summary.delta_f1.sem, summary.delta_f1.lower,
                     summary.delta_f1.upper,
                     bias(summary.bias_majority, false),
                     bias(summary.bias_majority, true),
                     bias(summary.bias_comparison, false),
                     bias(summary.bias_comparison, true)});
    }
  }
  Emit(result, common.Format(), common.output, out);
  return kExitOk;
}

// ------------------------------------------------------------- scaling

struct ScalingOptions {
  std::string input;
  bool simulate = false;
  SimParams params;
  int replications = 2;
  std::vector<int> sizes;
  std::vector<double> grid = {0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.75,
                              1.0, 1.5,  2.0, 3.0, 4.0, 6.0, 8.0};
  std::vector<std::int64_t> counts;
  int replicates = 25;
  std::optional<double> target_f1;
  std::optional<int> target_n;
  std::optional<int> pilot_n;
};

std::vector<std::int64_t> CountsFor(const ScalingOptions& options, int size,
                                    std::int64_t available) {
  std::vector<std::int64_t> counts;
  if (!options.counts.empty()) {
    counts = options.counts;
  } else {
    const double scale = ScaleFactor(ScalingLaw::kNLogN, size);
    for (double x : options.grid) {
      counts.push_back(std::max<std::int64_t>(1, std::llround(x * scale)));
    }
  }
  std::sort(counts.begin(), counts.end());
  counts.erase(std::unique(counts.begin(), counts.end()), counts.end());
  counts.erase(std::remove_if(counts.begin(), counts.end(),
                              [&](std::int64_t c) { return c > available; }),
               counts.end());
  return counts;
}

int Scaling(const ScalingOptions& options, const CommonOptions& common,
            std::ostream& out, std::ostream& err) {
  if (options.target_f1 &&
      !(*options.target_f1 > 0.0 && *options.target_f1 <= 1.0)) {
    throw UsageError("--target-f1 must lie in (0, 1]");
  }
  if (options.target_n && *options.target_n < 2) {
    throw UsageError("--target-n must be at least 2");
  }
  if (options.target_f1.has_value() != options.target_n.has_value()) {
    throw UsageError("--target-f1 and --target-n go together");
  }
  if (options.simulate == !options.input.empty()) {
    throw UsageError("give exactly one of --input and --simulate");
  }
  if (common.output.empty() || common.output == "-") {
    throw UsageError("scaling writes several tables; --output must name a "
                     "directory");
  }
  const EloConfig config = common.Elo();
  const OutputFormat format = common.Format();
  fs::create_directories(common.output);

  std::vector<ScalingTrajectory> trajectories;
  if (options.simulate) {
    const std::vector<int> sizes =
        options.sizes.empty() ? std::vector<int>{64, 128, 256} : options.sizes;
    for (int size : sizes) {
      SimParams params = options.params;
      params.n_items = size;
      params.elo = config;
      try {
        params.Validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      DatasetDesign design;
      design.pairs = PairDesign::kAllPairs;
      design.replications = options.replications;
      const SimulatedDataset sim = SimulateDataset(
          params, design,
          DeriveSeed(common.seed, kSubsetTag, static_cast<std::uint64_t>(size)));
      const auto counts = CountsFor(
          options, size, static_cast<std::int64_t>(sim.dataset.records.size()));
      trajectories.push_back(Trajectory(sim.dataset, counts,
                                        options.replicates, config,
                                        common.seed));
    }
  } else {
    const ComparisonDataset dataset = LoadInput(options.input);
    const int universe = static_cast<int>(dataset.items.size());
    const std::vector<int> sizes =
        options.sizes.empty() ? std::vector<int>{universe} : options.sizes;
    const RatingTable full = BenchmarkRatings(dataset, config);
    for (int size : sizes) {
      if (size < 2 || size > universe) {
        throw UsageError("system size " + std::to_string(size) +
                         " outside [2, " + std::to_string(universe) + "]");
      }
      if (size == universe) {
        auto counts = CountsFor(
            options, size, static_cast<std::int64_t>(dataset.records.size()));
        const auto all = static_cast<std::int64_t>(dataset.records.size());
        if (counts.empty() || counts.back() != all) counts.push_back(all);
        trajectories.push_back(
            Trajectory(dataset, counts, options.replicates, config,
                       common.seed));
      } else {
        // Every size-N subset of a complete design keeps the same number of
        // records; otherwise counts are capped by the smallest subset.
        std::int64_t available = std::numeric_limits<std::int64_t>::max();
        for (int r = 0; r < options.replicates; ++r) {
          Rng rng(DeriveSeed(common.seed, kSubsetTag,
                             static_cast<std::uint64_t>(r)));
          std::vector<std::string> items;
          for (std::int64_t k : SampleDistinct(universe, size, rng)) {
            items.push_back(dataset.items[static_cast<std::size_t>(k)]);
          }
          available = std::min<std::int64_t>(
              available, static_cast<std::int64_t>(
                             RestrictToItems(dataset, items).records.size()));
        }
        const auto counts = CountsFor(options, size, available);
        if (counts.empty()) {
          throw UsageError("no comparison count fits system size " +
                           std::to_string(size));
        }
        trajectories.push_back(SubsetTrajectory(dataset, full, size, counts,
                                                options.replicates, config,
                                                common.seed));
      }
    }
  }

  Table trajectory_table;
  trajectory_table.columns = {"N",       "n_comparisons", "rescaled_x",
                              "mean_f1", "sem",           "n_replicates"};
  for (const ScalingTrajectory& t : trajectories) {
    const double scale = ScaleFactor(ScalingLaw::kNLogN, t.system_size);
    for (const TrajectoryPoint& p : t.points) {
      trajectory_table.AddRow({std::int64_t{t.system_size},
                               std::int64_t{p.n_comparisons},
                               static_cast<double>(p.n_comparisons) / scale,
                               p.mean_f1, p.sem,
                               std::int64_t{p.n_replicates}});
    }
  }
  const fs::path dir(common.output);
  Emit(trajectory_table, format,
       (dir / ("trajectories" + Extension(format))).string(), out);

  if (trajectories.size() >= 2) {
    Table collapse;
    collapse.columns = {"law",          "gap",    "domain_lower",
                        "domain_upper", "n_grid", "best"};
    std::vector<CollapseReport> reports;
    for (ScalingLaw law : kAllScalingLaws) {
      reports.push_back(CollapseScore(trajectories, law));
    }
    const auto best = std::min_element(
        reports.begin(), reports.end(),
        [](const auto& l, const auto& r) { return l.gap < r.gap; });
    for (const CollapseReport& report : reports) {
      collapse.AddRow({std::string(ScalingLawName(report.law)), report.gap,
                       report.domain_lower, report.domain_upper,
                       static_cast<std::int64_t>(report.grid.size()),
                       std::int64_t{&report == &*best ? 1 : 0}});
    }
    Emit(collapse, format, (dir / ("collapse" + Extension(format))).string(),
         out);
  }

  if (options.target_f1) {
    // Pilot: the requested size, else the largest one.
    const ScalingTrajectory* pilot = &trajectories.front();
    for (const ScalingTrajectory& t : trajectories) {
      if (options.pilot_n ? t.system_size == *options.pilot_n
                          : t.system_size > pilot->system_size) {
        pilot = &t;
      }
    }
    if (options.pilot_n && pilot->system_size != *options.pilot_n) {
      throw UsageError("--pilot-n does not match any system size");
    }
    double crossing = 0.0;
    std::int64_t budget = 0;
    try {
      crossing = CrossingPoint(*pilot, pilot->system_size, *options.target_f1);
      budget = EstimateBudget(*pilot, pilot->system_size, *options.target_f1,
                              *options.target_n);
    } catch (const std::domain_error& e) {
      err << "error: " << e.what()
          << "; the pilot is too small or too noisy for this target\n";
      return kExitFailure;
    }
    Table budget_table;
    budget_table.columns = {"pilot_n", "target_f1", "target_n",
                            "crossing_rescaled_x", "n_comparisons"};
    budget_table.AddRow({std::int64_t{pilot->system_size}, *options.target_f1,
                         std::int64_t{*options.target_n}, crossing, budget});
    Emit(budget_table, format, (dir / ("budget" + Extension(format))).string(),
         out);
  }
  return kExitOk;
}

// ---------------------------------------------------------- spam-audit

struct SpamAuditOptions {
  std::string input;
  AuditThresholds thresholds;
};

int SpamAudit(const SpamAuditOptions& options, const CommonOptions& common,
              std::ostream& out) {
  const EloConfig config = common.Elo();
  try {
    options.thresholds.Validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const ComparisonDataset dataset = LoadInput(options.input);
  Table result;
  result.columns = {"rater_id", "n_comparisons", "outcome_correlation",
                    "median_selection_probability", "flags"};
  for (const RaterAudit& audit :
       FlagSpammers(dataset, config, options.thresholds)) {
    std::string flags;
    for (AuditFlag flag : audit.flags) {
      flags += (flags.empty() ? "" : ";") + AuditFlagName(flag);
    }
    result.AddRow({audit.rater_id, std::int64_t{audit.n_comparisons},
                   OptionalCell(audit.outcome_correlation),
                   OptionalCell(audit.median_selection_probability), flags});
  }
  Emit(result, common.Format(), common.output, out);
  return kExitOk;
}

// -------------------------------------------------------------- anchor

struct AnchorOptions {
  std::string baseline;
  std::string benchmark;
  std::string probes;
  int probes_per_bucket = 5;
};

int Anchor(const AnchorOptions& options, const CommonOptions& common,
           std::ostream& out) {
  const EloConfig config = common.Elo();
  const ComparisonDataset baseline_data = LoadInput(options.baseline);
  const ComparisonDataset benchmark_data = LoadInput(options.benchmark);
  const ComparisonDataset probe_data = LoadInput(options.probes);
  const RatingTable baseline =
      ReplayEpochs(baseline_data.records, config, common.seed,
                   baseline_data.items);
  const RatingTable benchmark =
      ReplayEpochs(benchmark_data.records, config, common.seed,
                   benchmark_data.items);

  // The first recorded answer for a pair decides; a draw does not place the
  // probe above.
  std::map<std::pair<std::string, std::string>, double> answers;
  for (const MatchRecord& record : probe_data.records) {
    answers.try_emplace({record.item_a, record.item_b}, record.score_a);
    answers.try_emplace({record.item_b, record.item_a}, 1.0 - record.score_a);
  }
  const ComparisonOracle oracle = [&](const std::string& probe,
                                      const std::string& item) {
    auto it = answers.find({probe, item});
    if (it == answers.end()) {
      throw std::runtime_error("no recorded comparison between probe '" +
                               probe + "' and benchmark item '" + item + "'");
    }
    return it->second == 1.0;
  };
  if (options.probes_per_bucket < 1) {
    throw UsageError("--probes-per-bucket must be positive");
  }
  const AnchorResult anchor =
      AnchorGroups(baseline, benchmark, options.probes_per_bucket, oracle);

  std::map<std::string, const ProbePlacement*> placements;
  for (const ProbePlacement& p : anchor.probes) placements[p.item] = &p;
  Table result;
  result.columns = {"item",           "rating", "anchored_rating", "offset",
                    "probe_position", "implied_rating"};
  for (std::size_t i = 0; i < baseline.size(); ++i) {
    const std::string& item = baseline.items()[i];
    const auto idx = static_cast<Eigen::Index>(i);
    const auto it = placements.find(item);
    const bool probe = it != placements.end();
    result.AddRow(
        {item, baseline.ratings()[idx], anchor.anchored.ratings()[idx],
         anchor.offset,
         probe ? Cell(static_cast<std::int64_t>(it->second->position))
               : Cell(std::monostate{}),
         probe ? Cell(it->second->implied_rating) : Cell(std::monostate{})});
  }
  Emit(result, common.Format(), common.output, out);
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Label items on subjective constructs from pairwise "
               "comparisons with Elo ratings",
               "crowdelo"};
  app.fallthrough();
  app.require_subcommand(1);

  CommonOptions common;
  app.add_option("--seed", common.seed, "Root of every random stream")
      ->capture_default_str();
  app.add_option("--output", common.output,
                 "Output file (scaling: output directory); default stdout");
  app.add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--preset", common.preset,
                 "Elo defaults: sim (from 0, 20 shuffled epochs) or chess "
                 "(from 1400, one pass in file order)")
      ->check(CLI::IsMember({"sim", "chess"}))
      ->capture_default_str();
  app.add_option("--k", common.k, "Elo k factor");
  app.add_option("--denom", common.denom, "Logistic scale denominator");
  app.add_option("--base", common.base, "Logistic base")
      ->check(CLI::IsMember({"natural", "ten"}));
  app.add_option("--default-rating", common.default_rating,
                 "Initial rating of unseen items");
  app.add_option("--epochs", common.epochs, "Maximum replay epochs");
  app.add_option("--epsilon", common.epsilon,
                 "Stop replay once no rating moves more than this per epoch");
  app.add_flag("--no-shuffle", common.no_shuffle,
               "Replay records in file order every epoch");

  RateOptions rate;
  CLI::App* rate_cmd =
      app.add_subcommand("rate", "Rate items from a comparison CSV");
  rate_cmd->add_option("--input", rate.input, "Comparison CSV")->required();

  SimulateOptions simulate;
  CLI::App* simulate_cmd = app.add_subcommand(
      "simulate", "Compare majority vote and comparisons on simulated raters");
  AddSimOptions(simulate_cmd, simulate.params);
  simulate_cmd
      ->add_option("--ratios", simulate.ratios,
                   "Comparison tasks per majority-vote task")
      ->delimiter(',')
      ->capture_default_str();
  simulate_cmd->add_option("--sweep", simulate.sweep,
                           "One-parameter sweep, NAME=V1,V2,...");
  simulate_cmd->add_option("--runs", simulate.runs, "Runs per ensemble")
      ->capture_default_str();

  ScalingOptions scaling;
  CLI::App* scaling_cmd = app.add_subcommand(
      "scaling", "Scaling trajectories, collapse test and budget estimate");
  scaling_cmd->add_option("--input", scaling.input, "Comparison CSV");
  scaling_cmd->add_flag("--simulate", scaling.simulate,
                        "Simulate complete designs instead of reading data");
  AddSimOptions(scaling_cmd, scaling.params);
  scaling_cmd->add_option("--replications", scaling.replications,
                          "Judgements per pair in simulated designs")
      ->capture_default_str();
  scaling_cmd->add_option("--sizes", scaling.sizes, "System sizes N")
      ->delimiter(',');
  scaling_cmd
      ->add_option("--grid", scaling.grid,
                   "Comparison counts as multiples of N ln N")
      ->delimiter(',');
  scaling_cmd->add_option("--counts", scaling.counts,
                          "Explicit comparison counts (override --grid)")
      ->delimiter(',');
  scaling_cmd->add_option("--replicates", scaling.replicates,
                          "Subsamples per point")
      ->capture_default_str();
  scaling_cmd->add_option("--target-f1", scaling.target_f1,
                          "Budget estimate: required f1");
  scaling_cmd->add_option("--target-n", scaling.target_n,
                          "Budget estimate: items in the full study");
  scaling_cmd->add_option("--pilot-n", scaling.pilot_n,
                          "System size used as the pilot (default largest)");

  SpamAuditOptions spam;
  CLI::App* spam_cmd = app.add_subcommand(
      "spam-audit", "Score raters for spam-like answering");
  spam_cmd->add_option("--input", spam.input, "Comparison CSV")->required();
  spam_cmd->add_option("--correlation-floor",
                       spam.thresholds.correlation_floor,
                       "Flag outcome correlations below this")
      ->capture_default_str();
  spam_cmd->add_option("--probability-floor",
                       spam.thresholds.probability_floor,
                       "Flag median selection probabilities below this")
      ->capture_default_str();
  spam_cmd->add_option("--min-records", spam.thresholds.min_records,
                       "Raters with fewer records are not judged")
      ->capture_default_str();

  AnchorOptions anchor;
  CLI::App* anchor_cmd = app.add_subcommand(
      "anchor", "Shift a baseline group onto a benchmark group's scale");
  anchor_cmd->add_option("--baseline", anchor.baseline,
                         "Baseline comparison CSV")
      ->required();
  anchor_cmd->add_option("--benchmark", anchor.benchmark,
                         "Benchmark comparison CSV")
      ->required();
  anchor_cmd->add_option("--probes", anchor.probes,
                         "Probe-vs-benchmark answers (CSV)")
      ->required();
  anchor_cmd->add_option("--probes-per-bucket", anchor.probes_per_bucket,
                         "Baseline items used as probes")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (rate_cmd->parsed()) return Rate(rate, common, out, err);
    if (simulate_cmd->parsed()) return Simulate(simulate, common, out, err);
    if (scaling_cmd->parsed()) return Scaling(scaling, common, out, err);
    if (spam_cmd->parsed()) return SpamAudit(spam, common, out);
    if (anchor_cmd->parsed()) return Anchor(anchor, common, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace crowdelo::cli
