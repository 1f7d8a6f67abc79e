#pragma once

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eegintent/cli/run_config.hpp"
#include "eegintent/core/dataset_io.hpp"
#include "eegintent/core/split.hpp"
#include "eegintent/eval/metrics.hpp"
#include "eegintent/model/model_io.hpp"
#include "eegintent/model/train.hpp"
#include "eegintent/spectral/feature_io.hpp"
#include "eegintent/stats/topomap.hpp"
#include "eegintent/synth/generator.hpp"

namespace eegintent::cli {

namespace fs = std::filesystem;
using nlohmann::json;

/// Split of a feature set into train/test positions, driven by the run config.
inline SplitIndices split_features(const spectral::FeatureSet& features, double test_fraction, std::uint64_t seed) {
  std::vector<int> classes;
  std::vector<Domain> domains;
  for (const auto& t : features.trials) {
    classes.push_back(t.class_label);
    domains.push_back(t.domain);
  }
  return stratified_split_indices(classes, domains, test_fraction, seed);
}

inline json split_to_json(const spectral::FeatureSet& features, const SplitIndices& idx, const std::string& hash) {
  std::vector<std::uint64_t> train, test;
  for (auto i : idx.train) train.push_back(features.trials[i].trial_id);
  for (auto i : idx.test) test.push_back(features.trials[i].trial_id);
  return {{"format", "eegintent-split"}, {"config_hash", hash}, {"train_ids", train}, {"test_ids", test}};
}

/// Maps a split file's trial ids back to positions in `features`.
inline SplitIndices split_from_json(const spectral::FeatureSet& features, const json& j) {
  std::map<std::uint64_t, std::size_t> pos;
  for (std::size_t i = 0; i < features.size(); ++i) pos[features.trials[i].trial_id] = i;
  SplitIndices idx;
  auto resolve = [&](const char* key, std::vector<std::size_t>& out) {
    for (auto id : j.at(key).get<std::vector<std::uint64_t>>()) {
      auto it = pos.find(id);
      if (it == pos.end()) throw Error(ErrorCode::MalformedManifest, "split names a trial not in the feature file", id);
      out.push_back(it->second);
    }
  };
  try {
    resolve("train_ids", idx.train);
    resolve("test_ids", idx.test);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedManifest, e.what());
  }
  return idx;
}

inline std::string format_pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

inline json to_json(const eval::EvalReport& r) {
  json confusion = json::array();
  for (const auto& row : r.confusion) confusion.push_back(row);
  return {{"accuracy", r.accuracy},
          {"f1_all", r.f1_all},
          {"f1_correct", r.f1_correct},
          {"f1_misarticulated", r.f1_misarticulated},
          {"confusion", confusion},
          {"n_test", r.n_test},
          {"n_correct_trials", r.n_correct_trials},
          {"n_misarticulated_trials", r.n_misarticulated_trials},
          {"absent_classes_correct", r.absent_correct},
          {"absent_classes_misarticulated", r.absent_misarticulated}};
}

/// Accuracy / F1 table, one row per labelled report.
inline std::string metrics_table(const std::vector<std::pair<std::string, eval::EvalReport>>& rows) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-12s %9s %8s %11s %18s\n", "Model", "Accuracy", "F1 All", "F1 Correct",
                "F1 Misarticulated");
  os << buf;
  for (const auto& [name, r] : rows) {
    std::snprintf(buf, sizeof buf, "%-12s %9.1f %8.1f %11.1f %18.1f\n", name.c_str(), r.accuracy, r.f1_all,
                  r.f1_correct, r.f1_misarticulated);
    os << buf;
  }
  return os.str();
}

struct SeedOutcome {
  std::uint64_t seed = 0;
  eval::EvalReport baseline;
  eval::EvalReport multitask;
};

/// One full pipeline pass: generate, extract, split, train both modes, evaluate.
inline SeedOutcome run_pipeline_once(RunConfig config, std::uint64_t seed, std::ostream& log) {
  config.set_seed(seed);
  const auto dataset = synth::generate_dataset(config.synth);
  const auto features = spectral::extract_feature_set(dataset, config.welch);
  const auto idx = split_features(features, config.test_fraction, config.split_seed);
  const auto train_set = features.subset(idx.train);
  const auto test_set = features.subset(idx.test);
  SeedOutcome out{seed, {}, {}};
  for (auto mode : {model::Mode::Baseline, model::Mode::Multitask}) {
    log << "  seed " << seed << ": training " << model::to_string(mode) << "\n" << std::flush;
    const auto trained = model::train(train_set, config.model, mode);
    (mode == model::Mode::Baseline ? out.baseline : out.multitask) = eval::evaluate(trained.params, test_set);
  }
  return out;
}

inline std::string report_table(const std::vector<SeedOutcome>& outcomes) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-6s | %-33s | %-33s\n", "", "Baseline", "Multitask");
  os << buf;
  std::snprintf(buf, sizeof buf, "%-6s | %7s %7s %7s %9s | %7s %7s %7s %9s\n", "seed", "Acc", "F1 All", "F1 Cor",
                "F1 Mis", "Acc", "F1 All", "F1 Cor", "F1 Mis");
  os << buf;
  eval::EvalReport mb, mm;
  auto row = [&](const std::string& label, const eval::EvalReport& b, const eval::EvalReport& m) {
    std::snprintf(buf, sizeof buf, "%-6s | %7.1f %7.1f %7.1f %9.1f | %7.1f %7.1f %7.1f %9.1f\n", label.c_str(),
                  b.accuracy, b.f1_all, b.f1_correct, b.f1_misarticulated, m.accuracy, m.f1_all, m.f1_correct,
                  m.f1_misarticulated);
    os << buf;
  };
  for (const auto& o : outcomes) {
    row(std::to_string(o.seed), o.baseline, o.multitask);
    for (auto [dst, src] : {std::pair{&mb, &o.baseline}, std::pair{&mm, &o.multitask}}) {
      dst->accuracy += src->accuracy;
      dst->f1_all += src->f1_all;
      dst->f1_correct += src->f1_correct;
      dst->f1_misarticulated += src->f1_misarticulated;
    }
  }
  const double n = static_cast<double>(outcomes.size());
  for (auto* r : {&mb, &mm}) {
    r->accuracy /= n;
    r->f1_all /= n;
    r->f1_correct /= n;
    r->f1_misarticulated /= n;
  }
  row("mean", mb, mm);
  return os.str();
}

inline std::string report_csv(const std::vector<SeedOutcome>& outcomes, const std::string& hash) {
  std::ostringstream os;
  os << "# config_hash: " << hash << "\n";
  os << "seed,model,accuracy,f1_all,f1_correct,f1_misarticulated,n_test,n_misarticulated\n";
  char buf[256];
  for (const auto& o : outcomes)
    for (const auto& [name, r] : {std::pair{"baseline", &o.baseline}, std::pair{"multitask", &o.multitask}}) {
      std::snprintf(buf, sizeof buf, "%llu,%s,%.6f,%.6f,%.6f,%.6f,%d,%d\n", static_cast<unsigned long long>(o.seed),
                    name, r->accuracy, r->f1_all, r->f1_correct, r->f1_misarticulated, r->n_test,
                    r->n_misarticulated_trials);
      os << buf;
    }
  return os.str();
}

/// Entry point shared by the executable and the tests. Exit codes: 0 success,
/// 1 data or pipeline error, 2 usage error.
inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"EEG intention decoding toolkit: synthetic data, Welch features, band statistics, multitask training"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "RunConfig JSON file");
  app.add_option("--out", out_dir, "Output directory (overrides output_dir)");
  app.add_option("--seed", seed, "Seed for generator, split and model");

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic labelled dataset");

  auto* features_cmd = app.add_subcommand("features", "Extract Welch log-PSD features");
  std::string data_path;
  features_cmd->add_option("--data", data_path, "Dataset manifest (default <out>/dataset.json)");

  auto* stats_cmd = app.add_subcommand("stats", "Band-power t-maps with FDR correction");
  std::string features_path;
  std::optional<double> alpha;
  bool no_svg = false;
  stats_cmd->add_option("--features", features_path, "Feature header (default <out>/features.json)");
  stats_cmd->add_option("--alpha", alpha, "FDR level");
  stats_cmd->add_flag("--no-svg", no_svg, "Skip SVG topomaps");

  auto* train_cmd = app.add_subcommand("train", "Train a baseline or multitask model");
  std::string mode_name = "multitask", split_path;
  train_cmd->add_option("--features", features_path, "Feature header (default <out>/features.json)");
  train_cmd->add_option("--mode", mode_name, "baseline | multitask")->check(CLI::IsMember({"baseline", "multitask"}));
  train_cmd->add_option("--split", split_path, "Existing split file (default: derive from config and write one)");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate trained models on the test split");
  std::vector<std::string> model_paths;
  eval_cmd->add_option("--features", features_path, "Feature header (default <out>/features.json)");
  eval_cmd->add_option("--split", split_path, "Split file (default <out>/split.json)");
  eval_cmd->add_option("--model", model_paths, "Model header(s) (default: models present in <out>)");

  auto* report_cmd = app.add_subcommand("report", "Full pipeline over several seeds, baseline vs multitask");
  int n_seeds = 5;
  report_cmd->add_option("--seeds", n_seeds, "Number of seeds")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  std::string stage = "config";
  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (seed) config.set_seed(*seed);
    if (alpha) config.alpha = *alpha;
    const fs::path dir = config.output_dir;
    fs::create_directories(dir);
    const std::string hash = config_hash(config);
    auto or_default = [&](const std::string& given, const char* name) { return given.empty() ? dir / name : fs::path(given); };

    if (*synth_cmd) {
      stage = "synth";
      const auto ds = synth::generate_dataset(config.synth);
      save_dataset(ds, dir / "dataset.json", hash);
      out << "wrote " << (dir / "dataset.json").string() << " (" << ds.trials.size() << " trials)\n";
    } else if (*features_cmd) {
      stage = "features";
      const auto ds = load_dataset(or_default(data_path, "dataset.json"));
      const auto feats = spectral::extract_feature_set(ds, config.welch);
      spectral::save_features(feats, dir / "features.json", hash);
      out << "wrote " << (dir / "features.json").string() << " (C=" << feats.n_channels() << ", F=" << feats.n_bins()
          << ", " << feats.size() << " trials)\n";
    } else if (*stats_cmd) {
      stage = "stats";
      const auto feats = spectral::load_features(or_default(features_path, "features.json"));
      const auto maps = stats::band_topomaps(feats, Montage::standard64(), config.bands, config.alpha);
      const auto stats_dir = dir / "stats";
      fs::create_directories(stats_dir);
      for (const auto& m : maps) {
        io::write_text(stats_dir / (m.band + ".csv"), "# config_hash: " + hash + "\n" + stats::topomap_csv(m));
        if (!no_svg)
          io::write_text(stats_dir / (m.band + ".svg"),
                         "<!-- config_hash: " + hash + " -->\n" + stats::render_topomap_svg(m));
        int n_sig = 0;
        for (const auto& c : m.channels) n_sig += c.significant;
        out << m.band << ": " << n_sig << " significant channel(s)\n";
      }
    } else if (*train_cmd) {
      stage = "train";
      const auto mode = model::parse_mode(mode_name);
      const auto feats = spectral::load_features(or_default(features_path, "features.json"));
      SplitIndices idx;
      if (split_path.empty()) {
        idx = split_features(feats, config.test_fraction, config.split_seed);
        io::write_text(dir / "split.json", split_to_json(feats, idx, hash).dump(2) + "\n");
      } else {
        idx = split_from_json(feats, json::parse(io::read_text(split_path)));
      }
      const auto result = model::train(feats.subset(idx.train), config.model, mode);
      const auto name = std::string("model_") + std::string(model::to_string(mode));
      const auto bound = model::bind_input_dim(config.model, feats).for_mode(mode);
      model::save_model(result.params, bound, mode, dir / (name + ".json"), hash);
      io::write_text(dir / ("history_" + std::string(model::to_string(mode)) + ".csv"),
                     "# config_hash: " + hash + "\n" + model::history_csv(result.history));
      out << "wrote " << (dir / (name + ".json")).string() << "; final l_total " << result.history.back().l_total
          << "\n";
    } else if (*eval_cmd) {
      stage = "eval";
      const auto feats = spectral::load_features(or_default(features_path, "features.json"));
      const auto split_file = or_default(split_path, "split.json");
      const auto idx = fs::exists(split_file) ? split_from_json(feats, json::parse(io::read_text(split_file)))
                                              : split_features(feats, config.test_fraction, config.split_seed);
      const auto test_set = feats.subset(idx.test);
      if (model_paths.empty())
        for (const char* m : {"model_baseline.json", "model_multitask.json"})
          if (fs::exists(dir / m)) model_paths.push_back((dir / m).string());
      if (model_paths.empty()) throw Error(ErrorCode::MissingFile, "no model given and none found in " + dir.string());
      std::vector<std::pair<std::string, eval::EvalReport>> rows;
      json reports = json::array();
      for (const auto& p : model_paths) {
        const auto loaded = model::load_model<double>(p);
        auto report = eval::evaluate(loaded.params, test_set);
        std::string label(model::to_string(loaded.mode));
        label[0] = static_cast<char>(std::toupper(label[0]));
        auto j = to_json(report);
        j["model"] = p;
        j["mode"] = model::to_string(loaded.mode);
        reports.push_back(j);
        rows.emplace_back(label, report);
      }
      io::write_text(dir / "eval.json", json{{"config_hash", hash}, {"reports", reports}}.dump(2) + "\n");
      const auto table = metrics_table(rows);
      io::write_text(dir / "eval_table.txt", "# config_hash: " + hash + "\n" + table);
      out << table;
    } else if (*report_cmd) {
      stage = "report";
      const std::uint64_t base = config.synth.seed;
      std::vector<SeedOutcome> outcomes;
      for (int i = 0; i < n_seeds; ++i) outcomes.push_back(run_pipeline_once(config, base + i, err));
      const auto table = report_table(outcomes);
      json per_seed = json::array();
      for (const auto& o : outcomes)
        per_seed.push_back({{"seed", o.seed}, {"baseline", to_json(o.baseline)}, {"multitask", to_json(o.multitask)}});
      io::write_text(dir / "report.csv", report_csv(outcomes, hash));
      io::write_text(dir / "report.txt", "# config_hash: " + hash + "\n" + table);
      io::write_text(dir / "report.json", json{{"config_hash", hash}, {"config", result_fields(config)}, {"seeds", per_seed}}.dump(2) + "\n");
      out << table;
    }
  } catch (const Error& e) {
    err << "error in " << stage << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error in " << stage << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace eegintent::cli
