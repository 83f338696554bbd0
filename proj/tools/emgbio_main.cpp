// tools/emgbio_main.cpp

// Copyright 2026  emgbio authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Command line front end.  Subcommands:
//   scan      index a dataset tree and report missing/stray records
//   synth     generate a synthetic dataset with known structure
//   features  extract the feature series of one record
//   enroll    build a template store from a dataset tree
//   verify    score one multi-code authentication attempt against a store
//   evaluate  run the full verification benchmark and write reports
//   report    pretty-print an existing report.json
//
// Exit codes: 0 success, 1 domain error (bad data, bad config), 2 usage.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "emgbio/config.hpp"
#include "emgbio/dataset.hpp"
#include "emgbio/det.hpp"
#include "emgbio/errors.hpp"
#include "emgbio/evaluate.hpp"
#include "emgbio/feature_io.hpp"
#include "emgbio/fusion.hpp"
#include "emgbio/matcher.hpp"
#include "emgbio/parallel.hpp"
#include "emgbio/report.hpp"
#include "emgbio/synthgen.hpp"
#include "emgbio/template_store.hpp"

namespace {

using namespace emgbio;

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

/// `Session {i}/session{i}_subject{j}/<record name>.hea` under the root.
std::filesystem::path record_path(const std::filesystem::path& root,
                                  const TrialId& id) {
  std::ostringstream session_dir;
  session_dir << "Session " << id.session;
  std::ostringstream subject_dir;
  subject_dir << "session" << id.session << "_subject" << id.subject;
  return root / session_dir.str() / subject_dir.str() / (id.name() + ".hea");
}

// ---------------------------------------------------------------------------
// scan

struct ScanArgs {
  std::string root;
  std::string json_out;
  ExpectedGrid grid;
};

void run_scan(const ScanArgs& args) {
  DatasetManifest manifest = scan_dataset(args.root, args.grid);
  std::cout << "root: " << manifest.root << "\n";
  std::cout << "expected grid: " << manifest.grid.sessions << " sessions x "
            << manifest.grid.subjects << " subjects x "
            << manifest.grid.gestures << " gestures x " << manifest.grid.trials
            << " trials = " << manifest.grid.total() << " records\n";
  std::cout << "found " << manifest.entries.size() << ", missing "
            << manifest.missing.size() << ", stray files "
            << manifest.stray_files.size() << "\n";
  int complete = 0;
  for (int subject = 1; subject <= manifest.grid.subjects; ++subject)
    if (manifest.subject_complete(subject)) ++complete;
  std::cout << "complete subjects: " << complete << " of "
            << manifest.grid.subjects << "\n";
  const std::size_t show = std::min<std::size_t>(manifest.missing.size(), 10);
  for (std::size_t i = 0; i < show; ++i)
    std::cout << "missing: " << manifest.missing[i].name() << "\n";
  if (manifest.missing.size() > show)
    std::cout << "missing: ... " << manifest.missing.size() - show
              << " more\n";
  for (const std::string& stray : manifest.stray_files)
    std::cerr << "warning: stray file " << stray << "\n";
  if (!args.json_out.empty()) {
    std::ofstream out(args.json_out, std::ios::binary);
    if (!out) throw Error("cannot open " + args.json_out + " for writing");
    out << manifest.to_json();
    std::cout << "wrote " << args.json_out << "\n";
  }
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  SynthConfig config;
  std::string out;
  int jobs = 1;
};

void run_synth(const SynthArgs& args) {
  generate_dataset(args.config, args.out, args.jobs);
  const std::int64_t records = static_cast<std::int64_t>(args.config.subjects) *
                               args.config.sessions * args.config.gestures *
                               args.config.trials;
  std::cout << "wrote " << records << " records under " << args.out << "\n";
}

// ---------------------------------------------------------------------------
// features

struct FeatureArgs {
  std::string root;
  std::string record;
  std::string hea;
  std::string selection = "forearm";
  std::vector<int> channels;
  std::string out;
};

void run_features(const FeatureArgs& args) {
  std::filesystem::path hea;
  if (!args.hea.empty()) {
    hea = args.hea;
  } else {
    if (args.root.empty() || args.record.empty())
      throw Error("give either --hea or both --root and --record");
    auto id = parse_trial_id(args.record);
    if (!id) throw Error("not a record name: " + args.record);
    hea = record_path(args.root, *id);
  }

  RunConfig config;
  config.selection = args.selection;
  config.custom_channels = args.channels;
  if (!args.channels.empty()) config.selection = "custom";
  const ChannelSelection selection = config.resolve_selection();

  std::vector<std::string> warnings;
  SignalRecord record = load_record(hea, &warnings);
  print_warnings(warnings);
  FeatureSeries series =
      extract_series(record, selection, config.window, config.fdt);
  const std::string comment =
      "features " + hash_hex(feature_config_hash(config));
  if (args.out.empty()) {
    std::cout << feature_series_to_csv(series, comment);
  } else {
    write_feature_series(args.out, series, comment);
    std::cout << "wrote " << args.out << " (" << series.window_count()
              << " windows x " << series.dims() << " features)\n";
  }
}

// ---------------------------------------------------------------------------
// enroll

struct EnrollArgs {
  std::string root;
  std::string config_path;
  std::string out;
  std::vector<int> subjects;
  int jobs = 0;
};

void run_enroll(const EnrollArgs& args) {
  RunConfig config =
      args.config_path.empty() ? RunConfig{} : load_run_config(args.config_path);
  config.dataset_root = args.root;
  DatasetManifest manifest = scan_dataset(args.root, config.grid);
  const ChannelSelection selection = config.resolve_selection();

  std::vector<int> subjects = args.subjects;
  if (subjects.empty())
    for (int s = 1; s <= config.grid.subjects; ++s) subjects.push_back(s);

  TemplateStore store;
  store.selection_name = selection.name;
  store.feature_hash = hash_hex(feature_config_hash(config));
  store.seed = config.seed;

  std::vector<std::map<std::pair<int, int>, StoredTemplate>> slots(
      subjects.size());
  std::vector<int> skipped(subjects.size(), 0);
  std::mutex io_mutex;
  parallel_for(subjects.size(), args.jobs, [&](std::size_t i) {
    const int subject = subjects[i];
    for (int gesture = 1; gesture <= config.grid.gestures; ++gesture) {
      std::vector<FeatureSeries> parts;
      for (int session = 1; session <= config.grid.sessions; ++session) {
        for (int trial = 1; trial <= config.grid.trials; ++trial) {
          TrialId id{session, subject, gesture, trial};
          auto it = manifest.entries.find(id);
          if (it == manifest.entries.end()) continue;
          std::vector<std::string> warnings;
          SignalRecord record = load_record(it->second, &warnings);
          if (!warnings.empty()) {
            std::lock_guard<std::mutex> lock(io_mutex);
            print_warnings(warnings);
          }
          parts.push_back(
              extract_series(record, selection, config.window, config.fdt));
        }
      }
      if (parts.size() < 2) {
        if (!parts.empty()) ++skipped[i];
        continue;
      }
      Eigen::Index rows = 0;
      for (const FeatureSeries& p : parts) rows += p.vectors.rows();
      Eigen::MatrixXd stacked(rows, parts.front().vectors.cols());
      Eigen::Index at = 0;
      for (const FeatureSeries& p : parts) {
        stacked.middleRows(at, p.vectors.rows()) = p.vectors;
        at += p.vectors.rows();
      }
      StoredTemplate entry;
      entry.tmpl = enroll(stacked, subject, gesture, config.shrinkage,
                          selection.name);
      for (const FeatureSeries& p : parts)
        entry.self_scores.push_back(
            score_attempt(p, entry.tmpl, config.attempt_reduce));
      slots[i].emplace(std::make_pair(subject, gesture), std::move(entry));
    }
  });

  int total_skipped = 0;
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    total_skipped += skipped[i];
    for (auto& [key, entry] : slots[i])
      store.templates.emplace(key, std::move(entry));
  }
  store.save(args.out);
  std::cout << "enrolled " << store.templates.size() << " templates into "
            << args.out << "\n";
  if (total_skipped > 0)
    std::cout << "skipped " << total_skipped
              << " (user, gesture) pairs with fewer than 2 trials\n";
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string store_path;
  std::string root;
  std::string config_path;
  int claim = 0;
  int performer = 0;
  int session = 0;
  int trial = 0;
  std::vector<int> sequence;
  std::vector<int> channels;
  double quantile = 0.95;
  double slack = 1.0;
};

void run_verify(const VerifyArgs& args) {
  TemplateStore store = TemplateStore::load(args.store_path);

  RunConfig config =
      args.config_path.empty() ? RunConfig{} : load_run_config(args.config_path);
  config.selection = store.selection_name;
  if (!args.channels.empty()) config.custom_channels = args.channels;
  const std::string hash = hash_hex(feature_config_hash(config));
  if (hash != store.feature_hash)
    throw Error("feature settings hash " + hash +
                " does not match template store hash " + store.feature_hash +
                "; pass the config the store was built with");
  const ChannelSelection selection = config.resolve_selection();

  const int performer = args.performer == 0 ? args.claim : args.performer;
  CodeSequence sequence{args.sequence};
  if (sequence.codes.empty()) throw Error("empty code sequence");

  std::vector<int> certainties;
  nlohmann::json codes = nlohmann::json::array();
  for (int gesture : sequence.codes) {
    const StoredTemplate* entry = store.find(args.claim, gesture);
    if (entry == nullptr) {
      std::ostringstream msg;
      msg << "store has no template for user " << args.claim << " gesture "
          << gesture;
      throw Error(msg.str());
    }
    if (entry->self_scores.empty())
      throw Error("stored template has no self scores to set a threshold");
    TrialId id{args.session, performer, gesture, args.trial};
    std::vector<std::string> warnings;
    SignalRecord record = load_record(record_path(args.root, id), &warnings);
    print_warnings(warnings);
    FeatureSeries series =
        extract_series(record, selection, config.window, config.fdt);
    const double score =
        score_attempt(series, entry->tmpl, config.attempt_reduce);
    std::vector<double> sorted = entry->self_scores;
    std::sort(sorted.begin(), sorted.end());
    const double threshold =
        empirical_quantile(sorted, args.quantile) * args.slack;
    const int d = certainty_from_score(score, threshold);
    certainties.push_back(d);
    codes.push_back({{"gesture", gesture},
                     {"score", score},
                     {"threshold", threshold},
                     {"certainty", d}});
  }

  // No per-gesture accuracy estimates live in the store, so codes vote
  // uniformly here; the evaluate pipeline is where calibrated weights apply.
  CodeWeights weights;
  weights.normalized.assign(sequence.codes.size(),
                            1.0 / static_cast<double>(sequence.codes.size()));
  FusionDecision decision = fuse(certainties, weights);

  nlohmann::json out;
  out["claim"] = args.claim;
  out["performer"] = performer;
  out["session"] = args.session;
  out["trial"] = args.trial;
  out["codes"] = codes;
  out["discriminant"] = decision.discriminant;
  out["accepted"] = decision.accepted;
  std::cout << out.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
  std::string root;
  std::string config_path;
  std::string out;
  std::string selection;
  std::uint64_t seed = 0;
  int jobs = 0;
  int sequences = 0;
};

void run_evaluate(const EvaluateArgs& args, const CLI::App& cmd) {
  RunConfig config =
      args.config_path.empty() ? RunConfig{} : load_run_config(args.config_path);
  if (cmd.count("--root") > 0) config.dataset_root = args.root;
  if (cmd.count("--out") > 0) config.output_dir = args.out;
  if (cmd.count("--selection") > 0) config.selection = args.selection;
  if (cmd.count("--seed") > 0) config.seed = args.seed;
  if (cmd.count("--jobs") > 0) config.jobs = args.jobs;
  if (cmd.count("--sequences") > 0) config.sequence_count = args.sequences;
  if (config.dataset_root.empty())
    throw Error("dataset root required (--root or config dataset_root)");

  DatasetManifest manifest = scan_dataset(config.dataset_root, config.grid);
  EvalResult result = evaluate(manifest, config);
  ReportPaths paths = write_reports(config.output_dir, config, result);
  std::cout << "wrote " << paths.report.string() << "\n";
  if (!paths.eer_table.empty())
    std::cout << "wrote " << paths.eer_table.string() << "\n";
  if (!paths.eer_table_leaked.empty())
    std::cout << "wrote " << paths.eer_table_leaked.string() << "\n";
  std::cout << "wrote " << paths.det_curves.string() << "\n\n";
  std::cout << render_summary(read_text(paths.report));
}

// ---------------------------------------------------------------------------
// report

void run_report(const std::string& path) {
  std::cout << render_summary(read_text(path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EMG multi-code biometric verification toolkit"};
  app.require_subcommand(1);

  auto scan_args = std::make_shared<ScanArgs>();
  CLI::App* scan = app.add_subcommand("scan", "Index a dataset tree");
  scan->add_option("--root", scan_args->root, "Dataset root directory")
      ->required();
  scan->add_option("--sessions", scan_args->grid.sessions, "Expected sessions");
  scan->add_option("--subjects", scan_args->grid.subjects, "Expected subjects");
  scan->add_option("--gestures", scan_args->grid.gestures, "Expected gestures");
  scan->add_option("--trials", scan_args->grid.trials, "Expected trials");
  scan->add_option("--json", scan_args->json_out, "Write manifest JSON here");
  scan->callback([scan_args] { run_scan(*scan_args); });

  auto synth_args = std::make_shared<SynthArgs>();
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("--out", synth_args->out, "Output directory")->required();
  synth->add_option("--subjects", synth_args->config.subjects, "Subjects");
  synth->add_option("--sessions", synth_args->config.sessions, "Sessions");
  synth->add_option("--gestures", synth_args->config.gestures, "Gestures");
  synth->add_option("--trials", synth_args->config.trials, "Trials");
  synth->add_option("--samples", synth_args->config.sample_count,
                    "Samples per record");
  synth->add_option("--channels", synth_args->config.channels, "Channels");
  synth->add_option("--fs", synth_args->config.sampling_rate_hz,
                    "Sampling rate in Hz");
  synth->add_option("--separation", synth_args->config.separation,
                    "Between-subject spread");
  synth->add_option("--drift", synth_args->config.session_drift,
                    "Cross-day drift");
  synth->add_option("--noise", synth_args->config.noise_level,
                    "Trial-to-trial jitter");
  synth->add_option("--gain", synth_args->config.gain, "ADC gain");
  synth->add_option("--seed", synth_args->config.seed, "Generator seed");
  synth->add_option("--jobs", synth_args->jobs, "Worker threads (0 = all)");
  synth->callback([synth_args] { run_synth(*synth_args); });

  auto feature_args = std::make_shared<FeatureArgs>();
  CLI::App* features =
      app.add_subcommand("features", "Extract features of one record");
  features->add_option("--root", feature_args->root, "Dataset root");
  features->add_option("--record", feature_args->record,
                       "Record name, e.g. session1_subject2_gesture3_trial4");
  features->add_option("--hea", feature_args->hea, "Path to a .hea header");
  features->add_option("--selection", feature_args->selection,
                       "forearm | wrist");
  features
      ->add_option("--channels", feature_args->channels,
                   "Custom 0-based channel list (overrides --selection)")
      ->delimiter(',');
  features->add_option("--out", feature_args->out,
                       "Output file (default: stdout)");
  features->callback([feature_args] { run_features(*feature_args); });

  auto enroll_args = std::make_shared<EnrollArgs>();
  CLI::App* enroll_cmd =
      app.add_subcommand("enroll", "Build a template store from a tree");
  enroll_cmd->add_option("--root", enroll_args->root, "Dataset root")
      ->required();
  enroll_cmd->add_option("--out", enroll_args->out, "Store file to write")
      ->required();
  enroll_cmd->add_option("--config", enroll_args->config_path,
                         "Run config JSON");
  enroll_cmd
      ->add_option("--subjects", enroll_args->subjects,
                   "Only these subject ids")
      ->delimiter(',');
  enroll_cmd->add_option("--jobs", enroll_args->jobs,
                         "Worker threads (0 = all)");
  enroll_cmd->callback([enroll_args] { run_enroll(*enroll_args); });

  auto verify_args = std::make_shared<VerifyArgs>();
  CLI::App* verify =
      app.add_subcommand("verify", "Score one authentication attempt");
  verify->add_option("--store", verify_args->store_path, "Template store")
      ->required();
  verify->add_option("--root", verify_args->root, "Dataset root")->required();
  verify->add_option("--config", verify_args->config_path, "Run config JSON");
  verify->add_option("--claim", verify_args->claim, "Claimed user id")
      ->required();
  verify->add_option("--performer", verify_args->performer,
                     "Actual performing subject (default: the claimed user)");
  verify->add_option("--session", verify_args->session, "Session of the attempt")
      ->required();
  verify->add_option("--trial", verify_args->trial, "Trial of the attempt")
      ->required();
  verify
      ->add_option("--sequence", verify_args->sequence,
                   "Comma-separated gesture codes, e.g. 3,5,2")
      ->required()
      ->delimiter(',');
  verify
      ->add_option("--channels", verify_args->channels,
                   "Custom channel list for stores built with one")
      ->delimiter(',');
  verify->add_option("--quantile", verify_args->quantile,
                     "Self-score quantile for the threshold");
  verify->add_option("--slack", verify_args->slack,
                     "Multiplier on the threshold");
  verify->callback([verify_args] { run_verify(*verify_args); });

  auto eval_args = std::make_shared<EvaluateArgs>();
  CLI::App* evaluate_cmd =
      app.add_subcommand("evaluate", "Run the verification benchmark");
  evaluate_cmd->add_option("--root", eval_args->root, "Dataset root");
  evaluate_cmd->add_option("--config", eval_args->config_path,
                           "Run config JSON");
  evaluate_cmd->add_option("--out", eval_args->out, "Report directory");
  evaluate_cmd->add_option("--selection", eval_args->selection,
                           "forearm | wrist | custom");
  evaluate_cmd->add_option("--seed", eval_args->seed, "Run seed");
  evaluate_cmd->add_option("--jobs", eval_args->jobs,
                           "Worker threads (0 = all)");
  evaluate_cmd->add_option("--sequences", eval_args->sequences,
                           "Number of code sequences");
  evaluate_cmd->callback(
      [eval_args, evaluate_cmd] { run_evaluate(*eval_args, *evaluate_cmd); });

  auto report_path = std::make_shared<std::string>("out/report.json");
  CLI::App* report = app.add_subcommand("report", "Pretty-print a report");
  report->add_option("path", *report_path, "Path to report.json");
  report->callback([report_path] { run_report(*report_path); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const emgbio::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
