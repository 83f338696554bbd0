// core/src/evaluate.cpp

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

#include "emgbio/evaluate.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "emgbio/errors.hpp"
#include "emgbio/matcher.hpp"
#include "emgbio/parallel.hpp"
#include "emgbio/protocol.hpp"
#include "emgbio/rng.hpp"

namespace emgbio {
namespace {

// Substream tag for impostor sequence draws; keyed further by
// (genuine subject, sequence index, impostor subject, codelength) so an
// impostor's attack depends on whom it targets but not on the protocol.
constexpr std::uint64_t kImpostorStreamTag = 0x7a2;

double mean_of(const std::vector<double>& values) {
  if (values.empty()) throw Error("mean of empty vector");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

/// Pointwise accumulator for DET curves sharing one tau grid.
struct CurveSum {
  std::vector<DetPoint> sum;
  int count = 0;

  void add(const std::vector<DetPoint>& points) {
    if (sum.empty()) {
      sum = points;
      count = 1;
      return;
    }
    if (sum.size() != points.size())
      throw Error("cannot average DET curves over different grids");
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i].far += points[i].far;
      sum[i].frr += points[i].frr;
    }
    ++count;
  }

  std::vector<DetPoint> mean() const {
    if (count == 0) return {};
    std::vector<DetPoint> out = sum;
    for (DetPoint& p : out) {
      p.far /= count;
      p.frr /= count;
    }
    return out;
  }
};

/// Per-fold results, one slot per (scenario, codelength) cell.
struct FoldOutcome {
  std::vector<double> eers;                   // mean over sequences
  std::vector<std::vector<DetPoint>> curves;  // mean over sequences
};

struct SubjectOutcome {
  int subject = 0;
  std::vector<SubjectEer> eers;               // per cell
  std::vector<std::vector<DetPoint>> curves;  // per cell
};

/// Everything shared across folds of one evaluate() run.  Feature extraction
/// and weight calibration are memoized here; both caches only grow, and
/// std::map nodes are stable, so returned references survive later inserts.
class Engine {
 public:
  Engine(const DatasetManifest& manifest, const RunConfig& config)
      : manifest_(manifest),
        config_(config),
        selection_(config.resolve_selection()),
        pool_(config.gesture_pool()) {}

  const RunConfig& config() const { return config_; }
  const ChannelSelection& selection() const { return selection_; }
  const std::vector<int>& pool() const { return pool_; }
  const std::vector<CodeSequence>& sequences() const { return sequences_; }

  void set_sequences(std::vector<CodeSequence> sequences) {
    sequences_ = std::move(sequences);
  }

  const FeatureSeries& features(const TrialId& id) {
    std::lock_guard<std::mutex> lock(features_mutex_);
    auto it = features_.find(id);
    if (it != features_.end()) return it->second;
    auto entry = manifest_.entries.find(id);
    if (entry == manifest_.entries.end())
      throw Error("manifest has no record for " + id.name());
    std::vector<std::string> local;
    SignalRecord record = load_record(entry->second, &local);
    for (std::string& w : local) warn(std::move(w));
    FeatureSeries series =
        extract_series(record, selection_, config_.window, config_.fdt);
    return features_.emplace(id, std::move(series)).first->second;
  }

  /// Per-gesture accuracies for one fold's enrollment set, from an internal
  /// leave-one-out pass: hold out each enrollment trial, enroll on the rest,
  /// score the held-out trial as genuine and every cohort subject's matching
  /// trial as an impostor, then 1 - EER per gesture (EERs averaged per
  /// enrollment day first, so two-day enrollment sets weigh days equally).
  /// Memoized on (subject, enrollment set, cohort): within-day and
  /// single-cross-day folds share enrollment sets and therefore weights.
  const std::map<int, double>& accuracies(const Fold& fold,
                                          const std::vector<int>& cohort) {
    std::vector<TrialRef> enrollment = fold.enrollment;
    std::sort(enrollment.begin(), enrollment.end());
    WeightsKey key{fold.subject, std::move(enrollment), cohort};
    {
      std::lock_guard<std::mutex> lock(weights_mutex_);
      auto it = weights_.find(key);
      if (it != weights_.end()) return it->second;
    }
    std::map<int, double> acc = compute_accuracies(fold, cohort);
    std::lock_guard<std::mutex> lock(weights_mutex_);
    return weights_.emplace(std::move(key), std::move(acc)).first->second;
  }

  /// Enrollment matrix for (subject, gesture): all windows of the given
  /// trials stacked row-wise, optionally skipping one held-out trial.
  Eigen::MatrixXd stack(int subject, int gesture,
                        const std::vector<TrialRef>& refs,
                        const TrialRef* skip) {
    std::vector<const FeatureSeries*> parts;
    for (const TrialRef& r : refs) {
      if (skip != nullptr && r == *skip) continue;
      parts.push_back(&features({r.session, subject, gesture, r.trial}));
    }
    if (parts.empty()) throw Error("no enrollment trials to stack");
    Eigen::Index rows = 0;
    for (const FeatureSeries* p : parts) rows += p->vectors.rows();
    Eigen::MatrixXd out(rows, parts.front()->vectors.cols());
    Eigen::Index at = 0;
    for (const FeatureSeries* p : parts) {
      out.middleRows(at, p->vectors.rows()) = p->vectors;
      at += p->vectors.rows();
    }
    return out;
  }

  void warn(std::string message) {
    std::lock_guard<std::mutex> lock(warnings_mutex_);
    warnings_.push_back(std::move(message));
  }

  std::vector<std::string> take_warnings() {
    std::lock_guard<std::mutex> lock(warnings_mutex_);
    return std::move(warnings_);
  }

 private:
  using WeightsKey = std::tuple<int, std::vector<TrialRef>, std::vector<int>>;

  std::map<int, double> compute_accuracies(const Fold& fold,
                                           const std::vector<int>& cohort) {
    std::map<int, double> acc;
    if (fold.enrollment.size() < 2) {
      // Leave-one-out needs at least two enrollment trials; fall back to
      // uniform weights rather than refusing tiny grids outright.
      bool first = false;
      {
        std::lock_guard<std::mutex> lock(warnings_mutex_);
        first = !warned_uniform_weights_;
        warned_uniform_weights_ = true;
      }
      if (first)
        warn("enrollment sets of one trial: using uniform code weights");
      for (int g : pool_) acc[g] = 1.0;
      return acc;
    }
    for (int g : pool_) {
      std::map<int, ScorePool> by_day;
      for (const TrialRef& held : fold.enrollment) {
        Template t = enroll(stack(fold.subject, g, fold.enrollment, &held),
                            fold.subject, g, config_.shrinkage, selection_.name);
        ScorePool& day_pool = by_day[held.session];
        day_pool.genuine.push_back(
            score_attempt(features({held.session, fold.subject, g, held.trial}),
                          t, config_.attempt_reduce));
        for (int k : cohort) {
          if (k == fold.subject) continue;
          day_pool.impostor.push_back(
              score_attempt(features({held.session, k, g, held.trial}), t,
                            config_.attempt_reduce));
        }
      }
      double sum = 0.0;
      for (const auto& [day, day_pool] : by_day)
        sum += det_from_pools(day_pool).eer;
      acc[g] = 1.0 - sum / static_cast<double>(by_day.size());
    }
    return acc;
  }

  const DatasetManifest& manifest_;
  const RunConfig& config_;
  ChannelSelection selection_;
  std::vector<int> pool_;
  std::vector<CodeSequence> sequences_;

  std::map<TrialId, FeatureSeries> features_;
  std::mutex features_mutex_;
  std::map<WeightsKey, std::map<int, double>> weights_;
  std::mutex weights_mutex_;
  std::vector<std::string> warnings_;
  std::mutex warnings_mutex_;
  bool warned_uniform_weights_ = false;
};

FoldOutcome process_fold(Engine* eng, const Fold& fold,
                         const std::vector<int>& cohort) {
  const RunConfig& config = eng->config();
  std::vector<int> impostors;
  for (int k : cohort)
    if (k != fold.subject) impostors.push_back(k);
  if (impostors.empty()) {
    std::ostringstream msg;
    msg << "subject " << fold.subject << " day " << fold.day << " fold "
        << fold.fold_index << ": cohort has no impostors";
    throw Error(msg.str());
  }

  std::map<int, Template> templates;
  for (int g : eng->pool())
    templates.emplace(
        g, enroll(eng->stack(fold.subject, g, fold.enrollment, nullptr),
                  fold.subject, g, config.shrinkage, eng->selection().name));

  const std::map<int, double>& acc = eng->accuracies(fold, cohort);

  // Attempt scores this fold can reuse across sequences/scenarios/lengths.
  std::map<std::tuple<int, int, int, int, int>, double> score_cache;
  auto attempt = [&](int claimant, const TrialRef& ref, int performed,
                     int code) {
    const auto key = std::make_tuple(claimant, ref.session, ref.trial,
                                     performed, code);
    auto it = score_cache.find(key);
    if (it != score_cache.end()) return it->second;
    const double s = score_attempt(
        eng->features({ref.session, claimant, performed, ref.trial}),
        templates.at(code), config.attempt_reduce);
    score_cache.emplace(key, s);
    return s;
  };

  const auto& scenarios = config.scenarios;
  const auto& lengths = config.codelengths;
  const std::size_t cells = scenarios.size() * lengths.size();
  const std::size_t n_seq = eng->sequences().size();
  std::vector<double> eer_sums(cells, 0.0);
  std::vector<CurveSum> curve_sums(cells);

  const Eigen::Index n_claim = static_cast<Eigen::Index>(fold.claimants.size());
  for (std::size_t si = 0; si < n_seq; ++si) {
    for (std::size_t sci = 0; sci < scenarios.size(); ++sci) {
      for (std::size_t mi = 0; mi < lengths.size(); ++mi) {
        const int m = lengths[mi];
        const CodeSequence genuine =
            truncate_sequence(eng->sequences()[si], m);
        const CodeWeights weights = normalize_weights(acc, genuine);

        AlignedPools pools;
        pools.genuine.resize(n_claim, m);
        for (Eigen::Index r = 0; r < n_claim; ++r) {
          const TrialRef& ref = fold.claimants[static_cast<std::size_t>(r)];
          for (int c = 0; c < m; ++c)
            pools.genuine(r, c) =
                attempt(fold.subject, ref, genuine.codes[c], genuine.codes[c]);
        }
        pools.impostor.resize(
            static_cast<Eigen::Index>(impostors.size()) * n_claim, m);
        Eigen::Index row = 0;
        for (int k : impostors) {
          CodeSequence attack = genuine;
          if (scenarios[sci] == Scenario::kNormal) {
            Rng rng = Rng::stream(
                config.seed,
                {kImpostorStreamTag, static_cast<std::uint64_t>(fold.subject),
                 static_cast<std::uint64_t>(si),
                 static_cast<std::uint64_t>(k),
                 static_cast<std::uint64_t>(m)});
            attack = sample_sequence_excluding(&rng, m, eng->pool(), genuine);
          }
          for (const TrialRef& ref : fold.claimants) {
            for (int c = 0; c < m; ++c)
              pools.impostor(row, c) =
                  attempt(k, ref, attack.codes[c], genuine.codes[c]);
            ++row;
          }
        }

        const DetCurve curve = fused_det(pools, weights.normalized);
        const std::size_t cell = sci * lengths.size() + mi;
        eer_sums[cell] += curve.eer;
        curve_sums[cell].add(curve.points);
      }
    }
  }

  FoldOutcome out;
  out.eers.resize(cells);
  out.curves.resize(cells);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    out.eers[cell] = eer_sums[cell] / static_cast<double>(n_seq);
    out.curves[cell] = curve_sums[cell].mean();
  }
  return out;
}

SubjectOutcome process_subject(Engine* eng, Protocol protocol,
                               const std::vector<const Fold*>& folds,
                               const std::map<int, std::vector<int>>& by_day,
                               const std::vector<int>& plan_cohort) {
  const RunConfig& config = eng->config();
  const std::size_t cells =
      config.scenarios.size() * config.codelengths.size();

  // day -> per-cell fold results.  EERs average fold -> day -> subject so a
  // day with fewer folds is not underweighted; curves average the same way.
  std::map<int, std::vector<std::vector<double>>> eers_by_day;
  std::map<int, std::vector<CurveSum>> curves_by_day;
  for (const Fold* fold : folds) {
    const std::vector<int>& cohort = protocol == Protocol::kWithinDay
                                         ? by_day.at(fold->day)
                                         : plan_cohort;
    FoldOutcome out = process_fold(eng, *fold, cohort);
    auto& day_eers = eers_by_day[fold->day];
    auto& day_curves = curves_by_day[fold->day];
    day_eers.resize(cells);
    day_curves.resize(cells);
    for (std::size_t cell = 0; cell < cells; ++cell) {
      day_eers[cell].push_back(out.eers[cell]);
      day_curves[cell].add(out.curves[cell]);
    }
  }

  SubjectOutcome so;
  so.subject = folds.front()->subject;
  so.eers.resize(cells);
  so.curves.resize(cells);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    SubjectEer se;
    se.subject = so.subject;
    double sum = 0.0;
    for (const auto& [day, per_cell] : eers_by_day) {
      const double day_eer = mean_of(per_cell[cell]);
      se.per_day.emplace_back(day, day_eer);
      sum += day_eer;
    }
    se.eer = sum / static_cast<double>(se.per_day.size());
    CurveSum subject_curve;
    for (const auto& [day, per_cell] : curves_by_day)
      subject_curve.add(per_cell[cell].mean());
    so.eers[cell] = std::move(se);
    so.curves[cell] = subject_curve.mean();
  }
  return so;
}

}  // namespace

EvalResult evaluate(const DatasetManifest& manifest, const RunConfig& config) {
  Engine eng(manifest, config);
  if (eng.pool().empty()) throw Error("gesture pool is empty");
  if (config.sequence_count < 1) throw Error("sequence_count must be >= 1");

  const int base_length =
      std::min(6, static_cast<int>(eng.pool().size()));
  for (int m : config.codelengths) {
    if (m < 1 || m > base_length) {
      std::ostringstream msg;
      msg << "codelength " << m << " outside 1.." << base_length
          << " supported by a pool of " << eng.pool().size() << " gestures";
      throw Error(msg.str());
    }
  }
  eng.set_sequences(sample_sequences(config.seed, config.sequence_count,
                                     base_length, eng.pool()));

  EvalResult result;
  result.selection_name = eng.selection().name;
  result.sequences = eng.sequences();

  for (Protocol protocol : config.protocols) {
    FoldPlan plan = fold_plan(protocol, manifest, eng.pool());
    for (std::string& w : plan.warnings) result.warnings.push_back(std::move(w));
    for (int s : plan.skipped_subjects)
      result.skipped.emplace_back(protocol_name(protocol), s);

    // Impostor cohorts.  Within-day impostors only need the fold's day;
    // cross-day folds touch all days, so their cohort is the set of subjects
    // the plan kept.
    std::map<int, std::vector<int>> by_day;
    std::vector<int> plan_cohort;
    if (protocol == Protocol::kWithinDay) {
      for (int day = 1; day <= manifest.grid.sessions; ++day) {
        std::vector<int>& usable = by_day[day];
        for (int subject = 1; subject <= manifest.grid.subjects; ++subject)
          if (subject_day_usable(manifest, subject, day, eng.pool()))
            usable.push_back(subject);
      }
    } else {
      std::set<int> seen;
      for (const Fold& fold : plan.folds) seen.insert(fold.subject);
      plan_cohort.assign(seen.begin(), seen.end());
    }

    // Group folds by subject (plan order is already subject-major).
    std::vector<int> subjects;
    std::vector<std::vector<const Fold*>> groups;
    for (const Fold& fold : plan.folds) {
      if (subjects.empty() || subjects.back() != fold.subject) {
        subjects.push_back(fold.subject);
        groups.emplace_back();
      }
      groups.back().push_back(&fold);
    }

    std::vector<SubjectOutcome> outcomes(subjects.size());
    parallel_for(subjects.size(), config.jobs, [&](std::size_t i) {
      outcomes[i] =
          process_subject(&eng, protocol, groups[i], by_day, plan_cohort);
    });

    const auto& scenarios = config.scenarios;
    const auto& lengths = config.codelengths;
    for (std::size_t sci = 0; sci < scenarios.size(); ++sci) {
      for (std::size_t mi = 0; mi < lengths.size(); ++mi) {
        const std::size_t cell = sci * lengths.size() + mi;
        ConfigResult cr;
        cr.protocol = protocol;
        cr.scenario = scenarios[sci];
        cr.codelength = lengths[mi];
        CurveSum cohort_curve;
        std::vector<double> eers;
        for (const SubjectOutcome& so : outcomes) {
          cr.subjects.push_back(so.eers[cell]);
          eers.push_back(so.eers[cell].eer);
          cohort_curve.add(so.curves[cell]);
        }
        if (eers.empty()) {
          eng.warn(protocol_name(protocol) + ": no usable subjects");
        } else {
          cr.cohort = quartiles(eers);
          cr.mean_curve = cohort_curve.mean();
        }
        result.results.push_back(std::move(cr));
      }
    }
  }

  std::vector<std::string> engine_warnings = eng.take_warnings();
  for (std::string& w : engine_warnings)
    result.warnings.push_back(std::move(w));
  return result;
}

}  // namespace emgbio
