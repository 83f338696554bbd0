// core/src/det.cpp

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

#include "emgbio/det.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "emgbio/errors.hpp"

namespace emgbio {

double eer_from_points(const std::vector<DetPoint>& points) {
  if (points.empty()) throw Error("cannot take the EER of an empty curve");
  std::size_t cross = points.size();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].far >= points[i].frr) {
      cross = i;
      break;
    }
  }
  if (cross == points.size()) {
    throw Error("DET curve never reaches FAR >= FRR; curve does not span the sweep");
  }
  const DetPoint& hi = points[cross];
  if (hi.far == hi.frr) return hi.far;
  if (cross == 0) {
    throw Error("DET curve starts with FAR > FRR; missing the all-reject endpoint");
  }
  const DetPoint& lo = points[cross - 1];
  // Linear crossing of the segment lo -> hi, where FAR rises through FRR.
  const double alpha =
      (lo.frr - lo.far) / ((hi.far - lo.far) - (hi.frr - lo.frr));
  return lo.far + alpha * (hi.far - lo.far);
}

DetCurve det_from_pools(const ScorePool& pool) {
  if (pool.genuine.empty()) throw Error("genuine score pool is empty");
  if (pool.impostor.empty()) throw Error("impostor score pool is empty");

  std::vector<double> thresholds;
  thresholds.reserve(pool.genuine.size() + pool.impostor.size() + 2);
  thresholds.push_back(-std::numeric_limits<double>::infinity());
  thresholds.insert(thresholds.end(), pool.genuine.begin(), pool.genuine.end());
  thresholds.insert(thresholds.end(), pool.impostor.begin(), pool.impostor.end());
  std::sort(thresholds.begin() + 1, thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  thresholds.push_back(std::numeric_limits<double>::infinity());

  std::vector<double> genuine_sorted = pool.genuine;
  std::vector<double> impostor_sorted = pool.impostor;
  std::sort(genuine_sorted.begin(), genuine_sorted.end());
  std::sort(impostor_sorted.begin(), impostor_sorted.end());

  DetCurve curve;
  curve.points.reserve(thresholds.size());
  for (double t : thresholds) {
    const auto imp_accepted = static_cast<std::size_t>(
        std::upper_bound(impostor_sorted.begin(), impostor_sorted.end(), t) -
        impostor_sorted.begin());
    const auto gen_accepted = static_cast<std::size_t>(
        std::upper_bound(genuine_sorted.begin(), genuine_sorted.end(), t) -
        genuine_sorted.begin());
    DetPoint point;
    point.param = t;
    point.far = static_cast<double>(imp_accepted) /
                static_cast<double>(impostor_sorted.size());
    point.frr = static_cast<double>(genuine_sorted.size() - gen_accepted) /
                static_cast<double>(genuine_sorted.size());
    curve.points.push_back(point);
  }
  curve.eer = eer_from_points(curve.points);
  return curve;
}

double empirical_quantile(const std::vector<double>& sorted, double level) {
  if (sorted.empty()) throw Error("cannot take a quantile of an empty pool");
  const auto n = sorted.size();
  const auto idx = std::min(
      static_cast<std::size_t>(level * static_cast<double>(n)), n - 1);
  return sorted[idx];
}

DetCurve fused_det(const AlignedPools& pools, const std::vector<double>& weights,
                   int interior_points) {
  const Eigen::Index m = pools.genuine.cols();
  if (m < 1) throw Error("fused sweep needs at least one code");
  if (pools.impostor.cols() != m) {
    throw Error("genuine and impostor pools disagree on code count");
  }
  if (static_cast<Eigen::Index>(weights.size()) != m) {
    throw Error("weight count " + std::to_string(weights.size()) +
                " does not match code count " + std::to_string(m));
  }
  if (pools.genuine.rows() < 1) throw Error("genuine score pool is empty");
  if (pools.impostor.rows() < 1) throw Error("impostor score pool is empty");
  if (interior_points < 1) throw Error("sweep needs at least one interior point");

  // Per-code calibration pools: every score observed against that code's
  // template, sorted once.
  std::vector<std::vector<double>> calibration(static_cast<std::size_t>(m));
  for (Eigen::Index c = 0; c < m; ++c) {
    auto& cal = calibration[static_cast<std::size_t>(c)];
    cal.reserve(static_cast<std::size_t>(pools.genuine.rows() + pools.impostor.rows()));
    for (Eigen::Index r = 0; r < pools.genuine.rows(); ++r) {
      cal.push_back(pools.genuine(r, c));
    }
    for (Eigen::Index r = 0; r < pools.impostor.rows(); ++r) {
      cal.push_back(pools.impostor(r, c));
    }
    std::sort(cal.begin(), cal.end());
  }

  const double n_gen = static_cast<double>(pools.genuine.rows());
  const double n_imp = static_cast<double>(pools.impostor.rows());
  const int grid = interior_points + 2;  // tau = k / (grid - 1), k = 0..grid-1

  DetCurve curve;
  curve.points.reserve(static_cast<std::size_t>(grid) + 1);
  // All-reject sentinel so the curve always brackets the EER crossing.
  curve.points.push_back(DetPoint{-1.0, 0.0, 1.0});

  std::vector<double> thresholds(static_cast<std::size_t>(m));
  for (int k = 0; k < grid; ++k) {
    const double tau = static_cast<double>(k) / static_cast<double>(grid - 1);
    for (Eigen::Index c = 0; c < m; ++c) {
      thresholds[static_cast<std::size_t>(c)] =
          empirical_quantile(calibration[static_cast<std::size_t>(c)], tau);
    }
    auto accepted = [&](const Eigen::MatrixXd& rows, Eigen::Index r) {
      double g = 0.0;
      for (Eigen::Index c = 0; c < m; ++c) {
        if (rows(r, c) <= thresholds[static_cast<std::size_t>(c)]) {
          g += weights[static_cast<std::size_t>(c)];
        }
      }
      return g > 0.5;
    };
    std::size_t false_accepts = 0;
    for (Eigen::Index r = 0; r < pools.impostor.rows(); ++r) {
      if (accepted(pools.impostor, r)) ++false_accepts;
    }
    std::size_t false_rejects = 0;
    for (Eigen::Index r = 0; r < pools.genuine.rows(); ++r) {
      if (!accepted(pools.genuine, r)) ++false_rejects;
    }
    curve.points.push_back(DetPoint{tau, static_cast<double>(false_accepts) / n_imp,
                                    static_cast<double>(false_rejects) / n_gen});
  }
  curve.eer = eer_from_points(curve.points);
  return curve;
}

double quantile_linear(std::vector<double> values, double p) {
  if (values.empty()) throw Error("cannot take a quantile of no values");
  if (p < 0.0 || p > 1.0) throw Error("quantile level must be in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

Quartiles quartiles(std::vector<double> values) {
  Quartiles q;
  q.q1 = quantile_linear(values, 0.25);
  q.median = quantile_linear(values, 0.5);
  q.q3 = quantile_linear(values, 0.75);
  return q;
}

}  // namespace emgbio
