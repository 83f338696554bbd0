// core/include/emgbio/det.hpp

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

#ifndef EMGBIO_DET_HPP_
#define EMGBIO_DET_HPP_

/// \file det.hpp
/// Error-tradeoff reduction of score pools.
///
/// Scores are distances (lower = closer).  An acceptance threshold t accepts
/// any score <= t, so FAR(t) = fraction of impostor scores <= t and
/// FRR(t) = fraction of genuine scores > t.  A DET curve sweeps t from
/// -inf (reject everything) to +inf (accept everything); the equal error
/// rate is read off at the FAR = FRR crossing, linearly interpolated between
/// the two bracketing sweep points when no point hits it exactly.
///
/// The fused variant sweeps a single operating parameter tau in [0, 1]
/// instead: per code m, the acceptance threshold at tau is the lower
/// empirical tau-quantile of that code's pooled (genuine + impostor) scores,
/// index min(floor(tau*n), n-1) of the sorted pool.  Per-attempt certainties
/// are fused by weighted vote (> 0.5 accepts) and tallied the same way.

#include <vector>

#include <Eigen/Core>

namespace emgbio {

struct ScorePool {
  std::vector<double> genuine;
  std::vector<double> impostor;
};

struct DetPoint {
  double param = 0.0;  // threshold value, or tau for fused curves
  double far = 0.0;
  double frr = 0.0;
};

struct DetCurve {
  /// Ordered loosest-rejection first: FAR non-decreasing, FRR non-increasing.
  std::vector<DetPoint> points;
  double eer = 0.0;
};

/// One attempt per row, one code per column; genuine and impostor rows are
/// independent attempts but columns are aligned across the two matrices.
struct AlignedPools {
  Eigen::MatrixXd genuine;
  Eigen::MatrixXd impostor;
};

/// EER of a curve whose points are ordered with FAR non-decreasing and FRR
/// non-increasing, spanning (FAR 0, FRR 1) .. (FAR 1, FRR 0).
double eer_from_points(const std::vector<DetPoint>& points);

/// Threshold sweep over all distinct pooled scores plus the two infinities.
DetCurve det_from_pools(const ScorePool& pool);

/// Fused sweep over `interior_points` + 2 evenly spaced tau values in [0, 1],
/// preceded by an all-reject sentinel point at param -1.
DetCurve fused_det(const AlignedPools& pools, const std::vector<double>& weights,
                   int interior_points = 512);

/// Lower empirical quantile of a sorted, non-empty pool: index
/// min(floor(level*n), n-1).
double empirical_quantile(const std::vector<double>& sorted, double level);

/// {Q1, median, Q3} with linear interpolation between order statistics
/// (quantile position p*(n-1)).  Input need not be sorted.
struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};
Quartiles quartiles(std::vector<double> values);

/// Linear-interpolation quantile at level p of unsorted values.
double quantile_linear(std::vector<double> values, double p);

}  // namespace emgbio

#endif  // EMGBIO_DET_HPP_
