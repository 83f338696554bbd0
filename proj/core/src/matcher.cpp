// core/src/matcher.cpp

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

#include "emgbio/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Cholesky>

#include "emgbio/errors.hpp"

namespace emgbio {

namespace {

// Cholesky-based inverse; fails (returns false) when the matrix is not
// numerically positive definite.
bool invert_spd(const Eigen::MatrixXd& m, Eigen::MatrixXd* inverse) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return false;
  *inverse = llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
  return inverse->allFinite();
}

}  // namespace

Template enroll(const Eigen::MatrixXd& vectors, int user, int gesture,
                double shrinkage, const std::string& selection_name) {
  const Eigen::Index n = vectors.rows();
  const Eigen::Index d = vectors.cols();
  if (n < 2) {
    throw Error("enrollment needs at least 2 feature vectors, got " +
                std::to_string(n));
  }
  if (shrinkage < 0.0 || shrinkage > 1.0) {
    throw Error("shrinkage must lie in [0, 1], got " + std::to_string(shrinkage));
  }

  Template t;
  t.user = user;
  t.gesture = gesture;
  t.selection_name = selection_name;
  t.shrinkage = shrinkage;
  t.training_vector_count = static_cast<int>(n);
  t.centroid = vectors.colwise().mean();

  const Eigen::MatrixXd centered = vectors.rowwise() - t.centroid.transpose();
  const Eigen::MatrixXd sample_cov =
      (centered.transpose() * centered) / static_cast<double>(n - 1);
  const double trace_scale = sample_cov.trace() / static_cast<double>(d);
  t.covariance = (1.0 - shrinkage) * sample_cov +
                 shrinkage * trace_scale *
                     Eigen::MatrixXd::Identity(d, d);

  if (!invert_spd(t.covariance, &t.inverse_covariance)) {
    throw Error("covariance for user " + std::to_string(user) + ", gesture " +
                std::to_string(gesture) +
                " is singular; increase shrinkage above " +
                std::to_string(shrinkage) + " or enroll more varied data");
  }
  return t;
}

double score_vector(const Eigen::VectorXd& p, const Template& t) {
  if (p.size() != t.centroid.size()) {
    throw Error("feature dimension " + std::to_string(p.size()) +
                " does not match template dimension " +
                std::to_string(t.centroid.size()));
  }
  const Eigen::VectorXd diff = p - t.centroid;
  const double quad = diff.dot(t.inverse_covariance * diff);
  // Tiny negatives can appear through rounding in the cached inverse.
  return std::sqrt(std::max(quad, 0.0));
}

double score_attempt(const FeatureSeries& series, const Template& t,
                     AttemptReduce reduce) {
  const int windows = series.window_count();
  if (windows < 1) throw Error("cannot score an attempt with no feature windows");

  std::vector<double> scores(static_cast<std::size_t>(windows));
  for (int k = 0; k < windows; ++k) {
    scores[static_cast<std::size_t>(k)] = score_vector(series.vectors.row(k), t);
  }
  switch (reduce) {
    case AttemptReduce::kMean: {
      double sum = 0.0;
      for (double s : scores) sum += s;
      return sum / windows;
    }
    case AttemptReduce::kMedian: {
      std::sort(scores.begin(), scores.end());
      const std::size_t mid = scores.size() / 2;
      return scores.size() % 2 ? scores[mid]
                               : 0.5 * (scores[mid - 1] + scores[mid]);
    }
    case AttemptReduce::kMin:
      return *std::min_element(scores.begin(), scores.end());
  }
  throw Error("unknown attempt reduction");
}

void refresh_inverse(Template* t) {
  if (!invert_spd(t->covariance, &t->inverse_covariance)) {
    throw Error("stored covariance for user " + std::to_string(t->user) +
                ", gesture " + std::to_string(t->gesture) + " is singular");
  }
}

}  // namespace emgbio
