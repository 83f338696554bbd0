// core/include/emgbio/matcher.hpp

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

#ifndef EMGBIO_MATCHER_HPP_
#define EMGBIO_MATCHER_HPP_

/// \file matcher.hpp
/// Per-(user, gesture) statistical templates and Mahalanobis scoring.
///
/// A template is the sample mean and regularized sample covariance of the
/// enrollment feature vectors (all windows of all enrollment trials pooled).
/// The covariance is shrunk toward a scaled identity,
///     Sigma = (1 - lambda) * S + lambda * (tr(S)/D) * I,
/// which keeps the distance well-defined when windows are scarce relative to
/// the feature dimension.  Scores are distances: lower means closer.

#include <string>

#include <Eigen/Core>

#include "emgbio/dsp.hpp"

namespace emgbio {

struct Template {
  int user = 0;
  int gesture = 0;
  std::string selection_name;
  Eigen::VectorXd centroid;
  Eigen::MatrixXd covariance;          // after shrinkage
  Eigen::MatrixXd inverse_covariance;  // cached at enrollment
  double shrinkage = 0.0;
  int training_vector_count = 0;

  int dims() const { return static_cast<int>(centroid.size()); }
};

/// How the per-window distances of one attempt trial reduce to one score.
enum class AttemptReduce {
  kMean,
  kMedian,
  kMin,
};

/// Builds a template from enrollment vectors (one row per vector).  Needs at
/// least 2 rows.  With shrinkage 0 a rank-deficient sample covariance is an
/// error; any positive shrinkage fixes it unless the data has zero spread.
Template enroll(const Eigen::MatrixXd& vectors, int user, int gesture,
                double shrinkage, const std::string& selection_name = {});

/// sqrt((p - mu)^T Sigma^-1 (p - mu)) using the cached inverse.
double score_vector(const Eigen::VectorXd& p, const Template& t);

/// One attempt = one trial's feature series; per-window distances reduced by
/// `reduce` (mean by default).
double score_attempt(const FeatureSeries& series, const Template& t,
                     AttemptReduce reduce = AttemptReduce::kMean);

/// Recomputes the inverse from `covariance` (used after deserialization).
void refresh_inverse(Template* t);

}  // namespace emgbio

#endif  // EMGBIO_MATCHER_HPP_
