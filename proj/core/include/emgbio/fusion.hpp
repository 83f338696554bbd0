// core/include/emgbio/fusion.hpp

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

#ifndef EMGBIO_FUSION_HPP_
#define EMGBIO_FUSION_HPP_

/// \file fusion.hpp
/// Decision-level fusion of per-gesture authentication decisions.
///
/// An authentication sequence is an ordered list of M distinct gesture codes.
/// Each code yields a binary certainty d_m (1 = the attempt matched the
/// template at the operating threshold); the fused discriminant is the
/// weighted vote g = sum w_m d_m with weights normalized to 1, and the
/// attempt is accepted iff g exceeds 0.5 strictly.  Weights come from
/// per-gesture recognition accuracy, so stronger gestures carry more votes.

#include <cstdint>
#include <map>
#include <vector>

#include "emgbio/rng.hpp"

namespace emgbio {

struct CodeSequence {
  std::vector<int> codes;  // distinct gesture ids, length 1..6

  int length() const { return static_cast<int>(codes.size()); }
  bool operator==(const CodeSequence&) const = default;
};

struct CodeWeights {
  std::vector<double> normalized;  // per code, non-negative, sums to 1
};

struct FusionDecision {
  std::vector<int> certainties;  // d_m, each 0 or 1
  double discriminant = 0.0;     // g
  bool accepted = false;         // g > 0.5, strict
};

/// w_m = a_m / sum(a_k) over the sequence's codes.  Every code must have an
/// accuracy entry and at least one must be positive.
CodeWeights normalize_weights(const std::map<int, double>& accuracy_by_gesture,
                              const CodeSequence& sequence);

/// d = 1 iff score <= threshold (score is a distance; the boundary accepts).
int certainty_from_score(double score, double threshold);

FusionDecision fuse(const std::vector<int>& certainties,
                    const CodeWeights& weights);

/// First m codes of a length->=m sequence.
CodeSequence truncate_sequence(const CodeSequence& sequence, int m);

/// One sequence of m distinct codes drawn uniformly from the pool.
CodeSequence sample_sequence(Rng* rng, int m, const std::vector<int>& pool);

/// `count` sequences, deterministic from the seed.  Sequence i depends only
/// on (seed, i), so extending `count` keeps earlier sequences stable.
std::vector<CodeSequence> sample_sequences(std::uint64_t seed, int count, int m,
                                           const std::vector<int>& pool);

/// A sequence distinct (as a whole) from `forbidden`; used for impostor
/// attempts that must not replay the genuine sequence.
CodeSequence sample_sequence_excluding(Rng* rng, int m,
                                       const std::vector<int>& pool,
                                       const CodeSequence& forbidden);

}  // namespace emgbio

#endif  // EMGBIO_FUSION_HPP_
