// core/src/fusion.cpp

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

#include "emgbio/fusion.hpp"

#include <set>
#include <string>

#include "emgbio/errors.hpp"

namespace emgbio {

namespace {

// Stream-label tag separating sequence sampling from every other consumer of
// the run seed.
constexpr std::uint64_t kSequenceStreamTag = 0x5e9;

}  // namespace

CodeWeights normalize_weights(const std::map<int, double>& accuracy_by_gesture,
                              const CodeSequence& sequence) {
  if (sequence.codes.empty()) throw Error("cannot weight an empty code sequence");
  CodeWeights weights;
  weights.normalized.reserve(sequence.codes.size());
  double total = 0.0;
  for (int code : sequence.codes) {
    const auto it = accuracy_by_gesture.find(code);
    if (it == accuracy_by_gesture.end()) {
      throw Error("no accuracy entry for gesture " + std::to_string(code));
    }
    if (it->second < 0.0) {
      throw Error("accuracy for gesture " + std::to_string(code) +
                  " is negative (" + std::to_string(it->second) + ")");
    }
    weights.normalized.push_back(it->second);
    total += it->second;
  }
  if (total <= 0.0) {
    throw Error("all accuracies in the sequence are zero; weights undefined");
  }
  for (double& w : weights.normalized) w /= total;
  return weights;
}

int certainty_from_score(double score, double threshold) {
  return score <= threshold ? 1 : 0;
}

FusionDecision fuse(const std::vector<int>& certainties,
                    const CodeWeights& weights) {
  if (certainties.empty()) throw Error("cannot fuse an empty attempt");
  if (certainties.size() != weights.normalized.size()) {
    throw Error("certainty count " + std::to_string(certainties.size()) +
                " does not match weight count " +
                std::to_string(weights.normalized.size()));
  }
  FusionDecision decision;
  decision.certainties = certainties;
  for (std::size_t m = 0; m < certainties.size(); ++m) {
    if (certainties[m] != 0 && certainties[m] != 1) {
      throw Error("certainty values must be 0 or 1");
    }
    decision.discriminant += weights.normalized[m] * certainties[m];
  }
  decision.accepted = decision.discriminant > 0.5;
  return decision;
}

CodeSequence truncate_sequence(const CodeSequence& sequence, int m) {
  if (m < 1 || m > sequence.length()) {
    throw Error("cannot truncate a length-" + std::to_string(sequence.length()) +
                " sequence to " + std::to_string(m) + " codes");
  }
  return CodeSequence{{sequence.codes.begin(), sequence.codes.begin() + m}};
}

CodeSequence sample_sequence(Rng* rng, int m, const std::vector<int>& pool) {
  if (m < 1) throw Error("sequence length must be positive");
  if (static_cast<std::size_t>(m) > pool.size()) {
    throw Error("sequence length " + std::to_string(m) +
                " exceeds gesture pool size " + std::to_string(pool.size()));
  }
  std::set<int> distinct(pool.begin(), pool.end());
  if (distinct.size() != pool.size()) throw Error("gesture pool has duplicates");

  // Partial Fisher-Yates: the first m slots of a shuffled copy.
  std::vector<int> scratch = pool;
  CodeSequence sequence;
  sequence.codes.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const auto j = i + static_cast<int>(rng->below(scratch.size() - i));
    std::swap(scratch[static_cast<std::size_t>(i)], scratch[static_cast<std::size_t>(j)]);
    sequence.codes.push_back(scratch[static_cast<std::size_t>(i)]);
  }
  return sequence;
}

std::vector<CodeSequence> sample_sequences(std::uint64_t seed, int count, int m,
                                           const std::vector<int>& pool) {
  if (count < 0) throw Error("sequence count must be non-negative");
  std::vector<CodeSequence> sequences;
  sequences.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Rng rng = Rng::stream(seed, {kSequenceStreamTag, static_cast<std::uint64_t>(i)});
    sequences.push_back(sample_sequence(&rng, m, pool));
  }
  return sequences;
}

CodeSequence sample_sequence_excluding(Rng* rng, int m,
                                       const std::vector<int>& pool,
                                       const CodeSequence& forbidden) {
  constexpr int kMaxTries = 10000;
  for (int tries = 0; tries < kMaxTries; ++tries) {
    CodeSequence candidate = sample_sequence(rng, m, pool);
    if (!(candidate == forbidden)) return candidate;
  }
  throw Error("could not sample a sequence distinct from the forbidden one; "
              "the gesture pool admits too few sequences");
}

}  // namespace emgbio
