// benchmarks/bench_main.cpp

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

// Microbenchmarks for the per-attempt hot path: feature extraction of one
// window, Mahalanobis scoring, DET reduction, and record encode/decode.

#include <benchmark/benchmark.h>

#include <vector>

#include "emgbio/det.hpp"
#include "emgbio/dsp.hpp"
#include "emgbio/matcher.hpp"
#include "emgbio/record.hpp"
#include "emgbio/rng.hpp"

namespace {

using namespace emgbio;

Eigen::MatrixXd random_window(int rows, int cols, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, {0xbe7c});
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.normal();
  return m;
}

void BM_FdtWindow(benchmark::State& state) {
  const WindowSpec wspec;
  const FdtConfig fconfig;
  const Eigen::MatrixXd window =
      random_window(wspec.window_len_samples, 8, 17);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fdt_features(window, fconfig, 2048.0));
  }
}
BENCHMARK(BM_FdtWindow);

void BM_ScoreVector(benchmark::State& state) {
  const int dims = 48;
  const Eigen::MatrixXd train = random_window(400, dims, 5);
  const Template t = enroll(train, 1, 1, 0.01);
  const Eigen::VectorXd probe = random_window(dims, 1, 9).col(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(score_vector(probe, t));
  }
}
BENCHMARK(BM_ScoreVector);

void BM_DetFromPools(benchmark::State& state) {
  Rng rng = Rng::stream(3, {0xde7});
  ScorePool pool;
  for (int i = 0; i < 500; ++i) {
    pool.genuine.push_back(rng.normal());
    pool.impostor.push_back(rng.normal() + 1.5);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(det_from_pools(pool));
  }
}
BENCHMARK(BM_DetFromPools);

void BM_DecodeSignal(benchmark::State& state) {
  SignalRecord record;
  record.id = TrialId{1, 1, 1, 1};
  record.sampling_rate_hz = 2048.0;
  record.samples = random_window(10240, 32, 21) * 0.1;
  const EncodedRecord encoded = encode_record(record, 500.0);
  for (auto _ : state) {
    RecordHeader header = parse_header(encoded.header_text);
    benchmark::DoNotOptimize(decode_signal(encoded.signal_bytes, header));
  }
}
BENCHMARK(BM_DecodeSignal);

}  // namespace

BENCHMARK_MAIN();
