// Copyright 2026 The mslm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Simulation harness for empirical size and power of the four criteria
// under matrix-elliptical error laws.
//
// Each replicate draws one N x q error matrix for the stacked groups as
//   E = r * Z * L'
// where Z has i.i.d. standard normal entries, L L' = Sigma, and r is a single
// radial mixing scalar for the whole matrix (r = 1 for the Gaussian family).
// Sharing r across rows is what makes the law matrix-elliptical rather than
// a product of independent elliptical rows.

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mslm/hypothesis.h"
#include "mslm/linalg.h"

namespace mslm {

enum class FamilyKind { kGaussian, kStudentT, kContaminatedNormal };

struct ErrorFamily {
  FamilyKind kind = FamilyKind::kGaussian;
  double dof = 0.0;    // StudentT, > 2
  double eps = 0.0;    // ContaminatedNormal mixing probability, [0, 1)
  double scale = 1.0;  // ContaminatedNormal inflation, > 1
  Mat sigma;           // q x q row covariance, SPD

  static ErrorFamily gaussian(Mat sigma);
  static ErrorFamily student_t(double dof, Mat sigma);
  static ErrorFamily contaminated_normal(double eps, double scale, Mat sigma);

  /// "gaussian", "t:5", "contaminated:0.1,3". Parsed by parse_family().
  std::string label() const;
  /// Throws kParameter when a parameter is out of range or sigma is not SPD.
  void validate() const;
};

ErrorFamily parse_family(const std::string& text, Mat sigma);

inline constexpr const char* kPrngName =
    "mt19937_64 seeded via splitmix64(seed, replicate, stream); std::normal_distribution";

/// Independent engines for one replicate. Normal draws and the radial
/// mixing variate come from different streams so families that share a
/// seed also share their normal draws.
struct ReplicateStreams {
  std::mt19937_64 noise;
  std::mt19937_64 mixing;
};

ReplicateStreams replicate_streams(std::uint64_t seed, std::uint64_t replicate);

/// n x q error matrix from the family, drawn from the given streams.
Mat sample_errors(const ErrorFamily& family, std::size_t n, ReplicateStreams& streams);

struct SimGroup {
  std::string label;
  std::vector<double> x;
  Mat coefficients;  // 2 x q: row 0 intercepts, row 1 slopes
};

struct SimConfig {
  std::vector<SimGroup> groups;
  HypothesisSpec hypothesis = HypothesisSpec::parallelism();
  double alpha = 0.05;
  std::size_t replications = 1000;
  std::uint64_t seed = 0;
  std::vector<ErrorFamily> families;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;

  void validate() const;
};

struct StatSummary {
  double mean = 0.0;
  double q05 = 0.0;
  double q50 = 0.0;
  double q95 = 0.0;
};

struct CriterionResult {
  std::string name;  // wilks, roy, pillai, lawley_hotelling
  std::size_t rejections = 0;
  double rejection_rate = 0.0;  // rejections / completed
  StatSummary statistic;
};

struct SimResult {
  std::string family;
  std::vector<CriterionResult> criteria;
  std::size_t replications = 0;
  std::size_t completed = 0;
  std::size_t failed = 0;
  std::vector<std::string> failure_messages;  // first few, in replicate order
  std::uint64_t seed = 0;
  std::string prng = kPrngName;

  const CriterionResult& criterion(const std::string& name) const;
};

/// One SimResult per configured family, in configuration order. Bit-for-bit
/// reproducible for a given config regardless of the thread count.
std::vector<SimResult> run(const SimConfig& config);

/// R groups sharing x = 1..n and identical coefficients, Sigma = I_q, the
/// three reference families (Gaussian, t(5), contaminated(0.1, 3)).
SimConfig null_config(std::size_t groups, std::size_t q, std::size_t n,
                      std::size_t replications, std::uint64_t seed);

/// Same as null_config but group r's slopes are shifted by r * slope_shift
/// in every response.
SimConfig shifted_slopes_config(std::size_t groups, std::size_t q, std::size_t n,
                                double slope_shift, std::size_t replications,
                                std::uint64_t seed);

}  // namespace mslm
