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

// F-distribution machinery and the F transforms of the four multivariate
// criteria.

#pragma once

#include <cstddef>
#include <string>

#include "mslm/teststats.h"

namespace mslm {

/// Regularized incomplete beta I_x(a, b), Lentz continued fraction.
double incomplete_beta(double x, double a, double b);

/// P(F <= x) for F ~ F(df1, df2). Throws kParameter on x < 0 or df <= 0.
double f_cdf(double x, double df1, double df2);
/// P(F > x), evaluated directly so tiny tail probabilities keep precision.
double f_sf(double x, double df1, double df2);
/// Smallest x with f_cdf(x) >= p, by bisection to 1e-12 relative.
double f_quantile(double p, double df1, double df2);

struct FStat {
  double value = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;
  double p_value = 1.0;
  bool exact = false;
  std::string branch;  // which transform produced it
};

/// Exact transforms for nu_H = 1, q = 1, q = 2 and nu_H = 2; Rao's F
/// approximation otherwise.
FStat wilks_pvalue(const CriteriaValues& cv);
/// Throws kBoundary when V >= s.
FStat pillai_pvalue(const CriteriaValues& cv);
FStat lh_pvalue(const CriteriaValues& cv);
/// Upper bound on the Roy F; its p-value is a lower bound on the true one.
/// Never flagged exact.
FStat roy_bound(const CriteriaValues& cv);

/// Wilks threshold at level alpha: reject when lambda <= the returned value.
double wilks_critical_value(double alpha, std::size_t q, std::size_t nu_h, std::size_t nu_e);

struct LhCritical {
  double f_critical = 0.0;  // upper-alpha point of F(df1, df2)
  double u_critical = 0.0;  // same threshold on the trace scale
  double df1 = 0.0;
  double df2 = 0.0;
};

/// Critical value of the Lawley-Hotelling trace through its F
/// approximation, for an arbitrary (s, m, h).
LhCritical lh_critical_value(double alpha, const SmhParams& smh);

}  // namespace mslm
