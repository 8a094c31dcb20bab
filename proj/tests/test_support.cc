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

#include "test_support.h"

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace mslm::testing {

std::string data_path(const std::string& name) { return std::string(MSLM_TEST_DATA) + "/" + name; }

std::vector<GroupSample> rose_samples() {
  const std::vector<double> x = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
  const std::vector<double> bio = {
      67.32, 4.87, 68.92, 4.89, 69.33, 5.07, 71.66, 5.19, 72.26, 5.26,
      76.55, 5.73, 81.41, 5.82, 82.71, 6.09, 83.09, 6.15, 83.59, 6.17,
      83.91, 6.24, 84.67, 6.30, 85.34, 6.33, 87.41, 6.61, 88.21, 6.62};
  const std::vector<double> chem = {
      55.74, 4.82, 58.63, 4.97, 61.14, 5.01, 62.46, 5.06, 62.96, 5.13,
      64.55, 5.22, 66.87, 5.28, 67.93, 5.34, 68.38, 5.37, 68.88, 5.39,
      69.76, 5.40, 71.31, 5.42, 72.98, 5.54, 74.33, 5.65, 76.44, 5.74};
  return {GroupSample{.label = "Biological control", .x = x, .y = Mat(15, 2, bio)},
          GroupSample{.label = "Chemical control", .x = x, .y = Mat(15, 2, chem)}};
}

double rel_frobenius(const Mat& a, const Mat& b) {
  const double diff = frobenius_norm(subtract(a, b));
  const double scale = frobenius_norm(b);
  return scale > 0.0 ? diff / scale : diff;
}

Mat random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> normal;
  Mat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

Mat random_spd(std::mt19937_64& rng, std::size_t n, double eps) {
  const Mat m = random_matrix(rng, n + 2, n);
  return symmetrize(add(matmul(transpose(m), m), scale(Mat::identity(n), eps)));
}

Mat random_invertible(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unif(0.5, 3.0);
  std::bernoulli_distribution sign;
  Mat t = add(Mat::identity(n), scale(random_matrix(rng, n, n), 0.3));
  for (std::size_t j = 0; j < n; ++j) {
    const double s = unif(rng) * (sign(rng) ? 1.0 : -1.0);
    for (std::size_t i = 0; i < n; ++i) t(i, j) *= s;
  }
  return t;
}

std::vector<GroupSample> random_samples(std::mt19937_64& rng, std::size_t groups, std::size_t q,
                                        std::size_t n_min, std::size_t n_max) {
  std::uniform_int_distribution<std::size_t> size(n_min, n_max);
  std::uniform_real_distribution<double> xval(-3.0, 8.0);
  std::normal_distribution<double> normal;
  std::vector<GroupSample> out;
  for (std::size_t r = 0; r < groups; ++r) {
    const std::size_t n = size(rng);
    std::vector<double> x(n);
    for (double& v : x) v = xval(rng);
    std::vector<double> alpha(q), beta(q);
    for (std::size_t j = 0; j < q; ++j) {
      alpha[j] = 5.0 * normal(rng);
      beta[j] = normal(rng);
    }
    Mat y(n, q);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < q; ++j) y(i, j) = alpha[j] + beta[j] * x[i] + normal(rng);
    out.push_back(GroupSample{.label = "g" + std::to_string(r + 1), .x = x, .y = y});
  }
  return out;
}

Mat projection_matrix(const std::vector<double>& weights) {
  const std::size_t r = weights.size();
  double total = 0.0;
  for (double d : weights) total += d;
  Mat p = Mat::identity(r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) p(i, j) -= std::sqrt(weights[i] * weights[j]) / total;
  return p;
}

Mat projection_form_sh(const Mat& z, const std::vector<double>& weights) {
  Mat dz = z;
  for (std::size_t i = 0; i < z.rows(); ++i)
    for (std::size_t j = 0; j < z.cols(); ++j) dz(i, j) *= std::sqrt(weights[i]);
  return matmul(matmul(transpose(dz), projection_matrix(weights)), dz);
}

std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    if (a[k][k] == 0.0) throw std::runtime_error("solve_dense: singular system");
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double v = b[i];
    for (std::size_t j = i + 1; j < n; ++j) v -= a[i][j] * x[j];
    x[i] = v / a[i][i];
  }
  return x;
}

namespace {

// Residual sum of squares of y regressed on the design rows.
double least_squares_rss(const std::vector<std::vector<double>>& design,
                         const std::vector<double>& y) {
  const std::size_t p = design.front().size();
  std::vector<std::vector<double>> xtx(p, std::vector<double>(p, 0.0));
  std::vector<double> xty(p, 0.0);
  for (std::size_t i = 0; i < design.size(); ++i) {
    for (std::size_t a = 0; a < p; ++a) {
      xty[a] += design[i][a] * y[i];
      for (std::size_t b = 0; b < p; ++b) xtx[a][b] += design[i][a] * design[i][b];
    }
  }
  const std::vector<double> coef = solve_dense(xtx, xty);
  double rss = 0.0;
  for (std::size_t i = 0; i < design.size(); ++i) {
    double fit = 0.0;
    for (std::size_t a = 0; a < p; ++a) fit += design[i][a] * coef[a];
    rss += (y[i] - fit) * (y[i] - fit);
  }
  return rss;
}

}  // namespace

AncovaF ancova_slope_f(const std::vector<GroupSample>& samples) {
  const std::size_t r = samples.size();
  std::vector<std::vector<double>> full, reduced;
  std::vector<double> y;
  for (std::size_t g = 0; g < r; ++g) {
    for (std::size_t i = 0; i < samples[g].x.size(); ++i) {
      std::vector<double> f(2 * r, 0.0), red(r + 1, 0.0);
      f[g] = 1.0;
      f[r + g] = samples[g].x[i];
      red[g] = 1.0;
      red[r] = samples[g].x[i];
      full.push_back(f);
      reduced.push_back(red);
      y.push_back(samples[g].y(i, 0));
    }
  }
  const double rss_full = least_squares_rss(full, y);
  const double rss_reduced = least_squares_rss(reduced, y);
  const double df1 = static_cast<double>(r - 1);
  const double df2 = static_cast<double>(y.size() - 2 * r);
  return AncovaF{.f = ((rss_reduced - rss_full) / df1) / (rss_full / df2), .df1 = df1, .df2 = df2};
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace

double f_sf_quadrature(double x, double df1, double df2) {
  const double log_norm = 0.5 * df1 * std::log(df1) + 0.5 * df2 * std::log(df2) -
                          (std::lgamma(df1 / 2) + std::lgamma(df2 / 2) -
                           std::lgamma((df1 + df2) / 2));
  auto density = [&](double t) {
    if (t <= 0.0) return 0.0;
    return std::exp(log_norm + (df1 / 2 - 1) * std::log(t) -
                    (df1 + df2) / 2 * std::log(df2 + df1 * t));
  };
  // t = x + u / (1 - u) maps [0, 1) onto [x, inf).
  auto integrand = [&](double u) {
    if (u >= 1.0) return 0.0;
    const double w = 1.0 - u;
    return density(x + u / w) / (w * w);
  };
  // Split the unit interval so the adaptive rule sees the peak.
  double total = 0.0;
  const int pieces = 64;
  for (int k = 0; k < pieces; ++k) {
    const double a = static_cast<double>(k) / pieces;
    const double b = static_cast<double>(k + 1) / pieces;
    const double fa = integrand(a), fb = integrand(b), fm = integrand(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    total += simpson(integrand, a, b, fa, fm, fb, whole, 1e-15, 40);
  }
  return total;
}

CommandResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string err_path = (std::filesystem::temp_directory_path() /
                               ("mslm_cli_err_" + std::to_string(::getpid()) + "_" +
                                std::to_string(++counter))).string();
  const std::string cmd = std::string("'") + MSLM_CLI_PATH + "' " + args + " 2>'" + err_path + "'";
  CommandResult result;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed");
  std::array<char, 4096> buf;
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) result.out.append(buf.data(), got);
  const int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream err(err_path);
  std::stringstream ss;
  ss << err.rdbuf();
  result.err = ss.str();
  std::remove(err_path.c_str());
  return result;
}

}  // namespace mslm::testing
