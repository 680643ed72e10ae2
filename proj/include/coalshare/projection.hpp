// Copyright 2026 Coalshare Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COALSHARE_PROJECTION_HPP
#define COALSHARE_PROJECTION_HPP

#include <algorithm>
#include <cmath>
#include <vector>

namespace coalshare {

/// Euclidean projection of v onto {u : u >= 0, sum(u) <= cap}, in place.
/// If clamping negatives already satisfies the sum bound that clamp is the
/// projection; otherwise the sum constraint is active and the standard
/// simplex threshold applies.
inline void project_capped_simplex(double* v, int len, double cap,
                                   std::vector<double>& scratch) {
  double sum_pos = 0.0;
  for (int i = 0; i < len; ++i) sum_pos += std::max(v[i], 0.0);
  if (sum_pos <= cap) {
    for (int i = 0; i < len; ++i) v[i] = std::max(v[i], 0.0);
    return;
  }
  scratch.assign(v, v + len);
  std::sort(scratch.begin(), scratch.end(), std::greater<double>());
  double cum = 0.0;
  double theta = 0.0;
  for (int j = 0; j < len; ++j) {
    cum += scratch[j];
    const double candidate = (cum - cap) / (j + 1);
    if (j + 1 == len || candidate >= scratch[j + 1]) {
      theta = candidate;
      break;
    }
  }
  for (int i = 0; i < len; ++i) v[i] = std::max(v[i] - theta, 0.0);
}

/// Projects row-major matrices onto the transportation-style polytope
///   { X >= 0, row sums <= row_cap, column sums <= col_cap }
/// with Dykstra's alternating projections between the row set and the column
/// set (the non-negativity box is folded into both). A final downscaling pass
/// makes the result exactly feasible; scaling rows or columns down can never
/// push another sum over its cap.
class CappedMatrixProjector {
 public:
  CappedMatrixProjector(std::vector<double> row_cap, std::vector<double> col_cap)
      : rows_(static_cast<int>(row_cap.size())),
        cols_(static_cast<int>(col_cap.size())),
        row_cap_(std::move(row_cap)),
        col_cap_(std::move(col_cap)) {
    for (double c : row_cap_) cap_scale_ = std::max(cap_scale_, c);
    for (double c : col_cap_) cap_scale_ = std::max(cap_scale_, c);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  /// In-place projection of x (size rows*cols, row-major).
  void project(std::vector<double>& x, double tol = 1e-11,
               int max_sweeps = 2000) const {
    const std::size_t sz = x.size();
    p_.assign(sz, 0.0);
    q_.assign(sz, 0.0);
    y_.resize(sz);
    col_buf_.resize(rows_);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      // y = P_rows(x + p); p = x + p - y
      for (std::size_t t = 0; t < sz; ++t) y_[t] = x[t] + p_[t];
      for (int r = 0; r < rows_; ++r) {
        project_capped_simplex(y_.data() + static_cast<std::size_t>(r) * cols_, cols_,
                               row_cap_[r], scratch_);
      }
      for (std::size_t t = 0; t < sz; ++t) p_[t] = x[t] + p_[t] - y_[t];

      // x = P_cols(y + q); q = y + q - x
      for (std::size_t t = 0; t < sz; ++t) x[t] = y_[t] + q_[t];
      double drift = 0.0;
      for (int c = 0; c < cols_; ++c) {
        for (int r = 0; r < rows_; ++r) col_buf_[r] = x[idx(r, c)];
        project_capped_simplex(col_buf_.data(), rows_, col_cap_[c], scratch_);
        for (int r = 0; r < rows_; ++r) x[idx(r, c)] = col_buf_[r];
      }
      for (std::size_t t = 0; t < sz; ++t) {
        const double before = y_[t] + q_[t] - x[t];
        q_[t] = before;
        drift = std::max(drift, std::abs(y_[t] - x[t]));
      }
      // The drift threshold scales with the largest cap so that the exit is
      // a relative test; an absolute 1e-11 is below double noise once the
      // caps reach the hundreds, and every call would burn max_sweeps.
      if (drift <= tol * (1.0 + cap_scale_)) break;
    }
    repair(x);
  }

 private:
  std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r) * cols_ + c; }

  // Exact-feasibility cleanup: clamp, then scale any over-cap row and column
  // down to its cap.
  void repair(std::vector<double>& x) const {
    for (double& v : x) v = std::max(v, 0.0);
    for (int r = 0; r < rows_; ++r) {
      double sum = 0.0;
      for (int c = 0; c < cols_; ++c) sum += x[idx(r, c)];
      if (sum > row_cap_[r] && sum > 0.0) {
        const double scale = row_cap_[r] / sum;
        for (int c = 0; c < cols_; ++c) x[idx(r, c)] *= scale;
      }
    }
    for (int c = 0; c < cols_; ++c) {
      double sum = 0.0;
      for (int r = 0; r < rows_; ++r) sum += x[idx(r, c)];
      if (sum > col_cap_[c] && sum > 0.0) {
        const double scale = col_cap_[c] / sum;
        for (int r = 0; r < rows_; ++r) x[idx(r, c)] *= scale;
      }
    }
  }

  int rows_;
  int cols_;
  std::vector<double> row_cap_;
  std::vector<double> col_cap_;
  double cap_scale_ = 0.0;
  mutable std::vector<double> p_, q_, y_, col_buf_, scratch_;
};

}  // namespace coalshare

#endif  // COALSHARE_PROJECTION_HPP
