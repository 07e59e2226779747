// Copyright 2026 The csk Authors
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

#pragma once

#include <algorithm>
#include <vector>

#include "csk/qpoly.hpp"
#include "csk/real.hpp"

namespace csk {

inline long zmat_max_bits(const ZMat& b) {
  size_t m = 1;
  for (const auto& r : b)
    for (const auto& x : r) m = std::max(m, mpz_sizeinbase(x.get_mpz_t(), 2));
  return static_cast<long>(m);
}

inline mpz_class zdot(const ZVec& a, const ZVec& b) {
  mpz_class s = 0;
  for (size_t i = 0; i < a.size(); ++i) mpz_addmul(s.get_mpz_t(), a[i].get_mpz_t(), b[i].get_mpz_t());
  return s;
}

// LLL reduction of the rows of b (integer, linearly independent), floating Gram-Schmidt.
inline void lll_reduce(ZMat& b, double delta = 0.99) {
  const size_t n = b.size();
  if (n < 2) return;
  const mpfr_prec_t bits = 2 * zmat_max_bits(b) + 20 * static_cast<long>(n) + 128;
  PrecisionScope ps(bits);
  std::vector<std::vector<Real>> mu(n, std::vector<Real>(n)), r(n, std::vector<Real>(n));
  std::vector<Real> bstar(n);
  Real half(0.51), dl(delta);

  auto gso_row = [&](size_t k) {
    for (size_t j = 0; j <= k; ++j) {
      Real s(zdot(b[k], b[j]));
      for (size_t i = 0; i < j; ++i) s -= mu[j][i] * r[k][i];
      r[k][j] = s;
      if (j < k) mu[k][j] = s / bstar[j];
    }
    bstar[k] = r[k][k];
  };

  gso_row(0);
  size_t k = 1;
  long guard_iters = 0;
  while (k < n) {
    if (++guard_iters > 5000000) break;
    gso_row(k);
    bool reduced = false;
    for (size_t jj = k; jj-- > 0;) {
      if (abs(mu[k][jj]) > half) {
        mpz_class q = mu[k][jj].round_z();
        for (size_t t = 0; t < b[k].size(); ++t) b[k][t] -= q * b[jj][t];
        Real qr(q);
        for (size_t i = 0; i < jj; ++i) mu[k][i] -= qr * mu[jj][i];
        mu[k][jj] -= qr;
        reduced = true;
      }
    }
    if (reduced) {
      gso_row(k);
      bool again = false;
      for (size_t jj = 0; jj < k; ++jj)
        if (abs(mu[k][jj]) > half) again = true;
      if (again) continue;
    }
    Real lhs = bstar[k];
    Real rhs = (dl - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1];
    if (lhs >= rhs) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      if (k > 1) {
        --k;
      } else {
        gso_row(0);
      }
    }
  }
}

inline mpz_class zvec_norm2(const ZVec& v) { return zdot(v, v); }

}  // namespace csk
