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

#include <gmpxx.h>

#include <type_traits>
#include <vector>

#include "csk/ball.hpp"
#include "csk/field.hpp"

namespace csk {

// Scalars used by the generic engines: numeric balls and exact field elements.
inline Ball sc_from_q(const Ball& like, const mpq_class& q) {
  PrecisionScope ps(like.bits());
  Ball b(q);
  return b;
}
inline FieldElement sc_from_q(const FieldElement& like, const mpq_class& q) { return FieldElement(like.K, q); }

template <class S>
S sc_zero(const S& like) {
  return sc_from_q(like, mpq_class(0));
}
template <class S>
S sc_one(const S& like) {
  return sc_from_q(like, mpq_class(1));
}

inline Ball sc_scale(const Ball& x, const mpq_class& q) { return x * sc_from_q(x, q); }
inline FieldElement sc_scale(const FieldElement& x, const mpq_class& q) { return x * q; }

inline bool sc_is_exact(const Ball&) { return false; }
inline bool sc_is_exact(const FieldElement&) { return true; }

inline Ball sc_pow(const Ball& x, long n) { return powi(x, n); }
inline FieldElement sc_pow(const FieldElement& x, long n) { return x.pow(n); }

inline bool sc_is_zero_like(const Ball& x) { return x.contains_zero(); }
inline bool sc_is_zero_like(const FieldElement& x) { return x.is_zero(); }

// Determinant by elimination; for balls the pivot is the entry of largest midpoint.
template <class S>
S sc_det(std::vector<std::vector<S>> a, const S& like) {
  const size_t n = a.size();
  S det = sc_one(like);
  for (size_t c = 0; c < n; ++c) {
    size_t p = n;
    if constexpr (std::is_same_v<S, Ball>) {
      Real best(-1L);
      for (size_t r = c; r < n; ++r) {
        Real m = abs(a[r][c].mid);
        if (m > best) {
          best = m;
          p = r;
        }
      }
    } else {
      for (size_t r = c; r < n && p == n; ++r)
        if (!a[r][c].is_zero()) p = r;
    }
    if (p == n || sc_is_zero_like(a[p][c])) {
      if constexpr (std::is_same_v<S, Ball>) {
        if (p != n && !a[p][c].rad.is_zero()) throw PrecisionInsufficient("determinant pivot not separated from zero");
      }
      return sc_zero(like);
    }
    if (p != c) {
      std::swap(a[p], a[c]);
      det = sc_zero(like) - det;
    }
    det = det * a[c][c];
    S inv = sc_one(like) / a[c][c];
    for (size_t r = c + 1; r < n; ++r) {
      S f = a[r][c] * inv;
      for (size_t j = c; j < n; ++j) a[r][j] = a[r][j] - f * a[c][j];
    }
  }
  return det;
}

}  // namespace csk
