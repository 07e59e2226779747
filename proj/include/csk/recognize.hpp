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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "csk/ball.hpp"
#include "csk/field.hpp"
#include "csk/lll.hpp"

namespace csk {

struct FitResult {
  bool ok = false;
  FieldElement value;
  double residual_log10 = 0;  // log10 of |x - embed(value)|
  mpz_class height;
  bool reverified = false;
  std::string reason;
};

inline mpz_class height_of(const FieldElement& e) {
  const mpz_class den = e.denominator();
  mpz_class h = den;
  for (const auto& q : e.c) {
    mpz_class a = abs(q.get_num()) * (den / q.get_den());
    if (a > h) h = a;
  }
  return h;
}

inline double log10_abs(const Complex& z) {
  Real a = abs(z);
  if (a.is_zero()) return -1e300;
  Real l = Real::with_bits(64);
  mpfr_log10(l.get(), a.get(), MPFR_RNDN);
  return l.to_double();
}

// Integer relation among values v[0..m-1] (complex), scaled by 10^scale_digits.
inline ZMat relation_lattice(const std::vector<Complex>& v, long scale_digits, mpfr_prec_t bits) {
  size_t m = v.size();
  Real C = pow10(scale_digits, bits);
  ZMat L(m, ZVec(m + 2));
  for (size_t j = 0; j < m; ++j) {
    L[j][j] = 1;
    L[j][m] = (v[j].re * C).round_z();
    L[j][m + 1] = (v[j].im * C).round_z();
  }
  return L;
}

// Fit x as an element of K with coefficient height <= height_bound, using `digits` accurate digits of x.
inline FitResult recognize_value(const Complex& x, const FieldPtr& K, const mpz_class& height_bound, long digits) {
  FitResult res;
  mpfr_prec_t bits = std::max<mpfr_prec_t>(x.bits(), digits_to_bits(digits + 20));
  std::vector<Complex> v;
  v.push_back(x);
  for (auto& b : K->basis_values(bits)) v.push_back(b);
  long scale = static_cast<long>(digits * 0.9);
  ZMat L = relation_lattice(v, scale, bits);
  lll_reduce(L);
  const size_t D = K->dim();
  double best = 1e300;
  for (const auto& row : L) {
    if (row[0] == 0) continue;
    QVec c(D);
    for (size_t j = 0; j < D; ++j) c[j] = mpq_class(-row[j + 1], row[0]);
    for (auto& q : c) q.canonicalize();
    FieldElement e(K, c);
    mpz_class h = height_of(e);
    if (h > height_bound) continue;
    double r = log10_abs(x - e.embed(bits));
    if (r < best) {
      best = r;
      res.value = e;
      res.height = h;
    }
  }
  if (best > 1e299) {
    res.reason = "no relation within the height bound";
    return res;
  }
  res.residual_log10 = best;
  double mag = std::max(0.0, log10_abs(x));
  if (best - mag < -0.5 * digits) res.ok = true;
  else res.reason = "residual too large";
  return res;
}

// Fit with confirmation at 1.5x precision: `value_at(digits)` recomputes x.
inline FitResult recognize(const std::function<Complex(long)>& value_at, const FieldPtr& K,
                           const mpz_class& height_bound, long digits) {
  Complex x = value_at(digits);
  FitResult r = recognize_value(x, K, height_bound, digits);
  if (!r.ok) return r;
  long hi = digits + digits / 2;
  Complex x2 = value_at(hi);
  double d = log10_abs(x2 - r.value.embed(digits_to_bits(hi + 20)));
  double mag = std::max(0.0, log10_abs(x2));
  if (d - mag < -0.5 * hi) {
    r.reverified = true;
  } else {
    r.ok = false;
    r.reason = "fit not confirmed at higher precision";
  }
  return r;
}

// Adjoin zeta_k to a base field: find g = minpoly of zeta over F numerically, then check g | Phi_k exactly.
inline std::shared_ptr<NumberField> adjoin_root_of_unity(const FieldPtr& F, long k, long digits = 200) {
  auto out = std::make_shared<NumberField>();
  out->base = F->base;
  out->root_re = F->root_re;
  out->root_im = F->root_im;
  out->k = k;
  const long d = F->dF();
  mpfr_prec_t bits = digits_to_bits(digits + 20);
  if (k == 1) {
    out->g = F->g;
    return out;
  }
  Complex a = F->alpha(bits), z = root_of_unity(1, k, bits);
  QPoly phi = cyclotomic(k);
  const long phideg = degree(phi);
  for (long m = 1; m <= phideg; ++m) {
    if (phideg % m) continue;
    // relation: zeta^m = sum c_{a,b} alpha^a zeta^b, b < m
    std::vector<Complex> v;
    v.push_back(powi(z, m));
    Complex zb(Real(1L).set_bits(bits), Real::with_bits(bits));
    for (long b = 0; b < m; ++b) {
      Complex ap = zb;
      for (long i = 0; i < d; ++i) {
        v.push_back(ap);
        ap *= a;
      }
      zb *= z;
    }
    ZMat L = relation_lattice(v, static_cast<long>(digits * 0.8), bits);
    lll_reduce(L);
    for (const auto& row : L) {
      if (row[0] == 0) continue;
      std::vector<QVec> g(m + 1, QVec(d));
      for (long b = 0; b < m; ++b)
        for (long i = 0; i < d; ++i) g[b][i] = mpq_class(row[1 + b * d + i], row[0]), g[b][i].canonicalize();
      g[m][0] = 1;
      // numeric check first
      Complex s(Real::with_bits(bits), Real::with_bits(bits));
      for (long j = 0; j < static_cast<long>(v.size()); ++j) s += v[j] * Real(mpz_class(row[j]));
      if (log10_abs(s) > -0.5 * digits) continue;
      // exact divisibility of Phi_k by g over F
      auto trial = std::make_shared<NumberField>();
      trial->base = F->base;
      trial->root_re = F->root_re;
      trial->root_im = F->root_im;
      trial->k = k;
      trial->g = g;
      // Reduce Phi_k(y) modulo g(y) over F; the remainder must vanish.
      std::vector<QVec> rem(phideg + 1, QVec(d));
      for (long t = 0; t <= phideg; ++t) rem[t][0] = phi[t];
      for (long t = phideg; t >= m; --t) {
        QVec ct = rem[t];
        bool zero = true;
        for (auto& q : ct) zero = zero && q == 0;
        if (zero) continue;
        for (long b = 0; b <= m; ++b) {
          QVec s2 = F->base_mul(ct, g[b]);
          for (long i = 0; i < d; ++i) rem[t - m + b][i] -= s2[i];
        }
      }
      bool ok = true;
      for (long t = 0; t < m && ok; ++t)
        for (auto& q : rem[t]) ok = ok && q == 0;
      if (!ok) continue;
      out->g = g;
      return out;
    }
  }
  throw PrecisionInsufficient("could not determine the minimal polynomial of zeta over the base field");
}

}  // namespace csk
