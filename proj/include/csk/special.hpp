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

#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "csk/ball.hpp"
#include "csk/scalar.hpp"

namespace csk {

inline mpq_class binomial_q(long n, long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return mpq_class(r);
}

// Bernoulli numbers with B_1 = -1/2.
inline const mpq_class& bernoulli_number(long n) {
  static std::mutex mu;
  static std::vector<mpq_class> cache{mpq_class(1)};
  std::lock_guard<std::mutex> lock(mu);
  while (static_cast<long>(cache.size()) <= n) {
    long m = static_cast<long>(cache.size());
    mpq_class s = 0;
    for (long j = 0; j < m; ++j) s += binomial_q(m + 1, j) * cache[j];
    mpq_class b = -s / mpq_class(m + 1);
    b.canonicalize();
    cache.push_back(b);
  }
  return cache[n];
}

inline mpq_class bernoulli_poly(long n, const mpq_class& x) {
  mpq_class r = 0, xp = 1;
  for (long j = n; j >= 0; --j) {
    r += binomial_q(n, j) * bernoulli_number(j) * xp;
    xp *= x;
  }
  r.canonicalize();
  return r;
}

// Eulerian numbers A(n, m), so that Li_{-n}(x) = x * sum_m A(n,m) x^m / (1-x)^{n+1}.
inline std::vector<mpz_class> eulerian_row(long n) {
  if (n == 0) return {1};
  std::vector<mpz_class> prev{1};
  for (long r = 1; r <= n; ++r) {
    std::vector<mpz_class> cur(r);
    for (long m = 0; m < r; ++m) {
      mpz_class a = (m < static_cast<long>(prev.size())) ? prev[m] * (m + 1) : mpz_class(0);
      mpz_class b = (m >= 1 && m - 1 < static_cast<long>(prev.size())) ? prev[m - 1] * (r - m) : mpz_class(0);
      cur[m] = a + b;
    }
    prev = cur;
  }
  return prev;
}

inline const std::vector<mpz_class>& eulerian_cached(long n) {
  static std::mutex mu;
  static std::map<long, std::vector<mpz_class>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, eulerian_row(n)).first;
  return it->second;
}

struct PoleError : std::domain_error {
  using std::domain_error::domain_error;
};

// Li_l(x) for l <= 0, as an explicit rational function.
template <class S>
S neg_polylog(long l, const S& x) {
  if (l > 0) throw std::invalid_argument("neg_polylog needs l <= 0");
  long n = -l;
  S one = sc_one(x);
  S den = one - x;
  if constexpr (std::is_same_v<S, FieldElement>) {
    if (den.is_zero()) throw PoleError("polylog pole at x = 1");
  } else {
    if (den.contains_zero()) throw PoleError("polylog pole at x = 1");
  }
  const auto& A = eulerian_cached(n);
  S num = sc_zero(x);
  for (long m = static_cast<long>(A.size()) - 1; m >= 0; --m) num = num * x + sc_from_q(x, mpq_class(A[m]));
  return x * num / sc_pow(den, n + 1);
}

inline Ball li1(const Ball& x) { return -log(Ball(1L) - x); }

// (a; q)_m = prod_{r<m} (1 - a q^r)
template <class S>
S q_pochhammer(const S& a, const S& q, long m) {
  S r = sc_one(a), t = a;
  for (long i = 0; i < m; ++i) {
    r = r * (sc_one(a) - t);
    t = t * q;
  }
  return r;
}

// D_k(x) = prod_{s=1}^{k-1} (1 - zeta^s x)^s, or D*_k with zeta^{-s}.
inline Ball cyclic_dilog(bool star, long k, const Ball& x) {
  Ball r(1L);
  r.mid.set_bits(x.bits());
  for (long s = 1; s < k; ++s) {
    Ball z = ball_root_of_unity(star ? -s : s, k, x.bits());
    Ball f = Ball(1L) - z * x;
    if (f.contains_zero()) throw PoleError("vanishing cyclic dilogarithm factor");
    r *= powi(f, s);
  }
  return r;
}

// Li_2 by the Bernoulli series in u = -log(1-w), with inversion and reflection.
inline Complex li2(const Complex& w) {
  mpfr_prec_t bits = w.bits() + 16;
  PrecisionScope ps(bits);
  Real pi = pi_real(bits);
  Real pi2_6 = pi * pi / Real(6L);
  Real aw = abs(w);
  if (aw > Real(1L)) {
    // Li2(w) = -Li2(1/w) - pi^2/6 - log(-w)^2 / 2
    Complex lm = log(-w);
    return -li2(Complex(1L) / w) - Complex(pi2_6) - lm * lm / Real(2L);
  }
  Real eps = pow10(-static_cast<long>(bits * 0.30103) - 5, bits);
  if (aw <= Real(0.5)) {
    Complex s(Real::with_bits(bits), Real::with_bits(bits)), p = w;
    for (long n = 1;; ++n) {
      Complex t = p / Real(n * n);
      s += t;
      if (abs(t) < eps) break;
      p *= w;
    }
    return s;
  }
  Complex omw = Complex(1L) - w;
  if (abs(omw) <= Real(0.5)) {
    return Complex(pi2_6) - log(w) * log(omw) - li2(omw);
  }
  Complex u = -log(omw);
  Complex s(Real::with_bits(bits), Real::with_bits(bits)), up = u;
  Real fact(1L);
  for (long n = 0;; ++n) {
    // term B_n u^{n+1} / (n+1)!
    fact *= Real(n + 1);
    const mpq_class& b = bernoulli_number(n);
    if (b != 0) {
      Complex t = up * Real(b) / fact;
      s += t;
      if (n > 4 && abs(t) < eps) break;
    }
    up *= u;
    if (n > 100000) break;
  }
  return s;
}

}  // namespace csk
