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
#include <map>
#include <stdexcept>
#include <sstream>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace csk {

struct PrimePower {
  mpz_class p;
  long e = 0;
  bool certified = true;  // false: composite cofactor left unsplit
};

struct Factorization {
  std::vector<PrimePower> factors;  // sorted by p
  bool complete = true;
  long budget_used = 0;

  mpz_class value() const {
    mpz_class v = 1;
    for (const auto& f : factors) {
      mpz_class t;
      mpz_pow_ui(t.get_mpz_t(), f.p.get_mpz_t(), static_cast<unsigned long>(f.e));
      v *= t;
    }
    return v;
  }
  std::string str() const {
    if (factors.empty()) return "1";
    std::ostringstream os;
    for (size_t i = 0; i < factors.size(); ++i) {
      if (i) os << " * ";
      os << factors[i].p.get_str();
      if (factors[i].e != 1) os << "^" << factors[i].e;
      if (!factors[i].certified) os << "[composite]";
    }
    return os.str();
  }
};

// GMP 6.2 runs Baillie-PSW (strong base-2 test plus strong Lucas) before its extra Miller-Rabin rounds.
inline bool is_probable_prime(const mpz_class& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 25) > 0;
}

namespace detail {

inline mpz_class pollard_rho(const mpz_class& n, unsigned long c, long& budget) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  mpz_class x = 2, y = 2, d = 1, q = 1, ys;
  const long batch = 128;
  long r = 1;
  auto f = [&](mpz_class& v) {
    v = v * v + c;
    v %= n;
  };
  while (d == 1) {
    x = y;
    for (long i = 0; i < r; ++i) f(y);
    long kk = 0;
    while (kk < r && d == 1) {
      ys = y;
      long lim = std::min(batch, r - kk);
      for (long i = 0; i < lim; ++i) {
        f(y);
        mpz_class t = x - y;
        q = (q * abs(t)) % n;
      }
      budget -= lim;
      d = gcd(q, n);
      kk += batch;
      if (budget <= 0 && d == 1) return 0;
    }
    r *= 2;
  }
  if (d == n) {
    do {
      f(ys);
      mpz_class t = x - ys;
      d = gcd(abs(t), n);
    } while (d == 1);
  }
  return d == n ? mpz_class(0) : d;
}

inline mpz_class pollard_pm1(const mpz_class& n, unsigned long B, long& budget) {
  mpz_class a = 2;
  mpz_class p;
  for (unsigned long q = 2; q <= B; ++q) {
    p = q;
    if (!is_probable_prime(p)) continue;
    unsigned long qk = q;
    while (qk <= B / q) qk *= q;
    mpz_powm_ui(a.get_mpz_t(), a.get_mpz_t(), qk, n.get_mpz_t());
    --budget;
    if (q % 64 == 0 || q == B) {
      mpz_class g = gcd(a - 1, n);
      if (g != 1) return g == n ? mpz_class(0) : g;
    }
  }
  mpz_class g = gcd(a - 1, n);
  return (g == 1 || g == n) ? mpz_class(0) : g;
}

inline void split(const mpz_class& n, std::map<mpz_class, long>& out, std::vector<mpz_class>& stuck,
                  long mult, long& budget) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    out[n] += mult;
    return;
  }
  // perfect powers first: rho is hopeless on p^e
  for (unsigned long e = 64; e >= 2; --e) {
    mpz_class r;
    if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), e) != 0) {
      split(r, out, stuck, mult * static_cast<long>(e), budget);
      return;
    }
  }
  mpz_class d = 0;
  for (unsigned long c = 1; c < 20 && d == 0 && budget > 0; ++c) d = pollard_rho(n, c, budget);
  if (d == 0 && budget > 0) d = pollard_pm1(n, 100000, budget);
  if (d == 0) {
    for (long i = 0; i < mult; ++i) stuck.push_back(n);
    return;
  }
  split(d, out, stuck, mult, budget);
  split(n / d, out, stuck, mult, budget);
}

}  // namespace detail

// Trial division to 10^5, then Pollard rho and p-1 within `budget` modular multiplications.
inline Factorization factor_integer(mpz_class n, long budget = 50000000) {
  Factorization res;
  if (n < 0) n = -n;
  if (n == 0) throw std::invalid_argument("factor_integer: zero");
  std::map<mpz_class, long> found;
  for (unsigned long p = 2; p < 100000 && n > 1; p += (p == 2 ? 1 : 2)) {
    // composite p never divides here: its prime factors are already gone
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      long e = 0;
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        ++e;
      }
      found[mpz_class(p)] += e;
    }
  }
  long start = budget;
  std::vector<mpz_class> stuck;
  detail::split(n, found, stuck, 1, budget);
  for (auto& [p, e] : found) res.factors.push_back({p, e, true});
  std::map<mpz_class, long> comp;
  for (auto& s : stuck) comp[s]++;
  for (auto& [c, e] : comp) res.factors.push_back({c, e, false});
  std::sort(res.factors.begin(), res.factors.end(), [](const PrimePower& a, const PrimePower& b) { return a.p < b.p; });
  res.complete = stuck.empty();
  res.budget_used = start - budget;
  return res;
}

// Exact k-th root of a non-negative integer when it exists.
inline bool exact_root(const mpz_class& n, unsigned long k, mpz_class& r) {
  if (n < 0) return false;
  return mpz_root(r.get_mpz_t(), n.get_mpz_t(), k) != 0;
}

}  // namespace csk
