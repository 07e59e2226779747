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
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace csk {

// Dense polynomial over F_p, ascending coefficients in [0, p).
using FpPoly = std::vector<mpz_class>;

class Fp {
 public:
  explicit Fp(mpz_class p) : p_(std::move(p)) {}
  const mpz_class& p() const { return p_; }

  mpz_class red(const mpz_class& a) const {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), p_.get_mpz_t());
    return r;
  }
  mpz_class inv(const mpz_class& a) const {
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), p_.get_mpz_t()) == 0) throw std::domain_error("not invertible mod p");
    return r;
  }

  static void trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  static long deg(const FpPoly& a) { return static_cast<long>(a.size()) - 1; }

  FpPoly reduce(FpPoly a) const {
    for (auto& c : a) c = red(c);
    trim(a);
    return a;
  }
  FpPoly add(const FpPoly& a, const FpPoly& b) const {
    FpPoly r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); ++i) {
      if (i < a.size()) r[i] += a[i];
      if (i < b.size()) r[i] += b[i];
    }
    return reduce(r);
  }
  FpPoly sub(const FpPoly& a, const FpPoly& b) const {
    FpPoly r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); ++i) {
      if (i < a.size()) r[i] += a[i];
      if (i < b.size()) r[i] -= b[i];
    }
    return reduce(r);
  }
  FpPoly mul(const FpPoly& a, const FpPoly& b) const {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; j < b.size(); ++j) mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    return reduce(r);
  }
  FpPoly monic(FpPoly a) const {
    trim(a);
    if (a.empty()) return a;
    mpz_class li = inv(a.back());
    for (auto& c : a) c = red(c * li);
    return a;
  }
  void divmod(const FpPoly& a, const FpPoly& b, FpPoly& q, FpPoly& r) const {
    if (b.empty()) throw std::domain_error("division by zero polynomial");
    r = reduce(a);
    q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, 0);
    mpz_class li = inv(b.back());
    while (!r.empty() && r.size() >= b.size()) {
      size_t s = r.size() - b.size();
      mpz_class c = red(r.back() * li);
      q[s] = c;
      for (size_t i = 0; i < b.size(); ++i) {
        mpz_submul(r[s + i].get_mpz_t(), c.get_mpz_t(), b[i].get_mpz_t());
        r[s + i] = red(r[s + i]);
      }
      trim(r);
    }
    trim(q);
  }
  FpPoly mod(const FpPoly& a, const FpPoly& b) const {
    FpPoly q, r;
    divmod(a, b, q, r);
    return r;
  }
  FpPoly div(const FpPoly& a, const FpPoly& b) const {
    FpPoly q, r;
    divmod(a, b, q, r);
    return q;
  }
  FpPoly gcd(FpPoly a, FpPoly b) const {
    a = reduce(a);
    b = reduce(b);
    while (!b.empty()) {
      FpPoly r = mod(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    return monic(a);
  }
  FpPoly derivative(const FpPoly& a) const {
    FpPoly r;
    for (size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * static_cast<unsigned long>(i));
    return reduce(r);
  }
  FpPoly powmod(FpPoly b, mpz_class e, const FpPoly& m) const {
    FpPoly r{mpz_class(1)};
    r = mod(r, m);
    b = mod(b, m);
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) r = mod(mul(r, b), m);
      e >>= 1;
      if (e > 0) b = mod(mul(b, b), m);
    }
    return r;
  }

  // p-th root of a polynomial whose derivative vanishes (only exponents divisible by p).
  FpPoly pth_root(const FpPoly& a) const {
    unsigned long pp = p_.get_ui();
    FpPoly r;
    for (size_t i = 0; i < a.size(); i += pp) r.push_back(a[i]);  // Frobenius is the identity on F_p
    trim(r);
    return r;
  }

  // Square-free decomposition: list of (g, e) with a = lc * prod g^e.
  std::vector<std::pair<FpPoly, long>> squarefree(const FpPoly& a0) const {
    std::vector<std::pair<FpPoly, long>> out;
    FpPoly a = monic(a0);
    sqf_rec(a, 1, out);
    return out;
  }

  // Distinct-degree factorization of a monic square-free polynomial.
  std::vector<std::pair<FpPoly, long>> ddf(FpPoly f) const {
    std::vector<std::pair<FpPoly, long>> out;
    FpPoly x{mpz_class(0), mpz_class(1)};
    FpPoly h = mod(x, f);
    long d = 0;
    while (deg(f) >= 2 * (d + 1)) {
      ++d;
      h = powmod(h, p_, f);
      FpPoly g = gcd(f, sub(h, x));
      if (deg(g) > 0) {
        out.emplace_back(g, d);
        f = div(f, g);
        h = mod(h, f);
      }
    }
    if (deg(f) > 0) out.emplace_back(f, deg(f));
    return out;
  }

  // Equal-degree splitting (Cantor-Zassenhaus), deterministic seed.
  std::vector<FpPoly> edf(const FpPoly& f, long d, gmp_randclass& rng) const {
    if (deg(f) == d) return {monic(f)};
    std::vector<FpPoly> out;
    for (;;) {
      FpPoly a(deg(f));
      for (auto& c : a) c = rng.get_z_range(p_);
      trim(a);
      if (deg(a) < 1) continue;
      FpPoly g;
      if (p_ == 2) {
        // trace map a + a^2 + ... + a^(2^(d-1))
        FpPoly t = a, s = a;
        for (long i = 1; i < d; ++i) {
          s = mod(mul(s, s), f);
          t = add(t, s);
        }
        g = gcd(f, t);
      } else {
        mpz_class e;
        mpz_pow_ui(e.get_mpz_t(), p_.get_mpz_t(), static_cast<unsigned long>(d));
        e = (e - 1) / 2;
        FpPoly b = powmod(a, e, f);
        b = sub(b, FpPoly{mpz_class(1)});
        g = gcd(f, b);
      }
      if (deg(g) > 0 && deg(g) < deg(f)) {
        auto l = edf(g, d, rng), r = edf(div(f, g), d, rng);
        out.insert(out.end(), l.begin(), l.end());
        out.insert(out.end(), r.begin(), r.end());
        return out;
      }
    }
  }

  // Full factorization into monic irreducibles with multiplicities, sorted.
  std::vector<std::pair<FpPoly, long>> factor(const FpPoly& a, unsigned long seed = 0) const {
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(seed + 1);
    std::vector<std::pair<FpPoly, long>> out;
    for (auto& [s, e] : squarefree(a)) {
      for (auto& [g, d] : ddf(s))
        for (auto& h : edf(g, d, rng)) out.emplace_back(h, e);
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
      if (x.first.size() != y.first.size()) return x.first.size() < y.first.size();
      for (size_t i = x.first.size(); i-- > 0;)
        if (x.first[i] != y.first[i]) return x.first[i] < y.first[i];
      return x.second < y.second;
    });
    return out;
  }

 private:
  mpz_class p_;

  void sqf_rec(const FpPoly& a, long mult, std::vector<std::pair<FpPoly, long>>& out) const {
    if (deg(a) < 1) return;
    FpPoly da = derivative(a);
    if (da.empty()) {
      sqf_rec(pth_root(a), mult * static_cast<long>(p_.get_ui()), out);
      return;
    }
    FpPoly c = gcd(a, da);
    FpPoly w = div(a, c);
    long i = 1;
    while (deg(w) > 0) {
      FpPoly y = gcd(w, c);
      FpPoly z = div(w, y);
      if (deg(z) > 0) out.emplace_back(monic(z), i * mult);
      ++i;
      w = y;
      c = div(c, y);
    }
    if (deg(c) > 0) sqf_rec(pth_root(c), mult * static_cast<long>(p_.get_ui()), out);
  }
};

}  // namespace csk
