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
#include <vector>

#include "csk/scalar.hpp"

namespace csk {

// Truncated series sum_{p} c_p hbar^{p/2}, p from lo2 to hi2 (twice the exponents).
template <class S>
class HalfPowerSeries {
 public:
  HalfPowerSeries() = default;
  HalfPowerSeries(long lo2, long hi2, const S& like) : lo2_(lo2), hi2_(hi2) {
    if (hi2 >= lo2) c_.assign(hi2 - lo2 + 1, sc_zero(like));
    like_.push_back(sc_zero(like));
  }
  static HalfPowerSeries constant(const S& v, long hi2) {
    HalfPowerSeries s(0, hi2, v);
    s.c_[0] = v;
    return s;
  }

  long lo2() const { return lo2_; }
  long hi2() const { return hi2_; }
  bool empty() const { return c_.empty(); }
  const S& like() const { return like_.front(); }

  S coef2(long p2) const {
    if (p2 < lo2_ || p2 > hi2_) return sc_zero(like());
    return c_[p2 - lo2_];
  }
  S& at2(long p2) {
    if (p2 < lo2_ || p2 > hi2_) throw std::out_of_range("series index outside stored range");
    return c_[p2 - lo2_];
  }
  // coefficient of hbar^n (integer power)
  S coef(long n) const { return coef2(2 * n); }

  HalfPowerSeries truncated(long hi2) const {
    HalfPowerSeries r(lo2_, std::min(hi2, hi2_), like());
    for (long p = r.lo2_; p <= r.hi2_; ++p) r.at2(p) = coef2(p);
    return r;
  }

  HalfPowerSeries& operator+=(const HalfPowerSeries& o) {
    long lo = std::min(lo2_, o.lo2_), hi = std::min(hi2_, o.hi2_);
    HalfPowerSeries r(lo, hi, like());
    for (long p = lo; p <= hi; ++p) r.at2(p) = coef2(p) + o.coef2(p);
    *this = std::move(r);
    return *this;
  }
  HalfPowerSeries& operator-=(const HalfPowerSeries& o) {
    long lo = std::min(lo2_, o.lo2_), hi = std::min(hi2_, o.hi2_);
    HalfPowerSeries r(lo, hi, like());
    for (long p = lo; p <= hi; ++p) r.at2(p) = coef2(p) - o.coef2(p);
    *this = std::move(r);
    return *this;
  }
  friend HalfPowerSeries operator+(HalfPowerSeries a, const HalfPowerSeries& b) { a += b; return a; }
  friend HalfPowerSeries operator-(HalfPowerSeries a, const HalfPowerSeries& b) { a -= b; return a; }

  friend HalfPowerSeries operator*(const HalfPowerSeries& a, const HalfPowerSeries& b) {
    long lo = a.lo2_ + b.lo2_;
    long hi = std::min(a.hi2_ + b.lo2_, b.hi2_ + a.lo2_);
    HalfPowerSeries r(lo, hi, a.like());
    for (long i = a.lo2_; i <= a.hi2_; ++i) {
      for (long j = b.lo2_; j <= b.hi2_ && i + j <= hi; ++j) {
        r.at2(i + j) = r.coef2(i + j) + a.c_[i - a.lo2_] * b.c_[j - b.lo2_];
      }
    }
    return r;
  }
  HalfPowerSeries scaled(const S& s) const {
    HalfPowerSeries r(*this);
    for (auto& x : r.c_) x = x * s;
    return r;
  }
  HalfPowerSeries scaled_q(const mpq_class& q) const {
    HalfPowerSeries r(*this);
    for (auto& x : r.c_) x = sc_scale(x, q);
    return r;
  }
  // multiply by hbar^{p2/2}
  HalfPowerSeries shifted(long p2) const {
    HalfPowerSeries r(*this);
    r.lo2_ += p2;
    r.hi2_ += p2;
    return r;
  }

  // exp(s) for s with no terms below hbar^{1/2}; result truncated at hi2.
  HalfPowerSeries exp_series(long hi2) const {
    for (long p = lo2_; p < 1 && p <= hi2_; ++p)
      if (!is_zero_like(coef2(p))) throw std::domain_error("exp of a series with non-positive powers");
    HalfPowerSeries result = constant(sc_one(like()), hi2);
    HalfPowerSeries term = result;
    HalfPowerSeries self = truncated(hi2);
    for (long n = 1; n <= hi2; ++n) {
      term = (term * self).truncated(hi2);
      term = term.scaled_q(mpq_class(1, n));
      result += term.truncated(hi2);
      result = result.truncated(hi2);
      if (term.lo2_ > hi2) break;
    }
    return result.padded(0, hi2);
  }

  // log(s) for s = 1 + t with t starting at hbar^{1/2} or later.
  HalfPowerSeries log_series(long hi2) const {
    HalfPowerSeries t = padded(0, hi2);
    t.at2(0) = t.coef2(0) - sc_one(like());
    for (long p = t.lo2_; p < 1; ++p)
      if (!is_zero_like(t.coef2(p)) && p != 0) throw std::domain_error("log of a series with negative powers");
    t = t.padded(1, hi2);
    HalfPowerSeries result(1, hi2, like());
    HalfPowerSeries power = t;
    for (long n = 1; n <= hi2; ++n) {
      HalfPowerSeries add = power.scaled_q(mpq_class(n % 2 ? 1 : -1, n));
      result += add.padded(1, hi2);
      power = (power * t).truncated(hi2);
      if (power.lo2_ > hi2) break;
    }
    return result.padded(1, hi2);
  }

  // re-express over the window [lo2, hi2], dropping anything outside
  HalfPowerSeries padded(long lo2, long hi2) const {
    HalfPowerSeries r(lo2, hi2, like());
    for (long p = lo2; p <= hi2; ++p) r.at2(p) = coef2(p);
    return r;
  }

 private:
  static bool is_zero_like(const Ball& b) { return b.contains_zero(); }
  static bool is_zero_like(const FieldElement& e) { return e.is_zero(); }

  long lo2_ = 0, hi2_ = -1;
  std::vector<S> c_;
  std::vector<S> like_;
};

}  // namespace csk
