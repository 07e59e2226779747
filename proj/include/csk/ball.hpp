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

#include <stdexcept>
#include <string>

#include "csk/real.hpp"

namespace csk {

// Upper bounds for radii: 64-bit mantissa, rounded upward.
class Mag {
 public:
  Mag() : v_(Real::with_bits(64)) {}
  explicit Mag(const Real& x) : v_(Real::with_bits(64)) { mpfr_abs(v_.get(), x.get(), MPFR_RNDU); }
  static Mag from_double(double d) {
    Mag m;
    mpfr_set_d(m.v_.get(), d < 0 ? -d : d, MPFR_RNDU);
    return m;
  }
  // 2^e
  static Mag pow2(long e) {
    Mag m;
    mpfr_set_ui_2exp(m.v_.get(), 1, e, MPFR_RNDU);
    return m;
  }
  const Real& value() const { return v_; }
  bool is_zero() const { return v_.is_zero(); }

  Mag& operator+=(const Mag& o) { mpfr_add(v_.get(), v_.get(), o.v_.get(), MPFR_RNDU); return *this; }
  Mag& operator*=(const Mag& o) { mpfr_mul(v_.get(), v_.get(), o.v_.get(), MPFR_RNDU); return *this; }
  friend Mag operator+(Mag a, const Mag& b) { a += b; return a; }
  friend Mag operator*(Mag a, const Mag& b) { a *= b; return a; }
  Mag div_lower(const Mag& denom_lower) const {
    Mag r;
    mpfr_div(r.v_.get(), v_.get(), denom_lower.v_.get(), MPFR_RNDU);
    return r;
  }
  friend bool operator<(const Mag& a, const Mag& b) { return a.v_ < b.v_; }
  double to_double() const { return mpfr_get_d(v_.get(), MPFR_RNDU); }
  long log10_floor() const {
    if (v_.is_zero()) return LONG_MIN / 4;
    Real l = Real::with_bits(64);
    mpfr_log10(l.get(), v_.get(), MPFR_RNDD);
    return static_cast<long>(std::floor(l.to_double()));
  }

 private:
  Real v_;
};

inline double log10_of_mag(const Mag& m) {
  if (m.is_zero()) return -1e300;
  Real l = Real::with_bits(64);
  mpfr_log10(l.get(), m.value().get(), MPFR_RNDU);
  return l.to_double();
}

// |z| bounded above and below at 64 bits.
inline Mag mag_upper(const Complex& z) {
  Mag m;
  Real a = Real::with_bits(64);
  mpfr_hypot(a.get(), z.re.get(), z.im.get(), MPFR_RNDU);
  return Mag(a);
}
inline Mag mag_lower(const Complex& z) {
  Real a = Real::with_bits(64);
  mpfr_hypot(a.get(), z.re.get(), z.im.get(), MPFR_RNDD);
  return Mag(a);
}
inline Mag mag_sub_lower(const Mag& a, const Mag& b) {
  Real r = Real::with_bits(64);
  mpfr_sub(r.get(), a.value().get(), b.value().get(), MPFR_RNDD);
  if (r.sign() <= 0) return Mag();
  return Mag(r);
}

struct PrecisionInsufficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Complex midpoint-radius ball.
class Ball {
 public:
  Complex mid;
  Mag rad;

  Ball() = default;
  Ball(Complex m) : mid(std::move(m)) {}
  Ball(Complex m, Mag r) : mid(std::move(m)), rad(std::move(r)) {}
  Ball(long x) : mid(x) {}
  Ball(int x) : mid(static_cast<long>(x)) {}
  Ball(const mpq_class& q) : mid(q) { round_err(); }

  mpfr_prec_t bits() const { return mid.bits(); }
  bool contains_zero() const { return !(rad < mag_lower(mid)); }
  long accuracy_digits() const {
    if (rad.is_zero()) return LONG_MAX / 4;
    return -rad.log10_floor();
  }

  Ball& operator+=(const Ball& o) { mid += o.mid; rad += o.rad; round_err(); return *this; }
  Ball& operator-=(const Ball& o) { mid -= o.mid; rad += o.rad; round_err(); return *this; }
  Ball& operator*=(const Ball& o) {
    Mag r = mag_upper(mid) * o.rad + mag_upper(o.mid) * rad + rad * o.rad;
    mid *= o.mid;
    rad = r;
    round_err();
    return *this;
  }
  Ball& operator/=(const Ball& o) { return *this *= o.inverse(); }
  Ball operator-() const { return Ball(-mid, rad); }

  Ball inverse() const {
    Mag lo = mag_lower(mid);
    Mag gap = mag_sub_lower(lo, rad);
    if (gap.is_zero()) throw PrecisionInsufficient("ball division by a ball containing zero");
    Ball r(Complex(1L) / mid);
    r.rad = rad.div_lower(lo * gap);
    r.round_err();
    return r;
  }

  friend Ball operator+(Ball a, const Ball& b) { a += b; return a; }
  friend Ball operator-(Ball a, const Ball& b) { a -= b; return a; }
  friend Ball operator*(Ball a, const Ball& b) { a *= b; return a; }
  friend Ball operator/(Ball a, const Ball& b) { a /= b; return a; }

  bool overlaps(const Ball& o, const Mag& slack = Mag()) const {
    Mag d = mag_lower(mid - o.mid);
    return !(rad + o.rad + slack < d);
  }

  void round_err() {
    Mag m = mag_upper(mid);
    if (!m.is_zero()) rad += m * Mag::pow2(2 - static_cast<long>(mid.bits()));
  }

  std::string str(long digits) const {
    return "(" + mid.re.str(digits) + ") + (" + mid.im.str(digits) + ")i +/- " + rad.value().str(6);
  }
};

inline Ball exp(const Ball& z) {
  Ball r(exp(z.mid));
  if (!z.rad.is_zero()) {
    Real e = Real::with_bits(64);
    mpfr_expm1(e.get(), z.rad.value().get(), MPFR_RNDU);
    r.rad = mag_upper(r.mid) * Mag(e);
  }
  r.round_err();
  return r;
}

// Principal log; refuses balls touching the negative real axis or zero.
inline Ball log(const Ball& z) {
  Mag lo = mag_lower(z.mid);
  Mag gap = mag_sub_lower(lo, z.rad);
  if (gap.is_zero()) throw PrecisionInsufficient("log of a ball containing zero");
  if (z.mid.re.sign() < 0 && !(z.rad < Mag(z.mid.im))) throw PrecisionInsufficient("log ball straddles the branch cut");
  Ball r(log(z.mid));
  r.rad = z.rad.div_lower(gap);
  r.round_err();
  return r;
}

inline Ball principal_root(const Ball& z, long k) {
  if (k == 1) return z;
  Ball l = log(z);
  l.mid /= Real(k);
  l.rad = l.rad * Mag::from_double(1.0 / static_cast<double>(k) * (1 + 1e-15));
  return exp(l);
}

// k-th root that tolerates balls on the negative real axis: there the branch with
// argument near +pi/k is taken and on_cut is set.
inline Ball branch_root(const Ball& z, long k, bool* on_cut = nullptr) {
  if (on_cut) *on_cut = false;
  if (k == 1) return z;
  bool cut = z.mid.re.sign() < 0 && !(z.rad < Mag(z.mid.im));
  if (!cut) return principal_root(z, k);
  if (on_cut) *on_cut = true;
  Ball l = log(-z);
  l.mid.im += pi_real(z.bits());
  l.mid /= Real(k);
  l.rad = l.rad * Mag::from_double(1.0 / static_cast<double>(k) * (1 + 1e-15));
  l.round_err();
  return exp(l);
}

inline Ball sqrt(const Ball& z) { return principal_root(z, 2); }

inline Ball powi(Ball z, long n) {
  if (n < 0) {
    z = z.inverse();
    n = -n;
  }
  Ball r(1L);
  r.mid.set_bits(z.bits());
  while (n) {
    if (n & 1) r *= z;
    n >>= 1;
    if (n) z *= z;
  }
  return r;
}

inline Ball ball_root_of_unity(long p, long q, mpfr_prec_t bits) {
  Ball r(root_of_unity(p, q, bits));
  r.round_err();
  r.round_err();
  return r;
}

inline Ball ball_from_strings(const std::string& re, const std::string& im, mpfr_prec_t bits) {
  PrecisionScope ps(bits);
  Ball b{Complex(Real(re), Real(im))};
  // decimal input carries its own truncation error; callers add it explicitly
  b.round_err();
  return b;
}

}  // namespace csk
