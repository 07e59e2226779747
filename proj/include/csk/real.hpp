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

#include <mpfr.h>
#include <gmpxx.h>

#include <climits>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace csk {

inline long digits_to_bits(long digits) { return static_cast<long>(std::ceil(digits * 3.3219280948873623)) + 8; }

// Default precision for freshly constructed reals. Scoped, per thread.
inline mpfr_prec_t& default_bits() {
  thread_local mpfr_prec_t bits = 256;
  return bits;
}

class PrecisionScope {
 public:
  explicit PrecisionScope(long bits) : saved_(default_bits()) { default_bits() = bits; }
  ~PrecisionScope() { default_bits() = saved_; }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  mpfr_prec_t saved_;
};

struct PrecisionContext {
  long digits = 300;
  long guard = 30;
  long bits() const { return digits_to_bits(digits + guard); }
};

class Real {
 public:
  Real() { mpfr_init2(v_, default_bits()); mpfr_set_zero(v_, 1); }
  explicit Real(mpfr_prec_t bits, int) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
  Real(long x) { mpfr_init2(v_, default_bits()); mpfr_set_si(v_, x, MPFR_RNDN); }
  Real(int x) : Real(static_cast<long>(x)) {}
  Real(double x) { mpfr_init2(v_, default_bits()); mpfr_set_d(v_, x, MPFR_RNDN); }
  Real(const mpz_class& x) { mpfr_init2(v_, default_bits()); mpfr_set_z(v_, x.get_mpz_t(), MPFR_RNDN); }
  Real(const mpq_class& x) { mpfr_init2(v_, default_bits()); mpfr_set_q(v_, x.get_mpq_t(), MPFR_RNDN); }
  explicit Real(const std::string& s) {
    mpfr_init2(v_, default_bits());
    if (mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0) throw std::invalid_argument("bad decimal: " + s);
  }
  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  static Real with_bits(mpfr_prec_t bits) { return Real(bits, 0); }
  static Real from_q(const mpq_class& q, mpfr_prec_t bits) {
    Real r(bits, 0);
    mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
    return r;
  }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t bits() const { return mpfr_get_prec(v_); }

  Real& set_bits(mpfr_prec_t b) {
    mpfr_prec_round(v_, b, MPFR_RNDN);
    return *this;
  }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long exponent2() const { return mpfr_zero_p(v_) ? LONG_MIN / 2 : mpfr_get_exp(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  mpz_class round_z() const {
    mpz_class z;
    Real t(*this);
    mpfr_round(t.v_, t.v_);
    mpfr_get_z(z.get_mpz_t(), t.v_, MPFR_RNDN);
    return z;
  }
  mpq_class to_q() const {
    if (mpfr_zero_p(v_)) return 0;
    mpz_class m;
    long e = mpfr_get_z_2exp(m.get_mpz_t(), v_);
    mpq_class q(m);
    if (e >= 0) mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), e);
    else mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), -e);
    return q;
  }

  std::string str(long digits) const {
    if (mpfr_zero_p(v_)) return "0";
    if (!mpfr_number_p(v_)) return "nan";
    mpfr_exp_t e;
    char* s = mpfr_get_str(nullptr, &e, 10, digits, v_, MPFR_RNDN);
    std::string m(s);
    mpfr_free_str(s);
    bool neg = m[0] == '-';
    if (neg) m = m.substr(1);
    std::string out = neg ? "-" : "";
    if (e > 0 && e <= static_cast<long>(m.size()) && e < 40) {
      out += m.substr(0, e) + "." + m.substr(e);
    } else if (e <= 0 && e > -8) {
      out += "0." + std::string(-e, '0') + m;
    } else {
      out += m.substr(0, 1) + "." + m.substr(1) + "e" + std::to_string(e - 1);
    }
    return out;
  }

  Real& operator+=(const Real& o) { widen(o); mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { widen(o); mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { widen(o); mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { widen(o); mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& mul_si(long x) { mpfr_mul_si(v_, v_, x, MPFR_RNDN); return *this; }
  Real& div_si(long x) { mpfr_div_si(v_, v_, x, MPFR_RNDN); return *this; }
  Real& mul_2si(long e) { mpfr_mul_2si(v_, v_, e, MPFR_RNDN); return *this; }

  Real operator-() const { Real r(*this); mpfr_neg(r.v_, r.v_, MPFR_RNDN); return r; }

  friend Real operator+(Real a, const Real& b) { a += b; return a; }
  friend Real operator-(Real a, const Real& b) { a -= b; return a; }
  friend Real operator*(Real a, const Real& b) { a *= b; return a; }
  friend Real operator/(Real a, const Real& b) { a /= b; return a; }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

 private:
  void widen(const Real& o) {
    if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  }
  mpfr_t v_;
};

#define CSK_REAL_UNARY(name, fn)                 \
  inline Real name(const Real& x) {              \
    Real r = Real::with_bits(x.bits());          \
    fn(r.get(), x.get(), MPFR_RNDN);             \
    return r;                                    \
  }
CSK_REAL_UNARY(sqrt, mpfr_sqrt)
CSK_REAL_UNARY(exp, mpfr_exp)
CSK_REAL_UNARY(log, mpfr_log)
CSK_REAL_UNARY(sin, mpfr_sin)
CSK_REAL_UNARY(cos, mpfr_cos)
CSK_REAL_UNARY(abs, mpfr_abs)
CSK_REAL_UNARY(log1p, mpfr_log1p)
CSK_REAL_UNARY(expm1, mpfr_expm1)
#undef CSK_REAL_UNARY

inline Real atan2(const Real& y, const Real& x) {
  Real r = Real::with_bits(std::max(x.bits(), y.bits()));
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}
inline Real hypot(const Real& x, const Real& y) {
  Real r = Real::with_bits(std::max(x.bits(), y.bits()));
  mpfr_hypot(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}
inline Real floor(const Real& x) {
  Real r = Real::with_bits(x.bits());
  mpfr_floor(r.get(), x.get());
  return r;
}
inline Real pi_real(mpfr_prec_t bits) {
  Real r = Real::with_bits(bits);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}
inline Real pow10(long e, mpfr_prec_t bits) {
  Real r = Real::with_bits(bits);
  mpfr_ui_pow_ui(r.get(), 10, static_cast<unsigned long>(e < 0 ? -e : e), MPFR_RNDN);
  if (e < 0) mpfr_ui_div(r.get(), 1, r.get(), MPFR_RNDN);
  return r;
}

class Complex {
 public:
  Real re, im;

  Complex() = default;
  Complex(Real r) : re(std::move(r)), im(Real::with_bits(re.bits())) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(long x) : re(x), im(0L) {}
  Complex(int x) : re(static_cast<long>(x)), im(0L) {}
  Complex(const mpq_class& q) : re(q), im(0L) {}

  mpfr_prec_t bits() const { return std::max(re.bits(), im.bits()); }
  void set_bits(mpfr_prec_t b) { re.set_bits(b); im.set_bits(b); }

  Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
  Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
  Complex& operator*=(const Complex& o) {
    Real a = re * o.re - im * o.im;
    Real b = re * o.im + im * o.re;
    re = std::move(a);
    im = std::move(b);
    return *this;
  }
  Complex& operator/=(const Complex& o) {
    Real d = o.re * o.re + o.im * o.im;
    Real a = (re * o.re + im * o.im) / d;
    Real b = (im * o.re - re * o.im) / d;
    re = std::move(a);
    im = std::move(b);
    return *this;
  }
  Complex& operator*=(const Real& s) { re *= s; im *= s; return *this; }
  Complex& operator/=(const Real& s) { re /= s; im /= s; return *this; }
  Complex operator-() const { return Complex(-re, -im); }

  friend Complex operator+(Complex a, const Complex& b) { a += b; return a; }
  friend Complex operator-(Complex a, const Complex& b) { a -= b; return a; }
  friend Complex operator*(Complex a, const Complex& b) { a *= b; return a; }
  friend Complex operator/(Complex a, const Complex& b) { a /= b; return a; }
  friend Complex operator*(Complex a, const Real& b) { a *= b; return a; }
  friend Complex operator/(Complex a, const Real& b) { a /= b; return a; }

  Complex conj() const { return Complex(re, -im); }
  Real norm2() const { return re * re + im * im; }
};

inline Real abs(const Complex& z) { return hypot(z.re, z.im); }
inline Real arg(const Complex& z) { return atan2(z.im, z.re); }
inline Complex exp(const Complex& z) {
  Real m = exp(z.re);
  return Complex(m * cos(z.im), m * sin(z.im));
}
inline Complex log(const Complex& z) {
  if (z.re.is_zero() && z.im.is_zero()) throw std::domain_error("log(0)");
  return Complex(log(abs(z)), arg(z));
}
inline Complex expi(const Real& t) { return Complex(cos(t), sin(t)); }
// e^{2 pi i p / q}
inline Complex root_of_unity(long p, long q, mpfr_prec_t bits) {
  Real t = pi_real(bits);
  t.mul_si(2 * p);
  t.div_si(q);
  return expi(t);
}
inline Complex powi(Complex z, long n) {
  if (n < 0) {
    z = Complex(1L) / z;
    n = -n;
  }
  Complex r(Real::with_bits(z.bits()), Real::with_bits(z.bits()));
  mpfr_set_ui(r.re.get(), 1, MPFR_RNDN);
  while (n) {
    if (n & 1) r *= z;
    n >>= 1;
    if (n) z *= z;
  }
  return r;
}
inline Complex sqrt(const Complex& z) {
  if (z.re.is_zero() && z.im.is_zero()) return z;
  return exp(log(z) / Real(2L));
}

}  // namespace csk
