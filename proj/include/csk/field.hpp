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
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "csk/ball.hpp"
#include "csk/qpoly.hpp"

namespace csk {

// Number field F = Q(alpha) or a composite F(zeta_k) with the bi-power basis alpha^a zeta^b.
// Coefficient index of alpha^a zeta^b is a + dF * b.
class NumberField {
 public:
  QPoly base;                 // monic min poly of alpha over Q
  std::string root_re, root_im;
  long k = 1;                 // zeta = exp(2 pi i / k); k == 1 means no cyclotomic part
  std::vector<QVec> g;        // monic min poly of zeta over F: g[b] is a base coefficient vector, g.back() = 1

  static std::shared_ptr<NumberField> make_base(const QPoly& minpoly, std::string re, std::string im) {
    auto f = std::make_shared<NumberField>();
    f->base = minpoly;
    f->root_re = std::move(re);
    f->root_im = std::move(im);
    f->g = {QVec(f->dF(), 0), QVec(f->dF(), 0)};
    f->g[0][0] = -1;  // y - 1: zeta_1 = 1
    f->g[1][0] = 1;
    return f;
  }

  long dF() const { return degree(base); }
  long dg() const { return static_cast<long>(g.size()) - 1; }
  long dim() const { return dF() * dg(); }
  bool is_base() const { return k == 1 || dg() == 1; }

  // Distinguished embedding of alpha, Newton-refined at the requested precision.
  Complex alpha(mpfr_prec_t bits) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = alpha_cache_.lower_bound(bits);
    if (it != alpha_cache_.end()) {
      Complex a = it->second;
      a.set_bits(bits);
      return a;
    }
    PrecisionScope ps(bits + 32);
    Complex a{Real(root_re), Real(root_im)};
    QPoly dp = poly_derivative(base);
    for (int it2 = 0; it2 < 200; ++it2) {
      Complex fa = eval_q(base, a), da = eval_q(dp, a);
      Complex step = fa / da;
      a -= step;
      if (abs(step) < pow10(-static_cast<long>(bits * 0.30103) - 5, bits + 32)) break;
    }
    a.set_bits(bits);
    alpha_cache_[bits] = a;
    return a;
  }
  Complex zeta(mpfr_prec_t bits) const { return root_of_unity(1, k, bits); }

  static Complex eval_q(const QPoly& p, const Complex& x) {
    Complex r(Real::with_bits(x.bits()), Real::with_bits(x.bits()));
    for (long i = degree(p); i >= 0; --i) {
      r *= x;
      r.re += Real::from_q(p[i], x.bits());
    }
    return r;
  }

  // Embedded values of the basis elements.
  std::vector<Complex> basis_values(mpfr_prec_t bits) const {
    Complex a = alpha(bits), z = zeta(bits);
    std::vector<Complex> v;
    v.reserve(dim());
    Complex zb(Real(1L).set_bits(bits), Real::with_bits(bits));
    for (long b = 0; b < dg(); ++b) {
      Complex ap = zb;
      for (long i = 0; i < dF(); ++i) {
        v.push_back(ap);
        ap *= a;
      }
      zb *= z;
    }
    return v;
  }

  std::string describe() const {
    std::ostringstream os;
    os << "Q(a), a root of " << poly_str(base, "x");
    if (k > 1) os << ", adjoined zeta_" << k << " of degree " << dg();
    return os.str();
  }

  // ---- base-field kernels on coefficient vectors of length dF ----
  QVec base_mul(const QVec& x, const QVec& y) const {
    long d = dF();
    QVec prod(2 * d - 1);
    for (long i = 0; i < d; ++i) {
      if (x[i] == 0) continue;
      for (long j = 0; j < d; ++j)
        if (y[j] != 0) prod[i + j] += x[i] * y[j];
    }
    for (long t = 2 * d - 2; t >= d; --t) {
      if (prod[t] == 0) continue;
      mpq_class c = prod[t];
      prod[t] = 0;
      for (long i = 0; i < d; ++i) prod[t - d + i] -= c * base[i];
    }
    prod.resize(d);
    return prod;
  }

 private:
  mutable std::mutex mu_;
  mutable std::map<mpfr_prec_t, Complex> alpha_cache_;
};

using FieldPtr = std::shared_ptr<const NumberField>;

class FieldElement {
 public:
  FieldPtr K;
  QVec c;

  FieldElement() = default;
  FieldElement(FieldPtr f, QVec coeffs) : K(std::move(f)), c(std::move(coeffs)) {
    if (static_cast<long>(c.size()) != K->dim()) throw std::invalid_argument("coefficient vector length mismatch");
    for (auto& x : c) x.canonicalize();
  }
  FieldElement(FieldPtr f, const mpq_class& q) : K(std::move(f)), c(K->dim()) {
    c[0] = q;
    c[0].canonicalize();
  }

  static FieldElement alpha(FieldPtr f) {
    FieldElement e(f, mpq_class(0));
    if (f->dF() == 1) e.c[0] = -f->base[0];
    else e.c[1] = 1;
    return e;
  }
  static FieldElement zeta(FieldPtr f) {
    FieldElement e(f, mpq_class(0));
    if (f->dg() == 1) {
      for (long i = 0; i < f->dF(); ++i) e.c[i] = -f->g[0][i];
    } else {
      e.c[f->dF()] = 1;
    }
    return e;
  }

  bool is_zero() const {
    for (const auto& x : c)
      if (x != 0) return false;
    return true;
  }
  bool is_rational() const {
    for (size_t i = 1; i < c.size(); ++i)
      if (c[i] != 0) return false;
    return true;
  }

  FieldElement& operator+=(const FieldElement& o) { for (size_t i = 0; i < c.size(); ++i) c[i] += o.c[i]; return *this; }
  FieldElement& operator-=(const FieldElement& o) { for (size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i]; return *this; }
  FieldElement& operator*=(const mpq_class& s) { for (auto& x : c) x *= s; return *this; }
  FieldElement operator-() const { FieldElement r(*this); for (auto& x : r.c) x = -x; return r; }
  FieldElement& operator*=(const FieldElement& o) { *this = *this * o; return *this; }
  FieldElement& operator/=(const FieldElement& o) { *this = *this * o.inverse(); return *this; }

  friend FieldElement operator+(FieldElement a, const FieldElement& b) { a += b; return a; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { a -= b; return a; }
  friend FieldElement operator/(FieldElement a, const FieldElement& b) { a /= b; return a; }
  friend FieldElement operator*(FieldElement a, const mpq_class& s) { a *= s; return a; }
  friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.c == b.c; }
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

  friend FieldElement operator*(const FieldElement& x, const FieldElement& y) {
    const NumberField& F = *x.K;
    long d = F.dF(), m = F.dg();
    if (m == 1) return FieldElement(x.K, F.base_mul(x.c, y.c));
    std::vector<QVec> prod(2 * m - 1, QVec(d));
    for (long i = 0; i < m; ++i) {
      QVec xi(x.c.begin() + i * d, x.c.begin() + (i + 1) * d);
      if (all_zero(xi)) continue;
      for (long j = 0; j < m; ++j) {
        QVec yj(y.c.begin() + j * d, y.c.begin() + (j + 1) * d);
        if (all_zero(yj)) continue;
        QVec t = F.base_mul(xi, yj);
        for (long a = 0; a < d; ++a) prod[i + j][a] += t[a];
      }
    }
    for (long t = 2 * m - 2; t >= m; --t) {
      if (all_zero(prod[t])) continue;
      QVec ct = prod[t];
      prod[t].assign(d, 0);
      for (long b = 0; b < m; ++b) {
        QVec s = F.base_mul(ct, F.g[b]);
        for (long a = 0; a < d; ++a) prod[t - m + b][a] -= s[a];
      }
    }
    QVec out(d * m);
    for (long b = 0; b < m; ++b)
      for (long a = 0; a < d; ++a) out[a + d * b] = prod[b][a];
    return FieldElement(x.K, out);
  }

  // Matrix of multiplication by this element: column j = this * e_j.
  QMat mult_matrix() const {
    long n = K->dim();
    QMat M(n, QVec(n));
    for (long j = 0; j < n; ++j) {
      FieldElement e(K, mpq_class(0));
      e.c[0] = 0;
      e.c[j] = 1;
      FieldElement p = *this * e;
      for (long i = 0; i < n; ++i) M[i][j] = p.c[i];
    }
    return M;
  }

  FieldElement inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero field element");
    if (is_rational()) return FieldElement(K, mpq_class(1) / c[0]);
    QVec e1(K->dim());
    e1[0] = 1;
    QVec x;
    if (!qmat_solve(mult_matrix(), e1, x)) throw std::domain_error("singular multiplication matrix");
    return FieldElement(K, x);
  }

  FieldElement pow(long n) const {
    if (n < 0) return inverse().pow(-n);
    FieldElement r(K, mpq_class(1)), b(*this);
    while (n) {
      if (n & 1) r = r * b;
      n >>= 1;
      if (n) b = b * b;
    }
    return r;
  }

  QPoly charpoly() const { return csk::charpoly(mult_matrix()); }
  mpq_class norm() const { return qmat_det(mult_matrix()); }
  mpq_class trace() const {
    QMat M = mult_matrix();
    mpq_class t = 0;
    for (size_t i = 0; i < M.size(); ++i) t += M[i][i];
    return t;
  }

  Complex embed(mpfr_prec_t bits) const {
    auto v = K->basis_values(bits);
    Complex r(Real::with_bits(bits), Real::with_bits(bits));
    for (size_t i = 0; i < c.size(); ++i)
      if (c[i] != 0) r += v[i] * Real::from_q(c[i], bits);
    return r;
  }

  mpz_class denominator() const {
    mpz_class d = 1;
    for (const auto& x : c) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), x.get_den_mpz_t());
    return d;
  }

  std::string str(const std::string& a = "a", const std::string& z = "z") const {
    std::ostringstream os;
    long d = K->dF(), m = K->dg();
    bool first = true;
    for (long b = 0; b < m; ++b) {
      QPoly p(c.begin() + b * d, c.begin() + (b + 1) * d);
      trim(p);
      if (p.empty()) continue;
      if (!first) os << " + ";
      first = false;
      std::string zs = b == 0 ? "" : (b == 1 ? z : z + "^" + std::to_string(b));
      int nz = 0;
      for (auto& q : p) nz += q != 0;
      if (zs.empty()) os << poly_str(p, a);
      else if (nz == 1 && p.size() == 1 && p[0] == 1) os << zs;
      else os << "(" << poly_str(p, a) << ")*" << zs;
    }
    if (first) os << "0";
    return os.str();
  }

 private:
  static bool all_zero(const QVec& v) {
    for (const auto& x : v)
      if (x != 0) return false;
    return true;
  }
};

inline QVec to_qvec(const std::vector<long>& v) { return QVec(v.begin(), v.end()); }

}  // namespace csk
