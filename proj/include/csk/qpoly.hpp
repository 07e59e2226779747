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

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace csk {

using QVec = std::vector<mpq_class>;
using ZVec = std::vector<mpz_class>;
using QMat = std::vector<QVec>;
using ZMat = std::vector<ZVec>;

// Polynomials are ascending coefficient vectors with no trailing zeros (zero poly is empty).
using QPoly = std::vector<mpq_class>;

inline void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}
inline long degree(const QPoly& p) { return static_cast<long>(p.size()) - 1; }

inline QPoly poly_add(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}
inline QPoly poly_sub(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}
inline QPoly poly_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}
inline QPoly poly_scale(QPoly a, const mpq_class& s) {
  for (auto& c : a) c *= s;
  trim(a);
  return a;
}
inline void poly_divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  r = a;
  trim(r);
  q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, 0);
  const mpq_class lead = b.back();
  while (r.size() >= b.size()) {
    size_t sh = r.size() - b.size();
    mpq_class c = r.back() / lead;
    q[sh] = c;
    for (size_t i = 0; i < b.size(); ++i) r[sh + i] -= c * b[i];
    r.pop_back();
    trim(r);
  }
  trim(q);
}
inline QPoly poly_mod(const QPoly& a, const QPoly& b) {
  QPoly q, r;
  poly_divmod(a, b, q, r);
  return r;
}
inline QPoly poly_monic(QPoly a) {
  if (a.empty()) return a;
  mpq_class l = a.back();
  for (auto& c : a) c /= l;
  return a;
}
inline QPoly poly_gcd(QPoly a, QPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    QPoly r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(a);
}
inline QPoly poly_derivative(const QPoly& a) {
  QPoly r;
  for (size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * static_cast<long>(i));
  trim(r);
  return r;
}
inline QPoly poly_from_z(const ZVec& z) {
  QPoly p(z.begin(), z.end());
  trim(p);
  return p;
}
inline bool poly_is_integral(const QPoly& p) {
  for (const auto& c : p)
    if (c.get_den() != 1) return false;
  return true;
}

// Cyclotomic polynomial Phi_n over Z.
inline QPoly cyclotomic(long n) {
  QPoly num{-1};
  num.resize(n + 1);
  num[n] = 1;
  num[0] = -1;
  for (long d = 1; d < n; ++d) {
    if (n % d) continue;
    QPoly q, r;
    poly_divmod(num, cyclotomic(d), q, r);
    num = q;
  }
  return num;
}

inline std::string poly_str(const QPoly& p, const std::string& var = "x") {
  if (p.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (long i = degree(p); i >= 0; --i) {
    if (p[i] == 0) continue;
    mpq_class c = p[i];
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    mpq_class a = abs(c);
    if (i == 0 || a != 1) os << a.get_str();
    if (i > 0) os << (i == 0 || a != 1 ? "*" : "") << var << (i > 1 ? "^" + std::to_string(i) : "");
    first = false;
  }
  return os.str();
}

// ---------- rational linear algebra ----------

inline QMat qmat_identity(size_t n) {
  QMat m(n, QVec(n));
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline QMat qmat_mul(const QMat& a, const QMat& b) {
  size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), l = b.size();
  QMat r(n, QVec(m));
  for (size_t i = 0; i < n; ++i)
    for (size_t t = 0; t < l; ++t) {
      if (a[i][t] == 0) continue;
      for (size_t j = 0; j < m; ++j) r[i][j] += a[i][t] * b[t][j];
    }
  return r;
}

inline QVec qmat_vec(const QMat& a, const QVec& v) {
  QVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j)
      if (v[j] != 0) r[i] += a[i][j] * v[j];
  return r;
}

inline mpq_class qmat_det(QMat a) {
  size_t n = a.size();
  mpq_class det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (size_t r = c + 1; r < n; ++r) {
      if (a[r][c] == 0) continue;
      mpq_class f = a[r][c] / a[c][c];
      for (size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  return det;
}

// Returns false when singular.
inline bool qmat_inverse(QMat a, QMat& inv) {
  size_t n = a.size();
  inv = qmat_identity(n);
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return false;
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    mpq_class piv = a[c][c];
    for (size_t j = 0; j < n; ++j) {
      a[c][j] /= piv;
      inv[c][j] /= piv;
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      mpq_class f = a[r][c];
      for (size_t j = 0; j < n; ++j) {
        if (a[c][j] != 0) a[r][j] -= f * a[c][j];
        if (inv[c][j] != 0) inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return true;
}

inline bool qmat_solve(const QMat& a, const QVec& b, QVec& x) {
  QMat inv;
  if (!qmat_inverse(a, inv)) return false;
  x = qmat_vec(inv, b);
  return true;
}

// Characteristic polynomial det(xI - M) via reduction to Hessenberg form (exact).
inline QPoly charpoly(QMat h) {
  size_t n = h.size();
  for (size_t m = 1; m + 1 < n + 1 && m < n; ++m) {
    size_t i = m;
    while (i < n && h[i][m - 1] == 0) ++i;
    if (i == n) continue;
    if (i != m) {
      std::swap(h[i], h[m]);
      for (size_t r = 0; r < n; ++r) std::swap(h[r][i], h[r][m]);
    }
    mpq_class t = h[m][m - 1];
    for (size_t r = m + 1; r < n; ++r) {
      if (h[r][m - 1] == 0) continue;
      mpq_class u = h[r][m - 1] / t;
      for (size_t j = 0; j < n; ++j) h[r][j] -= u * h[m][j];
      for (size_t j = 0; j < n; ++j) h[j][m] += u * h[j][r];
    }
  }
  std::vector<QPoly> p(n + 1);
  p[0] = {1};
  for (size_t m = 1; m <= n; ++m) {
    p[m] = poly_mul(QPoly{-h[m - 1][m - 1], 1}, p[m - 1]);
    mpq_class t = 1;
    for (size_t i = 1; i < m; ++i) {
      t *= h[m - i][m - i - 1];
      if (t == 0) break;
      p[m] = poly_sub(p[m], poly_scale(p[m - i - 1], t * h[m - i - 1][m - 1]));
    }
  }
  return p[n];
}

}  // namespace csk
