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

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "csk/ball.hpp"
#include "csk/field.hpp"
#include "csk/qpoly.hpp"

namespace csk {

using IMat = std::vector<std::vector<long>>;
using IVec = std::vector<long>;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeValue {
  std::optional<FieldElement> exact;
  std::string re, im;  // decimal strings; may be empty when only the exact value is known
  long digits = 0;     // accuracy of the decimal strings

  Ball numeric(mpfr_prec_t bits) const {
    if (exact) {
      Ball b(exact->embed(bits + 16));
      b.mid.set_bits(bits);
      b.round_err();
      return b;
    }
    Ball b = ball_from_strings(re, im, bits);
    if (digits > 0) b.rad += Mag(pow10(-digits, 64));
    return b;
  }
};

struct NZDatum {
  std::string name;
  long N = 0;
  IMat A, B;
  IVec nu;
  std::vector<ShapeValue> shapes;
  IVec f, f2;
  FieldPtr field;  // trace field with its embedding, when known
};

// ---------- integer matrices ----------

inline mpz_class int_det(const IMat& m) {
  size_t n = m.size();
  if (n == 0) return 1;
  std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
  // Bareiss
  mpz_class prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

inline QMat to_qmat(const IMat& m) {
  QMat q(m.size(), QVec(m.empty() ? 0 : m[0].size()));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m[i].size(); ++j) q[i][j] = m[i][j];
  return q;
}

inline long qmat_rank(QMat a) {
  size_t rows = a.size(), cols = rows ? a[0].size() : 0, r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    for (size_t i = r + 1; i < rows; ++i) {
      if (a[i][c] == 0) continue;
      mpq_class f = a[i][c] / a[r][c];
      for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return static_cast<long>(r);
}

// Inverse of a unimodular integer matrix.
inline IMat int_inverse_unimodular(const IMat& m) {
  QMat inv;
  if (!qmat_inverse(to_qmat(m), inv)) throw InputError("matrix is singular");
  IMat r(m.size(), IVec(m.size()));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m.size(); ++j) {
      if (inv[i][j].get_den() != 1) throw InputError("matrix is not unimodular");
      r[i][j] = inv[i][j].get_num().get_si();
    }
  return r;
}

inline IMat int_mul(const IMat& a, const IMat& b) {
  size_t n = a.size(), m = b[0].size(), l = b.size();
  IMat r(n, IVec(m, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t t = 0; t < l; ++t)
      for (size_t j = 0; j < m; ++j) r[i][j] += a[i][t] * b[t][j];
  return r;
}
inline IVec int_mulv(const IMat& a, const IVec& v) {
  IVec r(a.size(), 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) r[i] += a[i][j] * v[j];
  return r;
}
inline IMat int_transpose(const IMat& a) {
  IMat r(a[0].size(), IVec(a.size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[0].size(); ++j) r[j][i] = a[i][j];
  return r;
}

inline double log10_abs_complex(const Complex& z) {
  Real a = abs(z);
  if (a.is_zero()) return -1e300;
  Real l = Real::with_bits(64);
  mpfr_log10(l.get(), a.get(), MPFR_RNDN);
  return l.to_double();
}

// ---------- validation ----------

struct ValidationReport {
  bool ok = true;
  bool symmetric = false;
  bool full_rank = false;
  mpz_class detB;
  bool z_nondegenerate = false;
  bool flattening_ok = false;
  std::vector<double> gluing_residual_log10;  // per row, log-form residual modulo 2 pi i
  double multiplicative_residual_log10 = 0;
  bool exact_gluing_ok = false;  // z^A z''^B = (-1)^nu checked exactly
  bool exact_available = false;
  std::vector<std::string> problems;
};

inline void check_dimensions(const NZDatum& d) {
  auto sq = [&](const IMat& m, const char* what) {
    if (static_cast<long>(m.size()) != d.N) throw InputError(std::string(what) + " has the wrong number of rows");
    for (auto& r : m)
      if (static_cast<long>(r.size()) != d.N) throw InputError(std::string(what) + " is not square");
  };
  if (d.N <= 0) throw InputError("N must be positive");
  sq(d.A, "A");
  sq(d.B, "B");
  if (static_cast<long>(d.nu.size()) != d.N) throw InputError("nu has the wrong length");
  if (static_cast<long>(d.shapes.size()) != d.N) throw InputError("shape count differs from N");
  if (static_cast<long>(d.f.size()) != d.N || static_cast<long>(d.f2.size()) != d.N)
    throw InputError("flattening has the wrong length");
}

inline std::vector<Ball> numeric_shapes(const NZDatum& d, mpfr_prec_t bits) {
  std::vector<Ball> z;
  for (auto& s : d.shapes) z.push_back(s.numeric(bits));
  return z;
}

inline ValidationReport validate(const NZDatum& d, long digits) {
  check_dimensions(d);
  ValidationReport rep;
  const long N = d.N;
  mpfr_prec_t bits = digits_to_bits(digits + 20);
  PrecisionScope ps(bits);

  IMat ABt = int_mul(d.A, int_transpose(d.B));
  rep.symmetric = true;
  for (long i = 0; i < N; ++i)
    for (long j = 0; j < N; ++j)
      if (ABt[i][j] != ABt[j][i]) rep.symmetric = false;
  if (!rep.symmetric) rep.problems.push_back("A B^T is not symmetric");

  QMat AB(N, QVec(2 * N));
  for (long i = 0; i < N; ++i)
    for (long j = 0; j < N; ++j) {
      AB[i][j] = d.A[i][j];
      AB[i][N + j] = d.B[i][j];
    }
  rep.full_rank = qmat_rank(AB) == N;
  if (!rep.full_rank) rep.problems.push_back("(A B) does not have rank N");

  rep.detB = int_det(d.B);
  rep.z_nondegenerate = abs(rep.detB) == 1;

  IVec lhs = int_mulv(d.A, d.f), rhs = int_mulv(d.B, d.f2);
  rep.flattening_ok = true;
  for (long i = 0; i < N; ++i)
    if (lhs[i] + rhs[i] != d.nu[i]) rep.flattening_ok = false;
  if (!rep.flattening_ok) rep.problems.push_back("A f + B f'' != nu");

  std::vector<Ball> z = numeric_shapes(d, bits);
  for (long i = 0; i < N; ++i) {
    if (z[i].contains_zero() || (z[i] - Ball(1L)).contains_zero())
      throw InputError("shape " + std::to_string(i) + " is 0 or 1");
  }
  Real twopi = pi_real(bits) * Real(2L), pi = pi_real(bits);
  std::vector<Complex> lz, lzpp;
  for (long i = 0; i < N; ++i) {
    lz.push_back(log(z[i].mid));
    lzpp.push_back(log(Complex(1L) - Complex(1L) / z[i].mid));
  }
  double worst = -1e300;
  for (long r = 0; r < N; ++r) {
    Complex s(Real::with_bits(bits), Real::with_bits(bits));
    for (long j = 0; j < N; ++j) s += lz[j] * Real(d.A[r][j]) + lzpp[j] * Real(d.B[r][j]);
    s.im -= pi * Real(d.nu[r]);
    // remove the 2 pi i multiple
    Real m = (s.im / twopi).round_z();
    s.im -= m * twopi;
    double l = log10_abs_complex(s);
    rep.gluing_residual_log10.push_back(l);
    worst = std::max(worst, l);
  }
  rep.multiplicative_residual_log10 = worst;
  if (worst > -(digits - 10)) {
    rep.problems.push_back("gluing equations fail numerically");
  }
  // exact check of z^A z''^B = (-1)^nu
  bool all_exact = true;
  for (auto& s : d.shapes) all_exact = all_exact && s.exact.has_value();
  rep.exact_available = all_exact;
  if (all_exact) {
    rep.exact_gluing_ok = true;
    FieldPtr K = d.shapes[0].exact->K;
    for (long r = 0; r < N; ++r) {
      FieldElement p(K, mpq_class(1));
      for (long j = 0; j < N; ++j) {
        const FieldElement& zj = *d.shapes[j].exact;
        FieldElement zpp = FieldElement(K, mpq_class(1)) - zj.inverse();
        p = p * zj.pow(d.A[r][j]) * zpp.pow(d.B[r][j]);
      }
      FieldElement target(K, mpq_class(d.nu[r] % 2 == 0 ? 1 : -1));
      if (p != target) rep.exact_gluing_ok = false;
    }
    if (!rep.exact_gluing_ok) rep.problems.push_back("exact gluing equations fail");
    for (long i = 0; i < N; ++i) {
      if (!d.shapes[i].re.empty() && d.shapes[i].digits > 0) {
        long dd = std::min(d.shapes[i].digits, digits);
        Ball a = d.shapes[i].numeric(bits);
        Ball b = ball_from_strings(d.shapes[i].re, d.shapes[i].im, bits);
        if (log10_abs_complex(a.mid - b.mid) > -(dd - 10)) rep.problems.push_back("exact and numeric shapes disagree");
      }
    }
  }
  rep.ok = rep.problems.empty();
  return rep;
}

// ---------- gauge ----------

inline NZDatum rotate_quad(const NZDatum& d, long i) {
  if (i < 0 || i >= d.N) throw InputError("tetrahedron index out of range");
  NZDatum r = d;
  for (long row = 0; row < d.N; ++row) {
    long a = d.A[row][i], b = d.B[row][i];
    r.A[row][i] = -b;
    r.B[row][i] = a - b;
    r.nu[row] = d.nu[row] - b;
  }
  const ShapeValue& s = d.shapes[i];
  ShapeValue t;
  if (s.exact) {
    FieldElement one(s.exact->K, mpq_class(1));
    t.exact = (one - *s.exact).inverse();
  }
  if (!s.re.empty()) {
    mpfr_prec_t bits = digits_to_bits(std::max<long>(s.digits, 30) + 20);
    PrecisionScope ps(bits);
    Complex z{Real(s.re), Real(s.im)};
    Complex w = Complex(1L) / (Complex(1L) - z);
    long dg = std::max<long>(s.digits, 30);
    t.re = w.re.str(dg);
    t.im = w.im.str(dg);
    t.digits = s.digits > 0 ? s.digits - 2 : 0;
  }
  r.shapes[i] = t;
  long fi = d.f[i], f2i = d.f2[i];
  r.f[i] = 1 - fi - f2i;
  r.f2[i] = fi;
  return r;
}

struct GaugeResult {
  bool found = false;
  NZDatum datum;
  std::vector<int> rotations;  // per tetrahedron, 0..2
  long visited = 0;
  bool budget_exhausted = false;
};

inline NZDatum apply_rotations(const NZDatum& d, const std::vector<int>& rot) {
  NZDatum r = d;
  for (size_t i = 0; i < rot.size(); ++i)
    for (int t = 0; t < rot[i]; ++t) r = rotate_quad(r, static_cast<long>(i));
  return r;
}

// Column-only rotation effect on B (what the search needs), without touching shapes.
inline IMat rotated_B(const NZDatum& d, const std::vector<int>& rot) {
  IMat A = d.A, B = d.B;
  for (size_t i = 0; i < rot.size(); ++i)
    for (int t = 0; t < rot[i]; ++t)
      for (long row = 0; row < d.N; ++row) {
        long a = A[row][i], b = B[row][i];
        A[row][i] = -b;
        B[row][i] = a - b;
      }
  return B;
}

inline GaugeResult find_unimodular_gauge(const NZDatum& d, long budget = 600000, std::uint64_t seed = 0) {
  GaugeResult res;
  const long N = d.N;
  std::vector<int> rot(N, 0);
  if (N <= 12) {
    long total = 1;
    for (long i = 0; i < N; ++i) total *= 3;
    for (long idx = 0; idx < total; ++idx) {
      if (res.visited >= budget) {
        res.budget_exhausted = true;
        return res;
      }
      long x = idx;
      for (long i = N - 1; i >= 0; --i) {
        rot[i] = static_cast<int>(x % 3);
        x /= 3;
      }
      ++res.visited;
      if (abs(int_det(rotated_B(d, rot))) == 1) {
        res.found = true;
        res.rotations = rot;
        res.datum = apply_rotations(d, rot);
        return res;
      }
    }
    return res;
  }
  std::mt19937_64 rng(seed);
  while (res.visited < budget) {
    for (auto& r : rot) r = static_cast<int>(rng() % 3);
    mpz_class cur = abs(int_det(rotated_B(d, rot)));
    bool improved = true;
    while (improved && res.visited < budget) {
      improved = false;
      for (long i = 0; i < N && res.visited < budget; ++i) {
        for (int t = 1; t <= 2; ++t) {
          auto trial = rot;
          trial[i] = (trial[i] + t) % 3;
          ++res.visited;
          mpz_class v = abs(int_det(rotated_B(d, trial)));
          if (v == 1) {
            res.found = true;
            res.rotations = trial;
            res.datum = apply_rotations(d, trial);
            return res;
          }
          if (v != 0 && (cur == 0 || v < cur)) {
            cur = v;
            rot = trial;
            improved = true;
          }
        }
      }
    }
  }
  res.budget_exhausted = true;
  return res;
}

inline std::pair<IVec, IVec> solve_flattening(const IMat& A, const IMat& B, const IVec& nu) {
  (void)A;
  IMat Bi = int_inverse_unimodular(B);
  return {IVec(nu.size(), 0), int_mulv(Bi, nu)};
}

// ---------- JSON ----------

inline mpq_class parse_rational(const nlohmann::json& j) {
  if (j.is_number_integer()) return mpq_class(j.get<long>());
  mpq_class q(j.get<std::string>());
  q.canonicalize();
  return q;
}

inline long count_digits(const std::string& s) {
  long n = 0;
  bool started = false;
  for (char c : s) {
    if (c == 'e' || c == 'E') break;
    if (c >= '0' && c <= '9') {
      if (c != '0') started = true;
      if (started) ++n;
    }
  }
  return n;
}

inline FieldPtr field_from_json(const nlohmann::json& j) {
  QPoly p;
  for (auto& c : j.at("min_poly")) p.push_back(parse_rational(c));
  trim(p);
  if (p.empty() || p.back() != 1) throw InputError("min_poly must be monic");
  return NumberField::make_base(p, j.at("root_re").get<std::string>(), j.at("root_im").get<std::string>());
}

inline NZDatum datum_from_json(const nlohmann::json& j) {
  NZDatum d;
  try {
    d.name = j.value("name", "");
    d.N = j.at("N").get<long>();
    d.A = j.at("A").get<IMat>();
    d.B = j.at("B").get<IMat>();
    d.nu = j.at("nu").get<IVec>();
    if (j.contains("field")) d.field = field_from_json(j.at("field"));
    long N = d.N;
    d.shapes.resize(N);
    if (j.contains("shapes_exact")) {
      if (!d.field) throw InputError("shapes_exact given without a field");
      auto& se = j.at("shapes_exact");
      if (static_cast<long>(se.size()) != N) throw InputError("shapes_exact has the wrong length");
      for (long i = 0; i < N; ++i) {
        QVec c;
        for (auto& x : se[i]) c.push_back(parse_rational(x));
        if (static_cast<long>(c.size()) != d.field->dF()) throw InputError("exact shape has the wrong degree");
        d.shapes[i].exact = FieldElement(d.field, c);
      }
    }
    if (j.contains("shapes_numeric")) {
      auto& sn = j.at("shapes_numeric");
      if (static_cast<long>(sn.size()) != N) throw InputError("shapes_numeric has the wrong length");
      for (long i = 0; i < N; ++i) {
        d.shapes[i].re = sn[i].at(0).get<std::string>();
        d.shapes[i].im = sn[i].at(1).get<std::string>();
        if (j.contains("precision"))
          d.shapes[i].digits = j.at("precision").get<long>();
        else
          d.shapes[i].digits = std::max(count_digits(d.shapes[i].re), count_digits(d.shapes[i].im));
      }
    }
    for (long i = 0; i < N; ++i)
      if (!d.shapes[i].exact && d.shapes[i].re.empty()) throw InputError("missing shape values");
    if (j.contains("f") && j.contains("f2")) {
      d.f = j.at("f").get<IVec>();
      d.f2 = j.at("f2").get<IVec>();
    } else {
      d.f.assign(N, 0);
      d.f2.assign(N, 0);
      if (abs(int_det(d.B)) == 1) d.f2 = solve_flattening(d.A, d.B, d.nu).second;
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed NZ datum: ") + e.what());
  }
  check_dimensions(d);
  return d;
}

inline NZDatum load_datum(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("cannot parse " + path + ": " + e.what());
  }
  return datum_from_json(j);
}

inline nlohmann::json datum_to_json(const NZDatum& d) {
  nlohmann::json j;
  j["name"] = d.name;
  j["N"] = d.N;
  j["A"] = d.A;
  j["B"] = d.B;
  j["nu"] = d.nu;
  j["f"] = d.f;
  j["f2"] = d.f2;
  if (d.field) {
    nlohmann::json fj;
    std::vector<std::string> mp;
    for (auto& c : d.field->base) mp.push_back(c.get_str());
    fj["min_poly"] = mp;
    fj["root_re"] = d.field->root_re;
    fj["root_im"] = d.field->root_im;
    j["field"] = fj;
  }
  bool all_exact = true;
  for (auto& s : d.shapes) all_exact = all_exact && s.exact.has_value();
  if (all_exact) {
    nlohmann::json se = nlohmann::json::array();
    for (auto& s : d.shapes) {
      std::vector<std::string> v;
      for (auto& c : s.exact->c) v.push_back(c.get_str());
      se.push_back(v);
    }
    j["shapes_exact"] = se;
  }
  nlohmann::json sn = nlohmann::json::array();
  for (auto& s : d.shapes) sn.push_back({s.re, s.im});
  j["shapes_numeric"] = sn;
  return j;
}

}  // namespace csk
