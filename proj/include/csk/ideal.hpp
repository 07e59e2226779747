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

#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "csk/field.hpp"
#include "csk/lll.hpp"
#include "csk/polyfp.hpp"

namespace csk {

struct UnsupportedPrime : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ideals are lattices inside the order spanned by the field basis alpha^a zeta^b.
// That span is a ring exactly when the cyclotomic factor g has integral coefficients.
inline bool basis_is_order(const NumberField& K) {
  if (!poly_is_integral(K.base)) return false;
  for (const auto& gb : K.g)
    for (const auto& q : gb)
      if (q.get_den() != 1) return false;
  return true;
}

inline bool is_integral_coords(const FieldElement& x) {
  for (const auto& q : x.c)
    if (q.get_den() != 1) return false;
  return true;
}

inline bool p_integral(const FieldElement& x, const mpz_class& p) {
  for (const auto& q : x.c)
    if (mpz_divisible_p(q.get_den_mpz_t(), p.get_mpz_t())) return false;
  return true;
}

inline bool unit_test(const FieldElement& x) {
  if (x.is_zero()) return false;
  QPoly cp = x.charpoly();
  if (!poly_is_integral(cp)) return false;
  mpq_class n = x.norm();
  return n == 1 || n == -1;
}

// Upper-triangular Hermite normal form of the lattice spanned by `gens` (all length n, full rank).
inline ZMat hnf_rows(const ZMat& gens, size_t n) {
  ZMat H(n, ZVec(n));
  std::vector<bool> have(n, false);
  for (ZVec v : gens) {
    for (size_t c = 0; c < n; ++c) {
      if (v[c] == 0) continue;
      if (!have[c]) {
        if (v[c] < 0)
          for (auto& x : v) x = -x;
        H[c] = v;
        have[c] = true;
        break;
      }
      mpz_class g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), H[c][c].get_mpz_t(), v[c].get_mpz_t());
      mpz_class a = H[c][c] / g, b = v[c] / g;
      ZVec r1(n), r2(n);
      for (size_t j = 0; j < n; ++j) {
        r1[j] = s * H[c][j] + t * v[j];
        r2[j] = b * H[c][j] - a * v[j];
      }
      H[c] = std::move(r1);
      v = std::move(r2);
      for (size_t j = c + 1; j < n; ++j) {
        if (!have[j] || v[j] == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), v[j].get_mpz_t(), H[j][j].get_mpz_t());
        if (q != 0)
          for (size_t l = j; l < n; ++l) v[l] -= q * H[j][l];
      }
    }
  }
  for (size_t c = 0; c < n; ++c)
    if (!have[c]) throw std::invalid_argument("hnf_rows: lattice is not of full rank");
  for (size_t r = n; r-- > 0;) {
    if (H[r][r] < 0)
      for (auto& x : H[r]) x = -x;
    for (size_t j = r + 1; j < n; ++j) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), H[r][j].get_mpz_t(), H[j][j].get_mpz_t());
      if (q != 0)
        for (size_t l = j; l < n; ++l) H[r][l] -= q * H[j][l];
    }
  }
  return H;
}

struct IdealLattice {
  FieldPtr K;
  ZMat hnf;  // rows: Z-basis in field-basis coordinates
  mpz_class norm;

  static IdealLattice generated_by(const FieldPtr& K, const std::vector<FieldElement>& gens) {
    long n = K->dim();
    ZMat rows;
    for (const auto& g : gens) {
      if (!is_integral_coords(g)) throw std::invalid_argument("ideal generator is not integral");
      for (long j = 0; j < n; ++j) {
        FieldElement e(K, mpq_class(0));
        e.c[j] = 1;
        FieldElement ge = g * e;
        ZVec v(n);
        for (long i = 0; i < n; ++i) v[i] = ge.c[i].get_num();
        rows.push_back(std::move(v));
      }
    }
    IdealLattice I;
    I.K = K;
    I.hnf = hnf_rows(rows, static_cast<size_t>(n));
    I.norm = 1;
    for (long i = 0; i < n; ++i) I.norm *= I.hnf[i][i];
    return I;
  }

  // Membership of an integral element: reduce against the triangular basis.
  bool contains(const FieldElement& x) const {
    if (!is_integral_coords(x)) return false;
    size_t n = hnf.size();
    ZVec v(n);
    for (size_t i = 0; i < n; ++i) v[i] = x.c[i].get_num();
    for (size_t c = 0; c < n; ++c) {
      if (v[c] == 0) continue;
      if (!mpz_divisible_p(v[c].get_mpz_t(), hnf[c][c].get_mpz_t())) return false;
      mpz_class q = v[c] / hnf[c][c];
      for (size_t l = c; l < n; ++l) v[l] -= q * hnf[c][l];
    }
    return true;
  }

  bool operator==(const IdealLattice& o) const { return hnf == o.hnf; }
};

struct PrimeIdeal {
  mpz_class p;
  long e = 1;  // ramification index
  long f = 1;  // residue degree
  FieldElement gamma;     // primitive element whose equation order is p-maximal
  FpPoly residue_factor;  // irreducible factor of the min poly of gamma mod p
  FieldElement second;    // the generator g(gamma), so P = (p, g(gamma))
  FieldElement anti;      // b with b P in pO and b not in pO
  IdealLattice lattice;

  mpz_class norm() const {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(f));
    return r;
  }
  std::string label() const {
    return "(" + p.get_str() + ", " + second.str() + ")";
  }
};

namespace detail {

inline FieldElement eval_poly_at(const std::vector<mpz_class>& coeffs, const FieldElement& x) {
  FieldElement r(x.K, mpq_class(0));
  for (size_t i = coeffs.size(); i-- > 0;) {
    r = r * x;
    r.c[0] += coeffs[i];
  }
  return r;
}

inline FieldElement reduce_mod_p(FieldElement x, const mpz_class& p) {
  for (auto& q : x.c) {
    mpz_class t = q.get_num();
    mpz_mod(t.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t());
    q = t;
  }
  return x;
}

inline std::vector<mpz_class> integral_charpoly(const FieldElement& g) {
  QPoly cp = g.charpoly();
  if (!poly_is_integral(cp)) throw UnsupportedPrime("primitive element is not integral");
  std::vector<mpz_class> out;
  for (auto& q : cp) out.push_back(q.get_num());
  return out;
}

// Dedekind criterion: Z[gamma] is p-maximal iff gcd(F, t, h) = 1 mod p.
inline bool dedekind_ok(const std::vector<mpz_class>& f, const Fp& fp,
                        const std::vector<std::pair<FpPoly, long>>& fac) {
  FpPoly t{mpz_class(1)}, h{mpz_class(1)};
  for (const auto& [g, e] : fac) {
    t = fp.mul(t, g);
    for (long i = 1; i < e; ++i) h = fp.mul(h, g);
  }
  // lift t*h with coefficients in [0, p) and compare with f over Z
  std::vector<mpz_class> th(t.size() + h.size() - 1);
  for (size_t i = 0; i < t.size(); ++i)
    for (size_t j = 0; j < h.size(); ++j) th[i + j] += t[i] * h[j];
  std::vector<mpz_class> F(std::max(th.size(), f.size()));
  for (size_t i = 0; i < F.size(); ++i) {
    mpz_class a = i < th.size() ? th[i] : mpz_class(0);
    mpz_class b = i < f.size() ? f[i] : mpz_class(0);
    mpz_class d = a - b;
    if (!mpz_divisible_p(d.get_mpz_t(), fp.p().get_mpz_t())) throw std::logic_error("dedekind: t*h != f mod p");
    F[i] = d / fp.p();
  }
  FpPoly Fb = fp.reduce(FpPoly(F.begin(), F.end()));
  return Fp::deg(fp.gcd(fp.gcd(Fb, t), h)) == 0;
}

inline std::vector<FieldElement> primitive_candidates(const FieldPtr& K) {
  std::vector<FieldElement> out;
  FieldElement a = FieldElement::alpha(K);
  if (K->dg() == 1) {
    out.push_back(a);
    for (long c = 1; c <= 6; ++c) {
      out.push_back(a + FieldElement(K, mpq_class(c)));
    }
    return out;
  }
  FieldElement z = FieldElement::zeta(K);
  if (K->dF() == 1) a = FieldElement(K, mpq_class(0));
  for (long c : {1L, -1L, 2L, -2L, 3L, -3L, 4L, -4L, 5L, -5L}) out.push_back(a + z * mpq_class(c));
  return out;
}

}  // namespace detail

// Kummer-Dedekind splitting of p in the order spanned by the field basis.
inline std::vector<PrimeIdeal> factor_prime_dedekind(const mpz_class& p, const FieldPtr& K, unsigned long seed = 0) {
  if (!basis_is_order(*K)) throw UnsupportedPrime("field basis does not span an order");
  Fp fp(p);
  for (const auto& gam : detail::primitive_candidates(K)) {
    std::vector<mpz_class> f = detail::integral_charpoly(gam);
    QPoly fq(f.begin(), f.end());
    if (degree(poly_gcd(fq, poly_derivative(fq))) > 0) continue;  // not a primitive element
    FpPoly fb = fp.reduce(FpPoly(f.begin(), f.end()));
    auto fac = fp.factor(fb, seed);
    if (!detail::dedekind_ok(f, fp, fac)) continue;
    std::vector<PrimeIdeal> out;
    for (const auto& [g, e] : fac) {
      PrimeIdeal P;
      P.p = p;
      P.e = e;
      P.f = Fp::deg(g);
      P.gamma = gam;
      P.residue_factor = g;
      P.second = detail::eval_poly_at(g, gam);
      FpPoly h = fp.div(fb, g);
      P.anti = detail::reduce_mod_p(detail::eval_poly_at(h, gam), p);
      P.lattice = IdealLattice::generated_by(K, {FieldElement(K, mpq_class(p)), P.second});
      if (P.lattice.norm != P.norm()) throw std::logic_error("prime ideal lattice has the wrong index");
      out.push_back(std::move(P));
    }
    return out;
  }
  throw UnsupportedPrime("p = " + p.get_str() + " divides the index of every tried equation order");
}

// v_P(x) via x * (b/p)^m staying p-integral exactly while m <= v_P(x).
inline long ideal_valuation(FieldElement x, const PrimeIdeal& P) {
  if (x.is_zero()) throw std::domain_error("valuation of zero");
  mpz_class d = x.denominator();
  long vd = 0;
  while (mpz_divisible_p(d.get_mpz_t(), P.p.get_mpz_t())) {
    d /= P.p;
    ++vd;
  }
  mpz_class den = x.denominator();
  x *= mpq_class(den);
  long m = 0;
  mpq_class invp(1, P.p);
  invp.canonicalize();
  for (;;) {
    FieldElement y = x * P.anti;
    y *= invp;
    if (!p_integral(y, P.p)) break;
    x = std::move(y);
    ++m;
  }
  return m - P.e * vd;
}

// All complex embeddings as (alpha_i, zeta^j) pairs.
struct Embedding {
  Complex alpha, zeta;
};

inline std::vector<Complex> poly_roots(const QPoly& p, mpfr_prec_t bits) {
  long n = degree(p);
  PrecisionScope ps(bits);
  std::vector<Complex> r(n);
  Complex seed(Real(0.4), Real(0.9));
  Complex cur(Real(1L), Real(0L));
  for (long i = 0; i < n; ++i) {
    r[i] = cur;
    cur *= seed;
  }
  Real tol = pow10(-static_cast<long>(bits * 0.28), bits);
  for (int it = 0; it < 2000; ++it) {
    Real delta(0L);
    for (long i = 0; i < n; ++i) {
      Complex num = NumberField::eval_q(p, r[i]);
      Complex den(Real(1L), Real(0L));
      for (long j = 0; j < n; ++j)
        if (j != i) den *= (r[i] - r[j]);
      Complex step = num / den;
      r[i] -= step;
      Real a = abs(step);
      if (a > delta) delta = a;
    }
    if (delta < tol) break;
  }
  return r;
}

inline std::vector<Embedding> all_embeddings(const NumberField& K, mpfr_prec_t bits) {
  std::vector<Embedding> out;
  auto roots = poly_roots(K.base, bits);
  Real tol = pow10(-static_cast<long>(bits * 0.2), bits);
  for (const auto& a : roots) {
    for (long j = 0; j < K.k; ++j) {
      if (K.k > 1 && std::gcd(j, K.k) != 1) continue;
      Complex z = root_of_unity(j, K.k, bits);
      Complex s(Real::with_bits(bits), Real::with_bits(bits));
      Complex zp(Real(1L).set_bits(bits), Real::with_bits(bits));
      for (long b = 0; b <= K.dg(); ++b) {
        s += NumberField::eval_q(K.g[b], a) * zp;
        zp *= z;
      }
      if (abs(s) < tol) out.push_back({a, z});
      if (K.k == 1) break;
    }
  }
  if (static_cast<long>(out.size()) != K.dim()) throw std::logic_error("embedding count mismatch");
  return out;
}

inline Complex embed_at(const FieldElement& x, const Embedding& s) {
  const NumberField& K = *x.K;
  Complex r(Real::with_bits(s.alpha.bits()), Real::with_bits(s.alpha.bits()));
  Complex zp(Real(1L).set_bits(s.alpha.bits()), Real::with_bits(s.alpha.bits()));
  long d = K.dF();
  for (long b = 0; b < K.dg(); ++b) {
    QPoly part(x.c.begin() + b * d, x.c.begin() + (b + 1) * d);
    r += NumberField::eval_q(part, s.alpha) * zp;
    zp *= s.zeta;
  }
  return r;
}

struct GeneratorResult {
  bool found = false;
  FieldElement generator;
  long tried = 0;
};

// Look for g in I with |N(g)| = N(I) among short vectors of the Minkowski-embedded lattice.
inline GeneratorResult generator_search(const IdealLattice& I, long budget = 2000) {
  GeneratorResult res;
  if (budget <= 0) return res;
  const FieldPtr& K = I.K;
  const long n = K->dim();
  mpfr_prec_t bits = 256 + 4 * static_cast<long>(mpz_sizeinbase(I.norm.get_mpz_t(), 2));
  auto emb = all_embeddings(*K, bits);
  Real C = Real(1L).set_bits(bits);
  C.mul_2si(48);
  ZMat L;
  for (long i = 0; i < n; ++i) {
    QVec c(I.hnf[i].begin(), I.hnf[i].end());
    FieldElement b(K, c);
    ZVec row(I.hnf[i].begin(), I.hnf[i].end());
    for (const auto& s : emb) {
      Complex v = embed_at(b, s);
      row.push_back((v.re * C).round_z());
      row.push_back((v.im * C).round_z());
    }
    L.push_back(std::move(row));
  }
  lll_reduce(L);
  mpq_class target(I.norm);
  auto test = [&](const ZVec& coords) {
    ++res.tried;
    QVec c(n);
    bool zero = true;
    for (long j = 0; j < n; ++j) {
      c[j] = coords[j];
      zero = zero && coords[j] == 0;
    }
    if (zero) return false;
    FieldElement g(K, c);
    mpq_class N = abs(g.norm());
    if (N == target && I.contains(g)) {
      res.found = true;
      res.generator = g;
      return true;
    }
    return false;
  };
  for (const auto& row : L) {
    if (res.tried >= budget) return res;
    if (test(row)) return res;
  }
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j)
      for (int sg : {1, -1}) {
        if (res.tried >= budget) return res;
        ZVec v(n);
        for (long t = 0; t < n; ++t) v[t] = L[i][t] + sg * L[j][t];
        if (test(v)) return res;
      }
  return res;
}

}  // namespace csk
