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

#include <cmath>
#include <string>
#include <vector>

#include "csk/ball.hpp"
#include "csk/nz.hpp"
#include "csk/scalar.hpp"
#include "csk/special.hpp"

namespace csk {

struct DegenerateAverage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline long mod_pos(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

// Everything that depends on the level k and the choice of k-th roots.
struct LevelContext {
  NZDatum datum;
  long k = 1;
  long digits = 0;
  mpfr_prec_t bits = 0;
  IMat Q;  // B^{-1} A
  IVec L;  // B^{-1} nu
  Ball zeta, zeta_half;
  std::vector<Ball> z, zp, zpp, theta, theta_inv;
  std::vector<long> theta_shift;  // theta_i = zeta^{shift_i} * principal root
  std::vector<Ball> root2k;       // zeta_half^e, e = 0..2k-1

  long N() const { return datum.N; }
};

inline LevelContext make_level_context(const NZDatum& d, long k, long digits, std::vector<long> shifts = {}) {
  if (k < 1) throw InputError("level must be positive");
  if (abs(int_det(d.B)) != 1) throw InputError("B is not unimodular; a Z-nondegenerate gauge is required");
  LevelContext c;
  c.datum = d;
  c.k = k;
  c.digits = digits;
  c.bits = digits_to_bits(digits + 20);
  PrecisionScope ps(c.bits);
  IMat Bi = int_inverse_unimodular(d.B);
  c.Q = int_mul(Bi, d.A);
  c.L = int_mulv(Bi, d.nu);
  c.zeta = ball_root_of_unity(1, k, c.bits);
  c.zeta_half = ball_root_of_unity(1, 2 * k, c.bits);
  for (long e = 0; e < 2 * k; ++e) c.root2k.push_back(ball_root_of_unity(e, 2 * k, c.bits));
  if (shifts.empty()) shifts.assign(d.N, 0);
  c.theta_shift = shifts;
  Ball one(1L);
  for (long i = 0; i < d.N; ++i) {
    Ball zi = d.shapes[i].numeric(c.bits);
    c.z.push_back(zi);
    c.zp.push_back((one - zi).inverse());
    c.zpp.push_back(one - zi.inverse());
    Ball t = branch_root(zi, k) * ball_root_of_unity(mod_pos(shifts[i], k), k, c.bits);
    c.theta.push_back(t);
    c.theta_inv.push_back(t.inverse());
  }
  return c;
}

// (zeta theta^{-1}; zeta)_m, extended to negative m.
inline Ball pochhammer_factor(const LevelContext& c, long i, long m) {
  Ball r(1L), one(1L);
  r.mid.set_bits(c.bits);
  if (m >= 0) {
    for (long s = 1; s <= m; ++s) {
      Ball f = one - c.root2k[2 * mod_pos(s, c.k)] * c.theta_inv[i];
      if (f.contains_zero()) throw PoleError("vanishing Pochhammer factor");
      r *= f;
    }
    return r;
  }
  for (long s = 1; s <= -m; ++s) {
    Ball f = one - c.root2k[2 * mod_pos(1 - s, c.k)] * c.theta_inv[i];
    if (f.contains_zero()) throw PoleError("vanishing Pochhammer factor");
    r *= f;
  }
  return r.inverse();
}

inline Ball a_term(const LevelContext& c, const IVec& m) {
  const long N = c.N();
  IVec Qm = int_mulv(c.Q, m);
  long C = 0, Lm = 0;
  for (long i = 0; i < N; ++i) {
    C += m[i] * Qm[i];
    Lm += m[i] * c.L[i];
  }
  Ball v = c.root2k[mod_pos(C + Lm, 2 * c.k)];
  if (mod_pos(C, 2)) v = -v;
  for (long i = 0; i < N; ++i) {
    v *= powi(c.theta[i], -Qm[i]);
    v /= pochhammer_factor(c, i, m[i]);
  }
  return v;
}

// m in (Z/kZ)^N in lexicographic order, first coordinate most significant.
inline std::vector<IVec> residue_vectors(long N, long k) {
  std::vector<IVec> out;
  IVec m(N, 0);
  while (true) {
    out.push_back(m);
    long i = N - 1;
    while (i >= 0 && ++m[i] == k) m[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

inline std::vector<Ball> all_a_terms(const LevelContext& c) {
  std::vector<Ball> a;
  for (auto& m : residue_vectors(c.N(), c.k)) a.push_back(a_term(c, m));
  return a;
}

struct BranchRecord {
  std::string what;
  double arg = 0;      // argument of the radicand, in (-pi, pi]
  bool near_cut = false;
};

struct OneLoopResult {
  Ball tau;
  Ball hessian_det;   // det(A diag(z'') + B diag(z)^{-1})
  Ball radicand;      // hessian_det * theta^{f''} * z''^{-f/k}
  Ball dstar_product; // prod D*_k(theta^{-1})^{1/k}
  Ball gauss_sum;
  bool gauss_sum_vanishes = false;
  std::vector<BranchRecord> branches;
};

inline BranchRecord branch_of(const std::string& what, const Ball& x) {
  BranchRecord b;
  b.what = what;
  b.arg = arg(x.mid).to_double();
  // straddles the negative real axis within the ball radius
  b.near_cut = x.mid.re < Real(0L) && !(x.rad < Mag(abs(x.mid.im)));
  return b;
}

inline Ball ball_pow_q(const Ball& x, long p, long q) { return powi(branch_root(x, q), p); }

inline Ball hessian_det(const LevelContext& c, int sign = 1) {
  const long N = c.N();
  std::vector<std::vector<Ball>> M(N, std::vector<Ball>(N));
  for (long i = 0; i < N; ++i)
    for (long j = 0; j < N; ++j) {
      M[i][j] = c.zpp[j] * Ball(c.datum.A[i][j] * sign) + c.z[j].inverse() * Ball(c.datum.B[i][j] * sign);
    }
  Ball like(0L);
  like.mid.set_bits(c.bits);
  return sc_det(M, like);
}

inline Ball flattening_factor(const LevelContext& c) {
  Ball r(1L);
  r.mid.set_bits(c.bits);
  for (long i = 0; i < c.N(); ++i) {
    r *= powi(c.theta[i], c.datum.f2[i]);
    if (c.datum.f[i] != 0) r *= powi(branch_root(c.zpp[i], c.k), -c.datum.f[i]);
  }
  return r;
}

inline OneLoopResult tau_level_k(const LevelContext& c) {
  PrecisionScope ps(c.bits);
  OneLoopResult res;
  const long N = c.N();
  res.hessian_det = hessian_det(c);
  if (res.hessian_det.contains_zero()) throw PrecisionInsufficient("Hessian determinant not separated from zero");
  res.radicand = res.hessian_det * flattening_factor(c);
  res.branches.push_back(branch_of("sqrt radicand", res.radicand));
  Ball ds(1L);
  ds.mid.set_bits(c.bits);
  for (long i = 0; i < N; ++i) {
    Ball d = cyclic_dilog(true, c.k, c.theta_inv[i]);
    res.branches.push_back(branch_of("D*_k root " + std::to_string(i), d));
    ds *= branch_root(d, c.k);
  }
  res.dstar_product = ds;
  Ball g(0L);
  g.mid.set_bits(c.bits);
  for (auto& a : all_a_terms(c)) g += a;
  res.gauss_sum = g;
  res.gauss_sum_vanishes = g.contains_zero();
  Ball kpow = powi(sqrt(Ball(c.k)), N);
  res.tau = ds * g / (kpow * branch_root(res.radicand, 2));
  return res;
}

// Alternative b_m formula. Agrees with tau_level_k up to a root of unity of order dividing 12k.
inline OneLoopResult tau_alternative(const LevelContext& c) {
  PrecisionScope ps(c.bits);
  OneLoopResult res;
  const long N = c.N(), k = c.k;
  IMat Q2(N, IVec(N));
  IVec L2(N);
  for (long i = 0; i < N; ++i) {
    for (long j = 0; j < N; ++j) Q2[i][j] = (i == j ? 1 : 0) - c.Q[i][j];
    L2[i] = 1 - c.L[i];
  }
  Ball one(1L);
  Ball g(0L);
  g.mid.set_bits(c.bits);
  for (auto& m : residue_vectors(N, k)) {
    IVec Qm = int_mulv(Q2, m);
    long C = 0, Lm = 0;
    for (long i = 0; i < N; ++i) {
      C += m[i] * Qm[i];
      Lm += m[i] * L2[i];
    }
    Ball v = c.root2k[mod_pos(-(C + Lm), 2 * k)];
    if (mod_pos(Lm, 2)) v = -v;
    for (long i = 0; i < N; ++i) {
      v *= powi(c.theta[i], Qm[i]);
      for (long r = 1; r <= m[i]; ++r) {
        Ball f = one - c.root2k[2 * mod_pos(-r, k)] * c.theta[i];
        if (f.contains_zero()) throw PoleError("vanishing Pochhammer factor");
        v /= f;
      }
    }
    g += v;
  }
  res.gauss_sum = g;
  res.gauss_sum_vanishes = g.contains_zero();
  res.hessian_det = hessian_det(c, -1);
  res.radicand = res.hessian_det * flattening_factor(c);
  res.branches.push_back(branch_of("sqrt radicand", res.radicand));
  Ball prod(1L);
  prod.mid.set_bits(c.bits);
  for (long i = 0; i < N; ++i) {
    Ball x = c.root2k[2 * mod_pos(-1, k)] * c.theta[i];
    Ball d = cyclic_dilog(true, k, x);
    prod *= ball_pow_q(c.z[i], k - 1, 2 * k) * ball_pow_q(c.zpp[i], k - 1, k) / branch_root(d, k);
  }
  res.dstar_product = prod;
  res.tau = prod * g / (powi(sqrt(Ball(k)), N) * branch_root(res.radicand, 2));
  return res;
}

template <class V, class Mul>
V average_av_with(const std::vector<Ball>& a, const std::vector<V>& f, Mul mul) {
  if (a.empty() || a.size() != f.size()) throw std::invalid_argument("average needs one value per residue vector");
  Ball den = a[0];
  for (size_t i = 1; i < a.size(); ++i) den += a[i];
  if (den.contains_zero()) throw DegenerateAverage("sum of a_m is not separated from zero");
  V num = mul(f[0], a[0]);
  for (size_t i = 1; i < a.size(); ++i) num += mul(f[i], a[i]);
  return mul(num, den.inverse());
}

inline Ball average_av(const std::vector<Ball>& a, const std::vector<Ball>& f) {
  return average_av_with(a, f, [](const Ball& x, const Ball& y) { return x * y; });
}

struct GaloisShiftReport {
  long j = 0;
  Ball epsilon;
  double max_ratio_deviation_log10 = -1e300;
  double sum_deviation_log10 = -1e300;
};

inline double rel_dev_log10(const Ball& x, const Ball& ref) {
  Ball d = x - ref;
  return log10_of_mag(mag_upper(d.mid) + d.rad) - log10_abs_complex(ref.mid);
}

inline GaloisShiftReport galois_shift_check(const LevelContext& c, long j) {
  PrecisionScope ps(c.bits);
  GaloisShiftReport rep;
  rep.j = j;
  auto shifts = c.theta_shift;
  shifts[j] -= 1;
  LevelContext s = make_level_context(c.datum, c.k, c.digits, shifts);
  IVec ej(c.N(), 0);
  ej[j] = 1;
  rep.epsilon = a_term(c, ej).inverse();
  Ball sum_s(0L), sum_c(0L);
  sum_s.mid.set_bits(c.bits);
  sum_c.mid.set_bits(c.bits);
  for (auto& m : residue_vectors(c.N(), c.k)) {
    Ball as = a_term(s, m);
    IVec mj = m;
    mj[j] += 1;
    Ball ac = a_term(c, mj);
    rep.max_ratio_deviation_log10 = std::max(rep.max_ratio_deviation_log10, rel_dev_log10(as / ac, rep.epsilon));
    sum_s += as;
    sum_c += a_term(c, m);
  }
  rep.sum_deviation_log10 = rel_dev_log10(sum_s, rep.epsilon * sum_c);
  return rep;
}

// tau_1^{-2} = det(A diag(z'') + B diag(z)^{-1}) z^{f''} z''^{-f}, exactly in the trace field.
inline FieldElement tau1_inv_sq_exact(const NZDatum& d) {
  for (auto& s : d.shapes)
    if (!s.exact) throw InputError("exact shapes are required");
  FieldPtr K = d.shapes[0].exact->K;
  const long N = d.N;
  FieldElement one(K, mpq_class(1));
  std::vector<FieldElement> z, zpp;
  for (auto& s : d.shapes) {
    z.push_back(*s.exact);
    zpp.push_back(one - s.exact->inverse());
  }
  std::vector<std::vector<FieldElement>> M(N, std::vector<FieldElement>(N, one));
  for (long i = 0; i < N; ++i)
    for (long j = 0; j < N; ++j) M[i][j] = zpp[j] * mpq_class(d.A[i][j]) + z[j].inverse() * mpq_class(d.B[i][j]);
  FieldElement r = sc_det(M, one);
  for (long i = 0; i < N; ++i) r = r * z[i].pow(d.f2[i]) * zpp[i].pow(-d.f[i]);
  return r;
}

}  // namespace csk
