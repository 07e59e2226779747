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

#include <functional>
#include <map>
#include <vector>

#include "csk/diagrams.hpp"
#include "csk/oneloop.hpp"
#include "csk/scalar.hpp"
#include "csk/series.hpp"
#include "csk/special.hpp"

namespace csk {

struct SingularHessian : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class S>
using SMat = std::vector<std::vector<S>>;

template <class S>
SMat<S> sc_inverse(SMat<S> a, const S& like) {
  const size_t n = a.size();
  SMat<S> inv(n, std::vector<S>(n, sc_zero(like)));
  for (size_t i = 0; i < n; ++i) inv[i][i] = sc_one(like);
  for (size_t c = 0; c < n; ++c) {
    size_t p = n;
    if constexpr (std::is_same_v<S, Ball>) {
      Real best(-1L);
      for (size_t r = c; r < n; ++r) {
        Real m = abs(a[r][c].mid);
        if (m > best) {
          best = m;
          p = r;
        }
      }
    } else {
      for (size_t r = c; r < n && p == n; ++r)
        if (!a[r][c].is_zero()) p = r;
    }
    if (p == n || sc_is_zero_like(a[p][c])) throw SingularHessian("Hessian is not invertible");
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    S piv = sc_one(like) / a[c][c];
    for (size_t j = 0; j < n; ++j) {
      a[c][j] = a[c][j] * piv;
      inv[c][j] = inv[c][j] * piv;
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      S f = a[r][c];
      for (size_t j = 0; j < n; ++j) {
        a[r][j] = a[r][j] - f * a[c][j];
        inv[r][j] = inv[r][j] - f * inv[c][j];
      }
    }
  }
  return inv;
}

// Vertex factors at one residue vector m.  gamma[j][i][t] is the coefficient of
// hbar^{t + lo(j)} of Gamma^{(j)}_i, with lo(j) = -1 for j >= 3 and 0 otherwise;
// gamma0[p] is the coefficient of hbar^p of Gamma^{(0)}.
template <class S>
struct VertexTable {
  int nmax = 0;
  std::vector<std::vector<std::vector<S>>> gamma;
  std::vector<S> gamma0;

  static int lo(int j) { return j >= 3 ? -1 : 0; }
  S coeff(int j, long i, int power) const {
    int t = power - lo(j);
    const auto& v = gamma[j][i];
    if (t < 0 || t >= static_cast<int>(v.size())) return sc_zero(gamma0[0]);
    return v[t];
  }
};

template <class S>
struct PerturbationContext {
  long k = 1, N = 0;
  int nmax = 3;
  S like;
  IMat Q;
  IVec L;
  mpq_class fL;  // f . B^{-1} nu
  SMat<S> P;     // k(-B^{-1}A + diag z')^{-1}; the propagator is hbar P
  std::vector<IVec> ms;
  std::vector<S> a;  // a_m, same order as ms
  // w(i, s, m) = zeta^{m_i + s} theta_i^{-1}
  std::function<S(long, long, const IVec&)> w;
};

inline PerturbationContext<Ball> make_perturbation_context(const LevelContext& c, int nmax) {
  PrecisionScope ps(c.bits);
  PerturbationContext<Ball> p;
  p.k = c.k;
  p.N = c.N();
  p.nmax = nmax;
  p.like = Ball(0L);
  p.like.mid.set_bits(c.bits);
  p.Q = c.Q;
  p.L = c.L;
  p.fL = 0;
  for (long i = 0; i < p.N; ++i) p.fL += mpq_class(c.datum.f[i] * c.L[i]);
  SMat<Ball> H(p.N, std::vector<Ball>(p.N, p.like));
  for (long i = 0; i < p.N; ++i)
    for (long j = 0; j < p.N; ++j) {
      H[i][j] = Ball(-c.Q[i][j]);
      if (i == j) H[i][j] += c.zp[i];
    }
  p.P = sc_inverse(H, p.like);
  for (auto& row : p.P)
    for (auto& x : row) x *= Ball(c.k);
  p.ms = residue_vectors(p.N, p.k);
  p.a = all_a_terms(c);
  auto ctx = std::make_shared<LevelContext>(c);
  p.w = [ctx](long i, long s, const IVec& m) {
    return ctx->root2k[2 * mod_pos(m[i] + s, ctx->k)] * ctx->theta_inv[i];
  };
  return p;
}

// Exact level-one context over the trace field.
inline PerturbationContext<FieldElement> make_exact_context(const NZDatum& d, int nmax) {
  for (auto& s : d.shapes)
    if (!s.exact) throw InputError("exact shapes are required for exact mode");
  if (abs(int_det(d.B)) != 1) throw InputError("B is not unimodular; a Z-nondegenerate gauge is required");
  PerturbationContext<FieldElement> p;
  FieldPtr K = d.shapes[0].exact->K;
  p.k = 1;
  p.N = d.N;
  p.nmax = nmax;
  p.like = FieldElement(K, mpq_class(0));
  IMat Bi = int_inverse_unimodular(d.B);
  p.Q = int_mul(Bi, d.A);
  p.L = int_mulv(Bi, d.nu);
  p.fL = 0;
  for (long i = 0; i < p.N; ++i) p.fL += mpq_class(d.f[i] * p.L[i]);
  FieldElement one(K, mpq_class(1));
  SMat<FieldElement> H(p.N, std::vector<FieldElement>(p.N, p.like));
  auto zinv = std::make_shared<std::vector<FieldElement>>();
  for (long i = 0; i < p.N; ++i) {
    const FieldElement& z = *d.shapes[i].exact;
    zinv->push_back(z.inverse());
    for (long j = 0; j < p.N; ++j) {
      H[i][j] = FieldElement(K, mpq_class(-p.Q[i][j]));
      if (i == j) H[i][j] = H[i][j] + (one - z).inverse();
    }
  }
  p.P = sc_inverse(H, p.like);
  p.ms = {IVec(p.N, 0)};
  p.a = {one};
  p.w = [zinv](long i, long, const IVec&) { return (*zinv)[i]; };
  return p;
}

// Gamma tables up to hbar^{nmax-1} for valences 0..maxdeg.
template <class S>
VertexTable<S> vertex_table(const PerturbationContext<S>& p, const IVec& m, int maxdeg) {
  const long k = p.k, N = p.N;
  const int nmax = p.nmax;
  VertexTable<S> vt;
  vt.nmax = nmax;
  const S zero = sc_zero(p.like);
  // T[i][n][l'] = sum_s B_n(s/k) Li_{l}(w_{i,s}), l = -l'
  const int nmaxB = nmax + 1, lmin = 2 - nmaxB - maxdeg;
  std::vector<std::vector<std::vector<S>>> T(N, std::vector<std::vector<S>>(nmaxB + 1, std::vector<S>(-lmin + 1, zero)));
  for (long i = 0; i < N; ++i)
    for (long s = 1; s <= k; ++s) {
      S w = p.w(i, s, m);
      std::vector<S> li(-lmin + 1, zero);
      for (int l = 0; l >= lmin; --l) li[-l] = neg_polylog(l, w);
      for (int n = 0; n <= nmaxB; ++n) {
        mpq_class b = bernoulli_poly(n, mpq_class(s, k));
        if (b == 0) continue;
        for (int l = 0; l >= lmin; --l) T[i][n][-l] = T[i][n][-l] + sc_scale(li[-l], b);
      }
    }
  auto Tget = [&](long i, int n, int l) -> S {
    if (l > 0) throw std::logic_error("positive polylog order in vertex factor");
    return T[i][n][-l];
  };
  mpz_class fact = 1;
  std::vector<mpq_class> inv_fact(nmaxB + 1);
  for (int n = 0; n <= nmaxB; ++n) {
    if (n > 0) fact *= n;
    inv_fact[n] = mpq_class(1) / mpq_class(fact);
  }
  auto kpow = [&](int j) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), k, j);
    return mpq_class(r);
  };
  // Gamma^{(0)}: powers 0..nmax-1 stored at index p
  vt.gamma0.assign(nmax, zero);
  if (nmax > 1) vt.gamma0[1] = sc_from_q(p.like, p.fL / mpq_class(8 * k));
  for (int n = 2; n <= nmax; ++n) {
    S acc = zero;
    for (long i = 0; i < N; ++i) acc = acc + Tget(i, n, 2 - n);
    vt.gamma0[n - 1] = vt.gamma0[n - 1] + sc_scale(acc, inv_fact[n]);
  }
  vt.gamma.assign(maxdeg + 1, std::vector<std::vector<S>>(N));
  for (int j = 1; j <= maxdeg; ++j)
    for (long i = 0; i < N; ++i) {
      auto& v = vt.gamma[j][i];
      int nlo = j >= 3 ? 0 : 1;
      v.assign(nmax - VertexTable<S>::lo(j), zero);  // powers lo(j)..nmax-1
      for (int n = nlo; n <= nmax; ++n) {
        int t = (n - 1) - VertexTable<S>::lo(j);
        if (t >= static_cast<int>(v.size())) break;
        mpq_class c = inv_fact[n] / kpow(j);
        if (j % 2) c = -c;
        v[t] = v[t] + sc_scale(Tget(i, n, 2 - n - j), c);
      }
      if (j == 1) v[0] = v[0] + sc_from_q(p.like, mpq_class(-p.L[i], 2 * k));
    }
  return vt;
}

template <class S>
HalfPowerSeries<S> vertex_factor(const PerturbationContext<S>& p, int j, long i, const IVec& m) {
  auto vt = vertex_table(p, m, std::max(j, 1));
  int lo = j == 0 ? 0 : VertexTable<S>::lo(j);
  HalfPowerSeries<S> s(2 * lo, 2 * (p.nmax - 1), p.like);
  for (int pw = lo; pw <= p.nmax - 1; ++pw) s.at2(2 * pw) = j == 0 ? vt.gamma0[pw] : vt.coeff(j, i, pw);
  return s;
}

// [D]_m as coefficients of hbar^p for p = 0..nmax-1 (entries below D.min_order() are zero).
template <class S>
std::vector<S> evaluate_diagram(const PerturbationContext<S>& p, const VertexTable<S>& vt, const Diagram& D) {
  const int nmax = p.nmax, V = D.V;
  const long N = p.N;
  const S zero = sc_zero(p.like);
  std::vector<S> out(nmax, zero);
  const int base = D.min_order();
  if (base > nmax - 1) return out;
  const int slack = nmax - 1 - base;
  std::vector<int> lo(V);
  for (int v = 0; v < V; ++v) lo[v] = VertexTable<S>::lo(D.degree[v]);
  // edges as (u, v, multiplicity) with u <= v
  struct EdgeRec {
    int u, v, mult;
  };
  std::vector<std::vector<EdgeRec>> closing(V);  // edges whose larger endpoint is v
  for (int u = 0; u < V; ++u)
    for (int v = u; v < V; ++v)
      if (D.adj[u][v]) closing[v].push_back({u, v, D.adj[u][v]});
  std::vector<int> exc(V, 0);
  std::vector<long> idx(V, 0);
  // distribute the excess orders
  std::function<void(int, int)> dist = [&](int v, int left) {
    if (v == V) {
      int power = base + (slack - left);
      // sum over index assignments
      S total = zero;
      std::vector<S> partial(V + 1, sc_one(p.like));
      std::function<void(int)> assign = [&](int u) {
        if (u == V) {
          total = total + partial[V];
          return;
        }
        for (long i = 0; i < N; ++i) {
          idx[u] = i;
          S g = vt.coeff(D.degree[u], i, lo[u] + exc[u]);
          if (sc_is_exact(g) && sc_is_zero_like(g)) continue;
          S x = partial[u] * g;
          for (auto& e : closing[u]) {
            const S& pe = p.P[idx[e.u]][i];
            for (int t = 0; t < e.mult; ++t) x = x * pe;
          }
          partial[u + 1] = x;
          assign(u + 1);
        }
      };
      assign(0);
      out[power] = out[power] + total;
      return;
    }
    for (int e = 0; e <= left; ++e) {
      exc[v] = e;
      dist(v + 1, left - e);
    }
  };
  dist(0, slack);
  mpq_class inv(1);
  inv /= mpq_class(D.symmetry);
  for (auto& x : out) x = sc_scale(x, inv);
  return out;
}

template <class S>
struct LoopSeries {
  int nmax = 0;
  HalfPowerSeries<S> phi_plus;  // twice-exponent indexing, integer powers only
  std::vector<S> S_n;           // S_n[n] for 2 <= n <= nmax; entries 0, 1 unused
  double odd_residual_log10 = -1e300;
};

template <class S>
HalfPowerSeries<S> to_series(const std::vector<S>& coeffs, const S& like) {
  HalfPowerSeries<S> s(0, 2 * (static_cast<long>(coeffs.size()) - 1), like);
  for (size_t pw = 0; pw < coeffs.size(); ++pw) s.at2(2 * pw) = coeffs[pw];
  return s;
}

template <class S>
HalfPowerSeries<S> average_series(const PerturbationContext<S>& p, const std::vector<HalfPowerSeries<S>>& per_m) {
  S den = p.a[0];
  for (size_t i = 1; i < p.a.size(); ++i) den = den + p.a[i];
  if (sc_is_zero_like(den)) throw DegenerateAverage("sum of a_m is not separated from zero");
  HalfPowerSeries<S> num = per_m[0].scaled(p.a[0]);
  for (size_t i = 1; i < per_m.size(); ++i) num += per_m[i].scaled(p.a[i]);
  return num.scaled(sc_one(p.like) / den);
}

template <class S>
std::vector<S> extract_S(const HalfPowerSeries<S>& phi, int nmax) {
  auto lg = phi.log_series(2 * (nmax - 1));
  std::vector<S> out(nmax + 1, sc_zero(phi.like()));
  for (int n = 1; n <= nmax - 1; ++n) out[n + 1] = lg.coef(n);
  return out;
}

template <class S>
LoopSeries<S> loop_series(const PerturbationContext<S>& p, const std::vector<Diagram>& diagrams) {
  int maxdeg = 1;
  for (auto& D : diagrams)
    for (int d : D.degree) maxdeg = std::max(maxdeg, d);
  std::vector<HalfPowerSeries<S>> per_m;
  for (auto& m : p.ms) {
    auto vt = vertex_table(p, m, maxdeg);
    std::vector<S> conn = vt.gamma0;
    for (auto& D : diagrams) {
      if (D.min_order() > p.nmax - 1) continue;
      auto v = evaluate_diagram(p, vt, D);
      for (int k = 0; k < p.nmax; ++k) conn[k] = conn[k] + v[k];
    }
    conn[0] = sc_zero(p.like);
    per_m.push_back(to_series(conn, p.like).padded(1, 2 * (p.nmax - 1)).exp_series(2 * (p.nmax - 1)));
  }
  LoopSeries<S> r;
  r.nmax = p.nmax;
  r.phi_plus = average_series(p, per_m);
  r.S_n = extract_S(r.phi_plus, p.nmax);
  return r;
}

template <class S>
LoopSeries<S> loop_series(const PerturbationContext<S>& p) {
  return loop_series(p, enumerate_diagrams(p.nmax));
}

// ---------- formal Gaussian integration, independent of the diagram calculus ----------

template <class S>
class WickOracle {
 public:
  explicit WickOracle(const PerturbationContext<S>& p) : p_(p) {}

  // <f_T> at one residue vector, as a series in hbar^{1/2} up to hbar^{nmax-1}.
  HalfPowerSeries<S> expectation(const IVec& m) {
    const long N = p_.N, k = p_.k;
    const int W = 2 * (p_.nmax - 1);
    const S zero = sc_zero(p_.like);
    using Key = std::pair<int, std::vector<int>>;
    std::map<Key, S> Vt;
    auto add = [&](int w2, std::vector<int> e, const S& c) {
      Key key{w2, std::move(e)};
      auto it = Vt.find(key);
      if (it == Vt.end())
        Vt.emplace(std::move(key), c);
      else
        it->second = it->second + c;
    };
    if (W >= 2) add(2, std::vector<int>(N, 0), sc_from_q(p_.like, p_.fL / mpq_class(8 * k)));
    for (long i = 0; i < N; ++i) {
      std::vector<int> e(N, 0);
      e[i] = 1;
      if (W >= 1) add(1, e, sc_from_q(p_.like, mpq_class(-p_.L[i], 2 * k)));
      for (int n = 0; 2 * (n - 1) <= W; ++n)
        for (int j = 0; 2 * (n - 1) + j <= W; ++j) {
          if ((n == 0 && j <= 2) || (n == 1 && j == 0)) continue;
          int w2 = 2 * (n - 1) + j;
          S c = zero;
          for (long s = 1; s <= k; ++s) {
            mpq_class b = bernoulli_poly(n, mpq_class(s, k));
            if (b != 0) c = c + sc_scale(neg_polylog(2 - n - j, p_.w(i, s, m)), b);
          }
          mpz_class nf, jf, kj;
          mpz_fac_ui(nf.get_mpz_t(), n);
          mpz_fac_ui(jf.get_mpz_t(), j);
          mpz_ui_pow_ui(kj.get_mpz_t(), k, j);
          mpq_class scale(1);
          scale /= mpq_class(nf * jf * kj);
          if (j % 2) scale = -scale;
          std::vector<int> ee(N, 0);
          ee[i] = j;
          add(w2, ee, sc_scale(c, scale));
        }
    }
    // exp(V) = sum_r V^r / r!, every term of V has positive weight
    std::map<Key, S> E{{Key{0, std::vector<int>(N, 0)}, sc_one(p_.like)}};
    std::map<Key, S> term = E;
    for (int r = 1; r <= W; ++r) {
      std::map<Key, S> nt;
      for (auto& [ka, ca] : term)
        for (auto& [kb, cb] : Vt) {
          int w2 = ka.first + kb.first;
          if (w2 > W) continue;
          std::vector<int> e(N);
          for (long t = 0; t < N; ++t) e[t] = ka.second[t] + kb.second[t];
          S c = sc_scale(ca * cb, mpq_class(1, r));
          Key key{w2, std::move(e)};
          auto it = nt.find(key);
          if (it == nt.end())
            nt.emplace(std::move(key), c);
          else
            it->second = it->second + c;
        }
      term = std::move(nt);
      for (auto& [kk, c] : term) {
        auto it = E.find(kk);
        if (it == E.end())
          E.emplace(kk, c);
        else
          it->second = it->second + c;
      }
    }
    HalfPowerSeries<S> out(0, W, p_.like);
    for (auto& [kk, c] : E) {
      S mo = moment(kk.second);
      if (sc_is_exact(mo) && sc_is_zero_like(mo)) continue;
      out.at2(kk.first) = out.at2(kk.first) + c * mo;
    }
    return out;
  }

  // Isserlis: <x^alpha> with <x_i x_j> = P_ij
  S moment(const std::vector<int>& al) {
    int tot = 0;
    for (int x : al) tot += x;
    if (tot == 0) return sc_one(p_.like);
    if (tot % 2) return sc_zero(p_.like);
    auto it = memo_.find(al);
    if (it != memo_.end()) return it->second;
    size_t i = 0;
    while (al[i] == 0) ++i;
    std::vector<int> r = al;
    --r[i];
    S acc = sc_zero(p_.like);
    for (size_t j = 0; j < r.size(); ++j) {
      if (r[j] == 0) continue;
      std::vector<int> rr = r;
      --rr[j];
      acc = acc + sc_scale(p_.P[i][j] * moment(rr), mpq_class(r[j]));
    }
    memo_.emplace(al, acc);
    return acc;
  }

 private:
  const PerturbationContext<S>& p_;
  std::map<std::vector<int>, S> memo_;
};

template <class S>
HalfPowerSeries<S> wick_oracle(const PerturbationContext<S>& p) {
  WickOracle<S> w(p);
  std::vector<HalfPowerSeries<S>> per_m;
  for (auto& m : p.ms) per_m.push_back(w.expectation(m));
  return average_series(p, per_m);
}

// The six n = 2 terms assembled by hand, coefficient of hbar at one m.
template <class S>
S two_loop_explicit(const PerturbationContext<S>& p, const VertexTable<S>& vt) {
  const long N = p.N;
  S r = vt.gamma0.size() > 1 ? vt.gamma0[1] : sc_zero(p.like);
  auto G = [&](int j, long i) { return vt.coeff(j, i, VertexTable<S>::lo(j)); };
  auto& P = p.P;
  for (long i = 0; i < N; ++i) {
    r = r + sc_scale(G(4, i) * P[i][i] * P[i][i], mpq_class(1, 8));
    r = r + sc_scale(G(2, i) * P[i][i], mpq_class(1, 2));
    for (long j = 0; j < N; ++j) {
      r = r + sc_scale(P[i][i] * G(3, i) * P[i][j] * G(3, j) * P[j][j], mpq_class(1, 8));
      r = r + sc_scale(G(3, i) * P[i][j] * P[i][j] * P[i][j] * G(3, j), mpq_class(1, 12));
      r = r + sc_scale(G(1, i) * P[i][j] * G(3, j) * P[j][j], mpq_class(1, 2));
      r = r + sc_scale(G(1, i) * P[i][j] * G(1, j), mpq_class(1, 2));
    }
  }
  return r;
}

// (1/k)[-(1/2)(Z - i pi f).(Z'' + i pi f'') + sum Li_2(1/z)]
inline Ball complex_volume(const LevelContext& c) {
  PrecisionScope ps(c.bits);
  Real pi = pi_real(c.bits);
  Complex acc(Real::with_bits(c.bits), Real::with_bits(c.bits));
  for (long i = 0; i < c.N(); ++i) {
    Complex Z = log(c.z[i].mid), Zpp = log(c.zpp[i].mid);
    Complex a = Z - Complex(Real(0L), pi * Real(c.datum.f[i]));
    Complex b = Zpp + Complex(Real(0L), pi * Real(c.datum.f2[i]));
    acc -= a * b / Real(2L);
    acc += li2(Complex(1L) / c.z[i].mid);
  }
  acc /= Real(c.k);
  Ball r(acc);
  r.rad = Mag(pow10(-(c.digits + 5), 64));
  r.round_err();
  return r;
}

}  // namespace csk
