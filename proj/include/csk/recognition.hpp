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

#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "csk/ideal.hpp"
#include "csk/intfactor.hpp"
#include "csk/oneloop.hpp"
#include "csk/perturbation.hpp"
#include "csk/recognize.hpp"

namespace csk {

// ---------- field expressions such as "(-977 + 1855*a)/4752 + 5*z/44" ----------

class FieldExprParser {
 public:
  FieldExprParser(std::string s, FieldPtr K) : s_(std::move(s)), K_(std::move(K)) {}

  FieldElement parse() {
    FieldElement v = expr();
    skip();
    if (i_ != s_.size()) fail("trailing input");
    return v;
  }

 private:
  std::string s_;
  FieldPtr K_;
  size_t i_ = 0;

  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("field expression: " + why + " at offset " + std::to_string(i_) + " in '" + s_ + "'");
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  int peek() {
    skip();
    return i_ < s_.size() ? s_[i_] : -1;
  }
  bool starts_atom() {
    int c = peek();
    return c == '(' || std::isalnum(c);
  }

  FieldElement expr() {
    FieldElement v = term();
    for (;;) {
      int c = peek();
      if (c == '+') {
        ++i_;
        v += term();
      } else if (c == '-') {
        ++i_;
        v -= term();
      } else {
        return v;
      }
    }
  }
  FieldElement term() {
    FieldElement v = unary();
    for (;;) {
      int c = peek();
      if (c == '*') {
        ++i_;
        v = v * unary();
      } else if (c == '/') {
        ++i_;
        v = v / unary();
      } else if (starts_atom()) {
        v = v * power();  // implicit product, e.g. "2 (a - 1)"
      } else {
        return v;
      }
    }
  }
  FieldElement unary() {
    int c = peek();
    if (c == '-') {
      ++i_;
      return -unary();
    }
    if (c == '+') {
      ++i_;
      return unary();
    }
    return power();
  }
  FieldElement power() {
    FieldElement b = atom();
    if (peek() == '^') {
      ++i_;
      bool paren = peek() == '(';
      if (paren) ++i_;
      bool neg = peek() == '-';
      if (neg) ++i_;
      long e = std::stol(digits());
      if (paren) {
        if (peek() != ')') fail("expected )");
        ++i_;
      }
      return b.pow(neg ? -e : e);
    }
    return b;
  }
  std::string digits() {
    skip();
    size_t st = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (st == i_) fail("expected digits");
    return s_.substr(st, i_ - st);
  }
  FieldElement atom() {
    int c = peek();
    if (c == '(') {
      ++i_;
      FieldElement v = expr();
      if (peek() != ')') fail("expected )");
      ++i_;
      return v;
    }
    if (std::isdigit(c)) return FieldElement(K_, mpq_class(mpz_class(digits())));
    if (std::isalpha(c)) {
      size_t st = i_;
      while (i_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_]))) ++i_;
      std::string id = s_.substr(st, i_ - st);
      if (id == "a" || id == "alpha") return FieldElement::alpha(K_);
      if (id == "z" || id == "zeta") return FieldElement::zeta(K_);
      fail("unknown symbol " + id);
    }
    fail("unexpected character");
  }
};

inline FieldElement parse_field_expr(const std::string& s, const FieldPtr& K) { return FieldExprParser(s, K).parse(); }

// ---------- levels ----------

// F_k = F(zeta_k) with the bi-power basis; memoized per (field, k).
inline FieldPtr level_field(const FieldPtr& F, long k, long digits = 200) {
  static std::mutex mu;
  static std::map<std::pair<const NumberField*, long>, FieldPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(F.get(), k);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  FieldPtr Fk = k == 1 ? F : FieldPtr(adjoin_root_of_unity(F, k, digits));
  cache[key] = Fk;
  return Fk;
}

// tau_k^k / tau_1^k at the requested precision.
inline Ball tau_ratio_power(const NZDatum& d, long k, long digits) {
  Ball t1 = tau_level_k(make_level_context(d, 1, digits)).tau;
  Ball tk = tau_level_k(make_level_context(d, k, digits)).tau;
  PrecisionScope ps(digits_to_bits(digits + 20));
  return powi(tk / t1, k);
}

// ---------- recognition results ----------

struct IdealFactor {
  PrimeIdeal prime;
  long valuation = 0;
  std::optional<FieldElement> generator;
};

struct RecognitionResult {
  bool ok = false;
  FieldElement exact;
  long ell = -1;
  double residual_log10 = 0;
  bool reverified = false;
  std::string status;

  mpq_class norm;
  std::vector<IdealFactor> factorization;
  bool bookkeeping_ok = false;  // prod N(P)^v = |N(x)|
  bool k_divisible = false;
  bool all_principal = false;
  bool unit_verified = false;
  std::optional<FieldElement> epsilon, beta;
};

// Scan l = 0, 1, ... and fit x / zeta_{24k}^l into F_k; the smallest l wins.
inline RecognitionResult fit_with_root_scan(const std::function<Ball(long)>& value_at, const FieldPtr& Fk, long k,
                                            const mpz_class& height_bound, long digits, long ell_bound = -1) {
  RecognitionResult res;
  const long order = 24 * k;
  if (ell_bound < 0 || ell_bound > order) ell_bound = order;
  Ball x = value_at(digits);
  mpfr_prec_t bits = digits_to_bits(digits + 20);
  for (long l = 0; l < ell_bound; ++l) {
    Complex y = x.mid / root_of_unity(l, order, bits);
    FitResult f = recognize_value(y, Fk, height_bound, digits);
    if (!f.ok) continue;
    long hi = digits + digits / 2;
    Ball x2 = value_at(hi);
    mpfr_prec_t bits2 = digits_to_bits(hi + 20);
    Complex y2 = x2.mid / root_of_unity(l, order, bits2);
    double d = log10_abs(y2 - f.value.embed(bits2));
    double mag = std::max(0.0, log10_abs(y2));
    res.ok = true;
    res.exact = f.value;
    res.ell = l;
    res.residual_log10 = f.residual_log10;
    res.reverified = d - mag < -0.5 * hi;
    if (!res.reverified) {
      res.ok = false;
      res.status = "fit at l = " + std::to_string(l) + " not confirmed at higher precision";
      return res;
    }
    res.norm = res.exact.norm();
    res.status = "recognized";
    return res;
  }
  res.status = "no fit for l < " + std::to_string(ell_bound);
  return res;
}

// x = epsilon * beta^k with epsilon a unit, via the prime ideal factorization of (x).
inline void unit_power_decompose(RecognitionResult& r, long k, long budget = 50000000, long generator_budget = 2000) {
  const FieldElement& x = r.exact;
  if (x.is_zero()) throw std::domain_error("decomposition of zero");
  const FieldPtr& K = x.K;
  r.norm = x.norm();
  mpq_class N = abs(r.norm);
  std::vector<mpz_class> primes;
  for (const mpz_class& part : {mpz_class(N.get_num()), mpz_class(N.get_den())}) {
    if (part == 1) continue;
    Factorization f = factor_integer(part, budget);
    if (!f.complete) {
      r.status = "norm factorization budget exhausted: " + f.str();
      return;
    }
    for (auto& pp : f.factors) primes.push_back(pp.p);
  }
  std::sort(primes.begin(), primes.end());
  r.factorization.clear();
  mpq_class book = 1;
  for (const auto& p : primes) {
    for (auto& P : factor_prime_dedekind(p, K)) {
      long v = ideal_valuation(x, P);
      if (v == 0) continue;
      mpz_class np = P.norm();
      mpz_class t;
      mpz_pow_ui(t.get_mpz_t(), np.get_mpz_t(), static_cast<unsigned long>(std::labs(v)));
      if (v > 0) book *= mpq_class(t);
      else book /= mpq_class(t);
      r.factorization.push_back({P, v, std::nullopt});
    }
  }
  r.bookkeeping_ok = book == N;
  r.k_divisible = true;
  for (auto& f : r.factorization) r.k_divisible = r.k_divisible && f.valuation % k == 0;
  r.all_principal = true;
  for (auto& f : r.factorization) {
    GeneratorResult g = generator_search(f.prime.lattice, generator_budget);
    if (g.found) f.generator = g.generator;
    else r.all_principal = false;
  }
  if (!r.bookkeeping_ok) {
    r.status = "valuations do not account for the norm";
    return;
  }
  if (!r.k_divisible) {
    r.status = "some exponent is not divisible by k";
    return;
  }
  if (!r.all_principal) {
    r.status = "no generator found for some prime";
    return;
  }
  FieldElement beta(K, mpq_class(1));
  for (auto& f : r.factorization) beta = beta * f.generator->pow(f.valuation / k);
  FieldElement eps = x / beta.pow(k);
  r.beta = beta;
  r.epsilon = eps;
  r.unit_verified = unit_test(eps) && eps * beta.pow(k) == x;
  r.status = r.unit_verified ? "decomposed" : "quotient is not a unit";
}

// ---------- norm table entries ----------

// Printed entries are products p^e meaning |N(x)|^{1/k}; e may be a half-integer ("2 * sqrt(2)" = 2^(3/2)).
struct NormEntry {
  std::vector<std::pair<mpz_class, mpq_class>> factors;

  static NormEntry parse(const std::string& s) {
    NormEntry n;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, '*')) {
      auto l = tok.find_first_not_of(' '), r = tok.find_last_not_of(' ');
      if (l == std::string::npos) continue;
      tok = tok.substr(l, r - l + 1);
      auto c = tok.find('^');
      mpz_class p(tok.substr(0, c));
      mpq_class e = 1;
      if (c != std::string::npos) {
        std::string es = tok.substr(c + 1);
        if (!es.empty() && es.front() == '(') es = es.substr(1, es.size() - 2);
        e = mpq_class(es);
        e.canonicalize();
      }
      if (p != 1) n.factors.emplace_back(p, e);
    }
    return n;
  }

  // |N(x)| predicted by the entry at level k, or nullopt when k*e is not integral.
  std::optional<mpz_class> full_norm(long k) const {
    mpz_class v = 1;
    for (auto& [p, e] : factors) {
      mpq_class ke = e * k;
      ke.canonicalize();
      if (ke.get_den() != 1) return std::nullopt;
      mpz_class t;
      mpz_pow_ui(t.get_mpz_t(), p.get_mpz_t(), ke.get_num().get_ui());
      v *= t;
    }
    return v;
  }
  bool primes_certified() const {
    for (auto& f : factors)
      if (!is_probable_prime(f.first)) return false;
    return true;
  }
};

// Display of |N|^{1/k}: factored with rational exponents.
inline std::string norm_display(const mpq_class& N, long k, long budget = 50000000) {
  mpq_class a = abs(N);
  if (a.get_den() != 1) return "non-integral " + a.get_str();
  if (a == 1) return "1";
  Factorization f = factor_integer(a.get_num(), budget);
  std::ostringstream os;
  for (size_t i = 0; i < f.factors.size(); ++i) {
    if (i) os << " * ";
    mpq_class e(f.factors[i].e, k);
    e.canonicalize();
    os << f.factors[i].p.get_str();
    if (e != 1) {
      if (e.get_den() == 1) os << "^" << e.get_str();
      else os << "^(" << e.get_str() << ")";
    }
    if (!f.factors[i].certified) os << "[composite]";
  }
  return os.str();
}

struct NormTableResult {
  RecognitionResult fit;
  mpq_class norm;        // |N(x_{k,l})|
  std::string display;   // |N|^{1/k} factored
  bool kth_root_integral = false;
};

inline NormTableResult norm_table_entry(const NZDatum& d, long k, long digits, const mpz_class& height_bound,
                                        long ell_bound = -1) {
  NormTableResult out;
  FieldPtr F = d.shapes[0].exact ? d.shapes[0].exact->K : d.field;
  FieldPtr Fk = level_field(F, k, digits);
  out.fit = fit_with_root_scan([&](long dg) { return tau_ratio_power(d, k, dg); }, Fk, k, height_bound, digits,
                               ell_bound);
  if (!out.fit.ok) return out;
  out.norm = abs(out.fit.exact.norm());
  mpz_class r;
  out.kth_root_integral = out.norm.get_den() == 1 && exact_root(out.norm.get_num(), static_cast<unsigned long>(k), r);
  out.display = norm_display(out.norm, k);
  return out;
}

// ---------- loop invariants as exact elements ----------

// Height (in digits) that LLL separates reliably from chance relations at this precision.
inline long default_height_digits(long digits, long dim) { return std::max<long>(6, static_cast<long>(0.9 * digits / (dim + 1))); }

// Working precision at which elements of `height_digits` digits are recognizable in a field of dimension dim.
inline long digits_for_height(long dim, long height_digits) {
  return std::max<long>(80, static_cast<long>(std::ceil((dim + 1) * (height_digits + 8) / 0.9)));
}

struct SeriesRecognition {
  FieldPtr Fk;
  bool exact_arithmetic = false;
  std::vector<Ball> numeric;                  // indexed by n, entries 0 and 1 unused
  std::vector<std::optional<FieldElement>> exact;
  std::vector<std::string> status;
};

// S_2..S_nmax at level k: exact arithmetic at k = 1 when possible, otherwise recognition in F_k with
// confirmation at 1.5x precision.  height_bound = 0 picks the bound from the precision.
inline SeriesRecognition recognize_series(const NZDatum& d, long k, int nmax, long digits,
                                          mpz_class height_bound = 0) {
  SeriesRecognition out;
  FieldPtr F = d.shapes[0].exact ? d.shapes[0].exact->K : d.field;
  out.numeric.assign(nmax + 1, Ball(0L));
  out.exact.assign(nmax + 1, std::nullopt);
  out.status.assign(nmax + 1, "");
  bool exact_ok = k == 1 && d.shapes[0].exact && abs(int_det(d.B)) == 1;
  if (exact_ok) {
    out.Fk = F;
    out.exact_arithmetic = true;
    auto r = loop_series(make_exact_context(d, nmax));
    mpfr_prec_t bits = digits_to_bits(digits + 20);
    for (int n = 2; n <= nmax; ++n) {
      out.exact[n] = r.S_n[n];
      out.numeric[n] = Ball(r.S_n[n].embed(bits));
      out.status[n] = "exact arithmetic";
    }
    return out;
  }
  out.Fk = level_field(F, k, digits);
  if (height_bound == 0) mpz_ui_pow_ui(height_bound.get_mpz_t(), 10, default_height_digits(digits, out.Fk->dim()));
  auto lo = loop_series(make_perturbation_context(make_level_context(d, k, digits), nmax));
  long hi_digits = digits + digits / 2;
  std::optional<LoopSeries<Ball>> hi;
  for (int n = 2; n <= nmax; ++n) {
    out.numeric[n] = lo.S_n[n];
    FitResult f = recognize_value(lo.S_n[n].mid, out.Fk, height_bound, digits);
    if (!f.ok) {
      out.status[n] = f.reason;
      continue;
    }
    if (!hi) hi = loop_series(make_perturbation_context(make_level_context(d, k, hi_digits), nmax));
    mpfr_prec_t bits2 = digits_to_bits(hi_digits + 20);
    double dev = log10_abs(hi->S_n[n].mid - f.value.embed(bits2));
    double mag = std::max(0.0, log10_abs(hi->S_n[n].mid));
    if (dev - mag < -0.5 * hi_digits) {
      out.exact[n] = f.value;
      out.status[n] = "recognized";
    } else {
      out.status[n] = "fit not confirmed at higher precision";
    }
  }
  return out;
}

}  // namespace csk
