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

#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "csk/recognition.hpp"

namespace csk {

enum class CheckStatus { Pass, Mismatch, Unresolved };

inline const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Mismatch: return "MISMATCH";
    default: return "UNRESOLVED";
  }
}

struct GoldenCheck {
  std::string knot, item;
  long k = 0;
  CheckStatus status = CheckStatus::Unresolved;
  bool exact = true;  // false: agreement established numerically only
  std::string detail;
  std::vector<std::string> notes;
  double seconds = 0;

  bool pass() const { return status == CheckStatus::Pass; }
  nlohmann::json to_json() const {
    return {{"knot", knot}, {"item", item}, {"k", k},        {"status", status_name(status)},
            {"exact", exact}, {"detail", detail}, {"notes", notes}, {"seconds", seconds}};
  }
};

struct GoldenOptions {
  long digits = 0;       // 0: chosen per check
  long max_digits = 900; // series recognition above this falls back to a numeric comparison
  mpz_class height_bound = 0;
  long ell_bound = -1;
  long budget = 50000000;
  long generator_budget = 2000;
  std::set<std::string> items{"tau1", "norm", "S2", "S3", "decomposition", "worked-example"};
  std::set<long> levels;  // empty: the suite levels stored with each knot
};

inline nlohmann::json load_golden(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open golden file " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("golden file is not valid JSON: ") + e.what());
  }
}

inline bool is_algebraic_integer(const FieldElement& x) { return poly_is_integral(x.charpoly()); }

inline long height_digits(const FieldElement& e) { return static_cast<long>(height_of(e).get_str().size()); }

// Digits used to recognize x_{k,l}: grows with the dimension of F_k.
inline long norm_digits_for(long dim) { return std::max<long>(150, 60 + 25 * dim); }

// Per-knot state shared between checks: the datum and the recognized x_{k,l}.
class KnotSession {
 public:
  KnotSession(std::string name, NZDatum d) : name_(std::move(name)), d_(std::move(d)) {}

  const std::string& name() const { return name_; }
  const NZDatum& datum() const { return d_; }
  FieldPtr base_field() const { return d_.shapes[0].exact ? d_.shapes[0].exact->K : d_.field; }
  FieldPtr level(long k, long digits = 200) const { return level_field(base_field(), k, digits); }

  const NormTableResult& x(long k, const GoldenOptions& o) {
    auto it = x_.find(k);
    if (it != x_.end()) return it->second;
    long dg = o.digits > 0 ? o.digits : norm_digits_for(level(k)->dim());
    mpz_class hb = o.height_bound;
    if (hb == 0) mpz_ui_pow_ui(hb.get_mpz_t(), 10, default_height_digits(dg, level(k)->dim()));
    return x_.emplace(k, norm_table_entry(d_, k, dg, hb, o.ell_bound)).first->second;
  }

  const RecognitionResult& decomposition(long k, const GoldenOptions& o) {
    auto it = dec_.find(k);
    if (it != dec_.end()) return it->second;
    RecognitionResult r = x(k, o).fit;
    if (r.ok) unit_power_decompose(r, k, o.budget, o.generator_budget);
    return dec_.emplace(k, std::move(r)).first->second;
  }

 private:
  std::string name_;
  NZDatum d_;
  std::map<long, NormTableResult> x_;
  std::map<long, RecognitionResult> dec_;
};

namespace detail {

template <class F>
GoldenCheck timed(const std::string& knot, const std::string& item, long k, F&& body) {
  GoldenCheck c;
  c.knot = knot;
  c.item = item;
  c.k = k;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const PrecisionInsufficient& e) {
    c.status = CheckStatus::Unresolved;
    c.detail = std::string("precision: ") + e.what();
  } catch (const std::invalid_argument& e) {
    c.status = CheckStatus::Mismatch;
    c.detail = std::string("unreadable golden entry: ") + e.what();
  } catch (const std::exception& e) {
    c.status = CheckStatus::Unresolved;
    c.detail = e.what();
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

// Norm named by a prime label such as "3^3", "39733,1" or "2^6".
inline mpz_class label_norm(const std::string& label) {
  std::string s = label.substr(0, label.find(','));
  auto e = NormEntry::parse(s).full_norm(1);
  if (!e) throw std::invalid_argument("prime label " + label);
  return *e;
}

inline mpq_class qpow(const mpq_class& b, long e) {
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), b.get_num_mpz_t(), static_cast<unsigned long>(std::labs(e)));
  mpz_pow_ui(d.get_mpz_t(), b.get_den_mpz_t(), static_cast<unsigned long>(std::labs(e)));
  mpq_class r(e >= 0 ? n : d, e >= 0 ? d : n);
  r.canonicalize();
  return r;
}

}  // namespace detail

inline GoldenCheck check_tau1(KnotSession& s, const nlohmann::json& knot) {
  return detail::timed(s.name(), "tau1", 1, [&](GoldenCheck& c) {
    FieldElement t = tau1_inv_sq_exact(s.datum());
    FieldElement g = parse_field_expr(knot.at("tau1_inv_sq").get<std::string>(), t.K);
    mpq_class gn(knot.at("tau1_inv_sq_norm").get<std::string>());
    bool same = t == g, opposite = t == -g;
    bool norm_ok = g.norm() == gn;
    c.detail = "tau_1^-2 = " + t.str() + ", norm " + t.norm().get_str();
    if (opposite) c.notes.push_back("equal to minus the stored value; the sign of tau_1^2 depends on the flattening");
    if (!norm_ok) c.notes.push_back("stored norm " + gn.get_str() + " differs from N(stored value) = " + g.norm().get_str());
    c.status = (same || opposite) && norm_ok ? CheckStatus::Pass : CheckStatus::Mismatch;
  });
}

inline GoldenCheck check_norm(KnotSession& s, long k, const std::string& entry, const GoldenOptions& o) {
  return detail::timed(s.name(), "norm", k, [&](GoldenCheck& c) {
    NormEntry e = NormEntry::parse(entry);
    if (!e.primes_certified()) {
      c.status = CheckStatus::Mismatch;
      c.detail = "stored entry " + entry + " lists a composite factor";
      return;
    }
    auto predicted = e.full_norm(k);
    const NormTableResult& r = s.x(k, o);
    if (!r.fit.ok) {
      c.status = CheckStatus::Unresolved;
      c.detail = "x_{k,l} not recognized: " + r.fit.status;
      return;
    }
    c.detail = "l = " + std::to_string(r.fit.ell) + ", |N(x)|^(1/k) = " + r.display;
    if (!predicted) {
      c.status = CheckStatus::Mismatch;
      c.notes.push_back("stored exponents are not compatible with level " + std::to_string(k));
      return;
    }
    c.status = mpq_class(*predicted) == r.norm ? CheckStatus::Pass : CheckStatus::Mismatch;
    if (c.status == CheckStatus::Mismatch) c.notes.push_back("stored entry " + entry);
  });
}

// Compares recognized S_n with the stored value; S_2 is compared modulo (1/(24k))Z.
inline GoldenCheck compare_series(const std::string& knot, long k, int n, const SeriesRecognition& sr,
                                  const std::string& expr) {
  return detail::timed(knot, "S" + std::to_string(n), k, [&](GoldenCheck& c) {
    FieldElement g = parse_field_expr(expr, sr.Fk);
    const Ball& num = sr.numeric[n];
    mpfr_prec_t bits = std::max<mpfr_prec_t>(num.bits(), 64);
    if (!sr.exact[n]) {
      c.exact = false;
      Complex diff = num.mid - g.embed(bits);
      if (n == 2) {
        Real scaled = diff.re * Real(24 * k);
        diff.re = (scaled - Real(scaled.round_z())) / Real(24 * k);
      }
      double dev = log10_abs(diff) - std::max(0.0, log10_abs(num.mid));
      c.detail = sr.status[n] + "; numeric agreement to " + std::to_string(static_cast<long>(-dev)) + " digits";
      if (sr.status[n] != "precision above limit") c.status = CheckStatus::Unresolved;
      else c.status = dev < -0.5 * std::min<long>(num.accuracy_digits(), 100) ? CheckStatus::Pass : CheckStatus::Mismatch;
      return;
    }
    FieldElement diff = *sr.exact[n] - g;
    std::string how = sr.exact_arithmetic ? "exact arithmetic" : "recognized";
    c.detail = how + ": " + sr.exact[n]->str();
    if (diff.is_zero()) {
      c.status = CheckStatus::Pass;
      return;
    }
    bool rational = true;
    for (size_t i = 1; i < diff.c.size(); ++i) rational = rational && diff.c[i] == 0;
    mpq_class scaled = diff.c[0] * 24 * k;
    scaled.canonicalize();
    if (n == 2 && rational && scaled.get_den() == 1) {
      c.status = CheckStatus::Pass;
      c.notes.push_back("differs from the stored value by " + scaled.get_str() + "/" + std::to_string(24 * k));
      return;
    }
    c.status = CheckStatus::Mismatch;
    c.notes.push_back("difference " + diff.str());
  });
}

inline std::vector<GoldenCheck> check_series(KnotSession& s, long k, const nlohmann::json& knot, const GoldenOptions& o) {
  std::vector<int> ns;
  for (int n : {2, 3})
    if (o.items.count("S" + std::to_string(n)) && knot.contains("S" + std::to_string(n)) &&
        knot["S" + std::to_string(n)].contains(std::to_string(k)))
      ns.push_back(n);
  if (ns.empty()) return {};
  FieldPtr Fk = s.level(k);
  long want = 60;
  std::vector<GoldenCheck> out;
  for (int n : ns) {
    try {
      FieldElement g = parse_field_expr(knot["S" + std::to_string(n)][std::to_string(k)].get<std::string>(), Fk);
      if (k > 1) want = std::max(want, digits_for_height(Fk->dim(), height_digits(g)));
    } catch (const std::invalid_argument&) {
    }
  }
  if (o.digits > 0) want = o.digits;
  SeriesRecognition sr;
  bool numeric_only = want > o.max_digits;
  auto t0 = std::chrono::steady_clock::now();
  if (numeric_only) {
    const long nd = 100;
    sr.Fk = Fk;
    auto ls = loop_series(make_perturbation_context(make_level_context(s.datum(), k, nd), 3));
    sr.numeric = ls.S_n;
    sr.exact.assign(4, std::nullopt);
    sr.status.assign(4, "precision above limit");
  } else {
    sr = recognize_series(s.datum(), k, 3, want, o.height_bound);
  }
  double shared = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (int n : ns) {
    auto c = compare_series(s.name(), k, n, sr, knot["S" + std::to_string(n)][std::to_string(k)].get<std::string>());
    if (numeric_only) c.notes.push_back("exact recognition needs about " + std::to_string(want) + " digits");
    c.seconds += shared / ns.size();
    out.push_back(c);
  }
  return out;
}

inline GoldenCheck check_decomposition(KnotSession& s, long k, const nlohmann::json& entry, const GoldenOptions& o) {
  return detail::timed(s.name(), "decomposition", k, [&](GoldenCheck& c) {
    const RecognitionResult& r = s.decomposition(k, o);
    if (!r.ok) {
      c.detail = "x_{k,l} not recognized: " + r.status;
      return;
    }
    FieldPtr K = r.exact.K;
    const FieldElement& x = r.exact;
    FieldElement eps_g = parse_field_expr(entry.at("epsilon").get<std::string>(), K);
    struct Gen {
      std::string label;
      FieldElement g;
      mpq_class e;
    };
    std::vector<Gen> gens;
    for (const auto& b : entry.at("beta")) {
      mpq_class e(b.at(2).get<std::string>());
      e.canonicalize();
      gens.push_back({b.at(0).get<std::string>(), parse_field_expr(b.at(1).get<std::string>(), K), e});
    }
    bool ok = true;
    if (!unit_test(eps_g)) {
      ok = false;
      c.notes.push_back("stored epsilon is not a unit");
    }
    for (auto& g : gens) {
      if (!is_algebraic_integer(g.g)) {
        ok = false;
        c.notes.push_back("stored generator for " + g.label + " is not integral");
        continue;
      }
      mpz_class n = mpq_class(abs(g.g.norm())).get_num();
      if (n != detail::label_norm(g.label)) c.notes.push_back("label " + g.label + ": generator has norm " + n.get_str());
    }
    if (!r.bookkeeping_ok) {
      c.status = CheckStatus::Unresolved;
      c.detail = r.status;
      return;
    }
    // (x) = (prod g_i^{e_i})^k as ideals: valuations at the primes of x, then the norm rules out other primes
    bool ideal_ok = ok;
    for (const auto& f : r.factorization) {
      mpq_class rhs = 0;
      for (auto& g : gens) rhs += g.e * ideal_valuation(g.g, f.prime) * k;
      if (rhs != f.valuation) {
        ideal_ok = false;
        c.notes.push_back("valuation at " + f.prime.label() + ": x has " + std::to_string(f.valuation) +
                          ", stored beta^k has " + rhs.get_str());
      }
    }
    mpz_class L = 1;
    for (auto& g : gens) {
      mpq_class ek = g.e * k;
      ek.canonicalize();
      mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), ek.get_den_mpz_t());
    }
    mpq_class lhs = 1;
    for (auto& g : gens) {
      mpq_class ek = g.e * k * L;
      ek.canonicalize();
      lhs *= detail::qpow(abs(g.g.norm()), ek.get_num().get_si());
    }
    if (lhs != detail::qpow(abs(r.norm), L.get_si())) {
      ideal_ok = false;
      c.notes.push_back("norm of stored beta^k differs from |N(x)|");
    }
    std::ostringstream d;
    d << "(x) = ";
    for (size_t i = 0; i < r.factorization.size(); ++i)
      d << (i ? " * " : "") << "P" << r.factorization[i].prime.norm().get_str() << "^" << r.factorization[i].valuation;
    if (r.k_divisible) {
      d << "; own decomposition " << (r.unit_verified ? "verified" : r.status);
      if (!r.unit_verified) ideal_ok = false;
    } else {
      d << "; valuations not divisible by k, beta has fractional exponents";
    }
    c.detail = d.str();
    bool integral_exps = true;
    for (auto& g : gens) integral_exps = integral_exps && g.e.get_den() == 1;
    if (integral_exps) {
      FieldElement y = eps_g;
      for (auto& g : gens) y = y * g.g.pow(g.e.get_num().get_si() * k);
      FieldElement ratio = y / x;
      if (ratio == FieldElement(K, mpq_class(1))) c.notes.push_back("stored epsilon * beta^k reproduces x exactly");
      else if (ratio.pow(24 * k) == FieldElement(K, mpq_class(1)))
        c.notes.push_back("stored epsilon * beta^k equals x times a root of unity");
      else if (unit_test(ratio)) c.notes.push_back("stored epsilon * beta^k equals x times a unit");
      if (r.beta) {
        FieldElement bg(K, mpq_class(1));
        for (auto& g : gens) bg = bg * g.g.pow(g.e.get_num().get_si());
        if (unit_test(bg / *r.beta)) c.notes.push_back("own beta and stored beta differ by a unit");
      }
    }
    c.status = ideal_ok ? CheckStatus::Pass : CheckStatus::Mismatch;
  });
}

// The worked example: the printed numeric x, its exact form, and the norm.
inline std::vector<GoldenCheck> check_worked_example(KnotSession& s, const nlohmann::json& ex, const GoldenOptions& o) {
  std::vector<GoldenCheck> out;
  const long k = ex.at("k").get<long>();
  const long printed_ell = ex.at("ell").get<long>();
  const long digits = o.digits > 0 ? o.digits : ex.value("digits", 500L);
  std::vector<long> matched;
  Ball X;
  out.push_back(detail::timed(s.name(), "worked-example numeric", k, [&](GoldenCheck& c) {
    X = tau_ratio_power(s.datum(), k, digits);
    mpfr_prec_t bits = digits_to_bits(digits + 20);
    PrecisionScope ps(bits);
    Complex printed{Real(ex.at("x_num")[0].get<std::string>()), Real(ex.at("x_num")[1].get<std::string>())};
    double best = 1e300;
    for (long l = 0; l < 24 * k; ++l) {
      Complex y = X.mid / root_of_unity(l, 24 * k, bits);
      double rel = log10_abs(y - printed) - log10_abs(printed);
      best = std::min(best, rel);
      if (rel < -15) matched.push_back(l);
    }
    Complex y6 = X.mid / root_of_unity(printed_ell, 24 * k, bits);
    double rel6 = log10_abs(y6 - printed) - log10_abs(printed);
    std::ostringstream d;
    d << "printed value reproduced to " << static_cast<long>(-best) << " significant digits at l =";
    for (long l : matched) d << " " << l;
    if (matched.empty()) d << " (none)";
    c.detail = d.str();
    if (!matched.empty() && matched.front() != printed_ell) {
      std::ostringstream n;
      n << "at the printed label l = " << printed_ell << " the relative deviation is 1e" << static_cast<long>(rel6)
        << "; the label offset is a root of unity of F_" << k;
      c.notes.push_back(n.str());
    }
    c.status = matched.empty() ? CheckStatus::Mismatch : CheckStatus::Pass;
  }));
  out.push_back(detail::timed(s.name(), "worked-example exact", k, [&](GoldenCheck& c) {
    const NormTableResult& r = s.x(k, o);
    if (!r.fit.ok) {
      c.detail = "x_{k,l} not recognized: " + r.fit.status;
      return;
    }
    FieldElement xe = parse_field_expr(ex.at("x_exact").get<std::string>(), r.fit.exact.K);
    FieldElement ratio = r.fit.exact / xe;
    bool root = ratio.pow(24 * k) == FieldElement(xe.K, mpq_class(1));
    std::ostringstream d;
    d << "smallest l = " << r.fit.ell << "; x_{k," << r.fit.ell << "} / printed exact value ";
    d << (root ? "is a root of unity" : "is not a root of unity");
    if (root && !matched.empty()) {
      mpfr_prec_t bits = digits_to_bits(digits + 20);
      PrecisionScope ps(bits);
      Complex y = X.mid / root_of_unity(matched.front(), 24 * k, bits);
      d << "; printed exact value agrees with x at l = " << matched.front() << " to "
        << static_cast<long>(-(log10_abs(y - xe.embed(bits)) - log10_abs(y))) << " digits";
    }
    c.detail = d.str();
    c.status = root ? CheckStatus::Pass : CheckStatus::Mismatch;
  }));
  out.push_back(detail::timed(s.name(), "worked-example norm", k, [&](GoldenCheck& c) {
    const NormTableResult& r = s.x(k, o);
    if (!r.fit.ok) {
      c.detail = "x_{k,l} not recognized: " + r.fit.status;
      return;
    }
    NormEntry e = NormEntry::parse(ex.at("norm").get<std::string>());
    auto full = e.full_norm(1);
    c.detail = "|N(x)| = " + norm_display(r.norm, 1);
    c.status = e.primes_certified() && full && mpq_class(*full) == r.norm ? CheckStatus::Pass : CheckStatus::Mismatch;
  }));
  return out;
}

inline std::vector<long> suite_levels(const nlohmann::json& knot, const std::string& key, const GoldenOptions& o) {
  std::vector<long> out;
  if (!o.levels.empty()) {
    out.assign(o.levels.begin(), o.levels.end());
    return out;
  }
  if (knot.contains("suite") && knot["suite"].contains(key))
    for (auto& v : knot["suite"][key]) out.push_back(v.get<long>());
  return out;
}

// Runs the selected checks for one knot; `report` sees each check as it completes.
inline std::vector<GoldenCheck> verify_knot(const std::string& data_dir, const std::string& name,
                                            const nlohmann::json& knot, const GoldenOptions& o,
                                            const std::function<void(const GoldenCheck&)>& report = {}) {
  std::vector<GoldenCheck> out;
  auto emit = [&](const GoldenCheck& c) {
    out.push_back(c);
    if (report) report(c);
  };
  KnotSession s(name, load_datum(data_dir + "/" + knot.at("datum").get<std::string>()));
  if (o.items.count("tau1") && knot.contains("tau1_inv_sq")) emit(check_tau1(s, knot));
  if (o.items.count("norm") && knot.contains("norms"))
    for (long k : suite_levels(knot, "norm_levels", o)) {
      auto key = std::to_string(k);
      if (knot["norms"].contains(key)) emit(check_norm(s, k, knot["norms"][key].get<std::string>(), o));
    }
  if (o.items.count("S2") || o.items.count("S3"))
    for (long k : suite_levels(knot, "series_levels", o))
      for (auto& c : check_series(s, k, knot, o)) emit(c);
  if (o.items.count("decomposition") && knot.contains("decompositions"))
    for (long k : suite_levels(knot, "decomposition_levels", o)) {
      auto key = std::to_string(k);
      if (knot["decompositions"].contains(key)) emit(check_decomposition(s, k, knot["decompositions"][key], o));
    }
  if (o.items.count("worked-example") && knot.contains("worked_example")) {
    long k = knot["worked_example"].at("k").get<long>();
    if (o.levels.empty() || o.levels.count(k))
      for (auto& c : check_worked_example(s, knot["worked_example"], o)) emit(c);
  }
  return out;
}

}  // namespace csk
