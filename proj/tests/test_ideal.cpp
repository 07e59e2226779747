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

#include <catch_amalgamated.hpp>

#include <random>

#include "csk/ideal.hpp"
#include "csk/intfactor.hpp"
#include "csk/recognize.hpp"

using namespace csk;

namespace {
FieldPtr q_alpha41() { return NumberField::make_base({1, -1, 1}, "0.5", "0.8660254037844386"); }
FieldPtr q_alpha52() { return NumberField::make_base({1, 0, -1, 1}, "0.877438833123346", "-0.744861766619744"); }

FieldElement random_integral(const FieldPtr& K, std::mt19937_64& rng) {
  FieldElement x(K, mpq_class(0));
  for (auto& c : x.c) c = static_cast<long>(rng() % 21) - 10;
  return x;
}

mpz_class ipow(const mpz_class& b, long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}
}  // namespace

TEST_CASE("integer factorization") {
  auto f = factor_integer(mpz_class("1578711311101958123356853161"));  // 39733^2 * 1000000007^2
  REQUIRE(f.complete);
  REQUIRE(f.factors.size() == 2);
  CHECK(f.factors[0].p == 39733);
  CHECK(f.factors[0].e == 2);
  CHECK(f.factors[1].p == 1000000007);
  CHECK(f.factors[1].e == 2);

  auto g = factor_integer(mpz_class(1024) * 243);
  CHECK(g.str() == "2^10 * 3^5");
  CHECK(factor_integer(1).str() == "1");

  mpz_class semi = mpz_class("1000000007") * mpz_class("998244353");
  auto h = factor_integer(semi);
  CHECK(h.complete);
  CHECK(h.value() == semi);
  CHECK(h.str() == "998244353 * 1000000007");

  CHECK(is_probable_prime(mpz_class("6007111235971721")));
  CHECK_FALSE(is_probable_prime(mpz_class("3215031751")));  // strong pseudoprime to bases 2, 3, 5, 7

  mpz_class r;
  CHECK(exact_root(ipow(39733, 14), 7, r));
  CHECK(r == 39733 * 39733);
  CHECK_FALSE(exact_root(mpz_class(8 * 3), 3, r));
}

TEST_CASE("Dedekind splitting in Q(alpha), alpha^2 - alpha + 1 = 0") {
  auto K = q_alpha41();
  auto a = FieldElement::alpha(K);
  FieldElement one(K, mpq_class(1));

  auto P3 = factor_prime_dedekind(3, K);
  REQUIRE(P3.size() == 1);
  CHECK(P3[0].e == 2);
  CHECK(P3[0].f == 1);
  CHECK(P3[0].lattice.contains(a + one));
  CHECK_FALSE(P3[0].lattice.contains(one));

  auto P2 = factor_prime_dedekind(2, K);
  REQUIRE(P2.size() == 1);
  CHECK(P2[0].e == 1);
  CHECK(P2[0].f == 2);
  CHECK(P2[0].norm() == 4);

  auto P7 = factor_prime_dedekind(7, K);
  REQUIRE(P7.size() == 2);
  for (auto& P : P7) CHECK(P.norm() == 7);
}

TEST_CASE("valuations at the ramified prime above 3") {
  auto K = q_alpha41();
  auto a = FieldElement::alpha(K);
  FieldElement one(K, mpq_class(1));
  auto P = factor_prime_dedekind(3, K).at(0);
  CHECK(ideal_valuation(a * 2 - one, P) == 1);
  CHECK(ideal_valuation(FieldElement(K, mpq_class(3)), P) == 2);
  CHECK(ideal_valuation(FieldElement(K, mpq_class(1, 9)), P) == -4);
  CHECK(ideal_valuation(a, P) == 0);

  auto g = generator_search(P.lattice);
  REQUIRE(g.found);
  CHECK(abs(g.generator.norm()) == 3);
  CHECK(ideal_valuation(g.generator, P) == 1);
  CHECK(unit_test((a + one) / g.generator));
}

TEST_CASE("prime ideals above p account for p^d") {
  std::vector<std::pair<FieldPtr, std::vector<long>>> cases{{q_alpha41(), {2, 3, 5, 7, 13, 31}},
                                                            {q_alpha52(), {2, 3, 5, 7, 11, 23, 43, 59}}};
  for (auto& [K, primes] : cases) {
    for (long p : primes) {
      INFO("p = " << p);
      mpz_class prod = 1;
      for (auto& P : factor_prime_dedekind(p, K)) {
        CHECK(P.lattice.norm == P.norm());
        prod *= ipow(P.norm(), P.e);
      }
      CHECK(prod == ipow(p, K->dim()));
    }
  }
}

TEST_CASE("23 ramifies in the cubic field of discriminant -23") {
  auto K = q_alpha52();
  auto Ps = factor_prime_dedekind(23, K);
  REQUIRE(Ps.size() == 2);
  long ramified = 0;
  for (auto& P : Ps) ramified += P.e == 2 ? 1 : 0;
  CHECK(ramified == 1);
  // 3 alpha - 2 has norm -23
  auto x = FieldElement::alpha(K) * 3 - FieldElement(K, mpq_class(2));
  long total = 0;
  for (auto& P : Ps) total += ideal_valuation(x, P) * P.f;
  CHECK(total == 1);
}

TEST_CASE("valuations are additive and match the norm") {
  std::mt19937_64 rng(5);
  long cases = 0;
  for (auto K : {q_alpha41(), q_alpha52()}) {
    for (int t = 0; t < 100; ++t) {
      auto x = random_integral(K, rng), y = random_integral(K, rng);
      if (x.is_zero() || y.is_zero()) continue;
      ++cases;
      for (long p : {2, 3, 5, 7, 23}) {
        for (auto& P : factor_prime_dedekind(p, K)) {
          CHECK(ideal_valuation(x * y, P) == ideal_valuation(x, P) + ideal_valuation(y, P));
          CHECK(ideal_valuation(x / y, P) == ideal_valuation(x, P) - ideal_valuation(y, P));
        }
      }
      // bookkeeping: |N(x)| = prod N(P)^v(x) over the primes dividing N(x)
      mpz_class N = mpq_class(abs(x.norm())).get_num();
      auto fac = factor_integer(N);
      mpz_class book = 1;
      for (auto& pp : fac.factors)
        for (auto& P : factor_prime_dedekind(pp.p, K)) book *= ipow(P.norm(), ideal_valuation(x, P));
      CHECK(book == N);
    }
  }
  CHECK(cases >= 190);
}

TEST_CASE("unit test") {
  auto K = q_alpha41();
  auto a = FieldElement::alpha(K);
  FieldElement one(K, mpq_class(1));
  CHECK(unit_test(a));
  CHECK(unit_test(-a.pow(5)));
  CHECK_FALSE(unit_test(a * 2 - one));
  CHECK_FALSE(unit_test(FieldElement(K, mpq_class(1, 2))));
  CHECK_FALSE(unit_test(FieldElement(K, mpq_class(0))));
  auto L = q_alpha52();
  auto b = FieldElement::alpha(L);
  CHECK(unit_test(b));
  CHECK(unit_test(b - FieldElement(L, mpq_class(1))));
  // norm 1 but not integral
  CHECK_FALSE(unit_test((a * 5 + FieldElement(K, mpq_class(3))) * mpq_class(1, 7)));
}
