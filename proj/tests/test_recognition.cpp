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

#include "csk/golden.hpp"

using namespace csk;

namespace {
NZDatum fixture(const std::string& name) { return load_datum(std::string(CSK_DATA_DIR) + "/nz/" + name + ".json"); }

FieldPtr base_of(const NZDatum& d) { return d.shapes[0].exact->K; }

FieldElement random_small(const FieldPtr& K, std::mt19937_64& rng) {
  FieldElement x(K, mpq_class(0));
  mpz_class den = 1 + static_cast<long>(rng() % 60);
  for (auto& c : x.c) {
    c = mpq_class(mpz_class(static_cast<long>(rng() % 2001) - 1000), den);
    c.canonicalize();
  }
  return x;
}
}  // namespace

TEST_CASE("field expression parser") {
  auto F = base_of(fixture("4_1"));
  auto F4 = level_field(F, 4);
  auto a = FieldElement::alpha(F4), z = FieldElement::zeta(F4);
  FieldElement one(F4, mpq_class(1));
  auto x = parse_field_expr("(-977 + 1855*a)/4752 + (5*z)/44", F4);
  CHECK(x == (a * mpq_class(1855) - one * mpq_class(977)) * mpq_class(1, 4752) + z * mpq_class(5, 44));
  CHECK(parse_field_expr("2 (a - 1)", F4) == (a - one) * mpq_class(2));
  CHECK(parse_field_expr("a^(-2) * a^2", F4) == one);
  CHECK(parse_field_expr("zeta^4", F4) == one);
  CHECK(parse_field_expr("-alpha^3", F4) == one);  // alpha^3 = -1
  CHECK_THROWS_AS(parse_field_expr("(a + 1", F4), std::invalid_argument);
  CHECK_THROWS_AS(parse_field_expr("b + 1", F4), std::invalid_argument);
  CHECK_THROWS_AS(parse_field_expr("a +", F4), std::invalid_argument);
}

TEST_CASE("embedding keeps the requested precision") {
  auto F = base_of(fixture("5_2"));
  FieldElement third(F, mpq_class(1, 3));
  Complex e = third.embed(3400);
  Real exact = Real(1L).set_bits(3400) / Real(3L).set_bits(3400);
  CHECK(log10_abs(e - Complex(exact, Real(0L).set_bits(3400))) < -1000);
  auto a = FieldElement::alpha(F);
  // alpha^3 - alpha^2 + 1 = 0 in the embedding
  Complex r = a.pow(3).embed(3400) - a.pow(2).embed(3400) + Complex(1L);
  CHECK(log10_abs(r) < -1000);
}

TEST_CASE("recognize inverts embed") {
  std::mt19937_64 rng(11);
  long cases = 0, hits = 0;
  std::vector<std::pair<std::string, long>> fields{{"4_1", 1}, {"5_2", 1}, {"4_1", 3}, {"4_1", 4}, {"5_2", 2}};
  for (auto& [name, k] : fields) {
    auto K = level_field(base_of(fixture(name)), k);
    for (int t = 0; t < 45; ++t) {
      FieldElement x = random_small(K, rng);
      if (x.is_zero()) continue;
      ++cases;
      mpz_class hb("1000000000");
      FitResult f = recognize_value(x.embed(digits_to_bits(160)), K, hb, 140);
      if (f.ok && f.value == x) ++hits;
    }
  }
  CHECK(cases >= 200);
  CHECK(hits == cases);
}

TEST_CASE("printed norm entries parse with rational exponents") {
  auto e = NormEntry::parse("2^(3/2)");
  CHECK(e.full_norm(2) == mpz_class(8));
  CHECK_FALSE(e.full_norm(1).has_value());
  auto f = NormEntry::parse("43^2 * 6007111235971721");
  CHECK(f.primes_certified());
  mpz_class want;
  mpz_class base = mpz_class(43 * 43) * mpz_class("6007111235971721");
  mpz_pow_ui(want.get_mpz_t(), base.get_mpz_t(), 7);
  CHECK(*f.full_norm(7) == want);
  CHECK_FALSE(NormEntry::parse("21 * 5").primes_certified());
}

TEST_CASE("norm table entries of the figure-eight knot") {
  auto d = fixture("4_1");
  for (auto [k, want] : std::vector<std::pair<long, std::string>>{{1, "1"}, {2, "3"}, {4, "11^2"}, {7, "39733^2"}}) {
    INFO("k = " << k);
    long dim = level_field(base_of(d), k)->dim();
    long dg = norm_digits_for(dim);
    mpz_class hb;
    mpz_ui_pow_ui(hb.get_mpz_t(), 10, default_height_digits(dg, dim));
    auto r = norm_table_entry(d, k, dg, hb);
    REQUIRE(r.fit.ok);
    CHECK(r.display == want);
  }
}

TEST_CASE("unit times k-th power decompositions are exact") {
  long n = 0;
  for (auto [name, k] : std::vector<std::pair<std::string, long>>{{"4_1", 4}, {"4_1", 5}, {"5_2", 2}, {"5_2", 4}, {"6_1", 2}, {"pretzel_m2_3_7", 3}}) {
    INFO(name << " k = " << k);
    auto d = fixture(name);
    long dim = level_field(base_of(d), k)->dim();
    long dg = norm_digits_for(dim);
    mpz_class hb;
    mpz_ui_pow_ui(hb.get_mpz_t(), 10, default_height_digits(dg, dim));
    auto r = norm_table_entry(d, k, dg, hb).fit;
    REQUIRE(r.ok);
    unit_power_decompose(r, k);
    REQUIRE(r.unit_verified);
    CHECK(r.bookkeeping_ok);
    CHECK(unit_test(*r.epsilon));
    CHECK(*r.epsilon * r.beta->pow(k) == r.exact);
    ++n;
  }
  CHECK(n == 6);
}

TEST_CASE("corrupted golden entries are reported as mismatches") {
  KnotSession s("4_1", fixture("4_1"));
  GoldenOptions o;
  CHECK(check_norm(s, 2, "3", o).status == CheckStatus::Pass);
  CHECK(check_norm(s, 2, "3^2", o).status == CheckStatus::Mismatch);
  CHECK(check_norm(s, 2, "5", o).status == CheckStatus::Mismatch);

  nlohmann::json knot = {{"tau1_inv_sq", "2*a - 1"}, {"tau1_inv_sq_norm", "3"}};
  CHECK(check_tau1(s, knot).status == CheckStatus::Pass);
  knot["tau1_inv_sq"] = "2*a + 1";
  CHECK(check_tau1(s, knot).status == CheckStatus::Mismatch);
  knot["tau1_inv_sq"] = "2*a - 1";
  knot["tau1_inv_sq_norm"] = "5";
  CHECK(check_tau1(s, knot).status == CheckStatus::Mismatch);

  nlohmann::json series = {{"S2", {{"1", "(-10 + 11*a)/108"}}}, {"S3", {{"1", "-1/54"}}}};
  auto good = check_series(s, 1, series, o);
  REQUIRE(good.size() == 2);
  CHECK(good[0].pass());
  CHECK(good[1].pass());
  series["S3"]["1"] = "-1/55";
  series["S2"]["1"] = "(-10 + 11*a)/108 + 1/24";  // still equal modulo 1/24
  auto bad = check_series(s, 1, series, o);
  CHECK(bad[0].pass());
  CHECK(bad[1].status == CheckStatus::Mismatch);
  series["S2"]["1"] = "(-10 + 11*a)/108 + 1/25";
  CHECK(check_series(s, 1, series, o)[0].status == CheckStatus::Mismatch);
}
