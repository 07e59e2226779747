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

#include "csk/oneloop.hpp"

using namespace csk;

namespace {
NZDatum fixture(const std::string& name) { return load_datum(std::string(CSK_DATA_DIR) + "/nz/" + name + ".json"); }

double dev(const Ball& a, const Ball& b) { return rel_dev_log10(a, b); }

FieldElement elem(const FieldPtr& K, std::vector<long> c) {
  QVec q;
  for (long x : c) q.push_back(mpq_class(x));
  q.resize(K->dim());
  return FieldElement(K, q);
}
}  // namespace

TEST_CASE("a_m basics") {
  auto c = make_level_context(fixture("4_1"), 2, 60);
  CHECK(c.Q == IMat{{0, -1}, {-1, 0}});
  CHECK(c.L == IVec{0, 0});
  CHECK(dev(a_term(c, {0, 0}), Ball(1L)) < -55);
  Ball expect = c.theta[1] / (Ball(1L) + c.theta_inv[0]);
  CHECK(dev(a_term(c, {1, 0}), expect) < -55);
}

TEST_CASE("a_m is k-periodic in each coordinate") {
  std::mt19937_64 rng(7);
  auto d = fixture("4_1");
  long cases = 0;
  for (long k = 1; k <= 5; ++k) {
    auto c = make_level_context(d, k, 50);
    for (int t = 0; t < 50; ++t) {
      IVec m{static_cast<long>(rng() % 13) - 6, static_cast<long>(rng() % 13) - 6};
      long j = static_cast<long>(rng() % 2);
      IVec m2 = m;
      m2[j] += k;
      CHECK(dev(a_term(c, m2), a_term(c, m)) < -40);
      ++cases;
    }
  }
  CHECK(cases >= 200);
}

TEST_CASE("level one invariants are exact") {
  auto d41 = fixture("4_1");
  auto K = d41.field;
  FieldElement t = tau1_inv_sq_exact(d41);
  CHECK(t == elem(K, {1, -2}));  // -(2 alpha - 1)
  auto c = make_level_context(d41, 1, 80);
  auto r = tau_level_k(c);
  Ball t2 = r.tau * r.tau;
  CHECK(std::abs(t2.mid.re.to_double()) < 1e-30);
  // with this flattening tau_1^{-2} = -(2 alpha - 1), so tau_1^2 = +i/sqrt(3)
  CHECK(std::abs(std::abs(t2.mid.im.to_double()) - 0.5773502691896258) < 1e-12);
  CHECK(t2.mid.im.to_double() > 0);
  CHECK(dev((r.tau * r.tau).inverse(), Ball(t.embed(c.bits))) < -70);

  auto d52 = fixture("5_2");
  FieldElement u = tau1_inv_sq_exact(d52);
  FieldElement e1 = elem(d52.field, {-2, 3});
  CHECK((u == e1 || u == -e1));

  auto d237 = fixture("pretzel_m2_3_7");
  FieldElement v = tau1_inv_sq_exact(d237);
  FieldElement e2 = elem(d237.field, {-4, 10, -6});
  CHECK((v == e2 || v == -e2));

  auto d61 = fixture("6_1");
  CHECK(abs(tau1_inv_sq_exact(d61).norm()) == 257);
}

TEST_CASE("exact and numeric level one agree") {
  for (auto name : {"4_1", "4_1_snappy", "5_2", "pretzel_m2_3_7", "6_1"}) {
    INFO(name);
    auto d = fixture(name);
    auto c = make_level_context(d, 1, 100);
    auto r = tau_level_k(c);
    Ball ex(tau1_inv_sq_exact(d).embed(c.bits));
    CHECK(dev((r.tau * r.tau).inverse(), ex) < -90);
  }
}

TEST_CASE("alternative formula agrees up to roots of unity") {
  for (auto [name, kmax] : std::vector<std::pair<std::string, long>>{{"4_1", 5}, {"4_1_snappy", 4}, {"5_2", 3}, {"6_1", 2}}) {
    auto d = fixture(name);
    for (long k = 1; k <= kmax; ++k) {
      INFO(name << " k=" << k);
      auto c = make_level_context(d, k, 60);
      Ball ratio = tau_alternative(c).tau / tau_level_k(c).tau;
      CHECK(dev(powi(ratio, 12 * k), Ball(1L)) < -45);
      if (k == 2 || k == 4 || k == 5) CHECK(dev(powi(ratio, 2 * k), Ball(1L)) < -45);
    }
  }
}

TEST_CASE("Galois shift ratios are constant") {
  long cases = 0;
  for (auto [name, k] : std::vector<std::pair<std::string, long>>{{"4_1", 2}, {"4_1", 3}, {"4_1", 5}, {"5_2", 3}, {"5_2", 4}, {"6_1", 2}}) {
    auto d = fixture(name);
    auto c = make_level_context(d, k, 60);
    for (long j = 0; j < d.N; ++j) {
      INFO(name << " k=" << k << " j=" << j);
      auto rep = galois_shift_check(c, j);
      CHECK(rep.max_ratio_deviation_log10 < -40);
      CHECK(rep.sum_deviation_log10 < -40);
      long terms = 1;
      for (long i = 0; i < d.N; ++i) terms *= k;
      cases += terms;
    }
  }
  CHECK(cases >= 200);
  auto c1 = make_level_context(fixture("5_2"), 1, 40);
  CHECK(dev(galois_shift_check(c1, 0).epsilon, Ball(1L)) < -35);
}

TEST_CASE("theta choice changes tau by a 2k-th root of unity") {
  std::mt19937_64 rng(19);
  long cases = 0;
  for (auto [name, kmax] : std::vector<std::pair<std::string, long>>{{"4_1", 6}, {"5_2", 4}, {"pretzel_m2_3_7", 3}}) {
    auto d = fixture(name);
    for (long k = 2; k <= kmax; ++k) {
      auto base = tau_level_k(make_level_context(d, k, 50)).tau;
      for (int t = 0; t < 14; ++t) {
        std::vector<long> sh(d.N);
        for (auto& s : sh) s = static_cast<long>(rng() % k);
        auto c = make_level_context(d, k, 50, sh);
        Ball r = tau_level_k(c).tau / base;
        CHECK(dev(powi(r, 2 * k), Ball(1L)) < -40);
        ++cases;
      }
    }
  }
  CHECK(cases >= 100);
}

TEST_CASE("weighted average") {
  auto c = make_level_context(fixture("4_1"), 3, 50);
  auto a = all_a_terms(c);
  std::vector<Ball> f(a.size(), Ball(mpq_class(7, 3)));
  CHECK(dev(average_av(a, f), Ball(mpq_class(7, 3))) < -40);
  auto c1 = make_level_context(fixture("4_1"), 1, 50);
  CHECK(dev(average_av(all_a_terms(c1), {Ball(5L)}), Ball(5L)) < -40);
  CHECK_THROWS_AS(average_av({Ball(0L)}, {Ball(1L)}), DegenerateAverage);
}
