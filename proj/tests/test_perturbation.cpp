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

#include "csk/perturbation.hpp"

using namespace csk;

namespace {
NZDatum fixture(const std::string& name) { return load_datum(std::string(CSK_DATA_DIR) + "/nz/" + name + ".json"); }

FieldElement elem(const FieldPtr& K, std::vector<mpq_class> c) {
  c.resize(K->dim());
  return FieldElement(K, c);
}

bool overlap(const Ball& a, const Ball& b, long digits) {
  Ball d = a - b;
  return log10_of_mag(mag_upper(d.mid) + d.rad) < -digits;
}

// B = I, A = symmetric, shapes rational: exercises the Gaussian identity in plain rationals.
NZDatum synthetic(std::mt19937_64& rng) {
  NZDatum d;
  d.name = "synthetic";
  d.N = 2;
  auto r = [&](long lo, long hi) { return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1)); };
  long q01 = r(-2, 2);
  d.A = {{r(-2, 2), q01}, {q01, r(-2, 2)}};
  d.B = {{1, 0}, {0, 1}};
  d.nu = {r(-2, 2), r(-2, 2)};
  d.f = {r(-1, 1), r(-1, 1)};
  IVec Af = int_mulv(d.A, d.f);
  d.f2 = {d.nu[0] - Af[0], d.nu[1] - Af[1]};
  d.field = NumberField::make_base(QPoly{mpq_class(0), mpq_class(1)}, "0", "0");
  d.shapes.resize(2);
  for (auto& s : d.shapes) {
    mpq_class z;
    do {
      z = mpq_class(r(-9, 9), r(1, 7));
      z.canonicalize();
    } while (z == 0 || z == 1);
    s.exact = FieldElement(d.field, z);
  }
  return d;
}
}  // namespace

TEST_CASE("vertex factors at level one") {
  auto d = fixture("4_1");
  auto p = make_exact_context(d, 3);
  auto K = d.field;
  FieldElement one(K, mpq_class(1));
  IVec m{0, 0};
  for (long i = 0; i < 2; ++i) {
    const FieldElement& z = *d.shapes[i].exact;
    auto g3 = vertex_factor(p, 3, i, m);
    CHECK(g3.lo2() == -2);
    CHECK(g3.coef2(-2) == -(z / ((one - z) * (one - z))));
    auto g1 = vertex_factor(p, 1, i, m);
    CHECK(g1.coef2(0) == (one - z).inverse() * mpq_class(1, 2));
  }
}

TEST_CASE("vertex factors are k-periodic in m") {
  auto c = make_level_context(fixture("5_2"), 3, 40);
  auto p = make_perturbation_context(c, 3);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    IVec m{static_cast<long>(rng() % 3), static_cast<long>(rng() % 3), static_cast<long>(rng() % 3)};
    long i = static_cast<long>(rng() % 3);
    int j = static_cast<int>(rng() % 6);
    IVec m2 = m;
    m2[i] += 3;
    auto a = vertex_factor(p, j, i, m), b = vertex_factor(p, j, i, m2);
    for (long q = a.lo2(); q <= a.hi2(); ++q) CHECK(overlap(a.coef2(q), b.coef2(q), 30));
  }
}

TEST_CASE("4_1 exact loop invariants at level one") {
  auto d = fixture("4_1");
  auto r = loop_series(make_exact_context(d, 3));
  CHECK(r.S_n[2] == elem(d.field, {mpq_class(-10, 108), mpq_class(11, 108)}));
  CHECK(r.S_n[3] == elem(d.field, {mpq_class(-1, 54)}));
  CHECK(r.phi_plus.coef2(0) == elem(d.field, {mpq_class(1)}));
}

TEST_CASE("diagram lowest orders") {
  auto d = fixture("5_2");
  auto p = make_exact_context(d, 4);
  auto diagrams = enumerate_diagrams(4);
  auto vt = vertex_table(p, IVec(3, 0), 8);
  for (auto& D : diagrams) {
    auto v = evaluate_diagram(p, vt, D);
    for (int q = 0; q < D.min_order() && q < 4; ++q) CHECK(v[q].is_zero());
  }
}

TEST_CASE("two-loop assembly matches the explicit formula") {
  auto d2 = enumerate_diagrams(2);
  for (auto name : {"4_1", "5_2", "6_1"}) {
    auto d = fixture(name);
    auto p = make_exact_context(d, 2);
    auto vt = vertex_table(p, IVec(d.N, 0), 4);
    FieldElement sum = vt.gamma0[1];
    for (auto& D : d2) sum = sum + evaluate_diagram(p, vt, D)[1];
    CHECK(sum == two_loop_explicit(p, vt));
  }
  auto c = make_level_context(fixture("4_1"), 3, 50);
  auto p = make_perturbation_context(c, 2);
  for (auto& m : p.ms) {
    auto vt = vertex_table(p, m, 4);
    Ball sum = vt.gamma0[1];
    for (auto& D : d2) sum += evaluate_diagram(p, vt, D)[1];
    CHECK(overlap(sum, two_loop_explicit(p, vt), 40));
  }
}

TEST_CASE("formal Gaussian integration agrees with the diagram sum") {
  for (auto name : {"4_1", "4_1_snappy", "5_2", "pretzel_m2_3_7", "6_1"}) {
    INFO(name);
    auto d = fixture(name);
    auto p = make_exact_context(d, 3);
    auto w = wick_oracle(p);
    auto r = loop_series(p);
    for (long q = 0; q <= 4; ++q) CHECK(w.coef2(q) == r.phi_plus.coef2(q));
  }
  std::mt19937_64 rng(23);
  long cases = 0;
  for (int t = 0; t < 200; ++t) {
    auto d = synthetic(rng);
    PerturbationContext<FieldElement> p;
    try {
      p = make_exact_context(d, 3);
    } catch (const SingularHessian&) {
      continue;
    }
    auto w = wick_oracle(p);
    auto r = loop_series(p);
    bool same = true;
    for (long q = 0; q <= 4; ++q) same = same && (w.coef2(q) == r.phi_plus.coef2(q));
    CHECK(same);
    ++cases;
  }
  CHECK(cases >= 180);
  for (auto [name, k] : std::vector<std::pair<std::string, long>>{{"4_1", 2}, {"4_1", 3}, {"5_2", 2}}) {
    INFO(name << " k=" << k);
    auto c = make_level_context(fixture(name), k, 50);
    auto p = make_perturbation_context(c, 3);
    auto w = wick_oracle(p);
    auto r = loop_series(p);
    for (long q = 0; q <= 4; ++q) CHECK(overlap(w.coef2(q), r.phi_plus.coef2(q), 40));
    CHECK(r.phi_plus.coef2(1).contains_zero());
    CHECK(r.phi_plus.coef2(3).contains_zero());
  }
}

TEST_CASE("phi+ does not depend on the choice of k-th roots") {
  std::mt19937_64 rng(31);
  for (auto [name, k] : std::vector<std::pair<std::string, long>>{{"4_1", 3}, {"4_1", 4}, {"5_2", 2}}) {
    auto d = fixture(name);
    auto base = loop_series(make_perturbation_context(make_level_context(d, k, 50), 3));
    for (int t = 0; t < 6; ++t) {
      std::vector<long> sh(d.N);
      for (auto& s : sh) s = static_cast<long>(rng() % k);
      auto r = loop_series(make_perturbation_context(make_level_context(d, k, 50, sh), 3));
      for (int n = 2; n <= 3; ++n) CHECK(overlap(r.S_n[n], base.S_n[n], 40));
    }
  }
}

TEST_CASE("complex volume") {
  auto c41 = make_level_context(fixture("4_1"), 1, 40);
  CHECK(std::abs(complex_volume(c41).mid.im.to_double() + 2.029883212819307) < 1e-12);
  auto c52 = make_level_context(fixture("5_2"), 1, 40);
  CHECK(std::abs(complex_volume(c52).mid.im.to_double() + 2.828122088330783) < 1e-12);
  auto c52k = make_level_context(fixture("5_2"), 3, 40);
  CHECK(overlap(complex_volume(c52k) * Ball(3L), complex_volume(c52), 30));
}
