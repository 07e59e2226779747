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

#include "csk/nz.hpp"

using namespace csk;

namespace {
std::string fixture(const std::string& name) { return std::string(CSK_DATA_DIR) + "/nz/" + name + ".json"; }
}  // namespace

TEST_CASE("fixtures load and validate") {
  for (auto name : {"4_1_snappy", "5_2", "pretzel_m2_3_7", "6_1"}) {
    INFO(name);
    NZDatum d = load_datum(fixture(name));
    auto rep = validate(d, 200);
    CHECK(rep.ok);
    CHECK(rep.symmetric);
    CHECK(rep.full_rank);
    CHECK(rep.flattening_ok);
    CHECK(rep.exact_available);
    CHECK(rep.exact_gluing_ok);
    CHECK(rep.multiplicative_residual_log10 < -190);
  }
}

TEST_CASE("malformed input is rejected") {
  nlohmann::json j = datum_to_json(load_datum(fixture("4_1_snappy")));
  auto bad = j;
  bad["A"] = nlohmann::json::array({nlohmann::json::array({1, 1})});
  CHECK_THROWS_AS(datum_from_json(bad), InputError);
  bad = j;
  bad.erase("B");
  CHECK_THROWS_AS(datum_from_json(bad), InputError);
  bad = j;
  bad["shapes_numeric"][0] = {"1", "0"};
  bad.erase("shapes_exact");
  CHECK_THROWS_AS(validate(datum_from_json(bad), 50), InputError);
  bad = j;
  bad["nu"] = {1, 0};
  auto rep = validate(datum_from_json(bad), 100);
  CHECK_FALSE(rep.ok);
}

TEST_CASE("quad rotation preserves the invariants") {
  std::mt19937_64 rng(3);
  long cases = 0;
  for (auto name : {"4_1_snappy", "5_2", "pretzel_m2_3_7", "6_1"}) {
    NZDatum d = load_datum(fixture(name));
    for (int t = 0; t < 50; ++t) {
      NZDatum r = d;
      long steps = 1 + static_cast<long>(rng() % 4);
      for (long s = 0; s < steps; ++s) r = rotate_quad(r, static_cast<long>(rng() % d.N));
      auto rep = validate(r, 120);
      CHECK(rep.symmetric);
      CHECK(rep.flattening_ok);
      CHECK(rep.exact_gluing_ok);
      CHECK(rep.multiplicative_residual_log10 < -100);
      ++cases;
    }
    // three rotations of one tetrahedron return the datum
    NZDatum r = rotate_quad(rotate_quad(rotate_quad(d, 0), 0), 0);
    CHECK(r.A == d.A);
    CHECK(r.B == d.B);
    CHECK(r.nu == d.nu);
    CHECK(r.f == d.f);
    CHECK(*r.shapes[0].exact == *d.shapes[0].exact);
  }
  CHECK(cases >= 200);
}

TEST_CASE("unimodular gauge search and flattening") {
  NZDatum d = load_datum(fixture("5_2"));
  // move to a gauge where B is singular, then search back
  NZDatum r = d;
  for (long i = 0; i < d.N; ++i) {
    r = rotate_quad(r, i);
    if (int_det(r.B) == 0) break;
  }
  auto g = find_unimodular_gauge(r);
  REQUIRE(g.found);
  CHECK(abs(int_det(g.datum.B)) == 1);
  auto fl = solve_flattening(g.datum.A, g.datum.B, g.datum.nu);
  IVec lhs = int_mulv(g.datum.A, fl.first), rhs = int_mulv(g.datum.B, fl.second);
  for (long i = 0; i < d.N; ++i) CHECK(lhs[i] + rhs[i] == g.datum.nu[i]);
  auto tiny = find_unimodular_gauge(r, 0);
  CHECK(tiny.budget_exhausted);
}

TEST_CASE("integer determinant") {
  CHECK(int_det({{2, 1}, {1, 1}}) == 1);
  CHECK(int_det({{0, 1, 2}, {1, 0, 3}, {4, -3, 8}}) == -2);
  CHECK(int_det({{1, 2}, {2, 4}}) == 0);
}
