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

#include "csk/field.hpp"
#include "csk/recognize.hpp"

using namespace csk;

namespace {
FieldPtr q_alpha41() { return NumberField::make_base({1, -1, 1}, "0.5", "0.8660254037844386"); }
FieldPtr q_alpha52() { return NumberField::make_base({1, 0, -1, 1}, "0.8774", "-0.7448"); }
}  // namespace

TEST_CASE("norm and charpoly on small fields") {
  auto F = q_alpha41();
  auto a = FieldElement::alpha(F);
  CHECK(a.norm() == 1);
  FieldElement one(F, mpq_class(1));
  CHECK((a * 2 - one).norm() == 3);
  auto cp = a.charpoly();
  CHECK(cp == QPoly{1, -1, 1});
  auto G = q_alpha52();
  auto b = FieldElement::alpha(G);
  CHECK((b * 3 - FieldElement(G, mpq_class(2))).norm() == -23);
}

TEST_CASE("inverse and power round trip") {
  auto G = q_alpha52();
  auto b = FieldElement::alpha(G) * 3 - FieldElement(G, mpq_class(2));
  auto inv = b.inverse();
  CHECK(b * inv == FieldElement(G, mpq_class(1)));
  CHECK(b.pow(5) * b.pow(-5) == FieldElement(G, mpq_class(1)));
}

TEST_CASE("lll on identity is identity") {
  ZMat I{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  ZMat J = I;
  lll_reduce(J);
  CHECK(J == I);
}

TEST_CASE("lll first vector obeys the approximation bound") {
  ZMat B{{1, 0, 4}, {0, 1, 3}, {0, 0, 5}};
  lll_reduce(B);
  // the lattice contains (1,-1,1) of norm^2 3, so the bound is 2^(n-1) * 3
  CHECK(zvec_norm2(B[0]) <= 4 * 3);
}

TEST_CASE("recognize i*sqrt(3) as 2a - 1") {
  auto F = q_alpha41();
  PrecisionScope ps(digits_to_bits(120));
  Complex x(Real(0L), sqrt(Real(3L)));
  auto r = recognize_value(x, F, mpz_class(1000000), 100);
  REQUIRE(r.ok);
  CHECK(r.value == FieldElement::alpha(F) * 2 - FieldElement(F, mpq_class(1)));
}

TEST_CASE("recognize rejects pi") {
  auto F = q_alpha41();
  PrecisionScope ps(digits_to_bits(120));
  Complex x(pi_real(digits_to_bits(120)), Real(0L));
  auto r = recognize_value(x, F, mpz_class(1000000), 100);
  CHECK_FALSE(r.ok);
}

TEST_CASE("adjoining roots of unity") {
  auto F = q_alpha41();
  auto F3 = adjoin_root_of_unity(F, 3);
  CHECK(F3->dg() == 1);
  auto z3 = FieldElement::zeta(F3);
  CHECK(z3 == FieldElement::alpha(F3) - FieldElement(F3, mpq_class(1)));
  auto F4 = adjoin_root_of_unity(F, 4);
  CHECK(F4->dg() == 2);
  auto G7 = adjoin_root_of_unity(q_alpha52(), 7);
  CHECK(G7->dim() == 18);
  auto z = FieldElement::zeta(G7);
  CHECK(z.pow(7) == FieldElement(G7, mpq_class(1)));
  CHECK(z.norm() == 1);
}
