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

#include "csk/series.hpp"

using namespace csk;

namespace {
FieldPtr rationals() { return NumberField::make_base(QPoly{mpq_class(0), mpq_class(1)}, "0", "0"); }
}  // namespace

TEST_CASE("half-power series arithmetic") {
  auto Q = rationals();
  FieldElement zero(Q, mpq_class(0));
  HalfPowerSeries<FieldElement> a(1, 8, zero), b(0, 8, zero);
  for (long p = 1; p <= 8; ++p) a.at2(p) = FieldElement(Q, mpq_class(p, 3));
  for (long p = 0; p <= 8; ++p) b.at2(p) = FieldElement(Q, mpq_class(1, p + 1));
  auto c = a * b;
  // coefficient at hbar^{3/2}: sum a_p b_{3-p}
  FieldElement expect = FieldElement(Q, mpq_class(1, 3) * mpq_class(1, 3) + mpq_class(2, 3) * mpq_class(1, 2) +
                                            mpq_class(3, 3) * mpq_class(1, 1));
  CHECK(c.coef2(3) == expect);
  CHECK(c.hi2() == 8);
  auto d = c - c;
  for (long p = d.lo2(); p <= d.hi2(); ++p) CHECK(d.coef2(p).is_zero());
  CHECK(a.shifted(2).coef2(3) == a.coef2(1));
}

TEST_CASE("exp and log of series are inverse") {
  auto Q = rationals();
  FieldElement zero(Q, mpq_class(0));
  HalfPowerSeries<FieldElement> s(1, 10, zero);
  for (long p = 1; p <= 10; ++p) s.at2(p) = FieldElement(Q, mpq_class((p % 3) - 1, p + 2));
  auto e = s.exp_series(10);
  CHECK(e.coef2(0) == FieldElement(Q, mpq_class(1)));
  auto back = e.log_series(10);
  for (long p = 1; p <= 10; ++p) CHECK(back.coef2(p) == s.coef2(p));
}

TEST_CASE("exp of a single monomial") {
  auto Q = rationals();
  FieldElement zero(Q, mpq_class(0));
  HalfPowerSeries<FieldElement> s(2, 12, zero);
  s.at2(2) = FieldElement(Q, mpq_class(1));
  auto e = s.exp_series(12);
  mpz_class f = 1;
  for (long n = 0; n <= 6; ++n) {
    if (n > 0) f *= n;
    CHECK(e.coef(n) == FieldElement(Q, mpq_class(1) / mpq_class(f)));
    CHECK(e.coef2(2 * n + 1).is_zero());
  }
}

TEST_CASE("ball series") {
  PrecisionScope ps(256);
  HalfPowerSeries<Ball> s(2, 6, Ball(0L));
  s.at2(2) = Ball(3L);
  s.at2(4) = Ball(mpq_class(1, 2));
  auto l = s.exp_series(6).log_series(6);
  CHECK(l.coef2(2).overlaps(Ball(3L)));
  CHECK(l.coef2(4).overlaps(Ball(mpq_class(1, 2))));
  CHECK(l.coef2(6).contains_zero());
  CHECK_THROWS(HalfPowerSeries<Ball>::constant(Ball(1L), 4).exp_series(4));
}
