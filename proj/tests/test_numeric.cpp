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

#include "csk/ball.hpp"

using namespace csk;

TEST_CASE("complex basics") {
  PrecisionScope ps(300);
  Complex z(Real(1L), Real(1L));
  Complex w = exp(log(z));
  CHECK(abs(w - z) < Real(1e-80));
  Complex r = root_of_unity(1, 6, 300);
  Complex s = sqrt(r);
  Complex e = root_of_unity(1, 12, 300);
  CHECK(abs(s - e) < Real(1e-80));
}

TEST_CASE("ball arithmetic keeps radii small") {
  PrecisionScope ps(digits_to_bits(100));
  Ball x(mpq_class(1, 3)), acc(1L);
  for (int i = 0; i < 100; ++i) acc = acc * x + Ball(mpq_class(2, 7));
  CHECK(acc.accuracy_digits() > 90);
}
