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

#include <chrono>
#include <map>

#include "csk/diagrams.hpp"

using namespace csk;

TEST_CASE("diagram census matches the known counts") {
  auto t0 = std::chrono::steady_clock::now();
  CHECK(enumerate_diagrams(2).size() == 6);
  CHECK(enumerate_diagrams(3).size() == 40);
  CHECK(enumerate_diagrams(4).size() == 331);
  CHECK(enumerate_diagrams(5).size() == 3700);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(secs < 300);
}

TEST_CASE("two-loop diagrams and their symmetry factors") {
  auto d = enumerate_diagrams(2);
  std::multiset<long> sym;
  for (auto& x : d) sym.insert(x.symmetry.get_si());
  CHECK(sym == std::multiset<long>{2, 2, 2, 8, 8, 12});
  std::map<std::string, long> by_key;
  for (auto& x : d) by_key[x.key] = x.symmetry.get_si();
  CHECK(by_key.at("2,1,1,1") == 8);   // dumbbell
  CHECK(by_key.at("2,0,3,0") == 12);  // theta
  CHECK(by_key.at("2,0,1,0") == 2);   // single edge
  CHECK(by_key.at("1,2") == 8);       // figure eight
}

TEST_CASE("diagram invariants") {
  for (int n = 2; n <= 4; ++n) {
    std::set<std::string> keys;
    for (auto& D : enumerate_diagrams(n)) {
      CHECK(D.loop_order() <= n);
      CHECK(D.b1 == D.E - D.V + 1);
      CHECK(D.E <= 3 * n - 3);
      CHECK(D.V <= 2 * n - 2);
      for (int deg : D.degree) CHECK(deg >= 1);
      CHECK(keys.insert(D.key).second);
      // relabeling leaves the canonical key unchanged
      detail::Adj rev(D.V, std::vector<int>(D.V));
      for (int i = 0; i < D.V; ++i)
        for (int j = 0; j < D.V; ++j) rev[i][j] = D.adj[D.V - 1 - i][D.V - 1 - j];
      CHECK(make_diagram(rev).key == D.key);
    }
  }
}

TEST_CASE("automorphism counts") {
  // triangle with one pendant at each corner: rotations and reflections
  detail::Adj a(6, std::vector<int>(6, 0));
  auto link = [&](int u, int v) { a[u][v] = a[v][u] = 1; };
  link(0, 1);
  link(1, 2);
  link(2, 0);
  link(0, 3);
  link(1, 4);
  link(2, 5);
  CHECK(make_diagram(a).aut == 6);
  CHECK(make_diagram(a).symmetry == 6);
  // a vertex with three loops: 2^3 3!
  CHECK(make_diagram({{3}}).symmetry == 48);
  // four parallel edges: 2 * 4!
  CHECK(make_diagram({{0, 4}, {4, 0}}).symmetry == 48);
}
