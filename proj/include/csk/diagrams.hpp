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

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace csk {

// Connected multigraph with loops; adj[u][v] is the edge multiplicity, adj[v][v] the loop count.
struct Diagram {
  int V = 0;
  std::vector<std::vector<int>> adj;
  std::vector<int> degree;  // valence; a loop contributes 2
  int E = 0, b1 = 0, d1 = 0, d2 = 0;
  mpz_class aut;       // vertex automorphisms preserving adjacency
  mpz_class symmetry;  // |sigma(D)|
  std::string key;

  int loop_order() const { return b1 + d1 + d2; }
  // lowest power of hbar in the evaluation
  int min_order() const { return b1 + d1 + d2 - 1; }
};

namespace detail {

using Adj = std::vector<std::vector<int>>;

inline std::vector<int> refine(const Adj& a, std::vector<int> color) {
  const int n = static_cast<int>(a.size());
  while (true) {
    std::vector<std::pair<std::vector<int>, int>> sig(n);
    for (int v = 0; v < n; ++v) {
      std::vector<int> s{color[v], a[v][v]};
      std::vector<std::pair<int, int>> nb;
      for (int u = 0; u < n; ++u)
        if (u != v && a[v][u]) nb.push_back({color[u], a[v][u]});
      std::sort(nb.begin(), nb.end());
      for (auto& p : nb) {
        s.push_back(p.first);
        s.push_back(p.second);
      }
      sig[v] = {s, v};
    }
    std::vector<std::vector<int>> keys;
    for (auto& s : sig) keys.push_back(s.first);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::vector<int> nc(n);
    for (int v = 0; v < n; ++v)
      nc[v] = static_cast<int>(std::lower_bound(keys.begin(), keys.end(), sig[v].first) - keys.begin());
    int before = *std::max_element(color.begin(), color.end());
    int after = *std::max_element(nc.begin(), nc.end());
    color = nc;
    if (after == before) return color;
  }
}

inline std::vector<int> relabeled(const Adj& a, const std::vector<int>& color) {
  // color is a discrete partition: vertex v goes to position color[v]
  const int n = static_cast<int>(a.size());
  std::vector<int> out;
  out.reserve(n * (n + 1) / 2);
  std::vector<int> inv(n);
  for (int v = 0; v < n; ++v) inv[color[v]] = v;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out.push_back(a[inv[i]][inv[j]]);
  return out;
}

struct CanonSearch {
  const Adj& a;
  std::vector<int> best;
  long matches = 0;
  explicit CanonSearch(const Adj& adj) : a(adj) {}

  void run(std::vector<int> color) {
    color = refine(a, color);
    const int n = static_cast<int>(a.size());
    std::vector<int> cnt(n, 0);
    for (int c : color) ++cnt[c];
    int target = -1;
    for (int c = 0; c < n; ++c)
      if (cnt[c] > 1) {
        target = c;
        break;
      }
    if (target < 0) {
      auto m = relabeled(a, color);
      if (best.empty() || m < best) {
        best = m;
        matches = 1;
      } else if (m == best) {
        ++matches;
      }
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (color[v] != target) continue;
      // individualize v: it becomes the first vertex of its cell
      std::vector<int> c2(n);
      for (int u = 0; u < n; ++u) c2[u] = 2 * color[u] + ((color[u] > target || (color[u] == target && u != v)) ? 1 : 0);
      run(c2);
    }
  }
};

}  // namespace detail

// Canonical key and automorphism count of a multigraph.
inline std::pair<std::vector<int>, long> canonical_form(const detail::Adj& a) {
  const int n = static_cast<int>(a.size());
  std::vector<int> color(n);
  // initial partition by (degree, loops)
  std::vector<std::pair<int, int>> inv(n);
  for (int v = 0; v < n; ++v) {
    int d = 0;
    for (int u = 0; u < n; ++u) d += (u == v ? 2 : 1) * a[v][u];
    inv[v] = {d, a[v][v]};
  }
  auto sorted = inv;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (int v = 0; v < n; ++v) color[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), inv[v]) - sorted.begin());
  detail::CanonSearch s(a);
  s.run(color);
  std::vector<int> key = s.best;
  key.insert(key.begin(), n);
  return {key, s.matches};
}

inline Diagram make_diagram(const detail::Adj& a) {
  Diagram d;
  d.V = static_cast<int>(a.size());
  auto [key, aut] = canonical_form(a);
  // store the canonically relabeled adjacency
  d.adj.assign(d.V, std::vector<int>(d.V, 0));
  size_t p = 1;
  for (int i = 0; i < d.V; ++i)
    for (int j = i; j < d.V; ++j) d.adj[i][j] = d.adj[j][i] = key[p++];
  d.degree.assign(d.V, 0);
  mpz_class mult = 1;
  for (int i = 0; i < d.V; ++i)
    for (int j = i; j < d.V; ++j) {
      int m = d.adj[i][j];
      d.E += m;
      d.degree[i] += m;
      d.degree[j] += m;
      mpz_class f;
      mpz_fac_ui(f.get_mpz_t(), m);
      if (i == j) {
        mpz_class two;
        mpz_ui_pow_ui(two.get_mpz_t(), 2, m);
        f *= two;
      }
      mult *= f;
    }
  for (int v = 0; v < d.V; ++v) {
    if (d.degree[v] == 1) ++d.d1;
    if (d.degree[v] == 2) ++d.d2;
  }
  d.b1 = d.E - d.V + 1;
  d.aut = aut;
  d.symmetry = mult * aut;
  std::string k;
  for (int x : key) k += std::to_string(x) + ",";
  k.pop_back();
  d.key = k;
  return d;
}

// All connected multigraphs, minimum degree >= 1, with b1 + d1 + d2 <= n (trivial diagram excluded).
// Graphs are grown edge by edge; b1 + d1 + ceil(d2/2) never decreases along the way and bounds the pruning.
inline std::vector<Diagram> enumerate_diagrams(int n) {
  using detail::Adj;
  auto potential = [](const Adj& a) {
    int V = static_cast<int>(a.size()), E = 0, d1 = 0, d2 = 0;
    for (int v = 0; v < V; ++v) {
      int d = 0;
      for (int u = 0; u < V; ++u) d += (u == v ? 2 : 1) * a[v][u];
      if (d == 1) ++d1;
      if (d == 2) ++d2;
      for (int u = v; u < V; ++u) E += a[v][u];
    }
    int b1 = E - V + 1;
    return std::make_pair(b1 + d1 + (d2 + 1) / 2, b1 + d1 + d2);
  };
  std::vector<Diagram> out;
  std::vector<Adj> frontier{Adj{{0}}};
  while (!frontier.empty()) {
    std::map<std::vector<int>, Adj> next;
    for (const Adj& g : frontier) {
      const int V = static_cast<int>(g.size());
      auto consider = [&](Adj h) {
        if (potential(h).first > n) return;
        auto key = canonical_form(h).first;
        if (next.count(key)) return;
        next.emplace(std::move(key), std::move(h));
      };
      for (int u = 0; u < V; ++u)
        for (int v = u; v < V; ++v) {
          Adj h = g;
          ++h[u][v];
          if (u != v) ++h[v][u];
          consider(std::move(h));
        }
      for (int u = 0; u < V; ++u) {
        Adj h = g;
        for (auto& row : h) row.push_back(0);
        h.push_back(std::vector<int>(V + 1, 0));
        h[u][V] = h[V][u] = 1;
        consider(std::move(h));
      }
    }
    frontier.clear();
    for (auto& [key, g] : next) {
      if (potential(g).second <= n) out.push_back(make_diagram(g));
      frontier.push_back(std::move(g));
    }
  }
  std::sort(out.begin(), out.end(), [](const Diagram& a, const Diagram& b) {
    if (a.loop_order() != b.loop_order()) return a.loop_order() < b.loop_order();
    if (a.E != b.E) return a.E < b.E;
    return a.key < b.key;
  });
  return out;
}

}  // namespace csk
