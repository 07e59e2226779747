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

#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace csk::cli;
  CLI::App app{"Perturbative invariants of level-k Chern-Simons theory from Neumann-Zagier data"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* s, bool inputs_required) {
    auto* opt = s->add_option("inputs", cfg.inputs, "NZ datum JSON files (directories for census)");
    if (inputs_required) opt->required();
    s->add_option("--level,-k", cfg.level, "level k")->capture_default_str();
    s->add_option("--loops,-n", cfg.loops, "loop order n_max")->capture_default_str();
    s->add_option("--precision,-p", cfg.precision, "working precision in decimal digits")->capture_default_str();
    s->add_option("--ell-bound", cfg.ell_bound, "scan root-of-unity labels l below this bound");
    s->add_option("--height-bound", cfg.height_bound, "height bound for recognized coefficients");
    s->add_option("--budget", cfg.budget, "gauge search and factorization budget");
    s->add_option("--golden", cfg.golden, "golden data bundle");
    s->add_option("--format", cfg.format, "output format")
        ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"text", Format::Text}, {"json", Format::Json}},
                                            CLI::ignore_case));
    s->add_option("--seed", cfg.seed, "seed for randomized subroutines")->capture_default_str();
    s->add_option("--output,-o", cfg.output, "write the report here instead of standard output");
  };

  auto* v = app.add_subcommand("validate", "check an NZ datum and suggest a Z-nondegenerate gauge");
  common(v, true);
  auto* t = app.add_subcommand("tau", "1-loop invariant and the norm of (tau_k/tau_1)^k");
  common(t, true);
  auto* s = app.add_subcommand("series", "n-loop invariants S_2..S_n");
  common(s, true);
  auto* g = app.add_subcommand("verify", "compare against the bundled golden data");
  common(g, false);
  g->add_option("--select", cfg.selector, "knot, optionally with levels, e.g. 5_2:k=7");
  g->add_option("--items", cfg.items, "tau1 norm S2 S3 decomposition worked-example");
  g->add_flag("--timings", cfg.timings, "include per-check timings");
  auto* c = app.add_subcommand("census", "gauge search and 1-loop invariants over many data");
  common(c, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }
  if (g->parsed() && cfg.selector.empty() && !cfg.inputs.empty()) cfg.selector = cfg.inputs.front();

  try {
    if (v->parsed()) return cmd_validate(cfg, std::cout, std::cerr);
    if (t->parsed()) return cmd_tau(cfg, std::cout, std::cerr);
    if (s->parsed()) return cmd_series(cfg, std::cout, std::cerr);
    if (g->parsed()) return cmd_verify(cfg, std::cout, std::cerr);
    return cmd_census(cfg, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExhausted;
  }
}
