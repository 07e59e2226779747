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

#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "csk/golden.hpp"
#include "csk/oneloop.hpp"
#include "csk/perturbation.hpp"
#include "csk/recognition.hpp"

#ifndef CSK_DATA_DIR
#define CSK_DATA_DIR "data"
#endif

namespace csk::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr long kShownDigits = 40;

struct Exhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt_double(double x) {
  if (x < -1e299) return "-inf";
  std::ostringstream s;
  s << std::fixed << std::setprecision(1) << x;
  return s.str();
}

void render_text(const Json& j, std::ostream& out, int indent) {
  std::string pad(static_cast<size_t>(indent), ' ');
  for (auto it = j.begin(); it != j.end(); ++it) {
    const Json& v = it.value();
    if (v.is_object()) {
      out << pad << it.key() << ":\n";
      render_text(v, out, indent + 2);
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      out << pad << it.key() << ":\n";
      for (auto& e : v) {
        out << pad << "  -\n";
        render_text(e, out, indent + 4);
      }
    } else if (v.is_string()) {
      out << pad << it.key() << ": " << v.get<std::string>() << "\n";
    } else {
      out << pad << it.key() << ": " << v.dump() << "\n";
    }
  }
}

void emit(const RunConfig& c, const Json& report, std::ostream& out) {
  std::ofstream file;
  std::ostream* os = &out;
  if (!c.output.empty()) {
    file.open(c.output);
    if (!file) throw InputError("cannot write " + c.output);
    os = &file;
  }
  if (c.format == Format::Json)
    *os << report.dump(2) << "\n";
  else
    render_text(report, *os, 0);
}

mpz_class height_bound_of(const RunConfig& c) {
  if (c.height_bound.empty()) return 0;
  mpz_class h;
  if (h.set_str(c.height_bound, 10) != 0 || h < 0) throw std::invalid_argument("bad --height-bound");
  return h;
}

struct Loaded {
  NZDatum datum;
  bool has_flattening = false;
};

Loaded load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("cannot parse " + path + ": " + e.what());
  }
  Loaded l;
  l.datum = datum_from_json(j);
  l.has_flattening = j.contains("f") && j.contains("f2");
  if (l.datum.name.empty()) l.datum.name = fs::path(path).stem().string();
  return l;
}

bool flattening_holds(const NZDatum& d) {
  if (static_cast<long>(d.f.size()) != d.N || static_cast<long>(d.f2.size()) != d.N) return false;
  IVec lhs = int_mulv(d.A, d.f), rhs = int_mulv(d.B, d.f2);
  for (long i = 0; i < d.N; ++i)
    if (lhs[i] + rhs[i] != d.nu[i]) return false;
  return true;
}

std::string rotations_str(const std::vector<int>& r) {
  std::string s;
  for (int x : r) s += std::to_string(x);
  return s;
}

long gauge_budget(const RunConfig& c) { return c.budget > 0 ? c.budget : 600000; }

// Brings the datum to a gauge with |det B| = 1 and a valid flattening, recording what was done.
NZDatum prepare(const NZDatum& d, const RunConfig& c, Json& rep) {
  NZDatum out = d;
  if (abs(int_det(d.B)) != 1) {
    GaugeResult g = find_unimodular_gauge(d, gauge_budget(c), c.seed);
    if (!g.found)
      throw Exhausted(g.budget_exhausted ? "no Z-nondegenerate gauge within the search budget"
                                         : "no quad rotation makes B unimodular");
    out = g.datum;
    rep["gauge"] = {{"rotations", rotations_str(g.rotations)}, {"visited", g.visited}};
  }
  if (!flattening_holds(out)) {
    out.f2 = solve_flattening(out.A, out.B, out.nu).second;
    out.f.assign(out.N, 0);
    rep["flattening"] = "canonical (f = 0, f'' = B^-1 nu)";
  }
  return out;
}

FieldPtr base_field(const NZDatum& d) { return d.shapes[0].exact ? d.shapes[0].exact->K : d.field; }

bool has_exact_shapes(const NZDatum& d) {
  for (auto& s : d.shapes)
    if (!s.exact) return false;
  return true;
}

long working_digits(const NZDatum& d, long requested) {
  long dg = requested;
  for (auto& s : d.shapes)
    if (!s.exact && s.digits > 0) dg = std::min(dg, s.digits - 10);
  return std::max<long>(dg, 30);
}

Json one_loop_json(const NZDatum& d, long k, long digits) {
  Json j;
  LevelContext ctx = make_level_context(d, k, digits);
  OneLoopResult r = tau_level_k(ctx);
  OneLoopResult alt = tau_alternative(ctx);
  Ball ratio = alt.tau / r.tau;
  double dev = log10_abs(powi(ratio, 12 * k).mid - Complex(1L));
  j["tau"] = r.tau.str(std::min(digits, kShownDigits));
  j["alternative_check_log10"] = fmt_double(dev);
  j["alternative_check"] = dev < -(digits - 30) ? "(tau'/tau)^(12k) = 1" : "FAILED";
  if (r.gauss_sum_vanishes) j["warning"] = "the Gauss sum vanishes at this level";
  for (auto& b : r.branches)
    if (b.near_cut) j["branch_warning"] = b.what + " lies near the branch cut";
  return j;
}

bool alternative_ok(const Json& j) { return j["alternative_check"] != "FAILED"; }

int status_code(const std::exception_ptr& e, Json& rep) {
  try {
    std::rethrow_exception(e);
  } catch (const InputError& x) {
    rep["error"] = x.what();
    return kInputError;
  } catch (const Exhausted& x) {
    rep["error"] = x.what();
    return kExhausted;
  } catch (const PrecisionInsufficient& x) {
    rep["error"] = std::string("precision: ") + x.what();
    return kExhausted;
  }
}

template <class F>
int guarded(const RunConfig& c, std::ostream& out, std::ostream& err, F&& body) {
  Json rep;
  int code = kSuccess;
  try {
    check_config(c);
    code = body(rep);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const InputError&) {
    code = status_code(std::current_exception(), rep);
  } catch (const Exhausted&) {
    code = status_code(std::current_exception(), rep);
  } catch (const PrecisionInsufficient&) {
    code = status_code(std::current_exception(), rep);
  }
  // a text report on standard output already shows the error
  bool shown = c.format == Format::Text && c.output.empty();
  if (rep.contains("error") && !shown) err << "error: " << rep["error"].get<std::string>() << "\n";
  try {
    emit(c, rep, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return code;
}

const std::string& single_input(const RunConfig& c) {
  if (c.inputs.size() != 1) throw std::invalid_argument("exactly one input datum is expected");
  return c.inputs.front();
}

Json tau_section(const NZDatum& d, const RunConfig& c, int& code) {
  Json j = one_loop_json(d, c.level, c.precision);
  if (!alternative_ok(j)) code = std::max(code, static_cast<int>(kMismatch));
  if (c.level == 1 && has_exact_shapes(d)) {
    FieldElement t = tau1_inv_sq_exact(d);
    j["tau1_inv_sq"] = t.str();
    j["tau1_inv_sq_note"] = "up to sign";
    j["tau1_inv_sq_norm"] = mpq_class(abs(t.norm())).get_str();
  }
  FieldPtr F = base_field(d);
  if (!F) return j;
  long dim = level_field(F, c.level)->dim();
  long dg = std::max(c.precision, norm_digits_for(dim));
  mpz_class hb = height_bound_of(c);
  if (hb == 0) mpz_ui_pow_ui(hb.get_mpz_t(), 10, default_height_digits(dg, dim));
  NormTableResult n = norm_table_entry(d, c.level, dg, hb, c.ell_bound);
  Json x;
  x["digits"] = dg;
  if (!n.fit.ok) {
    x["status"] = n.fit.status.empty() ? "no fit" : n.fit.status;
    code = std::max(code, static_cast<int>(kExhausted));
  } else {
    x["ell"] = n.fit.ell;
    x["value"] = n.fit.exact.str();
    x["norm"] = n.norm.get_str();
    x["norm_kth_root"] = n.display;
  }
  j["x"] = x;
  return j;
}

struct Selector {
  std::string knot;
  std::set<long> levels;
};

Selector parse_selector(const std::string& s) {
  Selector sel;
  auto colon = s.find(':');
  sel.knot = s.substr(0, colon);
  if (colon == std::string::npos) return sel;
  std::string rest = s.substr(colon + 1);
  if (rest.rfind("k=", 0) != 0) throw std::invalid_argument("selector levels must read k=<list>");
  std::stringstream ss(rest.substr(2));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t used = 0;
      long k = std::stol(tok, &used);
      if (used != tok.size() || k < 1) throw std::invalid_argument(tok);
      sel.levels.insert(k);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad level in selector: " + tok);
    }
  }
  return sel;
}

std::vector<std::string> collect_json(const std::vector<std::string>& inputs) {
  std::vector<std::string> files;
  for (auto& in : inputs) {
    fs::path p(in);
    if (fs::is_directory(p)) {
      for (auto& e : fs::directory_iterator(p))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path().string());
    } else if (fs::exists(p)) {
      files.push_back(p.string());
    } else {
      throw InputError("no such file or directory: " + in);
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

void check_config(const RunConfig& c) {
  if (c.level < 1) throw std::invalid_argument("--level must be at least 1");
  if (c.loops < 1) throw std::invalid_argument("--loops must be at least 1");
  if (c.precision < 50) throw std::invalid_argument("--precision must be at least 50");
  if (c.budget < 0) throw std::invalid_argument("--budget must be non-negative");
  (void)height_bound_of(c);
}

int cmd_validate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(c, out, err, [&](Json& rep) {
    Loaded l = load(single_input(c));
    const NZDatum& d = l.datum;
    rep["name"] = d.name;
    rep["N"] = d.N;
    ValidationReport v = validate(d, working_digits(d, c.precision));
    rep["symmetric"] = v.symmetric;
    rep["full_rank"] = v.full_rank;
    rep["det_B"] = v.detB.get_str();
    rep["z_nondegenerate"] = v.z_nondegenerate;
    rep["flattening_ok"] = v.flattening_ok;
    rep["gluing_residual_log10"] = fmt_double(v.multiplicative_residual_log10);
    if (v.exact_available) rep["exact_gluing_ok"] = v.exact_gluing_ok;
    std::vector<std::string> problems, warnings;
    for (auto& p : v.problems) {
      bool tolerable = p == "A f + B f'' != nu" && !l.has_flattening && !v.z_nondegenerate;
      (tolerable ? warnings : problems).push_back(p);
    }
    if (!v.z_nondegenerate) {
      warnings.push_back("B is not unimodular");
      GaugeResult g = find_unimodular_gauge(d, gauge_budget(c), c.seed);
      if (g.found)
        rep["gauge_suggestion"] = {{"rotations", rotations_str(g.rotations)},
                                   {"det_B", int_det(g.datum.B).get_str()}};
      else
        warnings.push_back(g.budget_exhausted ? "gauge search budget exhausted" : "no unimodular gauge exists");
    }
    rep["warnings"] = warnings;
    rep["problems"] = problems;
    rep["valid"] = problems.empty();
    return problems.empty() ? kSuccess : kInputError;
  });
}

int cmd_tau(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(c, out, err, [&](Json& rep) {
    Loaded l = load(single_input(c));
    rep["name"] = l.datum.name;
    rep["level"] = c.level;
    rep["precision"] = c.precision;
    NZDatum d = prepare(l.datum, c, rep);
    int code = kSuccess;
    rep["one_loop"] = tau_section(d, c, code);
    return code;
  });
}

int cmd_series(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(c, out, err, [&](Json& rep) {
    Loaded l = load(single_input(c));
    rep["name"] = l.datum.name;
    rep["level"] = c.level;
    rep["loops"] = c.loops;
    rep["precision"] = c.precision;
    NZDatum d = prepare(l.datum, c, rep);
    int code = kSuccess;
    Json one = one_loop_json(d, c.level, c.precision);
    if (!alternative_ok(one)) code = kMismatch;
    rep["one_loop"] = one;
    if (c.loops < 2) return code;

    // formal Gaussian integration through hbar^2 against the diagram sum
    int wick_n = std::min(c.loops, 3);
    Json w;
    if (c.level == 1 && has_exact_shapes(d)) {
      auto p = make_exact_context(d, wick_n);
      auto a = wick_oracle(p);
      auto b = loop_series(p);
      bool same = true;
      for (long q = 0; q <= 2 * (wick_n - 1); ++q) same = same && a.coef2(q) == b.phi_plus.coef2(q);
      w["mode"] = "exact";
      w["agree"] = same;
      if (!same) code = kMismatch;
    } else {
      auto p = make_perturbation_context(make_level_context(d, c.level, c.precision), wick_n);
      auto a = wick_oracle(p);
      auto b = loop_series(p);
      bool same = true;
      for (long q = 0; q <= 2 * (wick_n - 1); ++q) same = same && a.coef2(q).overlaps(b.phi_plus.coef2(q));
      w["mode"] = "ball overlap";
      w["agree"] = same;
      if (!same) code = kMismatch;
    }
    rep["wick_check"] = w;

    FieldPtr F = base_field(d);
    Json terms = Json::array();
    if (!F) {
      auto ls = loop_series(make_perturbation_context(make_level_context(d, c.level, c.precision), c.loops));
      for (int n = 2; n <= c.loops; ++n)
        terms.push_back({{"n", n}, {"numeric", ls.S_n[n].str(std::min(c.precision, kShownDigits))},
                         {"status", "no field given; numeric only"}});
    } else {
      SeriesRecognition sr = recognize_series(d, c.level, c.loops, c.precision, height_bound_of(c));
      for (int n = 2; n <= c.loops; ++n) {
        Json t;
        t["n"] = n;
        t["numeric"] = sr.numeric[n].str(std::min(c.precision, kShownDigits));
        t["status"] = sr.status[n];
        if (sr.exact[n]) {
          t["exact"] = sr.exact[n]->str();
        } else {
          code = std::max(code, static_cast<int>(kExhausted));
        }
        if (n == 2) t["note"] = "well defined modulo (1/(24k)) Z";
        terms.push_back(t);
      }
      if (c.level > 1) rep["field"] = "F_k = F(z), z = exp(2 pi i/k)";
    }
    rep["S"] = terms;
    return code;
  });
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(c, out, err, [&](Json& rep) {
    std::string path = c.golden.empty() ? std::string(CSK_DATA_DIR) + "/golden.json" : c.golden;
    nlohmann::json g = load_golden(path);
    std::string data_dir = fs::path(path).parent_path().string();
    if (data_dir.empty()) data_dir = ".";
    GoldenOptions o;
    if (c.budget > 0) o.budget = c.budget;
    o.ell_bound = c.ell_bound;
    o.height_bound = height_bound_of(c);
    if (!c.items.empty()) {
      o.items.clear();
      for (auto& i : c.items) o.items.insert(i);
    }
    Selector sel = c.selector.empty() ? Selector{} : parse_selector(c.selector);
    o.levels = sel.levels;
    if (!g.contains("knots")) throw InputError("golden bundle has no knots");
    if (!sel.knot.empty() && !g["knots"].contains(sel.knot)) throw InputError("unknown knot " + sel.knot);

    Json checks = Json::array();
    long pass = 0, mismatch = 0, unresolved = 0;
    for (auto& [name, knot] : g["knots"].items()) {
      if (!sel.knot.empty() && name != sel.knot) continue;
      for (auto& ck : verify_knot(data_dir, name, knot, o)) {
        Json j = Json::parse(ck.to_json().dump());
        if (!c.timings) j.erase("seconds");
        checks.push_back(j);
        if (ck.status == CheckStatus::Pass) ++pass;
        else if (ck.status == CheckStatus::Mismatch) ++mismatch;
        else ++unresolved;
      }
    }
    rep["golden"] = fs::path(path).filename().string();
    rep["checks"] = checks;
    rep["summary"] = {{"pass", pass}, {"mismatch", mismatch}, {"unresolved", unresolved}};
    if (mismatch > 0) return kMismatch;
    return unresolved > 0 ? kExhausted : kSuccess;
  });
}

int cmd_census(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(c, out, err, [&](Json& rep) {
    std::vector<std::string> files = collect_json(c.inputs);
    Json items = Json::array();
    long found = 0, total = 0, already = 0, bad = 0, exhausted = 0, tau_fail = 0;
    for (auto& f : files) {
      Json it;
      it["file"] = fs::path(f).filename().string();
      Loaded l;
      try {
        l = load(f);
      } catch (const InputError& e) {
        it["error"] = e.what();
        ++bad;
        items.push_back(it);
        continue;
      }
      ++total;
      const NZDatum& d = l.datum;
      it["name"] = d.name;
      it["N"] = d.N;
      it["det_B"] = int_det(d.B).get_str();
      GaugeResult g;
      if (abs(int_det(d.B)) == 1) {
        g.found = true;
        g.datum = d;
        g.rotations.assign(d.N, 0);
        ++already;
      } else {
        g = find_unimodular_gauge(d, gauge_budget(c), c.seed);
      }
      it["gauge_found"] = g.found;
      if (!g.found) {
        if (g.budget_exhausted) ++exhausted;
        items.push_back(it);
        continue;
      }
      ++found;
      it["rotations"] = rotations_str(g.rotations);
      NZDatum u = g.datum;
      if (!flattening_holds(u)) {
        u.f2 = solve_flattening(u.A, u.B, u.nu).second;
        u.f.assign(u.N, 0);
      }
      long dg = std::min(working_digits(u, c.precision), c.precision);
      Json taus = Json::array();
      for (long k = 1; k <= c.level; ++k) {
        Json t = one_loop_json(u, k, dg);
        if (!alternative_ok(t)) ++tau_fail;
        taus.push_back({{"k", k}, {"tau", t["tau"]}, {"alternative_check", t["alternative_check"]}});
      }
      it["digits"] = dg;
      it["one_loop"] = taus;
      items.push_back(it);
    }
    rep["inputs"] = static_cast<long>(files.size());
    rep["data"] = items;
    Json s;
    s["triangulations"] = total;
    s["unreadable"] = bad;
    s["already_nondegenerate"] = already;
    s["gauge_found"] = found;
    if (total > 0) {
      std::ostringstream r;
      r << std::fixed << std::setprecision(1) << 100.0 * static_cast<double>(found) / static_cast<double>(total) << "%";
      s["gauge_success_rate"] = r.str();
    }
    s["one_loop_cross_check_failures"] = tau_fail;
    rep["summary"] = s;
    if (bad > 0) return kInputError;
    if (tau_fail > 0) return kMismatch;
    return exhausted > 0 ? kExhausted : kSuccess;
  });
}

}  // namespace csk::cli
