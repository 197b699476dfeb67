#pragma once

#include <chrono>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pasrect/generators.hpp"
#include "pasrect/gknap.hpp"
#include "pasrect/hardness.hpp"
#include "pasrect/io.hpp"
#include "pasrect/misr.hpp"
#include "pasrect/oracles.hpp"
#include "pasrect/svg.hpp"

namespace pasrect::cli {

enum Exit : int { ok = 0, usage = 1, asserted = 2, verify_failed = 3 };

/// Accepts "p/q" or a decimal such as "0.25".
inline Ratio parse_ratio(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash != std::string::npos) return Ratio::make(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    return Ratio::from_double(std::stod(s));
  } catch (const std::logic_error&) {
    throw std::invalid_argument("cannot parse ratio: " + s);
  }
}

inline Wide parse_wide(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty integer");
  Wide v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw std::invalid_argument("cannot parse integer: " + s);
    v = v * 10 + (c - '0');
    if (v > kWideSaturation) throw std::invalid_argument("integer too large: " + s);
  }
  return v;
}

inline std::vector<std::int64_t> parse_list(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stoll(tok));
  return out;
}

struct Options {
  // gen
  std::string kind;
  std::size_t n = 10;
  Coord size = 1000;
  Coord canvas = 100;
  std::size_t planted = 0;
  std::size_t opt_lo = 0, opt_hi = 0;
  Coord delta = 1;
  std::string solution_out;
  // shared
  std::int64_t k = 0;
  std::string eps = "1/2";
  std::size_t cap_c = 0, cap_b = 0;
  std::string ktilde;
  std::uint64_t seed = 1;
  std::int64_t budget_ms = 60000;
  std::string out;
  std::string format = "json";
  // positional
  std::string algo, target, instance, solution;
  // reduce
  std::string xs;
  std::int64_t t = 0;
};

namespace detail {

struct Io {
  std::ostream& out;
  std::ostream& err;
};

inline void emit(const Options& o, Io& io, const std::string& text) {
  if (o.out.empty())
    io.out << text;
  else
    io::write_file(o.out, text);
}

inline oracle::OracleBudget budget(const Options& o) {
  oracle::OracleBudget b;
  b.time_limit = std::chrono::milliseconds(o.budget_ms);
  return b;
}

inline int run_gen(const Options& o, Io& io) {
  io::InstanceFile f;
  io::json meta;
  meta["generator"] = o.kind;
  meta["seed"] = o.seed;
  std::optional<gen::PackedInstance> packed;
  if (o.kind == "misr") {
    gen::MisrParams prm{o.n, o.canvas, 60, o.planted};
    meta["n"] = o.n;
    meta["canvas"] = o.canvas;
    meta["planted"] = o.planted;
    if (o.opt_hi > 0) {
      auto inst = gen::misr_with_opt(prm, o.seed, o.opt_lo, o.opt_hi);
      if (!inst) throw std::runtime_error("no instance with the requested optimum range found");
      meta["opt_range"] = {o.opt_lo, o.opt_hi};
      f.body = *inst;
    } else {
      f.body = gen::random_misr(prm, o.seed);
    }
  } else if (o.kind == "packing") {
    if (o.k < 1) throw std::invalid_argument("--k is required for packing");
    packed = gen::random_feasible_packing(static_cast<std::size_t>(o.k), o.size, o.seed);
    meta["k"] = o.k;
  } else if (o.kind == "columns") {
    if (o.k < 1) throw std::invalid_argument("--k is required for columns");
    packed = gen::stacked_columns(static_cast<std::size_t>(o.k), o.size, o.delta);
    meta["k"] = o.k;
    meta["delta"] = o.delta;
  } else if (o.kind == "knapsack") {
    f.body = gen::random_knapsack(o.n, o.size, o.seed);
    meta["n"] = o.n;
  } else {
    throw std::invalid_argument("unknown generator: " + o.kind);
  }
  if (packed) f.body = packed->instance;
  if (!f.is_misr()) meta["N"] = o.size;
  f.meta = meta;
  emit(o, io, io::serialize(f));
  if (packed && !o.solution_out.empty()) {
    io::SolutionFile s{"gknap", io::content_hash(f), {}, packed->packing, {{"algorithm", "generator"}}};
    io::write_file(o.solution_out, io::serialize(s));
  }
  return ok;
}

inline std::string render(const io::InstanceFile& f, const io::SolutionFile* s, std::int64_t grid_k) {
  if (f.is_misr()) {
    std::optional<misr::Grid> grid;
    if (grid_k > 0 && !f.misr().empty()) {
      // grid lines live in normalized coordinates, so draw the normalized instance
      auto norm = normalize_instance(f.misr());
      auto go = misr::build_grid(norm, grid_k);
      if (go.is_grid()) return svg::render_misr(norm, s ? std::span<const Index>(s->selected) : std::span<const Index>{}, &*go.grid);
    }
    return svg::render_misr(f.misr(), s ? std::span<const Index>(s->selected) : std::span<const Index>{});
  }
  return svg::render_packing(f.gknap().N, f.gknap().items, s ? &s->packing : nullptr);
}

inline int run_solve(const Options& o, Io& io) {
  const auto f = io::load_instance(o.instance);
  io::SolutionFile s;
  s.instance_hash = io::content_hash(f);
  s.provenance["algorithm"] = o.algo;
  bool below = false;
  const Ratio eps = parse_ratio(o.eps);
  if (o.algo == "misr-pas" || o.algo == "misr-exact") {
    if (!f.is_misr()) throw std::invalid_argument(o.algo + " needs a misr instance");
    s.type = "misr";
    if (o.algo == "misr-pas") {
      if (o.k < 1) throw std::invalid_argument("--k is required");
      std::optional<misr::Knobs> knobs;
      if (o.cap_c > 0 || o.cap_b > 0) {
        const auto th = misr::theory_knobs(eps);
        knobs = misr::Knobs{o.cap_c ? o.cap_c : th.c, o.cap_b ? o.cap_b : th.b};
      }
      auto r = misr::pas_misr(f.misr(), o.k, eps, knobs);
      s.selected = r.solution;
      below = r.verdict == misr::Verdict::opt_below_k;
      s.provenance["k"] = o.k;
      s.provenance["eps"] = eps.str();
      s.provenance["branch"] = r.branch;
      s.provenance["knobs"] = {{"c", r.knobs.c}, {"b", r.knobs.b}, {"theory", r.theory_knobs}};
      s.provenance["candidates"] = r.candidates;
    } else {
      s.selected = oracle::mis_rectangles_exact(f.misr(), budget(o));
      if (o.k > 0) {
        s.provenance["k"] = o.k;
        below = static_cast<std::int64_t>(s.selected.size()) < o.k;
      }
    }
  } else if (o.algo == "2dkr-pas" || o.algo == "2dkr-exact") {
    if (f.is_misr()) throw std::invalid_argument(o.algo + " needs a gknap instance");
    const auto& g = f.gknap();
    s.type = "gknap";
    s.packing.N = g.N;
    if (o.algo == "2dkr-pas") {
      if (o.k < 1) throw std::invalid_argument("--k is required");
      if (!g.rotations) throw std::invalid_argument("2dkr-pas requires an instance with rotations allowed");
      std::optional<Wide> kt;
      if (!o.ktilde.empty()) kt = parse_wide(o.ktilde);
      auto r = gknap::pas_2dkr(g.items, g.N, o.k, eps, kt);
      s.packing = r.packing;
      below = r.verdict == gknap::Verdict::opt_below_k;
      s.provenance["k"] = o.k;
      s.provenance["eps"] = eps.str();
      s.provenance["branch"] = r.branch;
      s.provenance["k_prime"] = r.k_prime;
      s.provenance["k_tilde"] = wide_to_string(r.k_tilde);
      s.provenance["kernel_size"] = r.kernel_size;
    } else {
      const std::size_t cap = o.k > 0 ? static_cast<std::size_t>(o.k) : g.items.size();
      auto r = oracle::knapsack_exact(g.items, g.N, g.N, cap, g.rotations, budget(o));
      s.packing.placements = r.placements;
      if (o.k > 0) {
        s.provenance["k"] = o.k;
        below = static_cast<std::int64_t>(r.chosen.size()) < o.k;
      }
    }
  } else {
    throw std::invalid_argument("unknown algorithm: " + o.algo);
  }
  s.provenance["asserted_opt_below_k"] = below;
  emit(o, io, o.format == "svg" ? render(f, &s, 0) : io::serialize(s));
  if (below) io.err << "OPT < " << o.k << "\n";
  return below ? asserted : ok;
}

inline int run_kernel(const Options& o, Io& io) {
  const auto f = io::load_instance(o.instance);
  if (o.k < 1) throw std::invalid_argument("--k is required");
  const Ratio eps = parse_ratio(o.eps);
  io::InstanceFile out;
  IndexSet kept;
  if (o.target == "misr") {
    if (!f.is_misr()) throw std::invalid_argument("kernel misr needs a misr instance");
    std::optional<misr::Knobs> knobs;
    if (o.cap_c > 0 || o.cap_b > 0) {
      const auto th = misr::theory_knobs(eps);
      knobs = misr::Knobs{o.cap_c ? o.cap_c : th.c, o.cap_b ? o.cap_b : th.b};
    }
    kept = misr::kernel_misr(f.misr(), o.k, eps, knobs).kernel;
    MisrInstance inst;
    for (auto i : kept) inst.rects.push_back(f.misr()[i]);
    out.body = inst;
  } else if (o.target == "2dkr") {
    if (f.is_misr()) throw std::invalid_argument("kernel 2dkr needs a gknap instance");
    std::optional<Wide> kt;
    if (!o.ktilde.empty()) kt = parse_wide(o.ktilde);
    kept = gknap::kernel_2dkr(f.gknap().items, f.gknap().N, o.k, eps, kt).kernel;
    KnapsackInstance inst{f.gknap().N, {}, f.gknap().rotations};
    for (auto i : kept) inst.items.push_back(f.gknap().items[i]);
    out.body = inst;
  } else {
    throw std::invalid_argument("unknown kernel target: " + o.target);
  }
  out.meta["kernel_of"] = io::content_hash(f);
  out.meta["indices"] = kept;
  out.meta["k"] = o.k;
  out.meta["eps"] = eps.str();
  emit(o, io, io::serialize(out));
  return ok;
}

inline int run_reduce(const Options& o, Io& io) {
  if (o.target != "mss-to-2dkr") throw std::invalid_argument("unknown reduction: " + o.target);
  const auto xs = parse_list(o.xs);
  const std::int64_t k = o.k > 0 ? o.k : 4;
  const auto r = hardness::reduce_mss_to_2dkr(xs, o.t, k);
  io::InstanceFile f;
  f.body = KnapsackInstance{r.N, r.items, true};
  f.meta["reduction"] = {{"xs", r.xs}, {"t", r.t}, {"k", r.k}, {"k_prime", r.k_prime}, {"S", r.S}, {"L", r.L}};
  emit(o, io, io::serialize(f));
  const auto ys = oracle::mss_exact(xs, o.t, k);
  if (!o.solution_out.empty()) {
    if (!ys) {
      io.err << "multi-subset sum instance has no solution; no packing written\n";
      return asserted;
    }
    const auto yp = hardness::build_yes_packing(r, *ys);
    io::SolutionFile s{"gknap", io::content_hash(f), {}, yp.packing, {{"algorithm", "yes-packing"}, {"ys", *ys}}};
    io::write_file(o.solution_out, io::serialize(s));
  }
  return ok;
}

inline bool report(Io& io, const std::vector<std::string>& problems) {
  for (const auto& p : problems) io.err << p << "\n";
  return problems.empty();
}

inline std::vector<std::string> packing_problems(const io::InstanceFile& f, const io::SolutionFile& s) {
  std::vector<std::string> bad;
  if (f.is_misr()) return {"packing verification needs a gknap instance"};
  if (s.type != "gknap") return {"solution is not a packing"};
  const auto& g = f.gknap();
  if (s.packing.N != g.N) bad.push_back("packing N differs from instance N");
  Packing p = s.packing;
  p.N = g.N;
  for (const auto& v : validate_packing(p, g.items).violations) bad.push_back(v.describe());
  if (!g.rotations)
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p.placements[i].rotated) bad.push_back("rotated placement " + std::to_string(i) + " but rotations are off");
  return bad;
}

inline int run_verify(const Options& o, Io& io) {
  const auto f = io::load_instance(o.instance);
  std::vector<std::string> bad;
  std::optional<io::SolutionFile> s;
  if (!o.solution.empty()) {
    s = io::load_solution(o.solution);
    if (s->instance_hash != io::content_hash(f)) bad.push_back("solution refers to a different instance");
  }
  if (o.target == "solution") {
    if (!s) throw std::invalid_argument("verify solution needs a solution file");
    if (s->type == "misr") {
      if (!f.is_misr()) bad.push_back("misr solution for a gknap instance");
      else if (!validate_misr_solution(f.misr(), s->selected)) bad.push_back("selected rectangles overlap or are invalid");
    } else {
      auto more = packing_problems(f, *s);
      bad.insert(bad.end(), more.begin(), more.end());
    }
  } else if (o.target == "packing") {
    if (!s) throw std::invalid_argument("verify packing needs a packing file");
    auto more = packing_problems(f, *s);
    bad.insert(bad.end(), more.begin(), more.end());
  } else if (o.target == "reduction") {
    if (f.is_misr() || !f.meta.contains("reduction")) {
      bad.push_back("instance carries no reduction metadata");
    } else {
      const auto& m = f.meta["reduction"];
      const auto xs = m["xs"].get<std::vector<std::int64_t>>();
      const auto r = hardness::reduce_mss_to_2dkr(xs, m["t"].get<std::int64_t>(), m["k"].get<std::int64_t>());
      auto inv = hardness::check_reduction_invariants(r);
      bad.insert(bad.end(), inv.begin(), inv.end());
      if (r.N != f.gknap().N || r.items != f.gknap().items) bad.push_back("items differ from the recomputed reduction");
      if (s) {
        auto more = packing_problems(f, *s);
        bad.insert(bad.end(), more.begin(), more.end());
        if (static_cast<std::int64_t>(s->packing.size()) != r.k_prime)
          bad.push_back("packing has " + std::to_string(s->packing.size()) + " items, expected " +
                        std::to_string(r.k_prime));
      }
    }
  } else {
    throw std::invalid_argument("unknown verify target: " + o.target);
  }
  if (!report(io, bad)) return verify_failed;
  io.out << "ok\n";
  return ok;
}

}  // namespace detail

/// Runs one command line; files go to --out (or `out`), diagnostics to `err`.
inline int cli_dispatch(int argc, const char* const* argv, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
  Options o;
  std::int64_t grid_k = 0;
  CLI::App app{"Parameterized approximation for rectangle independent set and 2D knapsack"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "generate an instance");
  gen->add_option("kind", o.kind, "misr | packing | columns | knapsack")->required();
  gen->add_option("--n", o.n, "number of rectangles or items");
  gen->add_option("--size", o.size, "knapsack side N");
  gen->add_option("--canvas", o.canvas, "misr canvas side");
  gen->add_option("--planted", o.planted, "planted disjoint rectangles");
  gen->add_option("--opt-lo", o.opt_lo, "minimum exact optimum");
  gen->add_option("--opt-hi", o.opt_hi, "maximum exact optimum (enables rejection sampling)");
  gen->add_option("--delta", o.delta, "flat item height for columns");
  gen->add_option("--solution-out", o.solution_out, "write the reference packing here");

  auto* solve = app.add_subcommand("solve", "solve an instance");
  solve->add_option("algorithm", o.algo, "misr-pas | misr-exact | 2dkr-pas | 2dkr-exact")->required();
  solve->add_option("instance", o.instance)->required();

  auto* kernel = app.add_subcommand("kernel", "shrink an instance");
  kernel->add_option("target", o.target, "misr | 2dkr")->required();
  kernel->add_option("instance", o.instance)->required();

  auto* reduce = app.add_subcommand("reduce", "hardness reduction");
  reduce->add_option("reduction", o.target, "mss-to-2dkr")->required();
  reduce->add_option("--xs", o.xs, "comma separated numbers")->required();
  reduce->add_option("--t", o.t, "target sum")->required();
  reduce->add_option("--solution-out", o.solution_out, "write the yes-instance packing here");

  auto* verify = app.add_subcommand("verify", "check a file");
  verify->add_option("target", o.target, "solution | packing | reduction")->required();
  verify->add_option("instance", o.instance)->required();
  verify->add_option("solution", o.solution);

  auto* render = app.add_subcommand("render", "draw an instance as SVG");
  render->add_option("instance", o.instance)->required();
  render->add_option("solution", o.solution);
  render->add_option("--grid-k", grid_k, "draw the grid built for this k");

  for (auto* sc : {gen, solve, kernel, reduce, verify, render}) {
    sc->add_option("--k", o.k, "parameter k");
    sc->add_option("--eps", o.eps, "epsilon as p/q or decimal");
    sc->add_option("--cap-c", o.cap_c, "misr subproblem cap c");
    sc->add_option("--cap-b", o.cap_b, "misr block budget b");
    sc->add_option("--ktilde", o.ktilde, "2dkr rounding parameter");
    sc->add_option("--seed", o.seed, "random seed");
    sc->add_option("--budget", o.budget_ms, "oracle time budget in milliseconds");
    sc->add_option("--out", o.out, "output file (stdout if omitted)");
    sc->add_option("--format", o.format, "json | svg")->check(CLI::IsMember({"json", "svg"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return usage;
  }

  detail::Io io{out, err};
  try {
    if (*gen) return detail::run_gen(o, io);
    if (*solve) return detail::run_solve(o, io);
    if (*kernel) return detail::run_kernel(o, io);
    if (*reduce) return detail::run_reduce(o, io);
    if (*verify) return detail::run_verify(o, io);
    if (*render) {
      const auto f = io::load_instance(o.instance);
      std::optional<io::SolutionFile> s;
      if (!o.solution.empty()) s = io::load_solution(o.solution);
      detail::emit(o, io, detail::render(f, s ? &*s : nullptr, grid_k));
      return ok;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }
  return usage;
}

}  // namespace pasrect::cli
