// Acceptance checks, one PASS/FAIL line per criterion. With no argument every
// criterion runs; with a number only that one. Exit status is the number of
// failing criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "gmt/counterexample.hpp"
#include "gmt/cover_engine.hpp"
#include "gmt/errors.hpp"
#include "gmt/gauge.hpp"
#include "gmt/random.hpp"
#include "gmt/sobolev_map.hpp"
#include "gmt/whitney.hpp"

using namespace gmt;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// 1. Whitney invariant at depth 14.
Outcome whitney_invariant() {
  Timer clock;
  const auto d = WhitneyDecomposition::decompose(Domain::unit_ball(2), 14);
  double lo = 1e300, hi = 0.0;
  std::size_t bad = 0;
  for (const auto& q : d.cubes()) {
    double s = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double a = std::max(std::abs(q.lo(i)), std::abs(q.hi(i)));
      s += a * a;
    }
    const double r = q.diam() / (1.0 - std::sqrt(s));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    if (r < 0.25 || r > 1.0) ++bad;
  }
  double nlo = 1e300, nhi = 0.0;
  for (const auto& q : d.cubes()) {
    for (const auto& p : d.neighbors(q)) {
      const double r = p.diam() / q.diam();
      nlo = std::min(nlo, r);
      nhi = std::max(nhi, r);
    }
  }
  const double secs = clock.seconds();
  const bool pass = bad == 0 && nlo >= 0.25 && nhi <= 4.0 && secs < 10.0;
  return {pass, fmt("%zu cubes, diam/dist in [%.4f, %.4f], %zu violations, neighbour ratios in "
                    "[%.4f, %.4f], %.2f s",
                    d.size(), lo, hi, bad, nlo, nhi, secs)};
}

// 2. Divergence classification and the closed form of the power case.
Outcome divergence_classification() {
  Timer clock;
  std::size_t wrong = 0, total = 0;
  std::string misses;
  auto expect = [&](const Modulus& m, Divergence want) {
    ++total;
    const Divergence got = classify_divergence(m, 2).classification;
    if (got != want) {
      ++wrong;
      misses += " " + m.label() + "->" + to_string(got);
    }
  };
  for (double g : {0.25, 0.5, 1.0}) {
    for (double c : {1.0, 2.0}) expect(Modulus::power(c, g), Divergence::divergent);
  }
  for (int l : {2, 3}) {
    for (double s : {0.5, 1.0}) expect(Modulus::iterated_log(l, s), Divergence::divergent);
    for (double s : {1.5, 2.0}) expect(Modulus::iterated_log(l, s), Divergence::convergent);
  }
  double worst = 0.0;
  for (double g : {0.25, 0.5, 1.0}) {
    for (int n : {2, 3}) {
      const Modulus m = Modulus::power(1.0, g, n);
      const double v = divergence_integral_psi(m, std::exp(-40.0), std::exp(-1.0), n);
      const double want = std::pow(g, n) * 39.0;
      worst = std::max(worst, std::abs(v - want) / want);
    }
  }
  const double secs = clock.seconds();
  const bool pass = wrong == 0 && worst <= 1e-6 && secs < 5.0;
  return {pass, fmt("%zu/%zu classified correctly%s; closed-form rel. error %.2e; %.2f s",
                    total - wrong, total, misses.c_str(), worst, secs)};
}

// 3. Mass bounds of the S and R families.
Outcome family_mass_bounds() {
  Rng rng(2024);
  std::size_t checked = 0, bad = 0;
  double worst_s = 0.0, worst_r = 0.0;
  for (const char* spec : {"power:1,0.5", "iterlog:2,1"}) {
    for (int n : {2, 3}) {
      const Modulus m = Modulus::parse(spec, n);
      const double lb = lambda_k(m, m.base_index());
      const double r_max = std::ldexp(1.0, -m.base_index());
      for (int i = 0; i < 1000; ++i) {
        const double r = r_max * std::exp2(-30.0 * uniform01(rng));
        const Vec c{uniform(rng, -1, 1), uniform(rng, -1, 1), 0.0};
        const double rn = std::pow(r, n);
        const double s = build_S_family(c, r, n, s_family_length(n, 1e-6)).mass() / rn;
        const double rr = build_R_family(c, r, m, n, 1e-12).mass() / (2.0 / std::pow(lb, n - 1) * rn);
        worst_s = std::max(worst_s, s);
        worst_r = std::max(worst_r, rr);
        if (s > 1.0 + 1e-9 || rr > 1.0 + 1e-9) ++bad;
        ++checked;
      }
    }
  }
  return {bad == 0, fmt("%zu seed balls, max S-mass / r^n = %.12f, max R-mass / bound = %.6f, "
                        "%zu violations",
                        checked, worst_s, worst_r, bad)};
}

SampledMap lattice_sample(const SampledMap::Eval& fn, double h, const std::string& name) {
  const int N = static_cast<int>(std::lround(2.0 / h));
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(N) * N * 2);
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < N; ++i) {
      const Vec y = fn(Vec{-1.0 + (i + 0.5) * h, -1.0 + (j + 0.5) * h, 0.0});
      v.push_back(y[0]);
      v.push_back(y[1]);
    }
  }
  return SampledMap::from_lattice(std::move(v), 2, 2, h, name);
}

// 4. Family mass against C1 * energy, and self-convergence in the spacing.
Outcome energy_bound() {
  using Fn = SampledMap::Eval;
  const std::vector<std::pair<std::string, Fn>> maps = {
      {"identity", [](const Vec& x) { return x; }},
      {"z^2", [](const Vec& x) { return Vec{x[0] * x[0] - x[1] * x[1], 2.0 * x[0] * x[1], 0.0}; }},
      {"shear", [](const Vec& x) { return Vec{x[0] + 0.5 * x[1] * x[1], x[1] - 0.3 * x[0] * x[0], 0.0}; }},
      {"mixed", [](const Vec& x) { return Vec{x[0] * x[1], x[0] * x[0] + x[1], 0.0}; }},
      {"wave", [](const Vec& x) {
         return Vec{std::sin(2.0 * x[0]) * x[1], std::cos(x[0] * x[1]) + x[0] * x[0] * x[0], 0.0};
       }}};
  const Modulus m = Modulus::power(1.0, 1.0);
  const double c1 = family_constant(m, 2);
  // Lattice maps need 2 nodes per axis in every cube: level 7 at h = 1/256.
  // The spacing comparison uses the level-6 decomposition, valid for both.
  const auto fine = WhitneyDecomposition::decompose(Domain::unit_ball(2), 7);
  const auto common = WhitneyDecomposition::decompose(Domain::unit_ball(2), 6);
  bool pass = true;
  std::string detail = fmt("C1 = %.4g;", c1);
  for (const auto& [name, fn] : maps) {
    const auto coarse_map = lattice_sample(fn, 1.0 / 128, name);
    const auto fine_map = lattice_sample(fn, 1.0 / 256, name);
    const double energy = dirichlet_energy(fine_map, region_ball(2)).energy;
    const double bound_mass = assemble_family(cube_field(fine_map, fine), fine, m).mass();
    const double mass[2] = {assemble_family(cube_field(coarse_map, common), common, m).mass(),
                            assemble_family(cube_field(fine_map, common), common, m).mass()};
    const double ratio = bound_mass / (c1 * energy);
    const double drift = std::abs(mass[1] - mass[0]) / mass[1];
    pass = pass && ratio <= 1.0 && drift < 0.10;
    detail += fmt(" %s: mass/(C1 E) = %.3f, spacing drift %.2e;", name.c_str(), ratio, drift);
  }
  return {pass, detail};
}

// 5. The cover pipeline on the identity map.
Outcome cover_pipeline() {
  Timer clock;
  const auto f = SampledMap::identity(2, 1.0 / 256);
  PipelineOptions opt;
  opt.depth = 14;
  opt.directions = 64;
  const PipelineResult r = run_cover_pipeline(f, Modulus::power(1.0, 1.0), opt);
  const double secs = clock.seconds();
  double min_mult = 1e300, worst_mass = 0.0, lo = 1e300, hi = 0.0;
  for (const auto& c : r.reports) {
    min_mult = std::min(min_mult, c.min_multiplicity);
    worst_mass = std::max(worst_mass, std::abs(c.rescaled_mass + c.excluded_mass - c.mass) / c.mass);
    if (c.l >= r.l1 + 4 && c.l <= r.l1 + 12) {
      const double scaled = c.content_bound * (c.l - r.l1);
      lo = std::min(lo, scaled);
      hi = std::max(hi, scaled);
    }
  }
  const double spread = hi / lo - 1.0;
  const bool pass = !r.reports.empty() && min_mult >= 1.0 && spread <= 0.20 && worst_mass <= 1e-9 &&
                    secs < 60.0;
  return {pass, fmt("l0 = %d, l1 = %d, %zu levels, min multiplicity %.4g, bound*(l-l1) spread "
                    "%.1f%% over [l1+4, l1+12], mass error %.1e, %.1f s",
                    r.l0, r.l1, r.reports.size(), min_mult, 100 * spread, worst_mass, secs)};
}

// 6. G_l against the divergence integral.
Outcome g_versus_integral() {
  struct Case {
    const char* spec;
    int l1;
  };
  double worst = 0.0, worst_ln2 = 0.0;
  std::string detail;
  for (const Case& c : {Case{"power:1,1", 8}, Case{"power:1,0.5", 8}, Case{"iterlog:2,1", 10},
                        Case{"iterlog:3,1", 10}}) {
    const Modulus m = Modulus::parse(c.spec, 2);
    double w = 0.0, wl = 0.0;
    for (int l = c.l1 + 1; l <= 24; ++l) {
      const GComparison g = compare_g_integral(m, c.l1, l, 2);
      w = std::max(w, g.rel_error);
      wl = std::max(wl, g.rel_error_ln2);
    }
    const GComparison at24 = compare_g_integral(m, c.l1, 24, 2);
    detail += fmt(" %s: error at l=24 %.3f (max %.3f), against integral/ln2 %.3f;", c.spec,
                  at24.rel_error, w, at24.rel_error_ln2);
    worst = std::max(worst, w);
    worst_ln2 = std::max(worst_ln2, wl);
  }
  return {worst <= 0.15, fmt("max relative error %.3f (limit 0.15);%s", worst, detail.c_str())};
}

// 7. Halving eps halves the Hoelder-gauge bound.
Outcome holder_halving() {
  Timer clock;
  const auto f = SampledMap::identity(2, 1.0 / 256);
  const auto d = WhitneyDecomposition::decompose(Domain::unit_ball(2), 16);
  const CubeField field = cube_field(f, d);
  const HolderReport a = holder_pipeline(f, d, field, 1.0, 6.0, 64);
  const HolderReport b = holder_pipeline(f, d, field, 1.0, 3.0, 64);
  const double ratio = b.bound / a.bound;
  const double err = std::abs(ratio - 0.5) / 0.5;
  return {err <= 0.25, fmt("eps 6 -> 3: bound %.5g -> %.5g, ratio %.3f (|ratio/0.5 - 1| = %.1f%%), "
                           "l = %d and %d, %.1f s",
                           a.bound, b.bound, ratio, 100 * err, a.l, b.l, clock.seconds())};
}

// 8. Counterexample geometry.
Outcome counterexample_geometry() {
  const CantorTower s = CantorTower::source(0.25, 12);
  const CantorTower t = CantorTower::target(1.0, 12);
  double match = 0.0;
  for (int k = 1; k <= 12; ++k) {
    const RadialStretch st = frame_stretch(s, t, k);
    match = std::max({match, std::abs(st.a * st.r + st.b - st.rt), std::abs(st.a * st.R + st.b - st.Rt)});
  }
  Rng rng(1);
  double cont = 0.0;
  for (int n = 0; n < 10000; ++n) {
    const int k = 1 + static_cast<int>(uniform01(rng) * 11);
    const auto i = static_cast<std::uint64_t>(uniform01(rng) * s.count(k));
    const Vec c = s.center(k, i);
    const double r = s.inner(k);
    const double u = uniform(rng, -r, r);
    const int side = static_cast<int>(uniform01(rng) * 4);
    const Vec y = side == 0 ? Vec{r, u, 0} : side == 1 ? Vec{-r, u, 0} : side == 2 ? Vec{u, r, 0} : Vec{u, -r, 0};
    const Vec z = frame_stretch(s, t, k).apply(y, 1e-12);
    const Vec ct = t.center(k, i);
    const Vec h = evaluate_h(Vec{c[0] + y[0], c[1] + y[1], 0}, s, t);
    cont = std::max({cont, std::abs(ct[0] + z[0] - h[0]), std::abs(ct[1] + z[1] - h[1])});
  }
  const HolderEstimate h1 = holder_ratio(s, t, 100000, 7);
  const HolderEstimate h2 = holder_ratio(s, t, 200000, 7);
  const double drift = std::abs(h2.sup_ratio / h1.sup_ratio - 1.0);
  const bool pass = match <= 1e-12 && cont <= 2e-12 && drift <= 0.05;
  return {pass, fmt("boundary matching %.1e, continuity %.1e over 10^4 samples, Hoelder sup "
                    "(beta=%.2f) %.4f -> %.4f under doubling (%.1f%%)",
                    match, cont, h1.beta, h1.sup_ratio, h2.sup_ratio, 100 * drift)};
}

// 9. The positive-measure witness and its sharpness.
Outcome positive_measure_witness() {
  const CantorTower t = CantorTower::target(1.0, 12);
  const WitnessReport w = witness_positive_measure(t, 1.0, 12);
  const WitnessReport strong = witness_positive_measure(t, 1.0, 12, 3.0);
  const double near = std::abs(w.ratio[12] / 4.0 - 1.0);
  int arg = w.min_k;
  for (int k = w.min_k; k <= 12; ++k) {
    if (w.ratio[k] < w.ratio[arg]) arg = k;
  }
  const bool pass = near <= 0.10 && w.inf_ratio >= 2.0 && strong.ratio[12] < 0.5;
  return {pass, fmt("ratio at k=12 %.4f (%.1f%% from 4, limit 10%%), inf over [3,12] %.4f at k=%d "
                    "(limit 2), strengthened gauge at k=12 %.4f (limit 0.5)",
                    w.ratio[12], 100 * near, w.inf_ratio, arg, strong.ratio[12])};
}

// 10. Generation-energy trend above and below the threshold.
Outcome energy_threshold() {
  const CantorTower s = CantorTower::source(0.25, 12);
  const CantorTower t1 = CantorTower::target(1.0, 12);
  const CantorTower t3 = CantorTower::target(0.3, 12);
  double worst1 = 0.0, worst3 = 1e300;
  double prev1 = 0.0, prev3 = 0.0;
  for (int k = 1; k <= 12; ++k) {
    const double e1 = generation_energy(k, s, t1, 4096);
    const double e3 = generation_energy(k, s, t3, 4096);
    if (k >= 6) worst1 = std::max(worst1, e1 / prev1);
    if (k >= 2) worst3 = std::min(worst3, e3 / prev3 - (1.0 - 1.0 / k));
    prev1 = e1;
    prev3 = e3;
  }
  return {worst1 < 0.9 && worst3 >= 0.0,
          fmt("p=1: max term ratio for k>=6 %.4f (limit 0.9); p=0.3: min of ratio-(1-1/k) %.4f "
              "(non-summable when >= 0)",
              worst1, worst3)};
}

// 11. Fixed-seed reruns of the command line tool are byte-identical.
std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(is), {});
}

Outcome determinism() {
  const std::string cli = GMT_CLI_PATH;
  const std::vector<std::string> commands = {
      "modulus diverge --name iterlog:2,1",
      "whitney build --depth 9",
      "family build --depth 8 --spacing 0.0078125 --csv {csv}",
      "cover run --depth 12 --directions 16 --levels 10,12,14 --csv {csv}",
      "example map --depth 8 --samples 3000 --seed 17 --csv {csv}",
      "example witness --p 1 --depth 12 --csv {csv}"};
  std::size_t same = 0;
  std::string diff;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::string out[2];
    for (int run = 0; run < 2; ++run) {
      const std::string stem = "acceptance_det_" + std::to_string(c) + "_" + std::to_string(run);
      std::string cmd = commands[c];
      const auto pos = cmd.find("{csv}");
      if (pos != std::string::npos) cmd.replace(pos, 5, stem + ".csv");
      const std::string full = cli + " " + cmd + " --out " + stem + ".json";
      if (std::system(full.c_str()) != 0) return {false, "command failed: " + full};
      out[run] = slurp(stem + ".json") + slurp(stem + ".csv");
      std::remove((stem + ".json").c_str());
      std::remove((stem + ".csv").c_str());
    }
    if (out[0] == out[1] && !out[0].empty()) ++same;
    else diff += " [" + commands[c] + "]";
  }
  return {same == commands.size(),
          fmt("%zu/%zu reports byte-identical across reruns%s", same, commands.size(), diff.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"Whitney invariant", whitney_invariant},
      {"divergence classification", divergence_classification},
      {"family mass bounds", family_mass_bounds},
      {"energy bound", energy_bound},
      {"cover pipeline", cover_pipeline},
      {"G_l vs integral", g_versus_integral},
      {"Hoelder pipeline", holder_halving},
      {"counterexample geometry", counterexample_geometry},
      {"positive-measure witness", positive_measure_witness},
      {"energy threshold trend", energy_threshold},
      {"determinism", determinism}};
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "criterion must be 1..%zu\n", criteria.size());
    return 64;
  }
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
