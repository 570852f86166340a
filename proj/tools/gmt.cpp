// gmt: batch driver for every pipeline of the toolkit. Each subcommand writes
// a JSON report (stdout by default) plus optional CSV curves and SVG plots.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gmt/config.hpp"
#include "gmt/counterexample.hpp"
#include "gmt/cover_engine.hpp"
#include "gmt/errors.hpp"
#include "gmt/gauge.hpp"
#include "gmt/hausdorff.hpp"
#include "gmt/random.hpp"
#include "gmt/report.hpp"
#include "gmt/sobolev_map.hpp"
#include "gmt/whitney.hpp"

using nlohmann::json;
using namespace gmt;

namespace {

constexpr const char* kReportVersion = "1";

struct Common {
  std::uint64_t seed = 1;
  std::string defaults_path;
  std::string out = "-";
  std::string csv;
  std::string svg;
  double c_pm = 0.0;                 // 0: keep the defaults
  std::vector<double> chain;         // c1,c2,c3 for the working dimension
};

struct Context {
  Defaults cfg;
  json provenance;
  std::uint64_t seed = 1;
};

Context make_context(const Common& c, int n) {
  Context ctx;
  ctx.cfg = c.defaults_path.empty() ? builtin_defaults() : load_defaults(c.defaults_path);
  ctx.provenance = constants_provenance(ctx.cfg);
  ctx.seed = c.seed;
  if (c.c_pm > 0.0) {
    ctx.cfg.pseudomonotone_c = c.c_pm;
    ctx.provenance["pseudomonotone_c"] = "override";
  }
  if (!c.chain.empty()) {
    if (c.chain.size() != 3) throw SchemaError("--chain needs three values c1,c2,c3");
    ChainConstants& k = n == 3 ? ctx.cfg.chain3 : ctx.cfg.chain2;
    k = {c.chain[0], c.chain[1], c.chain[2]};
    ctx.provenance[n == 3 ? "chain3" : "chain2"] = "override";
  }
  return ctx;
}

// Every report has the same envelope; `extra` tags derived quantities.
void emit(const Common& c, const Context& ctx, const std::string& command, json inputs,
          json result, json extra_provenance = json::object()) {
  json prov = ctx.provenance;
  for (auto& [k, v] : extra_provenance.items()) prov[k] = v;
  json report{{"report_version", kReportVersion},
              {"command", command},
              {"inputs", std::move(inputs)},
              {"result", std::move(result)},
              {"constants", {{"values", to_json(ctx.cfg)}, {"provenance", prov}}}};
  report["inputs"]["seed"] = ctx.seed;
  write_json(c.out, report);
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw SchemaError("not an integer list: '" + s + "'");
    }
  }
  return out;
}

const char* error_type(const std::exception& e) {
  if (dynamic_cast<const SchemaError*>(&e)) return "schema";
  if (dynamic_cast<const ModulusInvalidError*>(&e)) return "modulus_invalid";
  if (dynamic_cast<const RangeError*>(&e)) return "range";
  if (dynamic_cast<const DomainError*>(&e)) return "domain";
  if (dynamic_cast<const LookupError*>(&e)) return "lookup";
  if (dynamic_cast<const ResolutionError*>(&e)) return "resolution";
  if (dynamic_cast<const PreconditionError*>(&e)) return "precondition";
  if (dynamic_cast<const CoverInvalidError*>(&e)) return "cover_invalid";
  if (dynamic_cast<const TreeInvalidError*>(&e)) return "tree_invalid";
  if (dynamic_cast<const InternalInconsistencyError*>(&e)) return "internal_inconsistency";
  if (dynamic_cast<const NumericError*>(&e)) return "numeric";
  if (dynamic_cast<const TruncationError*>(&e)) return "truncation";
  if (dynamic_cast<const json::exception*>(&e)) return "schema";
  return "internal";
}

int exit_code(const std::string& type) {
  if (type == "schema" || type == "modulus_invalid" || type == "range" || type == "domain" ||
      type == "lookup")
    return 2;
  return 3;
}

}  // namespace

namespace {

// -- modulus ---------------------------------------------------------------

void modulus_check(const Common& c, const std::string& name, int n, int grid) {
  const Context ctx = make_context(c, n);
  const Modulus m = Modulus::parse(name, n);
  const AllowabilityReport r = check_allowable(m, grid, ctx.cfg);
  json res = to_json(r);
  res["allowable"] = r.all_pass();
  res["t0"] = m.t0();
  res["beta"] = m.beta();
  res["base_index"] = m.base_index();
  emit(c, ctx, "modulus check", {{"name", name}, {"n", n}, {"grid", grid}}, res,
       {{"t0", "paper"}, {"beta", "paper"}});
}

void modulus_diverge(const Common& c, const std::string& name, int n) {
  const Context ctx = make_context(c, n);
  const Modulus m = Modulus::parse(name, n);
  const DivergenceReport r = classify_divergence(m, n, ctx.cfg);
  if (!c.csv.empty()) {
    CsvTable t({"j", "log_inv_eps", "truncated_integral"});
    for (std::size_t j = 0; j < r.truncations.size(); ++j) {
      t.add({static_cast<double>(j + 1), std::ldexp(1.0, static_cast<int>(j + 1)), r.truncations[j]});
    }
    t.write(c.csv);
  }
  emit(c, ctx, "modulus diverge", {{"name", name}, {"n", n}}, to_json(r));
}

// -- whitney ---------------------------------------------------------------

void whitney_build(const Common& c, int depth, int n, bool cubes) {
  const Context ctx = make_context(c, n);
  const auto d = WhitneyDecomposition::decompose(Domain::unit_ball(n), depth);
  const auto [lo, hi] = d.ratio_range();
  const auto counts = d.level_counts();
  json res{{"dim", n},
           {"max_level", d.max_level()},
           {"min_level", d.min_level()},
           {"cubes", d.size()},
           {"ratio_min", lo},
           {"ratio_max", hi},
           {"ratio_in_bounds", lo >= 0.25 && hi <= 1.0},
           {"max_neighbor_count", d.max_neighbor_count()},
           {"level_counts", counts}};
  if (cubes) res["decomposition"] = to_json(d);
  if (!c.csv.empty()) {
    CsvTable t({"level", "cubes"});
    for (std::size_t i = 0; i < counts.size(); ++i) {
      t.add({static_cast<double>(d.min_level() + static_cast<int>(i)), static_cast<double>(counts[i])});
    }
    t.write(c.csv);
  }
  emit(c, ctx, "whitney build", {{"depth", depth}, {"n", n}}, res);
}

void whitney_render(const Common& c, int depth) {
  const Context ctx = make_context(c, 2);
  if (c.svg.empty()) throw SchemaError("whitney render needs --svg");
  const auto d = WhitneyDecomposition::decompose(Domain::unit_ball(2), depth);
  Svg svg(-1.05, -1.05, 1.05, 1.05, 800);
  for (const auto& q : d.cubes()) svg.rect(q.lo(0), q.lo(1), q.hi(0), q.hi(1), "#1f4e79", "none", 0.4);
  svg.circle(0.0, 0.0, 1.0, "#c00000", "none", 1.0);
  svg.write(c.svg);
  emit(c, ctx, "whitney render", {{"depth", depth}, {"n", 2}},
       {{"cubes", d.size()}, {"svg", c.svg}});
}

// -- family ----------------------------------------------------------------

void family_build(const Common& c, const std::string& map, const std::string& modulus, int depth,
                  double spacing, int n) {
  const Context ctx = make_context(c, n);
  const Modulus m = Modulus::parse(modulus, n);
  const SampledMap f = SampledMap::parse(map, n, spacing);
  const auto d = WhitneyDecomposition::decompose(Domain::unit_ball(n), depth);
  const CubeField field = cube_field(f, d);
  const AssembledFamily fam = assemble_family(field, d, m, ctx.cfg);
  const double energy = dirichlet_energy(f, region_ball(n)).energy;
  const double c1 = family_constant(m, n, ctx.cfg);
  json res{{"seeds", fam.seeds().size()},
           {"balls", fam.ball_count()},
           {"s_length", fam.s_length()},
           {"mass", fam.mass()},
           {"seed_mass", fam.seed_mass()},
           {"energy", energy},
           {"c1", c1},
           {"energy_bound", c1 * energy},
           {"within_bound", fam.mass() <= c1 * energy}};
  if (!c.csv.empty()) {
    CsvTable t({"cube", "x", "y", "radius"});
    for (const auto& s : fam.seeds()) t.add({static_cast<double>(s.cube), s.center[0], s.center[1], s.radius});
    t.write(c.csv);
  }
  emit(c, ctx, "family build",
       {{"map", map}, {"modulus", modulus}, {"depth", depth}, {"spacing", spacing}, {"n", n}}, res,
       {{"c1", "derived"}, {"energy_bound", "derived"}});
}

}  // namespace

namespace {

// -- cover -----------------------------------------------------------------

void cover_run(const Common& c, const std::string& map, const std::string& modulus, int depth,
               std::size_t directions, const std::string& levels, double c0, double spacing) {
  const Context ctx = make_context(c, 2);
  const Modulus m = Modulus::parse(modulus, 2);
  const SampledMap f = SampledMap::parse(map, 2, spacing);
  PipelineOptions opt;
  opt.depth = depth;
  opt.directions = directions;
  opt.c0_tilde = c0;
  opt.levels = parse_int_list(levels);
  const PipelineResult r = run_cover_pipeline(f, m, opt, ctx.cfg);

  json reports = json::array();
  bool decreasing = true;
  for (std::size_t i = 0; i < r.reports.size(); ++i) {
    reports.push_back(to_json(r.reports[i]));
    if (i > 0 && r.reports[i].content_bound >= r.reports[i - 1].content_bound) decreasing = false;
  }
  json res{{"l0", r.l0},
           {"l1", r.l1},
           {"c0_tilde", r.c0_tilde},
           {"energy", r.energy},
           {"c1", r.c1},
           {"mass", r.mass},
           {"unresolved_directions", r.trace.unresolved},
           {"bound_decreasing", decreasing},
           {"notes", r.notes},
           {"levels", reports}};
  if (!c.csv.empty()) {
    CsvTable t({"l", "g_l", "content_bound", "weighted_content", "min_multiplicity",
                "excluded_balls"});
    for (const auto& x : r.reports) {
      t.add({static_cast<double>(x.l), x.g_l, x.content_bound, x.weighted_content,
             x.min_multiplicity, static_cast<double>(x.excluded_balls)});
    }
    t.write(c.csv);
  }
  if (!c.svg.empty()) {
    Svg svg(-1.2, -1.2, 1.2, 1.2, 600);
    svg.circle(0.0, 0.0, 1.0, "#999999");
    for (const auto& dtr : r.trace.directions) {
      svg.circle(dtr.image[0], dtr.image[1], 0.01, dtr.resolved ? "#1f4e79" : "#c00000",
                 dtr.resolved ? "#1f4e79" : "#c00000");
    }
    svg.write(c.svg);
  }
  emit(c, ctx, "cover run",
       {{"map", map}, {"modulus", modulus}, {"depth", depth}, {"directions", directions},
        {"levels", opt.levels}, {"c0_tilde", c0}, {"spacing", spacing}},
       res, {{"c0_tilde", c0 > 0.0 ? "override" : "derived"}, {"c1", "derived"}});
}

void cover_holder(const Common& c, const std::string& map, int depth, std::size_t directions,
                  double gamma, const std::vector<double>& eps, double c0, double spacing) {
  const Context ctx = make_context(c, 2);
  const SampledMap f = SampledMap::parse(map, 2, spacing);
  const auto d = WhitneyDecomposition::decompose(Domain::unit_ball(2), depth);
  const CubeField field = cube_field(f, d);
  json runs = json::array();
  CsvTable t({"eps", "delta", "l0", "l1", "l", "bound", "direct_bound", "epsilon_bound"});
  for (double e : eps) {
    const HolderReport r = holder_pipeline(f, d, field, gamma, e, directions, ctx.cfg, c0);
    runs.push_back(to_json(r));
    t.add({r.eps, r.delta, double(r.l0), double(r.l1), double(r.l), r.bound, r.direct_bound,
           r.epsilon_bound});
  }
  json res{{"runs", runs}};
  if (eps.size() >= 2) {
    const double b0 = runs[0]["bound"].get<double>();
    const double b1 = runs[1]["bound"].get<double>();
    res["bound_ratio"] = b1 / b0;
    res["eps_ratio"] = eps[1] / eps[0];
  }
  if (!c.csv.empty()) t.write(c.csv);
  emit(c, ctx, "cover holder",
       {{"map", map}, {"depth", depth}, {"directions", directions}, {"gamma", gamma},
        {"eps", eps}, {"c0_tilde", c0}, {"spacing", spacing}},
       res, {{"c0_tilde", c0 > 0.0 ? "override" : "derived"}, {"c1", "derived"}});
}

}  // namespace

namespace {

// -- measure ---------------------------------------------------------------

PointCloud read_points(const std::string& path) {
  const auto rows = read_csv_numbers(path);
  if (rows.empty()) throw SchemaError(path + ": no points");
  const int m = static_cast<int>(rows[0].size());
  if (m < 1 || m > 3) throw SchemaError(path + ": points need 1 to 3 columns");
  std::vector<Vec> pts;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != m) throw SchemaError(path + ": ragged point rows");
    Vec v{};
    for (int i = 0; i < m; ++i) v[i] = r[i];
    pts.push_back(v);
  }
  return PointCloud::make(std::move(pts), m, path);
}

void measure_upper(const Common& c, const std::string& points, const std::string& cover,
                   const std::string& gauge, double delta) {
  const Context ctx = make_context(c, 2);
  const PointCloud e = read_points(points);
  const Gauge h = Gauge::parse(gauge);
  json res{{"points", e.points.size()}, {"m", e.m}, {"gauge", h.label()}};
  if (cover.empty()) {
    // Occupied grid boxes whose diameter equals delta.
    const double side = delta / std::sqrt(static_cast<double>(e.m));
    Cover cv;
    cv.delta = delta;
    std::vector<std::array<std::int64_t, 3>> keys;
    for (const auto& p : e.points) {
      std::array<std::int64_t, 3> k{};
      for (int i = 0; i < e.m; ++i) k[i] = static_cast<std::int64_t>(std::floor(p[i] / side));
      keys.push_back(k);
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    for (const auto& k : keys) {
      Vec lo{}, hi{};
      for (int i = 0; i < e.m; ++i) {
        lo[i] = k[i] * side;
        hi[i] = (k[i] + 1) * side;
      }
      cv.sets.push_back(CoverSet::box(lo, hi, e.m, delta));
    }
    res["cover"] = "grid";
    res["sets"] = cv.sets.size();
    res["content_upper"] = content_upper(e, cv, h);
  } else {
    const auto rows = read_csv_numbers(cover);
    const std::size_t m = static_cast<std::size_t>(e.m);
    if (rows.empty()) throw SchemaError(cover + ": empty cover");
    const bool weighted = rows[0].size() == m + 2;
    if (!weighted && rows[0].size() != m + 1) {
      throw SchemaError(cover + ": rows need centre and radius, optionally preceded by a weight");
    }
    res["cover"] = cover;
    res["sets"] = rows.size();
    auto ball = [&](const std::vector<double>& r, std::size_t off) {
      Vec x{};
      for (std::size_t i = 0; i < m; ++i) x[i] = r[off + i];
      return CoverSet::ball(x, r[off + m], e.m);
    };
    if (weighted) {
      WeightedCover wc;
      for (const auto& r : rows) {
        if (r.size() != m + 2) throw SchemaError(cover + ": ragged cover rows");
        wc.add(r[0], ball(r, 1));
      }
      res["weighted"] = to_json(weighted_content_upper(e, wc, h, ctx.cfg.multiplicity_tol));
    } else {
      Cover cv;
      cv.delta = delta;
      for (const auto& r : rows) {
        if (r.size() != m + 1) throw SchemaError(cover + ": ragged cover rows");
        cv.sets.push_back(ball(r, 0));
      }
      res["content_upper"] = content_upper(e, cv, h);
    }
  }
  emit(c, ctx, "measure upper",
       {{"points", points}, {"cover", cover}, {"gauge", gauge}, {"delta", delta}}, res);
}

void measure_lower(const Common& c, const std::string& tree_path, const std::string& gauge,
                   int min_depth, double p, int depth) {
  const Context ctx = make_context(c, 2);
  json res;
  if (!tree_path.empty()) {
    MassTree tree;
    for (const auto& r : read_csv_numbers(tree_path)) {
      if (r.size() != 3) throw SchemaError(tree_path + ": rows are parent,diameter,mass");
      tree.add(static_cast<int>(r[0]), r[1], r[2]);
    }
    const Gauge h = Gauge::parse(gauge);
    const MassLowerBound b = mass_distribution_lower(tree, h, min_depth);
    res = {{"nodes", tree.nodes.size()},
           {"gauge", h.label()},
           {"inf_ratio", b.inf_ratio},
           {"arg_node", b.arg_node},
           {"depth_min", b.depth_min},
           {"measure_lower_bound", b.inf_ratio}};
  } else {
    if (!(p > 0.0)) throw SchemaError("measure lower needs --tree or --p with --depth");
    const CantorTower t = CantorTower::target(p, depth);
    const WitnessReport w = witness_positive_measure(t, p, depth, -1.0, min_depth);
    res = {{"tower", to_json(t)},
           {"inf_ratio", w.tree_bound.inf_ratio},
           {"depth_min", w.tree_bound.depth_min},
           {"gauge_exponent", w.gauge_exponent},
           {"convention", w.convention}};
  }
  emit(c, ctx, "measure lower",
       {{"tree", tree_path}, {"gauge", gauge}, {"min_depth", min_depth}, {"p", p}, {"depth", depth}},
       res);
}

void measure_box(const Common& c, const std::string& points, const std::string& gauge,
                 const std::vector<double>& deltas) {
  const Context ctx = make_context(c, 2);
  const PointCloud e = read_points(points);
  const Gauge h = Gauge::parse(gauge);
  json rows = json::array();
  CsvTable t({"delta", "box_sum"});
  for (double d : deltas) {
    const double v = box_count(e, d, h);
    rows.push_back({{"delta", d}, {"box_sum", v}});
    t.add({d, v});
  }
  if (!c.csv.empty()) t.write(c.csv);
  emit(c, ctx, "measure box", {{"points", points}, {"gauge", gauge}, {"delta", deltas}},
       {{"points", e.points.size()}, {"gauge", h.label()}, {"box_sums", rows}});
}

}  // namespace

namespace {

// -- example ---------------------------------------------------------------

const char* kind_name(FrameLocation::Kind k) {
  switch (k) {
    case FrameLocation::Kind::frame: return "frame";
    case FrameLocation::Kind::cantor_limit: return "cantor_limit";
    default: return "exterior";
  }
}

void draw_tower(Svg& svg, const CantorTower& t, double dx, int levels) {
  for (int k = 0; k <= levels; ++k) {
    for (std::uint64_t i = 0; i < t.count(k); ++i) {
      const Vec ctr = t.center(k, i);
      const double r = t.inner(k);
      svg.rect(ctr[0] - r + dx, ctr[1] - r, ctr[0] + r + dx, ctr[1] + r, "#1f4e79", "none", 0.5);
    }
  }
}

void example_build(const Common& c, double sigma, double p, int depth) {
  const Context ctx = make_context(c, 2);
  const CantorTower s = CantorTower::source(sigma, depth);
  const CantorTower t = CantorTower::target(p, depth);
  if (!c.svg.empty()) {
    Svg svg(-0.05, -0.1, 2.25, 1.05, 900);
    const int levels = std::min(depth, 4);
    draw_tower(svg, s, 0.0, levels);
    draw_tower(svg, t, 1.2, levels);
    svg.text(0.0, -0.07, s.label(), 14);
    svg.text(1.2, -0.07, t.label(), 14);
    svg.write(c.svg);
  }
  emit(c, ctx, "example build", {{"sigma", sigma}, {"p", p}, {"depth", depth}},
       {{"source", to_json(s)}, {"target", to_json(t)}});
}

void example_map(const Common& c, double sigma, double p, int depth, const std::string& in,
                 std::size_t samples) {
  const Context ctx = make_context(c, 2);
  const CantorTower s = CantorTower::source(sigma, depth);
  const CantorTower t = CantorTower::target(p, depth);
  std::vector<Vec> pts;
  if (!in.empty()) {
    for (const auto& r : read_csv_numbers(in)) {
      if (r.size() != 2) throw SchemaError(in + ": rows are x,y");
      pts.push_back(Vec{r[0], r[1], 0.0});
    }
  } else {
    Rng rng(ctx.seed);
    for (std::size_t i = 0; i < samples; ++i) pts.push_back(Vec{uniform01(rng), uniform01(rng), 0.0});
  }
  CsvTable table({"x", "y", "hx", "hy", "generation", "kind"});
  std::size_t frames = 0, limits = 0, outside = 0;
  for (const auto& x : pts) {
    const FrameLocation loc = locate(x, s);
    const Vec y = evaluate_h(x, s, t);
    if (loc.kind == FrameLocation::Kind::frame) ++frames;
    else if (loc.kind == FrameLocation::Kind::cantor_limit) ++limits;
    else ++outside;
    table.add({x[0], x[1], y[0], y[1], static_cast<double>(loc.k), static_cast<double>(loc.kind)});
  }
  if (!c.csv.empty()) table.write(c.csv);
  emit(c, ctx, "example map",
       {{"sigma", sigma}, {"p", p}, {"depth", depth}, {"in", in}, {"samples", pts.size()}},
       {{"points", pts.size()},
        {"in_frames", frames},
        {"cantor_limit", limits},
        {"exterior", outside},
        {"kind_codes", {kind_name(FrameLocation::Kind::frame),
                        kind_name(FrameLocation::Kind::cantor_limit),
                        kind_name(FrameLocation::Kind::exterior)}}});
}

void example_energy(const Common& c, double sigma, double p, int depth, std::size_t samples,
                    int fd_max) {
  const Context ctx = make_context(c, 2);
  const CantorTower s = CantorTower::source(sigma, depth);
  const CantorTower t = CantorTower::target(p, depth);
  json terms = json::array();
  CsvTable table({"k", "closed_form", "finite_difference", "ratio", "partial_sum"});
  double prev = 0.0, sum = 0.0;
  for (int k = 1; k <= depth; ++k) {
    const double cf = std::ldexp(frame_energy(frame_stretch(s, t, k)), 2 * k);
    const double fd = k <= fd_max ? generation_energy(k, s, t, samples) : std::nan("");
    const double ratio = prev > 0.0 ? cf / prev : std::nan("");
    sum += cf;
    json row{{"k", k}, {"closed_form", cf}, {"partial_sum", sum}};
    row["finite_difference"] = k <= fd_max ? json(fd) : json(nullptr);
    row["ratio"] = prev > 0.0 ? json(ratio) : json(nullptr);
    terms.push_back(row);
    table.add({double(k), cf, fd, ratio, sum});
    prev = cf;
  }
  if (!c.csv.empty()) table.write(c.csv);
  emit(c, ctx, "example energy",
       {{"sigma", sigma}, {"p", p}, {"depth", depth}, {"samples", samples}, {"fd_max", fd_max}},
       {{"terms", terms}, {"partial_sum", sum}});
}

void example_witness(const Common& c, double p, int depth, double q, int min_k) {
  const Context ctx = make_context(c, 2);
  const CantorTower t = CantorTower::target(p, depth);
  const WitnessReport w = witness_positive_measure(t, p, depth, q, min_k);
  if (!c.csv.empty()) {
    CsvTable table({"k", "ratio"});
    for (std::size_t k = 0; k < w.ratio.size(); ++k) table.add({double(k), w.ratio[k]});
    table.write(c.csv);
  }
  emit(c, ctx, "example witness",
       {{"p", p}, {"depth", depth}, {"gauge_exponent", q}, {"min_k", min_k}}, to_json(w),
       {{"limit", "derived"}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gmt: Whitney covers, Sobolev boundary images and gauge measures"};
  app.require_subcommand(1);
  Common common;

  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    CLI::App* s = parent->add_subcommand(name, help);
    s->add_option("--seed", common.seed, "random seed")->capture_default_str();
    s->add_option("--defaults", common.defaults_path, "constants file (JSON)");
    s->add_option("--out", common.out, "JSON report path, - for stdout")->capture_default_str();
    s->add_option("--c-pm", common.c_pm, "override the pseudomonotone constant");
    s->add_option("--chain", common.chain, "override chain constants c1,c2,c3")->delimiter(',');
    return s;
  };
  auto group = [&](const std::string& name, const std::string& help) {
    CLI::App* g = app.add_subcommand(name, help);
    g->require_subcommand(1);
    return g;
  };

  std::string name = "power:1,1", map = "identity", modulus = "power:1,1", gauge = "power:2";
  std::string levels, points, cover, tree, in;
  int n = 2, grid = 256, depth = 0, min_depth = 0, fd_max = 6;
  bool cubes = false;
  std::size_t directions = 64, samples = 0;
  double c0 = 0.0, gamma = 1.0, spacing = 1.0 / 256, delta = 1.0, sigma = 0.25, p = 1.0, q = -1.0;
  std::vector<double> eps{6.0, 3.0}, deltas;

  auto* modulus_g = group("modulus", "moduli of continuity");
  auto* mc = leaf(modulus_g, "check", "allowability conditions on a grid");
  mc->add_option("--name", name, "modulus spec")->capture_default_str();
  mc->add_option("--n", n)->check(CLI::Range(2, 3))->capture_default_str();
  mc->add_option("--grid", grid)->check(CLI::Range(8, 1 << 20))->capture_default_str();
  auto* md = leaf(modulus_g, "diverge", "classify the divergence integral");
  md->add_option("--name", name, "modulus spec")->capture_default_str();
  md->add_option("--n", n)->check(CLI::Range(2, 3))->capture_default_str();
  md->add_option("--csv", common.csv, "truncated integrals");

  auto* whitney_g = group("whitney", "Whitney decomposition of the unit ball");
  auto* wb = leaf(whitney_g, "build", "decompose and verify");
  wb->add_option("--depth", depth, "finest level")->required()->check(CLI::Range(1, 24));
  wb->add_option("--n", n)->check(CLI::Range(2, 3))->capture_default_str();
  wb->add_flag("--cubes", cubes, "include every cube in the report");
  wb->add_option("--csv", common.csv, "cubes per level");
  auto* wr = leaf(whitney_g, "render", "draw the planar decomposition");
  wr->add_option("--depth", depth, "finest level")->required()->check(CLI::Range(1, 12));
  wr->add_option("--svg", common.svg, "output drawing")->required();

  auto* family_g = group("family", "weighted ball families");
  auto* fb = leaf(family_g, "build", "assemble the family and compare with the energy");
  fb->add_option("--map", map, "map spec")->capture_default_str();
  fb->add_option("--modulus", modulus, "modulus spec")->capture_default_str();
  fb->add_option("--depth", depth)->required()->check(CLI::Range(1, 20));
  fb->add_option("--spacing", spacing, "lattice spacing")->capture_default_str();
  fb->add_option("--n", n)->check(CLI::Range(2, 3))->capture_default_str();
  fb->add_option("--csv", common.csv, "seed balls");

  auto* cover_g = group("cover", "covers of the boundary image");
  auto* cr = leaf(cover_g, "run", "full cover pipeline over a range of levels");
  cr->add_option("--map", map, "map spec")->capture_default_str();
  cr->add_option("--modulus", modulus, "modulus spec")->capture_default_str();
  cr->add_option("--depth", depth)->required()->check(CLI::Range(4, 20));
  cr->add_option("--directions", directions)->check(CLI::Range(1, 1 << 16))->capture_default_str();
  cr->add_option("--levels", levels, "comma-separated levels (default l1..l1+12)");
  cr->add_option("--c0", c0, "override the ledger constant");
  cr->add_option("--spacing", spacing, "lattice spacing")->capture_default_str();
  cr->add_option("--csv", common.csv, "bound per level");
  cr->add_option("--svg", common.svg, "traced boundary images");
  auto* ch = leaf(cover_g, "holder", "Hoelder-gauge pipeline for several eps");
  ch->add_option("--map", map, "map spec")->capture_default_str();
  ch->add_option("--depth", depth)->required()->check(CLI::Range(4, 20));
  ch->add_option("--directions", directions)->check(CLI::Range(1, 1 << 16))->capture_default_str();
  ch->add_option("--gamma", gamma, "Hoelder exponent")->capture_default_str();
  ch->add_option("--eps", eps, "tail energies")->delimiter(',')->capture_default_str();
  ch->add_option("--c0", c0, "override the ledger constant");
  ch->add_option("--spacing", spacing, "lattice spacing")->capture_default_str();
  ch->add_option("--csv", common.csv, "bound per eps");

  auto* measure_g = group("measure", "gauge measure estimates on point clouds");
  auto* mu = leaf(measure_g, "upper", "content of a cover");
  mu->add_option("--points", points, "points CSV")->required();
  mu->add_option("--cover", cover, "cover CSV (x,..,r or c,x,..,r); default grid boxes");
  mu->add_option("--gauge", gauge, "gauge spec")->capture_default_str();
  mu->add_option("--delta", delta, "cover scale")->capture_default_str();
  auto* ml = leaf(measure_g, "lower", "mass distribution lower bound");
  ml->add_option("--tree", tree, "tree CSV (parent,diameter,mass)");
  ml->add_option("--gauge", gauge, "gauge spec")->capture_default_str();
  ml->add_option("--min-depth", min_depth)->capture_default_str();
  ml->add_option("--p", p, "target tower exponent (without --tree)");
  ml->add_option("--depth", depth, "target tower depth")->check(CLI::Range(0, 24));
  auto* mb = leaf(measure_g, "box", "box-counting sums");
  mb->add_option("--points", points, "points CSV")->required();
  mb->add_option("--gauge", gauge, "gauge spec")->capture_default_str();
  mb->add_option("--delta", deltas, "box sides")->delimiter(',')->required();
  mb->add_option("--csv", common.csv, "sum per delta");

  auto* example_g = group("example", "the Cantor-tower homeomorphism");
  auto add_tower = [&](CLI::App* s, bool with_sigma) {
    if (with_sigma) s->add_option("--sigma", sigma, "source side ratio")->capture_default_str();
    s->add_option("--p", p, "target exponent")->capture_default_str();
    s->add_option("--depth", depth, "generations")->required()->check(CLI::Range(1, 24));
  };
  auto* eb = leaf(example_g, "build", "source and target towers");
  add_tower(eb, true);
  eb->add_option("--svg", common.svg, "first generations of both towers");
  auto* em = leaf(example_g, "map", "evaluate h");
  add_tower(em, true);
  em->add_option("--in", in, "points CSV (x,y); default random points");
  em->add_option("--samples", samples, "random points without --in")->capture_default_str();
  em->add_option("--csv", common.csv, "points and images");
  auto* ee = leaf(example_g, "energy", "Dirichlet energy per generation");
  add_tower(ee, true);
  ee->add_option("--samples", samples, "finite-difference cells per frame");
  ee->add_option("--fd-max", fd_max, "last generation integrated numerically")->capture_default_str();
  ee->add_option("--csv", common.csv, "energy per generation");
  auto* ew = leaf(example_g, "witness", "positive-measure witness");
  add_tower(ew, false);
  ew->add_option("--gauge-exponent", q, "q in t^2 (log 1/t)^q, default 2p");
  ew->add_option("--min-k", min_depth, "first generation of the infimum");
  ew->add_option("--csv", common.csv, "ratio per generation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (mc->parsed()) modulus_check(common, name, n, grid);
    else if (md->parsed()) modulus_diverge(common, name, n);
    else if (wb->parsed()) whitney_build(common, depth, n, cubes);
    else if (wr->parsed()) whitney_render(common, depth);
    else if (fb->parsed()) family_build(common, map, modulus, depth, spacing, n);
    else if (cr->parsed()) cover_run(common, map, modulus, depth, directions, levels, c0, spacing);
    else if (ch->parsed()) cover_holder(common, map, depth, directions, gamma, eps, c0, spacing);
    else if (mu->parsed()) measure_upper(common, points, cover, gauge, delta);
    else if (ml->parsed()) measure_lower(common, tree, gauge, min_depth, p, depth);
    else if (mb->parsed()) measure_box(common, points, gauge, deltas);
    else if (eb->parsed()) example_build(common, sigma, p, depth);
    else if (em->parsed()) example_map(common, sigma, p, depth, in, samples ? samples : 1000);
    else if (ee->parsed()) example_energy(common, sigma, p, depth, samples ? samples : 4096, fd_max);
    else if (ew->parsed()) example_witness(common, p, depth, q, ew->count("--min-k") ? min_depth : 3);
  } catch (const std::exception& e) {
    const std::string type = error_type(e);
    json err{{"error", {{"type", type}, {"message", e.what()}}}};
    if (const auto* ne = dynamic_cast<const NumericError*>(&e)) err["error"]["partial_value"] = ne->partial_value();
    if (const auto* te = dynamic_cast<const TruncationError*>(&e)) err["error"]["cubes_emitted"] = te->cubes_emitted();
    std::cerr << err.dump() << "\n";
    return exit_code(type);
  }
  return 0;
}
