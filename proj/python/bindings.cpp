#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gmt/config.hpp"
#include "gmt/counterexample.hpp"
#include "gmt/cover_engine.hpp"
#include "gmt/errors.hpp"
#include "gmt/gauge.hpp"
#include "gmt/hausdorff.hpp"
#include "gmt/sobolev_map.hpp"
#include "gmt/whitney.hpp"

namespace py = pybind11;
using namespace gmt;

namespace {

py::object to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

Vec to_vec(const std::vector<double>& v) {
  if (v.empty() || v.size() > 3) throw py::value_error("points need 1 to 3 coordinates");
  Vec out{};
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

std::vector<double> from_vec(const Vec& v, int dim) { return {v.begin(), v.begin() + dim}; }

WhitneyDecomposition ball_decomposition(int n, int depth) {
  return WhitneyDecomposition::decompose(Domain::unit_ball(n), depth);
}

void bind_errors(py::module_& m) {
  static auto& base = *new py::exception<Error>(m, "Error", PyExc_RuntimeError);
  static auto& schema = *new py::exception<SchemaError>(m, "SchemaError", base.ptr());
  static auto& modulus = *new py::exception<ModulusInvalidError>(m, "ModulusInvalidError", base.ptr());
  static auto& range = *new py::exception<RangeError>(m, "RangeError", base.ptr());
  static auto& precondition = *new py::exception<PreconditionError>(m, "PreconditionError", base.ptr());
  static auto& resolution = *new py::exception<ResolutionError>(m, "ResolutionError", base.ptr());
  static auto& lookup = *new py::exception<LookupError>(m, "LookupError", base.ptr());
  static auto& cover = *new py::exception<CoverInvalidError>(m, "CoverInvalidError", base.ptr());
  static auto& tree = *new py::exception<TreeInvalidError>(m, "TreeInvalidError", base.ptr());
  static auto& domain = *new py::exception<DomainError>(m, "DomainError", base.ptr());
  static auto& internal = *new py::exception<InternalInconsistencyError>(m, "InternalInconsistencyError", base.ptr());
  static auto& numeric = *new py::exception<NumericError>(m, "NumericError", base.ptr());
  static auto& truncation = *new py::exception<TruncationError>(m, "TruncationError", base.ptr());
  // Most derived first: the first translator that matches wins.
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const SchemaError& e) {
      py::set_error(schema, e.what());
    } catch (const ModulusInvalidError& e) {
      py::set_error(modulus, e.what());
    } catch (const RangeError& e) {
      py::set_error(range, e.what());
    } catch (const PreconditionError& e) {
      py::set_error(precondition, e.what());
    } catch (const ResolutionError& e) {
      py::set_error(resolution, e.what());
    } catch (const LookupError& e) {
      py::set_error(lookup, e.what());
    } catch (const CoverInvalidError& e) {
      py::set_error(cover, e.what());
    } catch (const TreeInvalidError& e) {
      py::set_error(tree, e.what());
    } catch (const DomainError& e) {
      py::set_error(domain, e.what());
    } catch (const InternalInconsistencyError& e) {
      py::set_error(internal, e.what());
    } catch (const NumericError& e) {
      py::set_error(numeric, e.what());
    } catch (const TruncationError& e) {
      py::set_error(truncation, e.what());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });
}

void bind_gauge(py::module_& m) {
  py::class_<Gauge>(m, "Gauge")
      .def_static("parse", &Gauge::parse, py::arg("spec"))
      .def_static("power", &Gauge::power, py::arg("a"))
      .def_static("log_power", &Gauge::log_power, py::arg("a"), py::arg("q"))
      .def("__call__", &Gauge::operator(), py::arg("t"))
      .def_property_readonly("doubling_constant", &Gauge::doubling_constant)
      .def_property_readonly("label", &Gauge::label)
      .def("__repr__", [](const Gauge& g) { return "Gauge('" + g.label() + "')"; });

  py::class_<Modulus>(m, "Modulus")
      .def_static("parse", &Modulus::parse, py::arg("spec"), py::arg("n") = 2)
      .def_static("power", &Modulus::power, py::arg("c"), py::arg("gamma"), py::arg("n") = 2,
                  py::arg("t0") = 0.5, py::arg("beta") = 2.0)
      .def("psi", &Modulus::psi, py::arg("t"))
      .def("psi_inv", &Modulus::psi_inv, py::arg("t"))
      .def("phi", &Modulus::phi, py::arg("y"))
      .def("phi_inverse", &Modulus::phi_inverse, py::arg("x"))
      .def_property_readonly("t0", &Modulus::t0)
      .def_property_readonly("beta", &Modulus::beta)
      .def_property_readonly("n", &Modulus::n)
      .def_property_readonly("label", &Modulus::label)
      .def_property_readonly("base_index", &Modulus::base_index)
      .def("alpha", [](const Modulus& md, double t) { return alpha(md, t); }, py::arg("t"))
      .def("lambda_k", [](const Modulus& md, int k) { return lambda_k(md, k); }, py::arg("k"))
      .def("__repr__", [](const Modulus& md) { return "Modulus('" + md.label() + "')"; });

  m.def(
      "check_allowable",
      [](const Modulus& md, int grid_points) { return to_py(to_json(check_allowable(md, grid_points))); },
      py::arg("modulus"), py::arg("grid_points") = 256);
  m.def(
      "classify_divergence",
      [](const Modulus& md, int n) { return to_py(to_json(classify_divergence(md, n))); },
      py::arg("modulus"), py::arg("n") = 2);
  m.def("divergence_integral", &divergence_integral_psi, py::arg("modulus"), py::arg("eps"),
        py::arg("upper"), py::arg("n") = 2);
  m.def("iterated_log", &iterated_log, py::arg("k"), py::arg("t"));
  m.def("defaults", [] { return to_py(to_json(builtin_defaults())); });
}

void bind_whitney(py::module_& m) {
  m.def(
      "whitney_summary",
      [](int depth, int n) { return to_py(to_json(ball_decomposition(n, depth))); },
      py::arg("depth"), py::arg("n") = 2);
  m.def(
      "whitney_cubes",
      [](int depth, int n) {
        const auto d = ball_decomposition(n, depth);
        py::array_t<double> out({static_cast<py::ssize_t>(d.size()), static_cast<py::ssize_t>(1 + 2 * n)});
        auto a = out.mutable_unchecked<2>();
        for (py::ssize_t i = 0; i < static_cast<py::ssize_t>(d.size()); ++i) {
          const auto& q = d.cubes()[static_cast<std::size_t>(i)];
          a(i, 0) = q.level;
          for (int k = 0; k < n; ++k) {
            a(i, 1 + k) = q.lo(k);
            a(i, 1 + n + k) = q.hi(k);
          }
        }
        return out;
      },
      py::arg("depth"), py::arg("n") = 2,
      "Rows (level, lo_1..lo_n, hi_1..hi_n) of the Whitney cubes of the unit ball.");
}

void bind_maps(py::module_& m) {
  py::class_<SampledMap>(m, "SampledMap")
      .def_static("parse", &SampledMap::parse, py::arg("spec"), py::arg("n") = 2,
                  py::arg("spacing") = 1.0 / 256, py::arg("m") = 0)
      .def_static(
          "from_lattice",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> values, double spacing,
             const std::string& label) {
            if (values.ndim() != 3 || values.shape(0) != values.shape(1)) {
              throw py::value_error("values must have shape (N, N, m) indexed [y, x, component]");
            }
            const auto* p = values.data();
            std::vector<double> v(p, p + values.size());
            return SampledMap::from_lattice(std::move(v), 2, static_cast<int>(values.shape(2)), spacing,
                                            label);
          },
          py::arg("values"), py::arg("spacing"), py::arg("label") = "lattice")
      .def(
          "__call__",
          [](const SampledMap& f, const std::vector<double>& x) {
            return from_vec(f.evaluate(to_vec(x)), f.m());
          },
          py::arg("x"))
      .def_property_readonly("n", &SampledMap::n)
      .def_property_readonly("m", &SampledMap::m)
      .def_property_readonly("spacing", &SampledMap::spacing)
      .def_property_readonly("label", &SampledMap::label)
      .def("energy", [](const SampledMap& f) { return dirichlet_energy(f, region_ball(f.n())).energy; },
           "Dirichlet n-energy over the unit ball.");

  m.def(
      "family_mass",
      [](const SampledMap& f, const Modulus& md, int depth) {
        const auto d = ball_decomposition(f.n(), depth);
        const AssembledFamily fam = assemble_family(cube_field(f, d), d, md);
        const double energy = dirichlet_energy(f, region_ball(f.n())).energy;
        const double c1 = family_constant(md, f.n());
        return py::dict(py::arg("seeds") = fam.seeds().size(), py::arg("mass") = fam.mass(),
                        py::arg("energy") = energy, py::arg("c1") = c1,
                        py::arg("within_bound") = fam.mass() <= c1 * energy);
      },
      py::arg("map"), py::arg("modulus"), py::arg("depth"));

  m.def(
      "cover_run",
      [](const SampledMap& f, const Modulus& md, int depth, std::size_t directions,
         std::vector<int> levels) {
        PipelineOptions opt;
        opt.depth = depth;
        opt.directions = directions;
        opt.levels = std::move(levels);
        PipelineResult r;
        {
          py::gil_scoped_release release;
          r = run_cover_pipeline(f, md, opt);
        }
        nlohmann::json reports = nlohmann::json::array();
        for (const auto& x : r.reports) reports.push_back(to_json(x));
        return to_py(nlohmann::json{{"l0", r.l0},
                                    {"l1", r.l1},
                                    {"c0_tilde", r.c0_tilde},
                                    {"energy", r.energy},
                                    {"c1", r.c1},
                                    {"mass", r.mass},
                                    {"notes", r.notes},
                                    {"levels", reports}});
      },
      py::arg("map"), py::arg("modulus"), py::arg("depth") = 12, py::arg("directions") = 64,
      py::arg("levels") = std::vector<int>{});

  m.def(
      "box_count",
      [](const std::vector<std::vector<double>>& points, double delta, const Gauge& g) {
        if (points.empty()) throw py::value_error("no points");
        std::vector<Vec> pts;
        for (const auto& p : points) pts.push_back(to_vec(p));
        const int dim = static_cast<int>(points.front().size());
        return box_count(PointCloud::make(std::move(pts), dim, "points"), delta, g);
      },
      py::arg("points"), py::arg("delta"), py::arg("gauge"));
}

void bind_tower(py::module_& m) {
  py::class_<CantorTower>(m, "CantorTower")
      .def_static("source", &CantorTower::source, py::arg("sigma"), py::arg("depth"))
      .def_static("target", &CantorTower::target, py::arg("p"), py::arg("depth"))
      .def_property_readonly("depth", &CantorTower::depth)
      .def_property_readonly("parameter", &CantorTower::parameter)
      .def_property_readonly("label", &CantorTower::label)
      .def("inner", &CantorTower::inner, py::arg("k"))
      .def("outer", &CantorTower::outer, py::arg("k"))
      .def("count", &CantorTower::count, py::arg("k"))
      .def(
          "center", [](const CantorTower& t, int k, std::uint64_t i) { return from_vec(t.center(k, i), 2); },
          py::arg("k"), py::arg("i"))
      .def("to_dict", [](const CantorTower& t) { return to_py(to_json(t)); });

  m.def(
      "evaluate_h",
      [](const std::vector<double>& x, const CantorTower& s, const CantorTower& t) {
        return from_vec(evaluate_h(to_vec(x), s, t), 2);
      },
      py::arg("x"), py::arg("source"), py::arg("target"));
  m.def(
      "locate",
      [](const std::vector<double>& x, const CantorTower& t) {
        const FrameLocation loc = locate(to_vec(x), t);
        const char* kind = loc.kind == FrameLocation::Kind::frame          ? "frame"
                           : loc.kind == FrameLocation::Kind::cantor_limit ? "cantor_limit"
                                                                            : "exterior";
        return py::dict(py::arg("kind") = kind, py::arg("k") = loc.k, py::arg("i") = loc.i,
                        py::arg("boundary") = loc.boundary);
      },
      py::arg("x"), py::arg("tower"));
  m.def("generation_energy", &generation_energy, py::arg("k"), py::arg("source"), py::arg("target"),
        py::arg("samples_per_frame") = 4096);
  m.def(
      "frame_energy",
      [](const CantorTower& s, const CantorTower& t, int k) { return frame_energy(frame_stretch(s, t, k)); },
      py::arg("source"), py::arg("target"), py::arg("k"));
  m.def(
      "holder_ratio",
      [](const CantorTower& s, const CantorTower& t, std::size_t pairs, std::uint64_t seed) {
        const HolderEstimate h = holder_ratio(s, t, pairs, seed);
        return py::dict(py::arg("beta") = h.beta, py::arg("sup_ratio") = h.sup_ratio,
                        py::arg("pairs") = h.pairs);
      },
      py::arg("source"), py::arg("target"), py::arg("pairs") = 100000, py::arg("seed") = 1);
  m.def(
      "witness",
      [](const CantorTower& t, double p, int depth, double gauge_exponent, int min_k) {
        return to_py(to_json(witness_positive_measure(t, p, depth, gauge_exponent, min_k)));
      },
      py::arg("target"), py::arg("p"), py::arg("depth"), py::arg("gauge_exponent") = -1.0,
      py::arg("min_k") = 3);
}

}  // namespace

PYBIND11_MODULE(gmtkit, m) {
  m.doc() = "Whitney decompositions, boundary-image covers and the Cantor-tower counterexample.";
  bind_errors(m);
  bind_gauge(m);
  bind_whitney(m);
  bind_maps(m);
  bind_tower(m);
}
