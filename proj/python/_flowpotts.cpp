#include "flowpotts/verify.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace flowpotts;

namespace {

py::object py_int(const BigInt& i) { return py::module_::import("builtins").attr("int")(to_string(i)); }

py::object py_fraction(const Rational& r) {
  return py::module_::import("fractions").attr("Fraction")(to_string(r));
}

Rational to_rational(const py::handle& v) {
  return parse_rational(py::str(py::module_::import("fractions").attr("Fraction")(v)).cast<std::string>());
}

double d(Real v) { return static_cast<double>(v); }

py::dict check_dict(const IdentityCheck& c) {
  py::dict out;
  out["lhs"] = d(c.lhs);
  out["rhs"] = d(c.rhs);
  out["discrepancy"] = d(c.discrepancy);
  out["bound"] = d(c.bound);
  out["truncation_level"] = c.truncation_level;
  out["status"] = to_string(c.status);
  return out;
}

std::vector<Real> reals(const std::vector<double>& v) { return {v.begin(), v.end()}; }

PottsParams params_of(const Multigraph& g, unsigned q, const std::vector<double>& lambda) {
  if (lambda.size() == 1) return PottsParams::uniform(g, q, lambda[0]);
  return PottsParams::from_lambda(q, reals(lambda));
}

}  // namespace

PYBIND11_MODULE(_flowpotts, m) {
  m.doc() = "Flow and random-current representations of the Potts model on small graphs";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);
  py::register_exception<PreconditionFailed>(m, "PreconditionFailed", PyExc_ValueError);

  py::class_<Multigraph>(m, "Multigraph")
      .def(py::init([](std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
             std::vector<Edge> es;
             for (auto [t, h] : edges) es.push_back({t, h});
             return Multigraph(n, es);
           }),
           py::arg("vertex_count"), py::arg("edges"))
      .def_property_readonly("vertex_count", &Multigraph::vertex_count)
      .def_property_readonly("edge_count", &Multigraph::edge_count)
      .def_property_readonly("edges",
                             [](const Multigraph& g) {
                               std::vector<std::pair<Vertex, Vertex>> out;
                               for (const auto& e : g.edges()) out.emplace_back(e.tail, e.head);
                               return out;
                             })
      .def("__repr__", [](const Multigraph& g) {
        return "Multigraph(" + std::to_string(g.vertex_count()) + ", " + std::to_string(g.edge_count()) + " edges)";
      });

  m.def("builtin_graph", &builtin_graph, py::arg("name"));
  m.def("parse_graph", &parse_graph_text, py::arg("text"));

  m.def(
      "flow_polynomial",
      [](const Multigraph& g) {
        py::list out;
        auto poly = flow_polynomial(g);
        for (const auto& c : poly.coefficients()) out.append(py_int(c));
        return out;
      },
      py::arg("graph"), "Coefficients of the flow polynomial, lowest degree first.");
  m.def(
      "count_flows", [](const Multigraph& g, unsigned q) { return py_int(count_flows_dc(g, q)); }, py::arg("graph"),
      py::arg("q"));
  m.def(
      "count_flows_enum", [](const Multigraph& g, unsigned q) { return py_int(count_flows_enum(g, q)); },
      py::arg("graph"), py::arg("q"));
  m.def(
      "whitney",
      [](const Multigraph& g, py::object u, py::object v) {
        return py_fraction(whitney_eval(g, to_rational(u), to_rational(v)));
      },
      py::arg("graph"), py::arg("u"), py::arg("v"));
  m.def(
      "tutte",
      [](const Multigraph& g, py::object u, py::object v) {
        return py_fraction(tutte_eval(g, to_rational(u), to_rational(v)));
      },
      py::arg("graph"), py::arg("u"), py::arg("v"));

  m.def(
      "potts_sigma",
      [](const Multigraph& g, unsigned q, const std::vector<double>& lambda, Vertex x, Vertex y) {
        return d(potts_sigma(g, params_of(g, q, lambda), x, y));
      },
      py::arg("graph"), py::arg("q"), py::arg("lambda_"), py::arg("x"), py::arg("y"));

  m.def(
      "sigma",
      [](const Multigraph& g, unsigned q, const std::vector<double>& lambda, Vertex x, Vertex y,
         const std::string& route, std::uint64_t samples, std::uint64_t seed, unsigned workers) {
        RunLimits limits;
        limits.mc.samples = samples;
        limits.mc.seed = seed;
        limits.mc.workers = workers;
        auto r = sigma_by_route(g, params_of(g, q, lambda), x, y, parse_sigma_route(route), limits);
        py::dict out;
        out["value"] = d(r.value);
        out["error"] = d(r.error);
        out["error_kind"] = r.error_kind;
        out["route"] = to_string(r.route);
        out["truncation_level"] = r.truncation_level;
        out["certified"] = r.certified;
        out["samples"] = r.samples;
        out["seed"] = r.seed;
        return out;
      },
      py::arg("graph"), py::arg("q"), py::arg("lambda_"), py::arg("x"), py::arg("y"), py::arg("route") = "spin",
      py::arg("samples") = 10000, py::arg("seed") = 1, py::arg("workers") = 1);

  m.def(
      "expect_flow",
      [](const Multigraph& g, const std::vector<double>& lambda, unsigned q, double target) {
        TruncationOptions opts;
        opts.target = target;
        auto l = lambda.size() == 1 ? std::vector<Real>(g.edge_count(), lambda[0]) : reals(lambda);
        auto t = exact_expect_flow(g, l, q, opts);
        py::dict out;
        out["value"] = d(t.value);
        out["tail_bound"] = d(t.tail_bound);
        out["M"] = t.truncation_level;
        out["certified"] = t.certified;
        return out;
      },
      py::arg("graph"), py::arg("lambda_"), py::arg("q"), py::arg("target") = 1e-10);

  m.def(
      "verify",
      [](const std::string& suite, std::uint64_t seed) {
        auto report = run_verification(suite, parse_catalogue(default_catalogue_text()), {}, seed);
        py::list out;
        for (const auto& e : report.entries) {
          py::dict row;
          row["suite"] = e.suite;
          row["identity"] = e.identity;
          row["instance"] = e.instance;
          row["lhs"] = d(e.lhs);
          row["rhs"] = d(e.rhs);
          row["bound"] = d(e.bound);
          row["status"] = to_string(e.status);
          out.append(row);
        }
        return out;
      },
      py::arg("suite") = "all", py::arg("seed") = 1);

  m.def(
      "decay",
      [](const Multigraph& g, unsigned q, double lambda, const std::string& route) {
        auto t = decay_table(g, PottsParams::uniform(g, q, lambda), parse_sigma_route(route));
        py::list rows;
        for (const auto& r : t.rows) rows.append(py::make_tuple(r.vertex, r.distance, d(r.sigma), d(r.error)));
        return py::make_tuple(rows, t.monotone);
      },
      py::arg("graph"), py::arg("q"), py::arg("lambda_"), py::arg("route") = "spin");

  m.def(
      "verify_curiosity", [](const Multigraph& g, double p) { return check_dict(verify_curiosity(g, p)); },
      py::arg("graph"), py::arg("p"));
  m.def(
      "switching_check_fixed",
      [](const Multigraph& g, const std::vector<std::uint32_t>& mult, Vertex x, Vertex y,
         const std::vector<Vertex>& A) {
        auto c = switching_check_fixed(g, MultiplicityVector(mult), x, y, SourceSet(A));
        return py::make_tuple(c.lhs, c.rhs);
      },
      py::arg("graph"), py::arg("m"), py::arg("x"), py::arg("y"), py::arg("A"));
  m.def(
      "simon_check",
      [](const Multigraph& g, double lambda, Vertex x, Vertex z, const std::vector<Vertex>& W) {
        auto s = simon_check(g, std::vector<Real>(g.edge_count(), lambda), x, z, W);
        return py::make_tuple(d(s.lhs), d(s.rhs), d(s.margin));
      },
      py::arg("graph"), py::arg("lambda_"), py::arg("x"), py::arg("z"), py::arg("W"));
}
