#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "maxtsp/certificate.hpp"
#include "maxtsp/instance.hpp"
#include "maxtsp/oracle.hpp"
#include "maxtsp/tour.hpp"

namespace py = pybind11;
using namespace maxtsp;

namespace {

CompleteGraph from_matrix(const std::vector<std::vector<Weight>>& w) {
  const int n = static_cast<int>(w.size());
  std::vector<std::tuple<Vertex, Vertex, Weight>> table;
  for (int u = 0; u < n; ++u) {
    if (static_cast<int>(w[u].size()) != n) throw InstanceError("weight matrix is not square");
    for (int v = 0; v < n; ++v)
      if (u != v) table.emplace_back(u, v, w[u][v]);
  }
  return build_complete_graph(n, table);
}

std::vector<std::vector<Weight>> to_matrix(const CompleteGraph& g) {
  std::vector<std::vector<Weight>> w(g.size(), std::vector<Weight>(g.size(), 0));
  for (int u = 0; u < g.size(); ++u)
    for (int v = 0; v < g.size(); ++v)
      if (u != v) w[u][v] = g.weight(u, v);
  return w;
}

SolveOptions options(bool fast_odd, int threads) {
  SolveOptions o;
  o.fast_odd = fast_odd;
  o.threads = threads;
  return o;
}

py::dict solve_dict(const CompleteGraph& g, bool fast_odd, int threads) {
  SolveResult r;
  {
    py::gil_scoped_release release;
    r = solve(g, options(fast_odd, threads));
  }
  py::dict d;
  d["tour"] = r.tour.order;
  d["weight"] = r.tour.weight;
  d["bound_guaranteed"] = r.bound_guaranteed;
  if (r.shrunk)
    d["shrunk_edge"] = py::make_tuple(r.shrunk->u, r.shrunk->v);
  else
    d["shrunk_edge"] = py::none();
  if (r.run) {
    const auto& L = r.run->ledger;
    d["best_class"] = L.best_class;
    d["class_weights"] = std::vector<Weight>(L.class_weights.begin(), L.class_weights.end());
    d["kites"] = py::make_tuple(L.kites3, L.kites4);
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_maxtsp, m) {
  m.doc() = "4/5-approximation for maximum-weight travelling salesman tours";

  py::register_exception<InstanceError>(m, "InstanceError", PyExc_ValueError);
  py::register_exception<TooLarge>(m, "TooLarge", PyExc_ValueError);
  py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);
  py::register_exception<UnhandledCase>(m, "UnhandledCase", PyExc_RuntimeError);

  m.attr("CERTIFICATE_VERSION") = kCertificateVersion;
  m.attr("ORACLE_LIMIT") = kOracleTspLimit;

  py::class_<CompleteGraph>(m, "Graph")
      .def(py::init([](const std::vector<std::vector<Weight>>& w) { return from_matrix(w); }), py::arg("weights"),
           "Complete graph from a symmetric weight matrix.")
      .def_static("from_upper_triangle",
                  [](int n, const std::vector<Weight>& t) { return CompleteGraph(n, t); }, py::arg("n"),
                  py::arg("weights"))
      .def_static("parse", [](const std::string& text) { return parse_instance(text); }, py::arg("text"))
      .def_static("read", &read_instance_file, py::arg("path"))
      .def("write", [](const CompleteGraph& g, const std::string& path) { write_instance_file(path, g); },
           py::arg("path"))
      .def("to_text", &format_instance)
      .def("matrix", &to_matrix)
      .def("upper_triangle", &CompleteGraph::upper_triangle)
      .def("weight", py::overload_cast<Vertex, Vertex>(&CompleteGraph::weight, py::const_), py::arg("u"),
           py::arg("v"))
      .def_property_readonly("n", &CompleteGraph::size)
      .def("__len__", &CompleteGraph::size)
      .def("__eq__", [](const CompleteGraph& a, const CompleteGraph& b) { return a == b; })
      .def("__repr__", [](const CompleteGraph& g) { return "<maxtsp.Graph n=" + std::to_string(g.size()) + ">"; });

  m.def("families", [] {
    std::vector<std::string> out;
    for (Family f : all_families()) out.emplace_back(family_name(f));
    return out;
  });
  m.def(
      "generate",
      [](const std::string& family, int n, std::uint64_t seed) {
        return generate_instance(parse_family(family), n, seed).graph;
      },
      py::arg("family"), py::arg("n"), py::arg("seed"));
  m.def("solve", &solve_dict, py::arg("graph"), py::arg("fast_odd") = false, py::arg("threads") = 1);
  m.def(
      "oracle",
      [](const CompleteGraph& g) {
        py::gil_scoped_release release;
        return oracle_max_tsp(g);
      },
      py::arg("graph"));
  m.def("tour_weight", [](const CompleteGraph& g, const std::vector<Vertex>& t) {
    if (!is_tour(t, g.size())) throw InstanceError("not a tour of the graph");
    return tour_weight(g, t);
  });
  m.def(
      "certificate",
      [](const CompleteGraph& g, bool fast_odd, bool with_oracle, bool trace, int threads) {
        py::gil_scoped_release release;
        auto o = options(fast_odd, threads);
        o.trace = trace;
        CertificateOptions co;
        co.with_oracle = with_oracle;
        co.include_trace = trace;
        return make_certificate(g, solve(g, o), o, co).dump(2);
      },
      py::arg("graph"), py::arg("fast_odd") = false, py::arg("with_oracle") = true, py::arg("trace") = false,
      py::arg("threads") = 1, "Certificate JSON text.");
  m.def(
      "verify",
      [](const CompleteGraph& g, const std::string& cert) {
        VerifyReport rep;
        {
          py::gil_scoped_release release;
          Json doc = Json::parse(cert, nullptr, false);
          if (doc.is_discarded()) throw InstanceError("certificate is not valid JSON");
          rep = verify_certificate(g, doc);
        }
        py::list out;
        for (const auto& c : rep.checks) out.append(py::make_tuple(c.name, status_name(c.status), c.detail));
        return out;
      },
      py::arg("graph"), py::arg("certificate"), "List of (check, status, detail).");
}
