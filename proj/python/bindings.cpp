#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rlnc/bounds.hpp"
#include "rlnc/commands.hpp"
#include "rlnc/errors.hpp"
#include "rlnc/generators.hpp"
#include "rlnc/gfield.hpp"
#include "rlnc/sim.hpp"

namespace py = pybind11;
using namespace rlnc;

namespace {

// Rationals cross the boundary as (numerator, denominator) decimal strings.
std::pair<std::string, std::string> split(const Rational& r) {
  return {numerator(r).str(), denominator(r).str()};
}

RunConfig base_config(const char* command, int rate, std::uint32_t field) {
  RunConfig c;
  c.command = command;
  c.rate = rate;
  c.field = field;
  return c;
}

PathStrategy strategy(const std::string& name) {
  if (name == "first-found") return PathStrategy::kFirstFound;
  if (name == "min-internal") return PathStrategy::kMinInternal;
  throw py::value_error("paths must be 'first-found' or 'min-internal'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Failure-probability bounds for random linear network coding";

  auto base = py::register_exception<Error>(m, "RlncError", PyExc_ValueError);
  py::register_exception<UnsupportedField>(m, "UnsupportedField", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<NetworkError>(m, "NetworkError", base.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
  py::register_exception<EnumerationCapError>(m, "EnumerationCapError", base.ptr());
  py::register_exception<GeneratorError>(m, "GeneratorError", base.ptr());

  m.def("field_supported", &Field::supported, py::arg("q"));
  m.def("field_add", [](std::uint32_t q, std::uint32_t x, std::uint32_t y) {
    const auto f = Field::of_order(q);
    return f.add(f.element(x), f.element(y)).value;
  });
  m.def("field_mul", [](std::uint32_t q, std::uint32_t x, std::uint32_t y) {
    const auto f = Field::of_order(q);
    return f.mul(f.element(x), f.element(y)).value;
  });
  m.def("field_inv", [](std::uint32_t q, std::uint32_t x) {
    const auto f = Field::of_order(q);
    return f.inv(f.element(x)).value;
  });
  m.def(
      "rank",
      [](std::uint32_t q, const std::vector<std::vector<std::uint32_t>>& rows) {
        const auto f = Field::of_order(q);
        const std::size_t cols = rows.empty() ? 0 : rows[0].size();
        MatrixGF mat(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (rows[i].size() != cols) throw py::value_error("ragged matrix");
          for (std::size_t j = 0; j < cols; ++j) mat.at(i, j) = f.element(rows[i][j]);
        }
        return matrix_rank(f, mat);
      },
      py::arg("q"), py::arg("rows"));

  m.def("compute_a", [](std::uint64_t q, std::uint64_t w) { return split(compute_a(q, w)); });
  m.def("lemma1", [](std::uint64_t q, std::uint64_t n, std::uint64_t k0) {
    return split(lemma1_probability(q, n, k0));
  });

  m.def("butterfly", [] { return serialize_network(gen_butterfly()); });
  m.def("plait", [](int w, int r) { return serialize_network(gen_plait(w, r)); });
  m.def("plait_union", [](int w, int R, int l) { return serialize_network(gen_plait_union(w, R, l)); });
  m.def("layered_random", [](int layers, int width, int w, int sinks, std::uint64_t seed) {
    return serialize_network(gen_layered_random(layers, width, w, sinks, seed));
  });
  m.def("normalize_network", [](const std::string& text) { return serialize_network(parse_network(text)); });

  m.def(
      "analyze",
      [](const std::string& text, int rate, std::uint32_t field, const std::string& paths,
         std::optional<std::uint64_t> n, std::optional<std::uint64_t> mm, bool explain) {
        auto c = base_config("analyze", rate, field);
        c.paths = strategy(paths);
        c.n = n;
        c.m = mm;
        c.explain = explain;
        return cmd_analyze(c, parse_network(text)).json.dump();
      },
      py::arg("network"), py::arg("rate"), py::arg("field") = 2, py::arg("paths") = "first-found",
      py::arg("n") = py::none(), py::arg("m") = py::none(), py::arg("explain") = false);

  m.def(
      "simulate",
      [](const std::string& text, int rate, std::uint32_t field, std::uint64_t trials, std::uint64_t seed,
         unsigned workers) {
        auto c = base_config("simulate", rate, field);
        c.trials = trials;
        c.seed = seed;
        c.workers = workers;
        const auto net = parse_network(text);
        py::gil_scoped_release release;
        return cmd_simulate(c, net).to_json().dump();
      },
      py::arg("network"), py::arg("rate"), py::arg("field") = 2, py::arg("trials") = 10000,
      py::arg("seed") = 0, py::arg("workers") = 1);

  m.def(
      "enumerate",
      [](const std::string& text, int rate, std::uint32_t field, std::uint64_t cap, unsigned workers) {
        auto c = base_config("enumerate", rate, field);
        c.cap = cap;
        c.workers = workers;
        const auto net = parse_network(text);
        py::gil_scoped_release release;
        return cmd_enumerate(c, net).to_json().dump();
      },
      py::arg("network"), py::arg("rate"), py::arg("field") = 2, py::arg("cap") = kDefaultEnumerationCap,
      py::arg("workers") = 1);

  m.def(
      "sweep",
      [](const std::string& bound, const std::vector<std::uint64_t>& fields, int rate,
         std::optional<std::uint64_t> n, std::optional<std::uint64_t> l, std::optional<std::uint64_t> mm,
         std::optional<std::uint64_t> r, std::optional<int> delta, std::optional<std::string> network) {
        auto c = base_config("sweep", rate, 2);
        c.bound = bound;
        c.fields = fields;
        c.n = n;
        c.l = l;
        c.m = mm;
        c.r = r;
        c.delta = delta;
        if (!network) return cmd_sweep(c, nullptr).dump();
        const auto net = parse_network(*network);
        return cmd_sweep(c, &net).dump();
      },
      py::arg("bound"), py::arg("fields"), py::arg("rate") = 0, py::arg("n") = py::none(),
      py::arg("l") = py::none(), py::arg("m") = py::none(), py::arg("r") = py::none(),
      py::arg("delta") = py::none(), py::arg("network") = py::none());
}
