#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "archprobe/archspec.hpp"
#include "archprobe/complexity.hpp"
#include "archprobe/grid.hpp"
#include "archprobe/network.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace py = pybind11;

namespace {

archprobe::FunctionSample make_sample(const std::vector<double>& values,
                                      int dim, int m) {
  archprobe::FunctionSample sample;
  sample.grid = archprobe::GridSpec{dim, m};
  sample.values = values;
  sample.provenance = "python";
  return sample;
}

archprobe::Window parse_window(const std::string& name) {
  if (name == "none") return archprobe::Window::None;
  if (name == "hann") return archprobe::Window::Hann;
  throw std::invalid_argument("window must be 'none' or 'hann'");
}

}  // namespace

PYBIND11_MODULE(_archprobe, m) {
  m.doc() = "complexity probes for random neural networks";

  py::enum_<archprobe::ActivationKind>(m, "ActivationKind")
      .value("ReLU", archprobe::ActivationKind::ReLU)
      .value("GELU", archprobe::ActivationKind::GELU)
      .value("Swish", archprobe::ActivationKind::Swish)
      .value("SELU", archprobe::ActivationKind::SELU)
      .value("TanH", archprobe::ActivationKind::TanH)
      .value("Gaussian", archprobe::ActivationKind::Gaussian)
      .value("Sine", archprobe::ActivationKind::Sine);

  py::class_<archprobe::ArchSpec>(m, "ArchSpec")
      .def(py::init<>())
      .def_readwrite("input_dim", &archprobe::ArchSpec::input_dim)
      .def_readwrite("depth", &archprobe::ArchSpec::depth)
      .def_readwrite("width", &archprobe::ArchSpec::width)
      .def_readwrite("activation", &archprobe::ArchSpec::activation)
      .def_readwrite("residual", &archprobe::ArchSpec::residual)
      .def_readwrite("layernorm", &archprobe::ArchSpec::layernorm)
      .def_readwrite("gating", &archprobe::ArchSpec::gating)
      .def_readwrite("prefactor", &archprobe::ArchSpec::prefactor)
      .def_readwrite("weight_scale", &archprobe::ArchSpec::weight_scale)
      .def_readwrite("bias_scale", &archprobe::ArchSpec::bias_scale)
      .def_readwrite("unbiased", &archprobe::ArchSpec::unbiased)
      .def_readwrite("unbiased_K", &archprobe::ArchSpec::unbiased_K)
      .def("__repr__",
           [](const archprobe::ArchSpec& s) { return describe(s); });

  m.def("describe", &archprobe::describe, py::arg("spec"),
        "Canonical one-line identifier of an architecture.");
  m.def("parse_spec", &archprobe::parse_spec, py::arg("id"),
        "Inverse of describe().");

  m.def(
      "sample_grid",
      [](const archprobe::ArchSpec& spec, std::uint64_t seed, int m,
         int jobs) {
        const archprobe::Network net = archprobe::init_network(spec, seed);
        return archprobe::sample_grid(
                   net, archprobe::GridSpec{spec.input_dim, m}, jobs)
            .values;
      },
      py::arg("spec"), py::arg("seed") = 0, py::arg("m") = 64,
      py::arg("jobs") = 1,
      "Scalar outputs of a fresh random network on the endpoint-inclusive "
      "[-1,1]^d grid, row-major with the last axis fastest.");

  m.def(
      "fourier_complexity",
      [](const std::vector<double>& values, int dim, int m,
         const std::string& window) {
        return archprobe::fourier_complexity(make_sample(values, dim, m),
                                             parse_window(window))
            .score.raw;
      },
      py::arg("values"), py::arg("dim") = 2, py::arg("m") = 64,
      py::arg("window") = "none",
      "Spectrum-weighted mean frequency norm of a grid sample.");

  m.def(
      "chebyshev_complexity",
      [](const std::vector<double>& values, int dim, int m) {
        return archprobe::poly_complexity(make_sample(values, dim, m),
                                          archprobe::PolyBasis::Chebyshev)
            .score.raw;
      },
      py::arg("values"), py::arg("dim") = 2, py::arg("m") = 64,
      "Coefficient-weighted mean polynomial order, Chebyshev basis.");

  m.def(
      "legendre_complexity",
      [](const std::vector<double>& values, int dim, int m) {
        return archprobe::poly_complexity(make_sample(values, dim, m),
                                          archprobe::PolyBasis::Legendre)
            .score.raw;
      },
      py::arg("values"), py::arg("dim") = 2, py::arg("m") = 64,
      "Coefficient-weighted mean polynomial order, Legendre basis.");

  m.def(
      "lz_complexity",
      [](const std::vector<double>& values, int levels, bool traversal) {
        return archprobe::lz_complexity(values, levels, traversal).raw;
      },
      py::arg("values"), py::arg("levels") = 10, py::arg("traversal") = false,
      "LZ78 dictionary size of the discretized value stream.");

  m.def("lz78_dictionary_size", &archprobe::lz78_dictionary_size,
        py::arg("symbols"),
        "LZ78 dictionary size of an integer token stream.");
}
