#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "splitconv/bench.hpp"
#include "splitconv/costmodel.hpp"
#include "splitconv/engines.hpp"
#include "splitconv/fft.hpp"
#include "splitconv/planner.hpp"

namespace py = pybind11;
using namespace splitconv;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style |
                                            py::array::forcecast>;
using ComplexArray = py::array_t<std::complex<double>,
                                 py::array::c_style | py::array::forcecast>;

RealGrid grid_from_array(const DoubleArray& array) {
  if (array.ndim() != 2) {
    throw py::value_error("expected a 2-D array");
  }
  const auto view = array.unchecked<2>();
  std::vector<double> values(static_cast<std::size_t>(view.shape(0)) *
                             static_cast<std::size_t>(view.shape(1)));
  std::size_t idx = 0;
  for (py::ssize_t r = 0; r < view.shape(0); ++r) {
    for (py::ssize_t c = 0; c < view.shape(1); ++c) {
      values[idx++] = view(r, c);
    }
  }
  return RealGrid(static_cast<std::size_t>(view.shape(0)),
                  static_cast<std::size_t>(view.shape(1)),
                  std::move(values));
}

py::array_t<double> array_from_grid(const RealGrid& grid) {
  py::array_t<double> out({grid.rows(), grid.cols()});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t r = 0; r < grid.rows(); ++r) {
    for (std::size_t c = 0; c < grid.cols(); ++c) {
      view(static_cast<py::ssize_t>(r), static_cast<py::ssize_t>(c)) =
          grid(r, c);
    }
  }
  return out;
}

ConvMode parse_mode(const std::string& pad, const std::string& op) {
  ConvMode mode;
  if (pad == "same") {
    mode.pad = PadMode::Same;
  } else if (pad == "valid") {
    mode.pad = PadMode::Valid;
  } else {
    throw py::value_error("pad must be 'same' or 'valid'");
  }
  if (op == "convolution") {
    mode.op = ConvOp::Convolution;
  } else if (op == "correlation") {
    mode.op = ConvOp::Correlation;
  } else {
    throw py::value_error("op must be 'convolution' or 'correlation'");
  }
  return mode;
}

EngineKind parse_engine(const std::string& name) {
  if (name == "direct") return EngineKind::Direct;
  if (name == "full_fft") return EngineKind::FullFft;
  if (name == "oaa") return EngineKind::Oaa;
  if (name == "split") return EngineKind::Split;
  throw py::value_error(
      "engine must be one of 'direct', 'full_fft', 'oaa', 'split'");
}

py::tuple conv_result(ConvResult result) {
  return py::make_tuple(array_from_grid(result.output), result.ops);
}

}  // namespace

PYBIND11_MODULE(_splitconv, m) {
  m.doc() = "Split-patch FFT convolution engines, cost model and planner";

  py::class_<OpCount>(m, "OpCount")
      .def(py::init<>())
      .def_readonly("complex_mults", &OpCount::complex_mults)
      .def_readonly("complex_adds", &OpCount::complex_adds)
      .def_readonly("real_mults", &OpCount::real_mults)
      .def_readonly("real_adds", &OpCount::real_adds)
      .def_readonly("mem_reads", &OpCount::mem_reads)
      .def_readonly("mem_writes", &OpCount::mem_writes)
      .def("__repr__", [](const OpCount& ops) {
        return "OpCount(complex_mults=" + std::to_string(ops.complex_mults) +
               ", complex_adds=" + std::to_string(ops.complex_adds) +
               ", real_mults=" + std::to_string(ops.real_mults) +
               ", real_adds=" + std::to_string(ops.real_adds) +
               ", mem_reads=" + std::to_string(ops.mem_reads) +
               ", mem_writes=" + std::to_string(ops.mem_writes) + ")";
      });

  py::class_<SplitPlan>(m, "SplitPlan")
      .def_readonly("input_side", &SplitPlan::input_side)
      .def_readonly("patch", &SplitPlan::patch)
      .def_readonly("kernel_side", &SplitPlan::kernel_side)
      .def_readonly("halo", &SplitPlan::halo)
      .def_readonly("logical_patch", &SplitPlan::logical_patch)
      .def_readonly("fft_size", &SplitPlan::fft_size)
      .def_readonly("grid_rows", &SplitPlan::grid_rows)
      .def_readonly("grid_cols", &SplitPlan::grid_cols);

  m.def(
      "direct_conv2d",
      [](const DoubleArray& input, const DoubleArray& kernel,
         const std::string& pad, const std::string& op) {
        return array_from_grid(direct_conv2d(grid_from_array(input),
                                             Kernel(grid_from_array(kernel)),
                                             parse_mode(pad, op)));
      },
      py::arg("input"), py::arg("kernel"), py::arg("pad") = "same",
      py::arg("op") = "convolution",
      "Brute-force sliding-window convolution (the reference oracle).");

  m.def(
      "conv_full_fft",
      [](const DoubleArray& input, const DoubleArray& kernel,
         const std::string& pad, const std::string& op) {
        return conv_result(conv_full_fft(grid_from_array(input),
                                         Kernel(grid_from_array(kernel)),
                                         parse_mode(pad, op)));
      },
      py::arg("input"), py::arg("kernel"), py::arg("pad") = "same",
      py::arg("op") = "convolution",
      "Whole-image FFT convolution; returns (output, OpCount).");

  m.def(
      "conv_oaa",
      [](const DoubleArray& input, const DoubleArray& kernel,
         const std::string& pad, const std::string& op) {
        return conv_result(conv_oaa(grid_from_array(input),
                                    Kernel(grid_from_array(kernel)),
                                    parse_mode(pad, op)));
      },
      py::arg("input"), py::arg("kernel"), py::arg("pad") = "same",
      py::arg("op") = "convolution",
      "Overlap-and-add block convolution; returns (output, OpCount).");

  m.def(
      "make_split_plan",
      [](std::size_t n, std::size_t k, std::size_t s, const std::string& pad,
         const std::string& op) {
        return make_split_plan(n, k, s, parse_mode(pad, op));
      },
      py::arg("n"), py::arg("k"), py::arg("s"), py::arg("pad") = "same",
      py::arg("op") = "convolution");

  m.def(
      "conv_split",
      [](const DoubleArray& input, const DoubleArray& kernel, std::size_t s,
         const std::string& pad, const std::string& op) {
        const RealGrid grid = grid_from_array(input);
        const Kernel k(grid_from_array(kernel));
        const ConvMode mode = parse_mode(pad, op);
        return conv_result(conv_split(
            grid, k, make_split_plan(grid.rows(), k.side(), s, mode), mode));
      },
      py::arg("input"), py::arg("kernel"), py::arg("s") = 8,
      py::arg("pad") = "same", py::arg("op") = "convolution",
      "Split-patch overlap-save convolution; returns (output, OpCount).");

  m.def(
      "layer_forward",
      [](const DoubleArray& input, const DoubleArray& weights,
         const std::string& engine, std::size_t s, const std::string& pad,
         const std::string& op) {
        if (input.ndim() != 3 || weights.ndim() != 4) {
          throw py::value_error(
              "expected input [Cin,H,W] and weights [Cout,Cin,k,k]");
        }
        const auto in = input.unchecked<3>();
        const auto w = weights.unchecked<4>();
        if (w.shape(1) != in.shape(0) || w.shape(2) != w.shape(3)) {
          throw py::value_error("weight shape mismatch");
        }
        std::vector<RealGrid> planes;
        for (py::ssize_t c = 0; c < in.shape(0); ++c) {
          std::vector<double> values(
              static_cast<std::size_t>(in.shape(1) * in.shape(2)));
          std::size_t idx = 0;
          for (py::ssize_t r = 0; r < in.shape(1); ++r) {
            for (py::ssize_t cc = 0; cc < in.shape(2); ++cc) {
              values[idx++] = in(c, r, cc);
            }
          }
          planes.emplace_back(static_cast<std::size_t>(in.shape(1)),
                              static_cast<std::size_t>(in.shape(2)),
                              std::move(values));
        }
        std::vector<std::vector<Kernel>> table;
        for (py::ssize_t o = 0; o < w.shape(0); ++o) {
          std::vector<Kernel> row;
          for (py::ssize_t c = 0; c < w.shape(1); ++c) {
            std::vector<double> values(
                static_cast<std::size_t>(w.shape(2) * w.shape(3)));
            std::size_t idx = 0;
            for (py::ssize_t i = 0; i < w.shape(2); ++i) {
              for (py::ssize_t j = 0; j < w.shape(3); ++j) {
                values[idx++] = w(o, c, i, j);
              }
            }
            row.emplace_back(RealGrid(static_cast<std::size_t>(w.shape(2)),
                                      static_cast<std::size_t>(w.shape(3)),
                                      std::move(values)));
          }
          table.push_back(std::move(row));
        }
        const LayerResult result =
            layer_forward(ChannelStack(std::move(planes)), table,
                          parse_engine(engine), s, parse_mode(pad, op));
        py::array_t<double> out({result.output.channels(),
                                 result.output.rows(),
                                 result.output.cols()});
        auto view = out.mutable_unchecked<3>();
        for (std::size_t c = 0; c < result.output.channels(); ++c) {
          const RealGrid& plane = result.output.plane(c);
          for (std::size_t r = 0; r < plane.rows(); ++r) {
            for (std::size_t cc = 0; cc < plane.cols(); ++cc) {
              view(static_cast<py::ssize_t>(c), static_cast<py::ssize_t>(r),
                   static_cast<py::ssize_t>(cc)) = plane(r, cc);
            }
          }
        }
        return py::make_tuple(out, result.ops, result.forward_transforms,
                              result.inverse_transforms);
      },
      py::arg("input"), py::arg("weights"), py::arg("engine") = "split",
      py::arg("s") = 8, py::arg("pad") = "same",
      py::arg("op") = "correlation",
      "Multi-channel layer forward pass; returns (output, OpCount, "
      "forward_transforms, inverse_transforms).");

  m.def(
      "fft2",
      [](const ComplexArray& array, bool inverse) {
        if (array.ndim() != 2) {
          throw py::value_error("expected a 2-D array");
        }
        const auto view = array.unchecked<2>();
        std::vector<Complex> values(
            static_cast<std::size_t>(view.shape(0) * view.shape(1)));
        std::size_t idx = 0;
        for (py::ssize_t r = 0; r < view.shape(0); ++r) {
          for (py::ssize_t c = 0; c < view.shape(1); ++c) {
            values[idx++] = view(r, c);
          }
        }
        const Fft2dResult result =
            fft2d(ComplexGrid(static_cast<std::size_t>(view.shape(0)),
                              static_cast<std::size_t>(view.shape(1)),
                              std::move(values)),
                  inverse ? FftDirection::Inverse : FftDirection::Forward);
        py::array_t<std::complex<double>> out(
            {result.grid.rows(), result.grid.cols()});
        auto oview = out.mutable_unchecked<2>();
        for (std::size_t r = 0; r < result.grid.rows(); ++r) {
          for (std::size_t c = 0; c < result.grid.cols(); ++c) {
            oview(static_cast<py::ssize_t>(r), static_cast<py::ssize_t>(c)) =
                result.grid(r, c);
          }
        }
        return py::make_tuple(out, result.ops);
      },
      py::arg("array"), py::arg("inverse") = false,
      "Radix-2 2-D FFT with instrumented counters; returns (array, "
      "OpCount).");

  m.def("mul_oaa", &mul_oaa, py::arg("n"), py::arg("k"));
  m.def("add_oaa", &add_oaa, py::arg("n"), py::arg("k"));
  m.def("mul_split", &mul_split, py::arg("n"), py::arg("s"), py::arg("k"));
  m.def("add_split", &add_split, py::arg("n"), py::arg("s"), py::arg("k"));

  m.def(
      "choose_patch_size",
      [](std::size_t n, std::size_t k, py::object budget,
         const std::vector<std::size_t>& candidates) {
        PlanRequest request;
        request.n = n;
        request.k = k;
        if (!budget.is_none()) {
          request.budget_elems = budget.cast<std::uint64_t>();
        }
        if (!candidates.empty()) {
          request.candidates = candidates;
        }
        const PlanResult result = choose_patch_size(request);
        py::list audit;
        for (const CandidateEval& eval : result.per_candidate) {
          audit.append(py::make_tuple(eval.s, eval.feasible, eval.workspace,
                                      eval.modeled_total));
        }
        py::dict out;
        out["chosen_s"] = result.chosen_s;
        out["modeled_total"] = result.modeled_total;
        out["per_candidate"] = audit;
        return out;
      },
      py::arg("n"), py::arg("k"), py::arg("budget") = py::none(),
      py::arg("candidates") = std::vector<std::size_t>{},
      "Patch-size selection under a complex-workspace budget.");

  m.def("vgg16_layers", [] {
    py::list layers;
    for (const LayerSpec& l : vgg16_layers()) {
      layers.append(py::make_tuple(l.name, l.h, l.w, l.c_in, l.c_out, l.k));
    }
    return layers;
  });

  py::register_exception<InfeasiblePlanError>(m, "InfeasiblePlanError");
}
