// splitconv: verification, cost-model, benchmark, and patch-planning CLI.
// Exit codes: 0 success, 1 verification/feasibility failure, 2 usage error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "splitconv/bench.hpp"
#include "splitconv/costmodel.hpp"
#include "splitconv/engines.hpp"
#include "splitconv/planner.hpp"

namespace {

using namespace splitconv;

std::string fmt(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

const char* pad_name(PadMode pad) {
  return pad == PadMode::Same ? "SAME" : "VALID";
}

const char* op_name(ConvOp op) {
  return op == ConvOp::Convolution ? "CONVOLUTION" : "CORRELATION";
}

EngineKind parse_engine(const std::string& name) {
  if (name == "direct") return EngineKind::Direct;
  if (name == "full_fft") return EngineKind::FullFft;
  if (name == "oaa") return EngineKind::Oaa;
  if (name == "split") return EngineKind::Split;
  throw CLI::ValidationError("--engines",
                             "unknown engine '" + name +
                                 "' (expected direct, full_fft, oaa, split)");
}

int cmd_verify(std::ostream& out, const VerifySpec& spec) {
  char tol[32];
  std::snprintf(tol, sizeof(tol), "%g", spec.tolerance);
  out << "# splitconv verify: FFT engines vs direct convolution, tolerance "
      << tol << ", seed " << spec.seed << "\n";
  const auto cases = run_verification(spec);
  std::size_t passed = 0;
  std::size_t skipped = 0;
  bool ok = true;
  for (const VerifyCase& c : cases) {
    if (c.skipped) {
      ++skipped;
      out << "SKIP n=" << c.n << " k=" << c.k << " s=" << c.s
          << " (s > n)\n";
      continue;
    }
    out << (c.passed ? "PASS" : "FAIL") << " n=" << c.n << " k=" << c.k
        << " s=" << c.s << " pad=" << pad_name(c.mode.pad)
        << " op=" << op_name(c.mode.op) << " max_err=" << fmt(c.max_err)
        << "\n";
    if (c.passed) {
      ++passed;
    } else {
      ok = false;
    }
  }
  out << "# " << (cases.size() - skipped) << " checked, " << passed
      << " passed, " << skipped << " skipped\n";
  return ok ? 0 : 1;
}

int cmd_cost(std::ostream& out, double n, int kmin, int kmax, int kstep,
             const std::vector<double>& s_list) {
  std::vector<double> k_values;
  for (int k = kmin; k <= kmax; k += kstep) {
    k_values.push_back(static_cast<double>(k));
  }
  const auto rows = sweep(n, k_values, s_list);
  const auto notes = asymptotic_costs(n, k_values.front(), s_list.front());
  out << "# splitconv cost model: analytic operation counts, log base 2, "
         "real-valued (no rounding)\n";
  for (const auto& [method, note] : notes) {
    out << "# asymptotics " << cost_method_name(method) << ": " << note
        << "\n";
  }
  out << "method,N,K,S,mults,adds,total\n";
  for (const CostRow& row : rows) {
    out << cost_method_name(row.method) << "," << fmt(row.n) << ","
        << fmt(row.k) << "," << (row.s ? fmt(*row.s) : "") << ","
        << fmt(row.mults) << "," << fmt(row.adds) << "," << fmt(row.total)
        << "\n";
  }
  return 0;
}

int cmd_bench(std::ostream& out, const BenchSpec& spec) {
  out << "# splitconv bench: wall times are relative to this host; only "
         "correctness vs the direct engine is asserted\n";
  out << "# seed " << spec.seed << " scale " << fmt(spec.scale)
      << " repeats " << spec.repeats << " (median, warm-up excluded)\n";
  out << "layer,engine,H,W,Cin,Cout,K,S,wall_ns_median,max_abs_err\n";
  const auto records = run_benchmark(spec, vgg16_layers());
  bool ok = true;
  for (const BenchRecord& r : records) {
    out << r.layer << "," << engine_name(r.engine) << "," << r.h << ","
        << r.w << "," << r.c_in << "," << r.c_out << "," << r.k << ","
        << (r.engine == EngineKind::Split ? std::to_string(r.s) : "") << ",";
    if (r.error.empty()) {
      out << r.wall_ns_median << "," << fmt(r.max_abs_err) << "\n";
    } else {
      out << ",\n";
      out << "# error " << r.layer << "/" << engine_name(r.engine) << ": "
          << r.error << "\n";
      ok = false;
    }
  }
  return ok ? 0 : 1;
}

int cmd_plan(std::ostream& out, const PlanRequest& request) {
  out << "# splitconv plan: objective is the modeled split multiply+add "
         "total (patch-size criterion chosen by this tool)\n";
  out << "# N=" << request.n << " k=" << request.k << " budget=";
  if (request.budget_elems == std::numeric_limits<std::uint64_t>::max()) {
    out << "unlimited";
  } else {
    out << request.budget_elems;
  }
  out << " complex workspace elements\n";
  try {
    const PlanResult result = choose_patch_size(request);
    out << "S,feasible,workspace_elems,modeled_total\n";
    for (const CandidateEval& eval : result.per_candidate) {
      out << eval.s << "," << (eval.feasible ? "yes" : "no") << ","
          << eval.workspace << "," << fmt(eval.modeled_total) << "\n";
    }
    out << "chosen S = " << result.chosen_s << " (modeled total "
        << fmt(result.modeled_total) << ")\n";
    return 0;
  } catch (const InfeasiblePlanError& e) {
    out << "infeasible: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"splitconv: split-patch FFT convolution toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 42;
  double tolerance = 1e-9;
  std::string out_path;
  app.add_option("--seed", seed, "PRNG seed")->capture_default_str();
  app.add_option("--tolerance", tolerance, "verification tolerance")
      ->capture_default_str();
  app.add_option("--out", out_path, "write output to a file (default stdout)");

  auto* verify = app.add_subcommand(
      "verify", "check FFT engines against the direct oracle");
  std::vector<std::size_t> n_list{8, 16, 32, 64};
  std::vector<std::size_t> k_list{1, 3, 5, 7};
  std::vector<std::size_t> s_list{4, 8, 16, 32};
  verify->add_option("--n-list", n_list, "input sides")
      ->delimiter(',')
      ->capture_default_str();
  verify->add_option("--k-list", k_list, "kernel sides")
      ->delimiter(',')
      ->capture_default_str();
  verify->add_option("--s-list", s_list, "patch sides")
      ->delimiter(',')
      ->capture_default_str();

  auto* cost =
      app.add_subcommand("cost", "emit the analytic operation-count table");
  double cost_n = 224;
  int kmin = 3, kmax = 11, kstep = 2;
  std::vector<double> cost_s{16, 32};
  cost->add_option("--n", cost_n, "input side")->capture_default_str();
  cost->add_option("--kmin", kmin, "smallest kernel side")
      ->capture_default_str();
  cost->add_option("--kmax", kmax, "largest kernel side")
      ->capture_default_str();
  cost->add_option("--kstep", kstep, "kernel-side step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cost->add_option("--s", cost_s, "split patch sides")
      ->delimiter(',')
      ->capture_default_str();

  auto* bench = app.add_subcommand(
      "bench", "time the engines over the VGG16 layer shapes");
  std::vector<std::string> engine_names{"direct", "full_fft", "oaa", "split"};
  BenchSpec bench_spec;
  bench->add_option("--engines", engine_names, "engines to run")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--s", bench_spec.s, "split patch side")
      ->capture_default_str();
  bench->add_option("--repeats", bench_spec.repeats, "timing repetitions")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--scale", bench_spec.scale,
                    "shrink factor for dims and channels, in (0,1]")
      ->capture_default_str();

  auto* plan =
      app.add_subcommand("plan", "choose a patch size under a budget");
  PlanRequest plan_request;
  plan_request.n = 224;
  plan_request.k = 3;
  plan->add_option("--n", plan_request.n, "input side")
      ->capture_default_str();
  plan->add_option("--k", plan_request.k, "kernel side")
      ->capture_default_str();
  plan->add_option("--budget", plan_request.budget_elems,
                   "max complex workspace elements per patch transform");
  plan->add_option("--candidates", plan_request.candidates,
                   "candidate patch sides")
      ->delimiter(',')
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
      return app.exit(e);
    }
    app.exit(e);
    return 2;
  }

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "cannot open output file: " << out_path << "\n";
      return 2;
    }
  }
  std::ostream& out = out_path.empty() ? std::cout : file;

  try {
    if (verify->parsed()) {
      VerifySpec spec;
      spec.sizes = n_list;
      spec.kernels = k_list;
      spec.patch_sizes = s_list;
      spec.seed = seed;
      spec.tolerance = tolerance;
      return cmd_verify(out, spec);
    }
    if (cost->parsed()) {
      if (kmin < 1 || kmax < kmin || cost_n < 1 || cost_s.empty()) {
        std::cerr << "cost: invalid range (need 1 <= kmin <= kmax, n >= 1, "
                     "non-empty --s)\n";
        return 2;
      }
      return cmd_cost(out, cost_n, kmin, kmax, kstep, cost_s);
    }
    if (bench->parsed()) {
      if (!(bench_spec.scale > 0.0) || bench_spec.scale > 1.0) {
        std::cerr << "bench: --scale must be in (0, 1]\n";
        return 2;
      }
      bench_spec.engines.clear();
      for (const std::string& name : engine_names) {
        bench_spec.engines.push_back(parse_engine(name));
      }
      bench_spec.seed = seed;
      return cmd_bench(out, bench_spec);
    }
    if (plan->parsed()) {
      return cmd_plan(out, plan_request);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
