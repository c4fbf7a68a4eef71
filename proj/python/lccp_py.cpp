#include <sstream>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lccp/cli.hpp"
#include "lccp/error.hpp"
#include "lccp/formulas.hpp"
#include "lccp/inference.hpp"
#include "lccp/markov.hpp"
#include "lccp/model.hpp"
#include "lccp/oracle.hpp"
#include "lccp/simulate.hpp"

namespace py = pybind11;
using namespace lccp;

namespace {

RecoveryMode parse_mode(const std::string& mode) {
  if (mode == "unknown") return RecoveryMode::VerticesUnknown;
  if (mode == "known") return RecoveryMode::VerticesKnown;
  throw Error(ErrorKind::InvalidTarget, "mode is 'unknown' or 'known'");
}

RecoveryTarget make_target(const std::string& kind, std::size_t r,
                           const std::vector<CouponId>& coupons, const std::string& mode) {
  const auto m = parse_mode(mode);
  if (kind == "complete") return RecoveryTarget::complete(m);
  if (kind == "arbitrary") return RecoveryTarget::arbitrary(r, m);
  if (kind == "specific") return RecoveryTarget::specific(coupons, m);
  throw Error(ErrorKind::InvalidTarget, "target is 'complete', 'arbitrary' or 'specific'");
}

py::dict stats_dict(const SimulationStats& s) {
  py::dict d;
  d["reps"] = s.reps;
  d["mean"] = s.mean;
  d["std_error"] = s.std_error;
  d["min"] = s.five_number.min;
  d["q25"] = s.five_number.q25;
  d["median"] = s.five_number.median;
  d["q75"] = s.five_number.q75;
  d["max"] = s.five_number.max;
  d["seed"] = s.seed;
  return d;
}

py::dict formula_dict(const FormulaResult& f) {
  py::dict d;
  d["value"] = f.value;
  d["provenance"] = std::string(to_string(f.provenance));
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Labeled coupon collector: exact solvers, formulas and simulation";

  static py::exception<Error> error_type(m, "LccpError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error_type.ptr())(e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  m.def("kp_dist", [](double p) { return make_kp_dist(p).entries(); }, py::arg("p"),
        "Validated {1: p, 2: 1-p} as a dict.");

  m.def(
      "expected_complete", [](std::size_t n, double p) { return expected_complete(n, p); },
      py::arg("n"), py::arg("p"));
  m.def(
      "expected_complete_exact",
      [](std::size_t n, long long num, long long den) {
        const auto v = expected_complete_exact(n, Rational(num, den));
        return std::make_pair(numerator(v).str(), denominator(v).str());
      },
      py::arg("n"), py::arg("p_num"), py::arg("p_den"));
  m.def("tail_distribution", &tail_distribution, py::arg("n"), py::arg("p"), py::arg("t_max"));
  m.def(
      "ccp_expected",
      [](std::size_t n, const std::map<std::size_t, double>& dist, std::size_t r) {
        return ccp_expected(n, SampleSizeDist(dist), r);
      },
      py::arg("n"), py::arg("dist"), py::arg("r"));

  m.def(
      "oracle_expected",
      [](std::size_t n, const std::map<std::size_t, double>& dist, const std::string& target,
         std::size_t r, const std::vector<CouponId>& coupons, const std::string& mode,
         bool canonicalize) {
        return oracle_expected(n, SampleSizeDist(dist), make_target(target, r, coupons, mode),
                               OracleOptions{canonicalize});
      },
      py::arg("n"), py::arg("dist"), py::arg("target") = "complete", py::arg("r") = 0,
      py::arg("coupons") = std::vector<CouponId>{}, py::arg("mode") = "unknown",
      py::arg("canonicalize") = true);

  m.def(
      "simulate",
      [](std::size_t n, const std::map<std::size_t, double>& dist, std::size_t reps,
         std::uint64_t seed, const std::string& target, std::size_t r,
         const std::vector<CouponId>& coupons, const std::string& mode, unsigned threads) {
        const SampleSizeDist d(dist);
        const auto t = make_target(target, r, coupons, mode);
        SimulationStats s;
        {
          py::gil_scoped_release release;
          s = estimate(n, d, t, reps, seed, threads);
        }
        return stats_dict(s);
      },
      py::arg("n"), py::arg("dist"), py::arg("reps"), py::arg("seed"),
      py::arg("target") = "complete", py::arg("r") = 0,
      py::arg("coupons") = std::vector<CouponId>{}, py::arg("mode") = "unknown",
      py::arg("threads") = 1);

  m.def(
      "known_coupons",
      [](std::size_t n, const std::vector<std::pair<std::vector<CouponId>, std::vector<LabelId>>>& history,
         const std::string& mode) {
        auto st = init_knowledge(n, parse_mode(mode));
        for (const auto& [coupons, labels] : history) st.absorb(Sample{coupons, labels});
        return known_coupons(st);
      },
      py::arg("n"), py::arg("history"), py::arg("mode") = "unknown",
      "Coupons whose label is forced by a history of (coupons, labels) pairs.");

  m.def("harmonic", &harmonic, py::arg("n"));
  m.def("ccp_expected_full", &ccp_expected_full, py::arg("n"));
  m.def("ccp_expected_partial", &ccp_expected_partial, py::arg("n"), py::arg("r"));
  m.def("st1_tail", &st1_tail, py::arg("n"), py::arg("t"));
  m.def(
      "st1_expected",
      [](std::size_t n, const std::string& variant) {
        if (variant == "printed") return formula_dict(st1_expected(n, St1Variant::Printed));
        if (variant == "tailsum") return formula_dict(st1_expected(n, St1Variant::TailSum));
        throw Error(ErrorKind::OutOfRange, "variant is 'printed' or 'tailsum'");
      },
      py::arg("n"), py::arg("variant") = "tailsum");
  m.def(
      "t1_expected_series", [](std::size_t n) { return formula_dict(t1_expected_series(n)); },
      py::arg("n"));
  m.def(
      "kp3_expected",
      [](double p, const std::string& variant) {
        if (variant == "printed") return formula_dict(kp3_expected(p, Kp3Variant::Printed));
        if (variant == "series") return formula_dict(kp3_expected(p, Kp3Variant::ProofSeries));
        throw Error(ErrorKind::OutOfRange, "variant is 'printed' or 'series'");
      },
      py::arg("p"), py::arg("variant") = "series");
  m.def(
      "conjectured_2lccp_expected",
      [](std::size_t n) { return formula_dict(conjectured_2lccp_expected(n)); }, py::arg("n"));
  m.def(
      "min_samples",
      [](std::size_t n, const std::map<std::size_t, double>& dist) {
        const auto r = min_samples(n, SampleSizeDist(dist));
        py::dict d;
        d["value"] = r.value;
        d["k_m"] = r.k_m;
        d["proven"] = r.proven;
        return d;
      },
      py::arg("n"), py::arg("dist"));
  m.def("min_witness_k2", &min_witness_k2, py::arg("n"));

  m.def("parse_grid", &cli::parse_grid, py::arg("text"));
  m.def(
      "sweep_csv",
      [](std::size_t n, const std::string& grid, std::size_t reps, std::uint64_t seed) {
        return cli::sweep_csv(cli::sweep(n, cli::parse_grid(grid), reps, seed));
      },
      py::arg("n"), py::arg("grid"), py::arg("reps") = 0, py::arg("seed") = 0);
  m.def(
      "verify",
      [](std::size_t n_max, std::uint64_t seed) {
        py::list out;
        for (const auto& r : cli::verify({n_max, seed})) {
          py::dict d;
          d["status"] = std::string(cli::to_string(r.status));
          d["claim"] = r.claim;
          d["detail"] = r.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("n_max") = 5, py::arg("seed") = 20240601);
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line tool in-process: (exit_code, stdout, stderr).");
}
