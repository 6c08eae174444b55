#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "osync/certify.hpp"
#include "osync/experiment.hpp"
#include "osync/landscape.hpp"
#include "osync/oracle.hpp"
#include "osync/solver.hpp"

namespace py = pybind11;
using Eigen::MatrixXd;

namespace {

using namespace osync;

// Tuples cross the boundary as stacked (n d) x p arrays.
StiefelTuple as_tuple(const SyncProblem& problem, const MatrixXd& s) {
  return StiefelTuple(problem.n(), problem.d(), static_cast<int>(s.cols()), s, 1e-8);
}

py::dict bound_dict(const BoundReport& r) {
  py::dict out;
  out["lhs"] = r.lhs;
  out["rhs"] = r.rhs();
  out["proximity_term"] = r.proximity_term;
  out["cross_term"] = r.cross_term;
  out["alignment_term"] = r.alignment_term;
  out["noise_term"] = r.noise_term;
  out["delta"] = r.delta;
  out["gamma"] = r.gamma ? py::cast(*r.gamma) : py::none();
  out["satisfied"] = r.satisfied;
  out["margin"] = r.margin;
  return out;
}

struct SolveResult {
  MatrixXd s;
  int iterations = 0;
  std::string reason;
  std::vector<double> objective;
  std::vector<double> residual;
  std::optional<Certificate> certificate;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Projected power method, dual certificates and landscape diagnostics for O(d) "
            "synchronization.";

  py::class_<SyncProblem>(m, "Problem")
      .def(py::init([](const MatrixXd& a, int d) {
             if (d < 1 || a.rows() % d != 0) throw std::invalid_argument("Problem: d must divide rows");
             return SyncProblem(BlockMatrix(static_cast<int>(a.rows()) / d, d, a), 0.0, std::nullopt,
                                0, NoiseKind::Custom);
           }),
           py::arg("a"), py::arg("d"), "Wrap a symmetric block matrix with identity diagonal blocks.")
      .def_static("gaussian", &generate_gaussian, py::arg("n"), py::arg("d"), py::arg("sigma"),
                  py::arg("seed"), "A = Z Z^T + sigma W with block-Gaussian W.")
      .def_static(
          "from_kappa",
          [](int n, int d, double kappa, std::uint64_t seed) {
            return generate_gaussian(n, d, sigma_from_kappa(kappa, n, d), seed);
          },
          py::arg("n"), py::arg("d"), py::arg("kappa"), py::arg("seed"))
      .def_property_readonly("n", &SyncProblem::n)
      .def_property_readonly("d", &SyncProblem::d)
      .def_property_readonly("sigma", &SyncProblem::sigma)
      .def_property_readonly("seed", &SyncProblem::seed)
      .def_property_readonly("data", [](const SyncProblem& p) { return p.data().dense(); })
      .def_property_readonly("noise", [](const SyncProblem& p) { return p.noise().dense(); })
      .def("__repr__", [](const SyncProblem& p) {
        return "Problem(n=" + std::to_string(p.n()) + ", d=" + std::to_string(p.d()) +
               ", sigma=" + std::to_string(p.sigma()) + ")";
      });

  py::class_<Certificate>(m, "Certificate")
      .def_readonly("residual", &Certificate::residual)
      .def_readonly("low_spectrum", &Certificate::low_spectrum)
      .def_property_readonly("gap", &Certificate::gap)
      .def_property_readonly("verdict", [](const Certificate& c) { return to_string(c.verdict); })
      .def_property_readonly("certified",
                             [](const Certificate& c) { return c.verdict == Verdict::CertifiedUniqueRankD; })
      .def_property_readonly("lambda_blocks", [](const Certificate& c) {
        std::vector<MatrixXd> blocks;
        for (int i = 0; i < c.lambda.n(); ++i) blocks.push_back(c.lambda.block(i));
        return blocks;
      });

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("s", &SolveResult::s)
      .def_readonly("iterations", &SolveResult::iterations)
      .def_readonly("reason", &SolveResult::reason)
      .def_readonly("objective", &SolveResult::objective)
      .def_readonly("residual", &SolveResult::residual)
      .def_readonly("certificate", &SolveResult::certificate);

  m.def("sigma_from_kappa", &sigma_from_kappa, py::arg("kappa"), py::arg("n"), py::arg("d"));

  m.def(
      "solve",
      [](const SyncProblem& problem, int p, const std::string& init, std::uint64_t seed, int max_iters,
         double residual_tol, double gap_tol, std::optional<MatrixXd> initial) {
        SolverConfig config;
        config.p = p;
        config.init = init_kind_from_string(init);
        config.seed = seed;
        config.max_iters = max_iters;
        config.residual_tol = residual_tol;
        config.gap_tol = gap_tol;
        if (initial) {
          config.init = InitKind::Given;
          config.given = as_tuple(problem, *initial);
          if (config.p == 0) config.p = config.given->p();
        }
        auto [s, trace] = [&] {
          py::gil_scoped_release release;
          return osync::solve(problem, config);
        }();
        return SolveResult{s.stacked(),       trace.iterations, to_string(trace.reason),
                           trace.objective, trace.residual,   trace.certificate};
      },
      py::arg("problem"), py::arg("p") = 0, py::arg("init") = "ground-truth", py::arg("seed") = 0,
      py::arg("max_iters") = 500, py::arg("residual_tol") = 1e-6, py::arg("gap_tol") = 1e-8,
      py::arg("initial") = py::none(),
      "Generalized projected power method. p = 0 means p = d; init is 'ground-truth', 'random' "
      "or 'given' (implied by passing initial).");

  m.def(
      "certify",
      [](const SyncProblem& problem, const MatrixXd& s, double residual_tol, double gap_tol) {
        return osync::certify(problem, as_tuple(problem, s), CertifyTolerances{residual_tol, gap_tol});
      },
      py::arg("problem"), py::arg("s"), py::arg("residual_tol") = 1e-6, py::arg("gap_tol") = 1e-8);

  m.def(
      "objective",
      [](const SyncProblem& problem, const MatrixXd& s) { return osync::objective(problem, as_tuple(problem, s)); },
      py::arg("problem"), py::arg("s"));

  m.def(
      "check_fixed_point",
      [](const SyncProblem& problem, const MatrixXd& s) {
        return osync::check_fixed_point(problem, as_tuple(problem, s));
      },
      py::arg("problem"), py::arg("s"));

  m.def(
      "distance_to_sync",
      [](const MatrixXd& s, int d) {
        const auto n = static_cast<int>(s.rows()) / d;
        return osync::distance_to_sync(StiefelTuple(n, d, static_cast<int>(s.cols()), s, 1e-8),
                                       StiefelTuple::synchronized(n, d, d));
      },
      py::arg("s"), py::arg("d"), "d_F(S, Z) after optimal alignment.");

  m.def(
      "riemannian_gradient",
      [](const SyncProblem& problem, const MatrixXd& s) {
        return osync::riemannian_gradient(problem, as_tuple(problem, s)).stacked();
      },
      py::arg("problem"), py::arg("s"));

  m.def(
      "hessian_quadform",
      [](const SyncProblem& problem, const MatrixXd& s, const MatrixXd& v) {
        const StiefelTuple t = as_tuple(problem, s);
        return osync::hessian_quadform(problem, t, TangentTuple(t.n(), t.d(), t.p(), v));
      },
      py::arg("problem"), py::arg("s"), py::arg("v"));

  m.def(
      "sample_socp_test",
      [](const SyncProblem& problem, const MatrixXd& s, int directions, std::uint64_t seed) {
        const SocpReport r = osync::sample_socp_test(problem, as_tuple(problem, s), directions, seed);
        py::dict out;
        out["grad_norm"] = r.grad_norm;
        out["min_hessian_quadform"] = r.min_hessian_quadform;
        out["max_hessian_quadform"] = r.max_hessian_quadform;
        out["num_directions"] = r.num_directions;
        out["lambda_min_blocks"] = r.lambda_min_blocks;
        out["is_socp"] = r.is_socp_numerically;
        return out;
      },
      py::arg("problem"), py::arg("s"), py::arg("directions") = 20, py::arg("seed") = 0);

  m.def(
      "bm_inequality_audit",
      [](const SyncProblem& problem, const MatrixXd& s, double critical_tol) {
        const AuditReport r = osync::bm_inequality_audit(problem, as_tuple(problem, s), critical_tol);
        py::dict out;
        out["second_order_lhs"] = r.second_order_lhs;
        out["second_order_rhs"] = r.second_order_rhs;
        out["first_order_lhs"] = r.first_order_lhs;
        out["first_order_rhs"] = r.first_order_rhs;
        out["second_order_margin"] = r.second_order_margin();
        out["first_order_margin"] = r.first_order_margin();
        out["residual"] = r.residual;
        return out;
      },
      py::arg("problem"), py::arg("s"), py::arg("critical_tol") = 1e-8);

  m.def(
      "bound_cvx",
      [](const SyncProblem& problem) {
        return bound_dict(osync::bound_cvx(problem.noise(), problem.truth_or_canonical()));
      },
      py::arg("problem"), "Sufficient condition for a tight SDP with delta = 4.");

  m.def(
      "bound_bm",
      [](const SyncProblem& problem, int p) -> py::object {
        const auto r = osync::bound_bm(problem.noise(), problem.truth_or_canonical(), p);
        if (!r) return py::none();
        return bound_dict(*r);
      },
      py::arg("problem"), py::arg("p"), "Burer-Monteiro sufficient condition; None when p <= 2d.");

  m.def(
      "brute_force_z2",
      [](const SyncProblem& problem) {
        const EnumResult r = osync::brute_force_z2(problem);
        py::dict out;
        out["best_signs"] = r.best_signs;
        out["best_objective"] = r.best_objective;
        out["second_best_objective"] = r.second_best_objective;
        out["ties"] = r.ties;
        return out;
      },
      py::arg("problem"));

  m.def(
      "phase_transition",
      [](std::vector<double> kappas, std::vector<int> ns, int d, int p, int trials,
         const std::string& regime, std::uint64_t seed, int max_iters, int threads) {
        ExperimentGrid grid;
        grid.kappa_values = std::move(kappas);
        grid.n_values = std::move(ns);
        grid.d = d;
        grid.p = p > 0 ? p : 2 * d;
        grid.trials = trials;
        grid.regime = regime_from_string(regime);
        grid.base_seed = seed;
        grid.max_iters = max_iters;
        std::vector<CellResult> cells;
        {
          py::gil_scoped_release release;
          cells = run_phase_transition(grid, threads);
        }
        py::list out;
        for (const CellResult& c : cells) {
          py::dict row;
          row["kappa"] = c.kappa;
          row["n"] = c.n;
          row["successes"] = c.successes;
          row["trials"] = c.trials;
          row["timeouts"] = c.timeouts;
          row["mean_iters"] = c.mean_iters;
          row["fraction"] = c.fraction();
          out.append(row);
        }
        return out;
      },
      py::arg("kappas"), py::arg("ns"), py::arg("d") = 3, py::arg("p") = 0, py::arg("trials") = 10,
      py::arg("regime") = "sdp", py::arg("seed") = 1, py::arg("max_iters") = 500,
      py::arg("threads") = 1);
}
