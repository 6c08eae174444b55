#include "osync/solver.hpp"

#include <cmath>

#include "osync/errors.hpp"
#include "osync/rng.hpp"

namespace osync {

using Eigen::MatrixXd;

std::string to_string(InitKind kind) {
  switch (kind) {
    case InitKind::GroundTruth: return "ground-truth";
    case InitKind::Random: return "random";
    case InitKind::Given: return "given";
  }
  return "unknown";
}

InitKind init_kind_from_string(const std::string& name) {
  if (name == "ground-truth") return InitKind::GroundTruth;
  if (name == "random") return InitKind::Random;
  if (name == "given") return InitKind::Given;
  throw InputError("unknown init '" + name + "'");
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::CertifiedStop: return "certified_stop";
    case StopReason::FixedPoint: return "fixed_point";
    case StopReason::MaxIters: return "max_iters";
    case StopReason::AbortedRankDeficient: return "aborted_rank_deficient";
  }
  return "unknown";
}

namespace {

void validate(const SyncProblem& problem, const SolverConfig& c, int p) {
  if (c.max_iters < 1) throw InputError("solve: max_iters must be at least 1");
  if (!(c.residual_tol > 0.0) || !(c.gap_tol > 0.0) || !(c.fixed_point_tol > 0.0)) {
    throw InputError("solve: tolerances must be positive");
  }
  if (p < problem.d()) throw InputError("solve: p must be at least d");
  if (c.check_every < 0) throw InputError("solve: check_every must be nonnegative");
}

StiefelTuple initial_point(const SyncProblem& problem, const SolverConfig& c, int p) {
  switch (c.init) {
    case InitKind::GroundTruth: {
      const StiefelTuple g = problem.truth_or_canonical();
      return StiefelTuple(problem.n(), problem.d(), p,
                          g.stacked() * MatrixXd::Identity(problem.d(), p));
    }
    case InitKind::Random:
      return random_stiefel(problem.n(), problem.d(), p, c.seed);
    case InitKind::Given:
      if (!c.given) throw InputError("solve: init Given without a starting point");
      if (c.given->n() != problem.n() || c.given->d() != problem.d() || c.given->p() != p) {
        throw InputError("solve: given starting point has the wrong dimensions");
      }
      return *c.given;
  }
  throw InputError("solve: unknown init");
}

// P(M_i) blockwise from a precomputed M = A S.
StiefelTuple project_blocks(const StiefelTuple& s, const MatrixXd& m) {
  const int d = s.d();
  MatrixXd out(m.rows(), m.cols());
  for (int i = 0; i < s.n(); ++i) out.middleRows(i * d, d) = polar_project(m.middleRows(i * d, d));
  return StiefelTuple(s.n(), d, s.p(), std::move(out));
}

}  // namespace

StiefelTuple power_step(const SyncProblem& problem, const StiefelTuple& s) {
  if (s.n() != problem.n() || s.d() != problem.d()) {
    throw InputError("power_step: candidate dimensions do not match the instance");
  }
  return project_blocks(s, problem.data().dense() * s.stacked());
}

double check_fixed_point(const SyncProblem& problem, const StiefelTuple& s) {
  if (s.n() != problem.n() || s.d() != problem.d()) {
    throw InputError("check_fixed_point: candidate dimensions do not match the instance");
  }
  const MatrixXd as = problem.data().dense() * s.stacked();
  return certificate_residual(s, compute_lambda(s, as), as);
}

std::pair<StiefelTuple, SolveTrace> solve(const SyncProblem& problem, const SolverConfig& config) {
  const int p = config.p == 0 ? problem.d() : config.p;
  validate(problem, config, p);
  const int nd = problem.n() * problem.d();
  const int every = config.check_every > 0 ? config.check_every : (nd <= 600 ? 1 : 10);
  const CertifyTolerances tol{config.residual_tol, config.gap_tol};
  const MatrixXd& a = problem.data().dense();

  StiefelTuple s = initial_point(problem, config, p);
  MatrixXd as = a * s.stacked();
  SolveTrace trace;
  Rng jitter_rng = make_rng(derive_stream({config.seed, 0x717e7ULL}));
  int last_checked = -1;

  // The eigen test runs only on scheduled iterations whose residual passes.
  auto check = [&](int iter, double residual) -> bool {
    last_checked = iter;
    if (residual >= config.residual_tol) return false;
    Certificate cert = certify(problem, s, tol, config.spectral);
    const bool ok = cert.verdict == Verdict::CertifiedUniqueRankD;
    trace.certificate = std::move(cert);
    return ok;
  };

  double residual = 0.0;
  for (int t = 1; t <= config.max_iters; ++t) {
    StiefelTuple next = s;
    try {
      next = project_blocks(s, as);
    } catch (const RankDeficient&) {
      try {
        next = project_blocks(s, as + 1e-8 * gaussian_matrix(as.rows(), as.cols(), jitter_rng));
      } catch (const RankDeficient&) {
        trace.reason = StopReason::AbortedRankDeficient;
        return {s, trace};
      }
    }
    const double step = (next.stacked() - s.stacked()).norm() / std::sqrt(static_cast<double>(nd));
    s = std::move(next);
    as = a * s.stacked();
    residual = certificate_residual(s, compute_lambda(s, as), as);
    trace.iterations = t;
    trace.objective.push_back(s.stacked().cwiseProduct(as).sum());
    trace.residual.push_back(residual);
    trace.certificate.reset();

    if (t % every == 0 && check(t, residual)) {
      trace.reason = StopReason::CertifiedStop;
      return {s, trace};
    }
    if (step < config.fixed_point_tol) {
      trace.reason = StopReason::FixedPoint;
      break;
    }
  }
  if (last_checked != trace.iterations && check(trace.iterations, residual)) {
    trace.reason = StopReason::CertifiedStop;
  }
  return {s, trace};
}

}  // namespace osync
