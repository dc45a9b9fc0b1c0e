#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emden/discretization.hpp"
#include "emden/errors.hpp"
#include "emden/glue.hpp"
#include "emden/linear_solve.hpp"
#include "emden/params.hpp"

namespace emden {

/// Q(v) = |ubar + v|^p - ubar^p - p ubar^{p-1} v, pointwise.
std::vector<double> q_nonlinearity(std::span<const double> ubar, std::span<const double> v, double p);

struct PicardOptions {
  double stop_tol = 1e-10;             ///< on the weighted sup (exponent nu) of the step
  std::size_t max_iter = 50;
  std::optional<double> beta;          ///< empty: 2 ||v_1||_nu / eps^q
  bool general_exponent = false;       ///< q = (p-3)/(p-1) - nu instead of N - 2p/(p-1)
  bool zero_residual = false;          ///< test hook: replace f by 0
  SolveOptions solve;
};

struct IterationRecord {
  std::size_t iteration = 0;
  double v_norm = 0.0;
  double step_norm = 0.0;
  double ratio = 0.0;     ///< NaN on the first iteration
  double residual = 0.0;  ///< weighted sup (exponent nu - 2) of L v + f + Q(v)
  std::size_t solver_iterations = 0;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  double beta = 0.0;
  double q = 0.0;
  double ball_radius = 0.0;
  bool converged = false;
};

struct RatioRow {
  double rho = 0.0;
  double ratio = 0.0;  ///< u / ubar
};

/// Everything is indexed by unknowns of the discretization the run used.
struct SolutionReport {
  std::vector<double> u;
  std::vector<double> ubar;
  std::vector<double> v;
  double residual_norm = 0.0;       ///< weighted sup, exponent nu - 2
  double f_norm = 0.0;              ///< same norm of f
  double v_norm = 0.0;              ///< weighted sup, exponent nu
  double min_u = 0.0;
  double positivity_margin = 0.0;   ///< min of u / ubar where rho <= R
  std::vector<RatioRow> ratio_table;
  /// Over nodes with d <= 10 d_min and d <= R eps, d_min the smallest node
  /// distance (r_min in radial1d). NaN when there are none.
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double asymptote_deviation = 0.0; ///< max |rho^{2/(p-1)} u - v_1(-log(rho/eps))| there
  double g_norm = -1.0;             ///< radial1d only, negative when not computed
  double nu = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

struct PicardResult {
  SolutionReport report;
  IterationTrace trace;
};

/// Error from picard_solve that still carries the iterations done so far.
class PicardFailure : public Error {
 public:
  PicardFailure(ErrorCode code, const std::string& message, PicardResult partial);
  const PicardResult& partial() const noexcept { return partial_; }

 private:
  PicardResult partial_;
};

/// v_{k+1} = -G(f + Q(v_k)) from v_0 = 0 on the unknowns of `disc`.
/// Throws PicardFailure with Diverged, LeftBall, PositivityLost or MaxIterations.
PicardResult picard_solve(const ApproximateSolution& approx, const WeightSelection& weights,
                          const Discretization& disc, const PicardOptions& options = {});

/// Fills the diagnostic fields of a report from u alone (ubar, v and the
/// residual are recomputed). Used after a run and when re-verifying a saved field.
SolutionReport analyze_solution(const ApproximateSolution& approx, const WeightSelection& weights,
                                const Discretization& disc, std::vector<double> u);

struct LedgerEntry {
  std::string name;
  bool passed = false;
  bool skipped = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct VerifyOptions {
  double residual_tol = 1e-6;
  double truncation_tol = 5e-2;     ///< |L4 v - L2 v| relative to ||f||, radial1d
  double asymptote_threshold = 0.02;
  double sandwich_slack = 0.25;     ///< c1 = (1 - slack) min v_1, c2 = (1 + slack) max v_1
  double ball_radius = 0.0;         ///< <= 0 skips the ball check
};

struct Ledger {
  std::vector<LedgerEntry> entries;
  bool passed() const;
  std::vector<std::string> failed() const;
};

Ledger verify_solution(const SolutionReport& report, const ApproximateSolution& approx,
                       const Discretization& disc, const VerifyOptions& options = {});

}  // namespace emden
