#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "emden/discretization.hpp"
#include "emden/glue.hpp"
#include "emden/params.hpp"

namespace emden {

/// Compressed sparse rows. Column indices refer to unknowns or to nodes
/// depending on the matrix.
struct CsrMatrix {
  std::size_t rows = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<std::size_t> col;
  std::vector<double> val;

  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
  CsrMatrix transpose(std::size_t cols) const;
};

/// Discretized linearization L = Delta + V on the unknowns of a
/// Discretization, with Dirichlet nodes eliminated, and the diagonal weight
/// D = rho^{-2 delta_nu} * quadrature used by the adjoint-range right inverse.
class LinearOperator {
 public:
  LinearOperator() = default;

  std::size_t size() const { return reduced_.rows; }
  DiscMode mode() const { return mode_; }

  /// y = L x on unknowns.
  std::vector<double> apply(const std::vector<double>& x) const;
  std::vector<double> apply_transpose(const std::vector<double>& y) const;
  /// Image on unknowns of a nodal vector, Dirichlet values included.
  std::vector<double> apply_full(const std::vector<double>& nodes) const;

  const std::vector<double>& potential() const { return potential_; }
  const std::vector<double>& weight() const { return weight_; }
  const std::vector<double>& quadrature() const { return quadrature_; }
  const CsrMatrix& matrix() const { return reduced_; }
  const CsrMatrix& matrix_transpose() const { return reduced_t_; }

  /// diag(L D L^T).
  std::vector<double> normal_diagonal() const;

  /// box3d only: y = L x on node-indexed vectors that vanish on Dirichlet
  /// nodes (y is zeroed there). Matrix-free 7-point stencil.
  void apply_nodes(const std::vector<double>& x, std::vector<double>& y) const;
  const std::vector<long>& unknown_of_node() const { return unknown_of_node_; }
  const std::vector<std::size_t>& node_of_unknown() const { return node_of_unknown_; }

  /// "row col value" lines, 0-based unknown indices.
  void write_coo(std::ostream& out) const;

  friend LinearOperator assemble_with_potential(const Discretization& disc,
                                                const std::vector<double>& potential_nodes,
                                                double delta_nu);

 private:
  DiscMode mode_ = DiscMode::Radial1d;
  CsrMatrix full_;       ///< columns are node indices
  CsrMatrix reduced_;    ///< columns are unknown indices
  CsrMatrix reduced_t_;
  std::vector<double> potential_;
  std::vector<double> weight_;
  std::vector<double> quadrature_;
  // box3d stencil data
  std::array<std::size_t, 3> shape_{0, 0, 0};
  double inv_h2_ = 0.0;
  std::vector<double> node_diag_;  ///< -6/h^2 + V, 0 on Dirichlet nodes
  std::vector<double> node_mask_;
  std::vector<long> unknown_of_node_;
  std::vector<std::size_t> node_of_unknown_;
};

/// L with potential V given per node (ignored on Dirichlet nodes).
LinearOperator assemble_with_potential(const Discretization& disc, const std::vector<double>& potential_nodes,
                                       double delta_nu);

/// L = Delta + p u_bar^{p-1}.
LinearOperator assemble(const Discretization& disc, const ApproximateSolution& approx, double delta_nu);

/// p u_bar^{p-1} per node (0 on Dirichlet nodes that carry a singular point).
std::vector<double> linearized_potential(const Discretization& disc, const ApproximateSolution& approx);

struct SolveOptions {
  double cg_tol = 1e-8;        ///< relative residual ||L w - f|| / ||f||
  std::size_t max_iter = 0;    ///< 0 picks 20 * unknowns
  bool warm_start = true;
};

struct SolveStats {
  std::size_t iterations = 0;
  double relative_residual = 0.0;
};

/// Discrete analogue of G = L* (L L*)^{-1}: solves (L D L^T) z = f and returns
/// w = D L^T z. radial1d factors the tridiagonal L once; L is square and
/// invertible there, so the adjoint-range solution is L^{-1} f and is computed
/// that way (D spans many decades and the literal formula loses everything to
/// round-off). box3d runs Jacobi preconditioned conjugate gradients on the
/// normal system.
class RightInverse {
 public:
  explicit RightInverse(const LinearOperator& op, SolveOptions options = {});

  std::vector<double> solve(const std::vector<double>& f);
  const SolveStats& last_stats() const { return stats_; }

  /// Only for radial1d: x = L^{-1} b and x = L^{-T} b with the stored factors.
  std::vector<double> solve_l(const std::vector<double>& b) const;
  std::vector<double> solve_lt(const std::vector<double>& b) const;

 private:
  std::vector<double> solve_direct(const std::vector<double>& f);
  std::vector<double> solve_cg(const std::vector<double>& f);

  const LinearOperator* op_;
  SolveOptions options_;
  SolveStats stats_;
  // tridiagonal LU factors (radial1d)
  std::vector<double> dl_, d_, du_, du2_;
  std::vector<int> ipiv_;
  // conjugate gradient state (box3d)
  std::vector<double> z_;
  std::vector<double> inv_diag_;
};

/// Convenience wrapper on nodal fields: f and the result live on all nodes,
/// Dirichlet nodes are zero.
GridField right_inverse_adjoint_range(const Discretization& disc, const LinearOperator& op,
                                      const GridField& f, const SolveOptions& options = {});

/// (N-2)^2 - 4 p alpha^{p-1} K.
double max_principle_margin(double alpha, int k, const ProblemParams& params);

struct BarrierCertificate {
  double c = 0.0;                  ///< min of -L(d^gamma) / d^{gamma-2} over checked nodes
  std::size_t nodes_checked = 0;
  double worst_distance = 0.0;
};

/// Evaluates the discrete L on d^gamma, d the distance to the nearest singular
/// point, at nodes with eps_i <= d <= sigma (sigma <= 0 picks R).
/// BarrierFailure if the certificate constant is not positive.
BarrierCertificate barrier_check(const Discretization& disc, const LinearOperator& op,
                                 const SingularSpec& spec, double gamma, double sigma = 0.0);

/// Exact infinity norm of diag(rho^{-nu}) G diag(rho^{nu-2}) (radial1d only).
double right_inverse_norm(const Discretization& disc, const RightInverse& g, double nu);

struct NearKernel {
  double sigma_min = 0.0;    ///< smallest singular value of the weighted operator
  double correlation = 0.0;  ///< |cos| between its right singular vector and the given mode
  std::size_t iterations = 0;
};

/// Inverse iteration on A^T A, A = diag(rho^{2-nu}) L diag(rho^{nu}) (radial1d).
/// `mode` is a nodal vector compared in the same weighted coordinates.
NearKernel near_kernel(const Discretization& disc, const RightInverse& g, double nu,
                       const std::vector<double>& mode, std::size_t max_iter = 200);

}  // namespace emden
