#include "emden/linear_solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include <lapacke.h>

#include "emden/errors.hpp"

namespace emden {

void CsrMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  y.assign(rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    double acc = 0.0;
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      acc += val[k] * x[col[k]];
    }
    y[i] = acc;
  }
}

CsrMatrix CsrMatrix::transpose(std::size_t cols) const {
  CsrMatrix t;
  t.rows = cols;
  t.row_ptr.assign(cols + 1, 0);
  for (std::size_t c : col) {
    ++t.row_ptr[c + 1];
  }
  for (std::size_t i = 0; i < cols; ++i) {
    t.row_ptr[i + 1] += t.row_ptr[i];
  }
  t.col.resize(col.size());
  t.val.resize(val.size());
  std::vector<std::size_t> next(t.row_ptr.begin(), t.row_ptr.end() - 1);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      const std::size_t dst = next[col[k]]++;
      t.col[dst] = i;
      t.val[dst] = val[k];
    }
  }
  return t;
}

std::vector<double> LinearOperator::apply(const std::vector<double>& x) const {
  std::vector<double> y;
  reduced_.multiply(x, y);
  return y;
}

std::vector<double> LinearOperator::apply_transpose(const std::vector<double>& y) const {
  std::vector<double> x;
  reduced_t_.multiply(y, x);
  return x;
}

std::vector<double> LinearOperator::apply_full(const std::vector<double>& nodes) const {
  std::vector<double> y;
  full_.multiply(nodes, y);
  return y;
}

std::vector<double> LinearOperator::normal_diagonal() const {
  std::vector<double> d(size(), 0.0);
  for (std::size_t i = 0; i < reduced_.rows; ++i) {
    for (std::size_t k = reduced_.row_ptr[i]; k < reduced_.row_ptr[i + 1]; ++k) {
      d[i] += reduced_.val[k] * reduced_.val[k] * weight_[reduced_.col[k]];
    }
  }
  return d;
}

void LinearOperator::apply_nodes(const std::vector<double>& x, std::vector<double>& y) const {
  const std::size_t nx = shape_[0];
  const std::size_t nxy = shape_[0] * shape_[1];
  const std::size_t nz = shape_[2];
  y.assign(x.size(), 0.0);
  const double inv = inv_h2_;
  const double* xp = x.data();
  const double* dg = node_diag_.data();
  const double* mk = node_mask_.data();
  double* yp = y.data();
  for (std::size_t k = 1; k + 1 < nz; ++k) {
    for (std::size_t j = 1; j + 1 < shape_[1]; ++j) {
      const std::size_t base = k * nxy + j * nx;
      for (std::size_t i = base + 1; i + 1 < base + nx; ++i) {
        const double nb = xp[i - 1] + xp[i + 1] + xp[i - nx] + xp[i + nx] + xp[i - nxy] + xp[i + nxy];
        yp[i] = mk[i] * (inv * nb + dg[i] * xp[i]);
      }
    }
  }
}

void LinearOperator::write_coo(std::ostream& out) const {
  out.precision(17);
  for (std::size_t i = 0; i < reduced_.rows; ++i) {
    for (std::size_t k = reduced_.row_ptr[i]; k < reduced_.row_ptr[i + 1]; ++k) {
      out << i << ' ' << reduced_.col[k] << ' ' << reduced_.val[k] << '\n';
    }
  }
}

LinearOperator assemble_with_potential(const Discretization& disc, const std::vector<double>& potential_nodes,
                                       double delta_nu) {
  if (potential_nodes.size() != disc.node_count()) {
    fail(ErrorCode::IncompatibleDomain, "potential does not match the discretization");
  }
  LinearOperator op;
  op.mode_ = disc.mode;
  const std::size_t n = disc.unknown_count();
  op.full_.rows = n;
  op.full_.row_ptr.assign(1, 0);
  op.potential_.resize(n);
  op.quadrature_ = disc.quadrature;
  op.weight_.resize(n);

  auto push = [&](std::size_t node, double value) {
    op.full_.col.push_back(node);
    op.full_.val.push_back(value);
  };

  if (disc.mode == DiscMode::Radial1d) {
    // Conservative form r^{-N} d/ds (r^{N-2} dw/ds) with r_{i+1/2} the
    // geometric mean, so q_i L_ij is symmetric for q_i = r_i^N ds.
    const double nn = disc.dimension;
    const double inv = 1.0 / (disc.ds * disc.ds);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = disc.node_of_unknown[k];
      const double ri = disc.r[i];
      const double rm = std::sqrt(ri * disc.r[i - 1]);
      const double rp = std::sqrt(ri * disc.r[i + 1]);
      const double scale = std::pow(ri, -nn) * inv;
      const double cm = scale * std::pow(rm, nn - 2.0);
      const double cp = scale * std::pow(rp, nn - 2.0);
      const double pot = potential_nodes[i];
      push(i - 1, cm);
      push(i, -cm - cp + pot);
      push(i + 1, cp);
      op.full_.row_ptr.push_back(op.full_.col.size());
      op.potential_[k] = pot;
    }
  } else {
    const std::size_t nx = disc.shape[0];
    const std::size_t ny = disc.shape[1];
    const double inv = 1.0 / (disc.h * disc.h);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t node = disc.node_of_unknown[k];
      const double pot = potential_nodes[node];
      push(node - nx * ny, inv);
      push(node - nx, inv);
      push(node - 1, inv);
      push(node, -6.0 * inv + pot);
      push(node + 1, inv);
      push(node + nx, inv);
      push(node + nx * ny, inv);
      op.full_.row_ptr.push_back(op.full_.col.size());
      op.potential_[k] = pot;
    }
    op.shape_ = disc.shape;
    op.inv_h2_ = inv;
    op.node_diag_.assign(disc.node_count(), 0.0);
    op.node_mask_.assign(disc.node_count(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t node = disc.node_of_unknown[k];
      op.node_diag_[node] = -6.0 * inv + op.potential_[k];
      op.node_mask_[node] = 1.0;
    }
  }
  op.unknown_of_node_ = disc.unknown_of_node;
  op.node_of_unknown_ = disc.node_of_unknown;

  op.reduced_.rows = n;
  op.reduced_.row_ptr.assign(1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = op.full_.row_ptr[i]; k < op.full_.row_ptr[i + 1]; ++k) {
      const long u = disc.unknown_of_node[op.full_.col[k]];
      if (u >= 0) {
        op.reduced_.col.push_back(static_cast<std::size_t>(u));
        op.reduced_.val.push_back(op.full_.val[k]);
      }
    }
    op.reduced_.row_ptr.push_back(op.reduced_.col.size());
  }
  op.reduced_t_ = op.reduced_.transpose(n);

  for (std::size_t k = 0; k < n; ++k) {
    const double rho = disc.rho[disc.node_of_unknown[k]];
    op.weight_[k] = std::pow(rho, -2.0 * delta_nu) * disc.quadrature[k];
  }
  return op;
}

std::vector<double> linearized_potential(const Discretization& disc, const ApproximateSolution& approx) {
  const double p = approx.profile().constants().exponent();
  std::vector<double> pot(disc.node_count(), 0.0);
  for (std::size_t i = 0; i < disc.node_count(); ++i) {
    if (disc.rho[i] <= 0.0) {
      continue;
    }
    const double u = approx.value(disc.coordinates(i));
    pot[i] = p * std::pow(std::max(u, 0.0), p - 1.0);
  }
  return pot;
}

LinearOperator assemble(const Discretization& disc, const ApproximateSolution& approx, double delta_nu) {
  if (disc.dimension != approx.spec().dimension) {
    fail(ErrorCode::IncompatibleDomain, "discretization and spec differ in dimension");
  }
  return assemble_with_potential(disc, linearized_potential(disc, approx), delta_nu);
}

namespace {

double norm2(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) {
    s += v * v;
  }
  return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += a[i] * b[i];
  }
  return s;
}

}  // namespace

RightInverse::RightInverse(const LinearOperator& op, SolveOptions options) : op_(&op), options_(options) {
  const std::size_t n = op.size();
  if (n == 0) {
    fail(ErrorCode::SingularSystem, "operator has no unknowns");
  }
  if (op.mode() == DiscMode::Radial1d) {
    const CsrMatrix& a = op.matrix();
    d_.assign(n, 0.0);
    dl_.assign(n > 1 ? n - 1 : 0, 0.0);
    du_.assign(n > 1 ? n - 1 : 0, 0.0);
    du2_.assign(n > 2 ? n - 2 : 0, 0.0);
    ipiv_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
        const std::size_t j = a.col[k];
        if (j == i) {
          d_[i] = a.val[k];
        } else if (j + 1 == i) {
          dl_[j] = a.val[k];
        } else if (j == i + 1) {
          du_[i] = a.val[k];
        }
      }
    }
    const lapack_int info = LAPACKE_dgttrf(static_cast<lapack_int>(n), dl_.data(), d_.data(), du_.data(),
                                           du2_.data(), ipiv_.data());
    if (info != 0) {
      std::ostringstream msg;
      msg << "tridiagonal factorization hit a zero pivot at row " << info;
      fail(ErrorCode::SingularSystem, msg.str());
    }
  } else {
    inv_diag_ = op.normal_diagonal();
    for (double& d : inv_diag_) {
      if (!(d > 0.0)) {
        fail(ErrorCode::SingularSystem, "normal system has a zero diagonal entry");
      }
      d = 1.0 / d;
    }
  }
}

std::vector<double> RightInverse::solve_l(const std::vector<double>& b) const {
  if (op_->mode() != DiscMode::Radial1d) {
    fail(ErrorCode::InvalidArgument, "direct solves exist for radial1d only");
  }
  std::vector<double> x = b;
  const lapack_int n = static_cast<lapack_int>(x.size());
  LAPACKE_dgttrs(LAPACK_COL_MAJOR, 'N', n, 1, dl_.data(), d_.data(), du_.data(), du2_.data(), ipiv_.data(),
                 x.data(), n);
  return x;
}

std::vector<double> RightInverse::solve_lt(const std::vector<double>& b) const {
  if (op_->mode() != DiscMode::Radial1d) {
    fail(ErrorCode::InvalidArgument, "direct solves exist for radial1d only");
  }
  std::vector<double> x = b;
  const lapack_int n = static_cast<lapack_int>(x.size());
  LAPACKE_dgttrs(LAPACK_COL_MAJOR, 'T', n, 1, dl_.data(), d_.data(), du_.data(), du2_.data(), ipiv_.data(),
                 x.data(), n);
  return x;
}

std::vector<double> RightInverse::solve(const std::vector<double>& f) {
  if (f.size() != op_->size()) {
    fail(ErrorCode::InvalidArgument, "right-hand side does not match the operator");
  }
  for (double v : f) {
    if (!std::isfinite(v)) {
      fail(ErrorCode::InvalidArgument, "right-hand side is not finite");
    }
  }
  std::vector<double> w = op_->mode() == DiscMode::Radial1d ? solve_direct(f) : solve_cg(f);
  const double fn = norm2(f);
  if (fn > 0.0) {
    std::vector<double> r = op_->apply(w);
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] -= f[i];
    }
    stats_.relative_residual = norm2(r) / fn;
  } else {
    stats_.relative_residual = 0.0;
  }
  return w;
}

std::vector<double> RightInverse::solve_direct(const std::vector<double>& f) {
  // L is square and invertible here, so D L^T (L D L^T)^{-1} f = L^{-1} f.
  // Going through D^{-1} explicitly loses everything to round-off: D spans
  // r^N over several decades of r.
  stats_.iterations = 1;
  return solve_l(f);
}

std::vector<double> RightInverse::solve_cg(const std::vector<double>& f) {
  // Works on node-indexed vectors (zero on Dirichlet nodes) so that both
  // products with L are stencil sweeps; L is symmetric on the box.
  const std::size_t n = f.size();
  const auto& map = op_->node_of_unknown();
  const std::size_t nodes = op_->unknown_of_node().size();
  const auto& dw = op_->weight();
  const double fn = norm2(f);
  stats_.iterations = 0;
  if (fn == 0.0) {
    z_.assign(nodes, 0.0);
    return std::vector<double>(n, 0.0);
  }
  if (!options_.warm_start || z_.size() != nodes) {
    z_.assign(nodes, 0.0);
  }
  std::vector<double> dnode(nodes, 0.0), minv(nodes, 0.0), fnode(nodes, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    dnode[map[k]] = dw[k];
    minv[map[k]] = inv_diag_[k];
    fnode[map[k]] = f[k];
  }
  std::vector<double> tmp(nodes);
  auto normal = [&](const std::vector<double>& x, std::vector<double>& out) {
    op_->apply_nodes(x, tmp);
    for (std::size_t i = 0; i < nodes; ++i) {
      tmp[i] *= dnode[i];
    }
    op_->apply_nodes(tmp, out);
  };
  std::vector<double> r(nodes), az(nodes), p(nodes), q(nodes), zp(nodes);
  normal(z_, az);
  for (std::size_t i = 0; i < nodes; ++i) {
    r[i] = fnode[i] - az[i];
  }
  const std::size_t max_iter = options_.max_iter > 0 ? options_.max_iter : 20 * n;
  const double target = options_.cg_tol * fn;
  double rn = norm2(r);
  double best = rn;
  std::size_t since_best = 0;
  for (std::size_t i = 0; i < nodes; ++i) {
    zp[i] = minv[i] * r[i];
  }
  p = zp;
  double rz = dot(r, zp);
  while (rn > target) {
    if (stats_.iterations >= max_iter) {
      std::ostringstream msg;
      msg << "conjugate gradients stopped at relative residual " << rn / fn << " after " << max_iter
          << " iterations";
      fail(ErrorCode::SolverStagnation, msg.str());
    }
    normal(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) {
      fail(ErrorCode::SolverStagnation, "conjugate gradients lost positive curvature");
    }
    const double alpha = rz / pq;
    double rz_new = 0.0;
    double rr = 0.0;
    for (std::size_t i = 0; i < nodes; ++i) {
      z_[i] += alpha * p[i];
      r[i] -= alpha * q[i];
      zp[i] = minv[i] * r[i];
      rz_new += r[i] * zp[i];
      rr += r[i] * r[i];
    }
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < nodes; ++i) {
      p[i] = zp[i] + beta * p[i];
    }
    rn = std::sqrt(rr);
    ++stats_.iterations;
    if (rn < best * 0.999) {
      best = rn;
      since_best = 0;
    } else if (++since_best > 5000) {
      fail(ErrorCode::SolverStagnation, "conjugate gradients made no progress in 5000 iterations");
    }
  }
  op_->apply_nodes(z_, tmp);
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = dw[k] * tmp[map[k]];
  }
  return w;
}

GridField right_inverse_adjoint_range(const Discretization& disc, const LinearOperator& op, const GridField& f,
                                      const SolveOptions& options) {
  RightInverse g(op, options);
  const std::vector<double> w = g.solve(disc.to_unknowns(f.values));
  return disc.field(disc.to_nodes(w), f.weight_exponent + 2.0);
}

double max_principle_margin(double alpha, int k, const ProblemParams& params) {
  if (!(alpha > 0.0) || k < 1) {
    fail(ErrorCode::InvalidArgument, "max_principle_margin needs alpha > 0 and K >= 1");
  }
  const double n = params.dimension;
  const double p = params.exponent;
  return (n - 2.0) * (n - 2.0) - 4.0 * p * std::pow(alpha, p - 1.0) * k;
}

BarrierCertificate barrier_check(const Discretization& disc, const LinearOperator& op, const SingularSpec& spec,
                                 double gamma, double sigma) {
  const double n = spec.dimension;
  if (!(gamma > 2.0 - n && gamma < 0.0)) {
    std::ostringstream msg;
    msg << "barrier exponent " << gamma << " must lie strictly inside (" << 2.0 - n << ", 0)";
    fail(ErrorCode::InvalidArgument, msg.str());
  }
  if (sigma <= 0.0) {
    sigma = spec.R;
  }
  std::vector<double> dist(disc.node_count()), test(disc.node_count());
  std::vector<std::size_t> owner(disc.node_count());
  for (std::size_t i = 0; i < disc.node_count(); ++i) {
    const std::vector<double> x = disc.coordinates(i);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < spec.count(); ++j) {
      double d2 = 0.0;
      for (int k = 0; k < spec.dimension; ++k) {
        d2 += (x[k] - spec.points[j][k]) * (x[k] - spec.points[j][k]);
      }
      if (d2 < best) {
        best = d2;
        owner[i] = j;
      }
    }
    dist[i] = std::sqrt(best);
    test[i] = dist[i] > 0.0 ? std::pow(dist[i], gamma) : 0.0;
  }
  const std::vector<double> image = op.apply_full(test);
  BarrierCertificate cert;
  cert.c = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < disc.unknown_count(); ++k) {
    const std::size_t node = disc.node_of_unknown[k];
    const double d = dist[node];
    if (d < spec.epsilons[owner[node]] || d > sigma) {
      continue;
    }
    const double c = -image[k] / std::pow(d, gamma - 2.0);
    ++cert.nodes_checked;
    if (c < cert.c) {
      cert.c = c;
      cert.worst_distance = d;
    }
  }
  if (cert.nodes_checked == 0) {
    fail(ErrorCode::BarrierFailure, "no nodes fall inside the barrier annuli");
  }
  if (!(cert.c > 0.0)) {
    std::ostringstream msg;
    msg << "L(d^gamma) <= -c d^{gamma-2} fails at distance " << cert.worst_distance << " (c = " << cert.c
        << ")";
    fail(ErrorCode::BarrierFailure, msg.str());
  }
  return cert;
}

double right_inverse_norm(const Discretization& disc, const RightInverse& g, double nu) {
  if (disc.mode != DiscMode::Radial1d) {
    fail(ErrorCode::InvalidArgument, "the exact right-inverse norm is computed for radial1d only");
  }
  const std::size_t n = disc.unknown_count();
  std::vector<double> left(n), right(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double rho = disc.rho[disc.node_of_unknown[k]];
    left[k] = std::pow(rho, -nu);
    right[k] = std::pow(rho, nu - 2.0);
  }
  // Row i of L^{-1} is the solution of L^T x = e_i.
  double best = 0.0;
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    e[i] = 1.0;
    const std::vector<double> row = g.solve_lt(e);
    e[i] = 0.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      sum += std::abs(row[j]) * right[j];
    }
    best = std::max(best, left[i] * sum);
  }
  return best;
}

NearKernel near_kernel(const Discretization& disc, const RightInverse& g, double nu, const std::vector<double>& mode,
                       std::size_t max_iter) {
  if (disc.mode != DiscMode::Radial1d) {
    fail(ErrorCode::InvalidArgument, "near-kernel analysis is implemented for radial1d only");
  }
  const std::size_t n = disc.unknown_count();
  std::vector<double> wl(n), wr(n), target(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t node = disc.node_of_unknown[k];
    const double rho = disc.rho[node];
    wl[k] = std::pow(rho, 2.0 - nu);  // A = diag(wl) L diag(wr)
    wr[k] = std::pow(rho, nu);
    target[k] = mode[node] / wr[k];
  }
  // A^{-1} y = diag(1/wr) L^{-1} diag(1/wl) y,  A^{-T} y = diag(1/wl) L^{-T} diag(1/wr) y.
  auto a_inv = [&](std::vector<double> y) {
    for (std::size_t k = 0; k < n; ++k) y[k] /= wl[k];
    y = g.solve_l(y);
    for (std::size_t k = 0; k < n; ++k) y[k] /= wr[k];
    return y;
  };
  auto a_inv_t = [&](std::vector<double> y) {
    for (std::size_t k = 0; k < n; ++k) y[k] /= wr[k];
    y = g.solve_lt(y);
    for (std::size_t k = 0; k < n; ++k) y[k] /= wl[k];
    return y;
  };
  std::vector<double> x(n, 1.0);
  double xn = norm2(x);
  for (double& v : x) v /= xn;
  NearKernel out;
  double prev = 0.0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    std::vector<double> y = a_inv(a_inv_t(x));
    const double yn = norm2(y);
    for (std::size_t k = 0; k < n; ++k) x[k] = y[k] / yn;
    out.iterations = it + 1;
    if (std::abs(yn - prev) <= 1e-12 * yn) {
      break;
    }
    prev = yn;
  }
  // Rayleigh quotient of (A^T A)^{-1} at the converged vector.
  const std::vector<double> y = a_inv(a_inv_t(x));
  out.sigma_min = 1.0 / std::sqrt(dot(x, y));
  const double tn = norm2(target);
  out.correlation = tn > 0.0 ? std::abs(dot(x, target)) / tn : 0.0;
  return out;
}

}  // namespace emden
