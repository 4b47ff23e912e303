#include "icestate/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "icestate/errors.hpp"

namespace icestate {

std::vector<double> solve_tridiag(std::vector<double> lower,
                                  std::vector<double> diag,
                                  std::vector<double> upper,
                                  std::vector<double> rhs) {
  const std::size_t n = diag.size();
  if (n == 0 || lower.size() != n || upper.size() != n || rhs.size() != n) {
    throw std::invalid_argument("solve_tridiag: inconsistent band sizes");
  }
  // Forward elimination in place; diag becomes the pivot row.
  for (std::size_t i = 1; i < n; ++i) {
    if (diag[i - 1] == 0.0) throw SolverError("solve_tridiag: zero pivot");
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  if (diag[n - 1] == 0.0) throw SolverError("solve_tridiag: zero pivot");
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
  }
  return x;
}

double edge_gradient_begin(const std::vector<double>& u, double dx) {
  if (u.size() < 3 || dx <= 0.0) {
    throw std::invalid_argument("edge_gradient_begin: need >= 3 samples");
  }
  return (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * dx);
}

double edge_gradient_end(const std::vector<double>& u, double dx) {
  if (u.size() < 3 || dx <= 0.0) {
    throw std::invalid_argument("edge_gradient_end: need >= 3 samples");
  }
  const std::size_t n = u.size() - 1;
  return (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * dx);
}

double trapezoid(const std::vector<double>& u, double dx) {
  if (u.size() < 2) return 0.0;
  double acc = 0.5 * (u.front() + u.back());
  for (std::size_t i = 1; i + 1 < u.size(); ++i) acc += u[i];
  return acc * dx;
}

double lsq_slope(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t n = t.size();
  if (n < 2 || y.size() != n) {
    throw std::invalid_argument("lsq_slope: need two samples of equal count");
  }
  double mt = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mt += t[i];
    my += y[i];
  }
  mt /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = t[i] - mt;
    stt += dt * dt;
    sty += dt * (y[i] - my);
  }
  if (stt == 0.0) throw std::invalid_argument("lsq_slope: degenerate abscissa");
  return sty / stt;
}

double interp_cubic_uniform(const std::vector<double>& u, double x0, double dx,
                            double x) {
  const std::size_t n = u.size();
  if (n == 0 || dx <= 0.0) {
    throw std::invalid_argument("interp_cubic_uniform: empty grid");
  }
  if (n == 1) return u[0];
  const double span = static_cast<double>(n - 1) * dx;
  double s = (x - x0) / dx;
  s = std::clamp(s, 0.0, static_cast<double>(n - 1));
  if (n < 4) {
    // Fall back to linear interpolation on short grids.
    std::size_t j = std::min(static_cast<std::size_t>(s), n - 2);
    const double w = s - static_cast<double>(j);
    return (1.0 - w) * u[j] + w * u[j + 1];
  }
  (void)span;
  // Four-point stencil centred on the target cell, clamped at the ends.
  long long j0 = static_cast<long long>(std::floor(s)) - 1;
  j0 = std::clamp<long long>(j0, 0, static_cast<long long>(n) - 4);
  const double r = s - static_cast<double>(j0);  // in [0,3]
  const double c0 = -(r - 1.0) * (r - 2.0) * (r - 3.0) / 6.0;
  const double c1 = r * (r - 2.0) * (r - 3.0) / 2.0;
  const double c2 = -r * (r - 1.0) * (r - 3.0) / 2.0;
  const double c3 = r * (r - 1.0) * (r - 2.0) / 6.0;
  const std::size_t j = static_cast<std::size_t>(j0);
  return c0 * u[j] + c1 * u[j + 1] + c2 * u[j + 2] + c3 * u[j + 3];
}

namespace {

// Upwind advection-diffusion coefficients of the spatial operator
//   L u|_j = a_j u_{j-1} + b_j u_j + c_j u_{j+1}.
struct OperatorRow {
  double a, b, c;
};

OperatorRow operator_row(double de, double v, double deta) {
  const double de2 = de / (deta * deta);
  OperatorRow row;
  row.a = de2 + std::max(-v, 0.0) / deta;
  row.c = de2 + std::max(v, 0.0) / deta;
  row.b = -(2.0 * de2 + std::abs(v) / deta);
  return row;
}

struct StepSystem {
  std::vector<double> lower, diag, upper, expl;
  double deta;
};

// Shared assembly: implicit bands for I - dt*theta*L and the explicit part
// u + dt*(1-theta)*L u + dt*src over interior nodes 1..N-1.
StepSystem assemble(const std::vector<double>& u_old,
                    const std::vector<double>& diff_eta,
                    const std::vector<double>& vel,
                    const std::vector<double>& src, double dt, double theta) {
  const std::size_t nodes = u_old.size();
  if (nodes < 3) throw std::invalid_argument("step_dirichlet: need >= 3 nodes");
  if (diff_eta.size() != nodes || vel.size() != nodes || src.size() != nodes) {
    throw std::invalid_argument("step_dirichlet: coefficient size mismatch");
  }
  if (!(dt > 0.0) || !(theta >= 0.5) || !(theta <= 1.0)) {
    throw std::invalid_argument("step_dirichlet: need dt > 0, theta in [0.5,1]");
  }
  StepSystem sys;
  sys.deta = 1.0 / static_cast<double>(nodes - 1);
  const std::size_t m = nodes - 2;
  sys.lower.resize(m);
  sys.diag.resize(m);
  sys.upper.resize(m);
  sys.expl.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t j = k + 1;
    if (!(diff_eta[j] >= 0.0)) {
      throw SolverError("step_dirichlet: negative diffusivity");
    }
    const OperatorRow row = operator_row(diff_eta[j], vel[j], sys.deta);
    if (theta < 1.0) {
      // Positivity of the explicit part; violating it breaks monotonicity.
      const double growth = dt * (1.0 - theta) * (-row.b);
      if (growth > 1.0) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "step_dirichlet: explicit part unstable at node %zu "
                      "(dt*(1-theta)*(2*D/deta^2+|v|/deta) = %.3g > 1)",
                      j, growth);
        throw SolverError(buf);
      }
    }
    sys.lower[k] = -dt * theta * row.a;
    sys.diag[k] = 1.0 - dt * theta * row.b;
    sys.upper[k] = -dt * theta * row.c;
    sys.expl[k] =
        u_old[j] +
        dt * (1.0 - theta) *
            (row.a * u_old[j - 1] + row.b * u_old[j] + row.c * u_old[j + 1]) +
        dt * src[j];
  }
  return sys;
}

std::vector<double> solve_with_bcs(const StepSystem& sys, double bc0,
                                   double bc1) {
  const std::size_t m = sys.diag.size();
  std::vector<double> rhs = sys.expl;
  rhs[0] -= sys.lower[0] * bc0;
  rhs[m - 1] -= sys.upper[m - 1] * bc1;
  std::vector<double> inner =
      solve_tridiag(sys.lower, sys.diag, sys.upper, rhs);
  std::vector<double> u(m + 2);
  u[0] = bc0;
  std::copy(inner.begin(), inner.end(), u.begin() + 1);
  u[m + 1] = bc1;
  return u;
}

}  // namespace

std::vector<double> step_dirichlet(const std::vector<double>& u_old,
                                   const std::vector<double>& diff_eta,
                                   const std::vector<double>& vel,
                                   const std::vector<double>& src, double bc0,
                                   double bc1, double dt, double theta) {
  const StepSystem sys = assemble(u_old, diff_eta, vel, src, dt, theta);
  return solve_with_bcs(sys, bc0, bc1);
}

AffineProfile step_dirichlet_affine(const std::vector<double>& u_old,
                                    const std::vector<double>& diff_eta,
                                    const std::vector<double>& vel,
                                    const std::vector<double>& src, double bc1,
                                    double dt, double theta) {
  const StepSystem sys = assemble(u_old, diff_eta, vel, src, dt, theta);
  AffineProfile out;
  out.base = solve_with_bcs(sys, 0.0, bc1);
  // Homogeneous response to a unit boundary value at eta = 0.
  const std::size_t m = sys.diag.size();
  std::vector<double> rhs(m, 0.0);
  rhs[0] = -sys.lower[0];
  std::vector<double> inner =
      solve_tridiag(sys.lower, sys.diag, sys.upper, rhs);
  out.coef.assign(m + 2, 0.0);
  out.coef[0] = 1.0;
  std::copy(inner.begin(), inner.end(), out.coef.begin() + 1);
  return out;
}

}  // namespace icestate
