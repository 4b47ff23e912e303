#pragma once

#include <vector>

namespace icestate {

// Thomas solve of the tridiagonal system lower[i]*x[i-1] + diag[i]*x[i] +
// upper[i]*x[i+1] = rhs[i]; lower[0] and upper[n-1] are ignored.  Pivots
// must stay nonzero (all solver matrices here are diagonally dominant).
std::vector<double> solve_tridiag(std::vector<double> lower,
                                  std::vector<double> diag,
                                  std::vector<double> upper,
                                  std::vector<double> rhs);

// Second-order one-sided first derivatives on a uniform grid.
double edge_gradient_begin(const std::vector<double>& u, double dx);
double edge_gradient_end(const std::vector<double>& u, double dx);

// Composite trapezoid over all samples, spacing dx.
double trapezoid(const std::vector<double>& u, double dx);

// Least-squares slope of y against t (sizes equal, >= 2).
double lsq_slope(const std::vector<double>& t, const std::vector<double>& y);

// Four-point Lagrange interpolation on the uniform grid u[i] at x0 + i*dx;
// the stencil clamps at the ends, x is clamped into the grid span.
double interp_cubic_uniform(const std::vector<double>& u, double x0, double dx,
                            double x);

// One theta-weighted implicit step of
//   u_t = diff_eta(eta) u_etaeta + vel(eta) u_eta + src(eta)
// on the uniform grid eta_j = j/N over [0,1] with Dirichlet values bc0/bc1
// imposed at the new time level.  diff_eta carries the 1/L^2 metric factor
// of the front-fixed layer.  The advection term is upwinded (vel >= 0 uses
// the forward difference), which keeps the implicit matrix an M-matrix.
// For theta < 1 the positivity bound
//   dt * (1-theta) * (2*diff_eta/deta^2 + |vel|/deta) <= 1
// is enforced and a SolverError names the violating node otherwise.
std::vector<double> step_dirichlet(const std::vector<double>& u_old,
                                   const std::vector<double>& diff_eta,
                                   const std::vector<double>& vel,
                                   const std::vector<double>& src, double bc0,
                                   double bc1, double dt, double theta);

// Same step with the eta = 0 boundary value left symbolic: the solution
// for boundary value b is base + coef * b (coef[0] = 1, coef[N] = 0).
struct AffineProfile {
  std::vector<double> base;
  std::vector<double> coef;
};
AffineProfile step_dirichlet_affine(const std::vector<double>& u_old,
                                    const std::vector<double>& diff_eta,
                                    const std::vector<double>& vel,
                                    const std::vector<double>& src, double bc1,
                                    double dt, double theta);

}  // namespace icestate
