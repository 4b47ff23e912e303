#pragma once

#include <functional>
#include <vector>

namespace icestate {

// Free design parameters and the two material scalars entering every kernel
// and gain evaluation.
struct GainParams {
  double lambda;   // decay design parameter, 1/s
  double c;        // thickness-gain parameter, 1/s
  double epsilon;  // boundary-gain parameter, dimensionless
  double D_i;      // ice diffusivity, m^2/s
  double beta;     // conductivity-to-latent-heat ratio, m/s per degC/m

  void validate() const;  // all strictly positive
};

// Kernel bundle at one (x, H) pair, for diagnostics and CSV emission.
struct KernelPoint {
  double z;
  double q;
  double r;
  double psi;
  double phi;
  double f;
};

// Observer gains on a uniform grid x_j = j*H/N, j = 0..N.
struct GainEvaluation {
  std::vector<double> p1;
  double p2;  // identically zero
  double p3;
  double p4;
  double H_used;
};

enum class QuadRule { trapezoid, simpson };

// sqrt(lambda/D_i * (y^2 - x^2)); domain 0 <= x <= y.
double z_of(double x, double y, const GainParams& g);

// Direct kernel  q(x,y) = -(lambda/D_i) x I1(z)/z.
double kernel_q(double x, double y, const GainParams& g);
// Inverse kernel r(x,y) = +(lambda/D_i) x J1(z)/z.
double kernel_r(double x, double y, const GainParams& g);
// Boundary kernels psi = (D_i/beta) q(x,H) and phi = (D_i/beta) r(x,H).
double kernel_psi(double x, double H, const GainParams& g);
double kernel_phi(double x, double H, const GainParams& g);
// Analytic thickness derivatives of phi and psi.
double kernel_phi_H(double x, double H, const GainParams& g);
double kernel_psi_H(double x, double H, const GainParams& g);
// f(x,H) = phi_H(x,H) - r(x,H) p3(H); see the sign note in kernels.cpp.
double kernel_f(double x, double H, const GainParams& g);

KernelPoint kernel_point(double x, double H, const GainParams& g);

double gain_p3(double H, const GainParams& g);
double gain_p4(double H, const GainParams& g);
// All gains at thickness H on an (N+1)-node uniform grid; H > 0, N >= 1.
GainEvaluation gains(double H, const GainParams& g, int N);

// Quadrature weights for `count` uniformly spaced nodes dx apart; the
// integral over the spanned interval is the dot product with the samples.
// simpson falls back to a 3/8-rule tail when the interval count is odd and
// to the trapezoid on a single interval.
std::vector<double> quad_weights(QuadRule rule, int count, double dx);

// Direct map:  w(x) = T~(x) - int_x^H r(x,y) T~(y) dy - phi(x,H) H~.
// Samples live on the uniform grid x_j = j*H/N with N = size - 1.
std::vector<double> to_target(const std::vector<double>& T_tilde,
                              double H_tilde, double H, const GainParams& g,
                              QuadRule rule = QuadRule::trapezoid);

// Inverse map: T~(x) = w(x) - int_x^H q(x,y) w(y) dy - psi(x,H) H~.
std::vector<double> from_target(const std::vector<double>& w, double H_tilde,
                                double H, const GainParams& g,
                                QuadRule rule = QuadRule::trapezoid);

// --- numerical verification of the kernel construction ------------------

using Kernel2 = std::function<double(double, double, const GainParams&)>;

// Central-difference residuals of the kernel wave equations on the triangle
// 0 < x < y <= H with step H/(n+1):
//   q_xx - q_yy + (lambda/D_i) q -> 0,   r_xx - r_yy - (lambda/D_i) r -> 0,
// plus the diagonal slope conditions d/dx q(x,x) = -lambda/(2 D_i) and
// d/dx r(x,x) = +lambda/(2 D_i).  Custom kernels (test hook) may replace
// the built-in ones.
struct ResidualReport {
  double max_abs_q_residual;
  double max_abs_r_residual;
  double max_abs_q;
  double max_abs_r;
  double diag_slope_error_q;
  double diag_slope_error_r;
};
ResidualReport kernel_pde_residual_check(const GainParams& g, double H, int n,
                                         const Kernel2& q_fn = {},
                                         const Kernel2& r_fn = {});

// Composes the direct and inverse transforms on random smooth profiles and
// reports the worst relative L-infinity reconstruction error.
struct RoundTripReport {
  double max_rel_linf;
  int profiles;
};
RoundTripReport transform_roundtrip_check(const GainParams& g, double H,
                                          int nodes, int profiles,
                                          unsigned long seed,
                                          QuadRule rule = QuadRule::simpson);

// Residual of the integral condition
//   f(x,H) - int_x^H q(x,y) f(y,H) dy = -epsilon q(x,H) - psi_H(x,H).
struct FConditionReport {
  double max_abs_residual;
  double max_abs_rhs;
};
FConditionReport f_condition_check(const GainParams& g, double H, int nodes,
                                   QuadRule rule = QuadRule::simpson);

}  // namespace icestate
