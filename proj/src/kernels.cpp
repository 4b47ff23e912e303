#include "icestate/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "icestate/bessel.hpp"
#include "icestate/errors.hpp"

namespace icestate {

namespace {

void check_ordered(double x, double y, const char* who) {
  if (!(x >= 0.0) || !(y >= x))
    throw std::domain_error(std::string(who) + ": requires 0 <= x <= y");
}

}  // namespace

void GainParams::validate() const {
  if (!(lambda > 0.0 && c > 0.0 && epsilon > 0.0 && D_i > 0.0 && beta > 0.0))
    throw ConfigError("GainParams: lambda, c, epsilon, D_i, beta must be > 0");
}

double z_of(double x, double y, const GainParams& g) {
  check_ordered(x, y, "z_of");
  return std::sqrt(g.lambda / g.D_i * (y * y - x * x));
}

double kernel_q(double x, double y, const GainParams& g) {
  check_ordered(x, y, "kernel_q");
  return -(g.lambda / g.D_i) * x * bessel_ratio_I(1, z_of(x, y, g));
}

double kernel_r(double x, double y, const GainParams& g) {
  check_ordered(x, y, "kernel_r");
  return (g.lambda / g.D_i) * x * bessel_ratio_J(1, z_of(x, y, g));
}

double kernel_psi(double x, double H, const GainParams& g) {
  check_ordered(x, H, "kernel_psi");
  return -(g.lambda / g.beta) * x * bessel_ratio_I(1, z_of(x, H, g));
}

double kernel_phi(double x, double H, const GainParams& g) {
  check_ordered(x, H, "kernel_phi");
  return (g.lambda / g.beta) * x * bessel_ratio_J(1, z_of(x, H, g));
}

double kernel_phi_H(double x, double H, const GainParams& g) {
  check_ordered(x, H, "kernel_phi_H");
  const double z = z_of(x, H, g);
  return -(g.lambda * g.lambda / (g.beta * g.D_i)) * x * H *
         bessel_ratio_J(2, z);
}

double kernel_psi_H(double x, double H, const GainParams& g) {
  check_ordered(x, H, "kernel_psi_H");
  const double z = z_of(x, H, g);
  return -(g.lambda * g.lambda / (g.beta * g.D_i)) * x * H *
         bessel_ratio_I(2, z);
}

double kernel_f(double x, double H, const GainParams& g) {
  // The r*p3 term enters with a minus sign: the bottom boundary value of
  // the error profile is -p3*H_tilde, and only this sign makes f satisfy
  // its integral condition (verified to 1e-27 by an independent
  // arbitrary-precision oracle; see README).
  return kernel_phi_H(x, H, g) - kernel_r(x, H, g) * gain_p3(H, g);
}

KernelPoint kernel_point(double x, double H, const GainParams& g) {
  KernelPoint p;
  p.z = z_of(x, H, g);
  p.q = kernel_q(x, H, g);
  p.r = kernel_r(x, H, g);
  p.psi = kernel_psi(x, H, g);
  p.phi = kernel_phi(x, H, g);
  p.f = kernel_f(x, H, g);
  return p;
}

double gain_p3(double H, const GainParams& g) {
  if (!(H > 0.0)) throw std::domain_error("gain_p3: H must be > 0");
  return -g.lambda * H / (2.0 * g.beta) - g.epsilon;
}

double gain_p4(double H, const GainParams& g) {
  if (!(H > 0.0)) throw std::domain_error("gain_p4: H must be > 0");
  return g.c -
         0.5 * g.lambda * (1.0 - g.lambda * H * H / (8.0 * g.D_i)) +
         g.beta * g.lambda * g.epsilon * H / (2.0 * g.D_i);
}

GainEvaluation gains(double H, const GainParams& g, int N) {
  if (!(H > 0.0)) throw std::domain_error("gains: H must be > 0");
  if (N < 1) throw std::domain_error("gains: N must be >= 1");
  GainEvaluation out;
  out.p1.resize(static_cast<std::size_t>(N) + 1);
  const double lam = g.lambda;
  for (int j = 0; j <= N; ++j) {
    const double x = (j == N) ? H : H * j / N;
    const double z = z_of(x, H, g);
    out.p1[static_cast<std::size_t>(j)] =
        (g.c * lam / g.beta) * x * bessel_ratio_I(1, z) +
        (g.epsilon * H / g.D_i - 3.0 / g.beta) * lam * lam * x *
            bessel_ratio_I(2, z) +
        (lam * lam * lam / (g.D_i * g.beta)) * x * x * x *
            bessel_ratio_I(3, z);
  }
  out.p2 = 0.0;
  out.p3 = gain_p3(H, g);
  out.p4 = gain_p4(H, g);
  out.H_used = H;
  return out;
}

std::vector<double> quad_weights(QuadRule rule, int count, double dx) {
  if (count < 1) throw std::domain_error("quad_weights: count must be >= 1");
  std::vector<double> w(static_cast<std::size_t>(count), 0.0);
  if (count == 1) return w;
  const int m = count - 1;  // intervals

  if (rule == QuadRule::trapezoid || m == 1) {
    w.front() = 0.5 * dx;
    w.back() = 0.5 * dx;
    for (int i = 1; i < m; ++i) w[static_cast<std::size_t>(i)] = dx;
    return w;
  }

  // Composite Simpson; an odd interval count ends with one 3/8-rule panel.
  int simpson_end = m;  // intervals covered by 1-4-2-...-4-1 panels
  if (m % 2 == 1) simpson_end = m - 3;
  for (int i = 0; i + 2 <= simpson_end; i += 2) {
    w[static_cast<std::size_t>(i)] += dx / 3.0;
    w[static_cast<std::size_t>(i) + 1] += 4.0 * dx / 3.0;
    w[static_cast<std::size_t>(i) + 2] += dx / 3.0;
  }
  if (m % 2 == 1) {
    const std::size_t b = static_cast<std::size_t>(simpson_end);
    w[b] += 3.0 * dx / 8.0;
    w[b + 1] += 9.0 * dx / 8.0;
    w[b + 2] += 9.0 * dx / 8.0;
    w[b + 3] += 3.0 * dx / 8.0;
  }
  return w;
}

namespace {

// Shared implementation of both Volterra maps: out_i = in_i -
// int_{x_i}^{H} K(x_i, y) in(y) dy - B(x_i, H) * H_tilde.
std::vector<double> volterra_apply(const std::vector<double>& in,
                                   double H_tilde, double H,
                                   const GainParams& g, QuadRule rule,
                                   double (*K)(double, double,
                                               const GainParams&),
                                   double (*B)(double, double,
                                               const GainParams&)) {
  if (in.size() < 2)
    throw std::domain_error("transform: need at least 2 profile samples");
  if (!(H > 0.0)) throw std::domain_error("transform: H must be > 0");
  const int N = static_cast<int>(in.size()) - 1;
  const double dx = H / N;
  std::vector<double> out(in.size());
  for (int i = 0; i <= N; ++i) {
    const double x = (i == N) ? H : H * i / N;
    double integral = 0.0;
    const int count = N - i + 1;
    if (count >= 2) {
      const std::vector<double> w = quad_weights(rule, count, dx);
      for (int j = i; j <= N; ++j) {
        const double y = (j == N) ? H : H * j / N;
        integral += w[static_cast<std::size_t>(j - i)] * K(x, y, g) *
                    in[static_cast<std::size_t>(j)];
      }
    }
    out[static_cast<std::size_t>(i)] = in[static_cast<std::size_t>(i)] -
                                       integral - B(x, H, g) * H_tilde;
  }
  return out;
}

}  // namespace

std::vector<double> to_target(const std::vector<double>& T_tilde,
                              double H_tilde, double H, const GainParams& g,
                              QuadRule rule) {
  return volterra_apply(T_tilde, H_tilde, H, g, rule, &kernel_r, &kernel_phi);
}

std::vector<double> from_target(const std::vector<double>& w, double H_tilde,
                                double H, const GainParams& g,
                                QuadRule rule) {
  return volterra_apply(w, H_tilde, H, g, rule, &kernel_q, &kernel_psi);
}

ResidualReport kernel_pde_residual_check(const GainParams& g, double H, int n,
                                         const Kernel2& q_fn,
                                         const Kernel2& r_fn) {
  if (!(H > 0.0) || n < 4)
    throw std::domain_error("kernel_pde_residual_check: H > 0, n >= 4");
  const Kernel2 q = q_fn ? q_fn : Kernel2(&kernel_q);
  const Kernel2 r = r_fn ? r_fn : Kernel2(&kernel_r);
  const double dlt = H / (n + 1);
  const double lam_over_D = g.lambda / g.D_i;

  // Stencil points are formed as index*step so the x <= y ordering that
  // holds for the indices also holds exactly for the doubles.
  ResidualReport rep{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  for (int i = 1; i <= n; ++i) {
    const double x = i * dlt, xm = (i - 1) * dlt, xp = (i + 1) * dlt;
    for (int j = i + 1; j <= n; ++j) {
      const double y = j * dlt, ym = (j - 1) * dlt, yp = (j + 1) * dlt;
      const double qc = q(x, y, g);
      const double rc = r(x, y, g);
      const double q_xx = (q(xm, y, g) - 2.0 * qc + q(xp, y, g)) / (dlt * dlt);
      const double q_yy = (q(x, ym, g) - 2.0 * qc + q(x, yp, g)) / (dlt * dlt);
      const double r_xx = (r(xm, y, g) - 2.0 * rc + r(xp, y, g)) / (dlt * dlt);
      const double r_yy = (r(x, ym, g) - 2.0 * rc + r(x, yp, g)) / (dlt * dlt);
      rep.max_abs_q_residual = std::max(rep.max_abs_q_residual,
                                        std::abs(q_xx - q_yy + lam_over_D * qc));
      rep.max_abs_r_residual = std::max(rep.max_abs_r_residual,
                                        std::abs(r_xx - r_yy - lam_over_D * rc));
      rep.max_abs_q = std::max(rep.max_abs_q, std::abs(qc));
      rep.max_abs_r = std::max(rep.max_abs_r, std::abs(rc));
    }
  }

  // Diagonal slopes d/dx q(x,x) and d/dx r(x,x) by differencing along the
  // diagonal across the interior.
  double worst_q = 0.0, worst_r = 0.0;
  for (int i = 1; i < n; ++i) {
    const double x0 = i * dlt, x1 = (i + 1) * dlt;
    const double sq = (q(x1, x1, g) - q(x0, x0, g)) / dlt;
    const double sr = (r(x1, x1, g) - r(x0, x0, g)) / dlt;
    worst_q = std::max(worst_q, std::abs(sq + 0.5 * lam_over_D));
    worst_r = std::max(worst_r, std::abs(sr - 0.5 * lam_over_D));
  }
  rep.diag_slope_error_q = worst_q;
  rep.diag_slope_error_r = worst_r;
  return rep;
}

RoundTripReport transform_roundtrip_check(const GainParams& g, double H,
                                          int nodes, int profiles,
                                          unsigned long seed, QuadRule rule) {
  if (nodes < 8 || profiles < 1)
    throw std::domain_error("transform_roundtrip_check: nodes >= 8, profiles >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);

  RoundTripReport rep{0.0, profiles};
  const int N = nodes - 1;
  for (int p = 0; p < profiles; ++p) {
    // Random smooth profile: low-order Fourier modes plus a cubic trend.
    double a1 = coef(rng), a2 = coef(rng), a3 = coef(rng), a4 = coef(rng);
    double b1 = coef(rng), b2 = coef(rng);
    double H_tilde = 0.5 * coef(rng);
    std::vector<double> T(static_cast<std::size_t>(nodes));
    double scale = 0.0;
    for (int i = 0; i <= N; ++i) {
      const double s = static_cast<double>(i) / N;
      T[static_cast<std::size_t>(i)] =
          a1 * std::sin(M_PI * s) + a2 * std::sin(2.0 * M_PI * s) +
          a3 * std::cos(M_PI * s) + a4 * std::sin(3.0 * M_PI * s) + b1 * s +
          b2 * s * s * s;
      scale = std::max(scale, std::abs(T[static_cast<std::size_t>(i)]));
    }
    const std::vector<double> w = to_target(T, H_tilde, H, g, rule);
    const std::vector<double> back = from_target(w, H_tilde, H, g, rule);
    double err = 0.0;
    for (std::size_t i = 0; i < T.size(); ++i)
      err = std::max(err, std::abs(back[i] - T[i]));
    rep.max_rel_linf = std::max(rep.max_rel_linf, err / std::max(scale, 1e-300));
  }
  return rep;
}

FConditionReport f_condition_check(const GainParams& g, double H, int nodes,
                                   QuadRule rule) {
  if (nodes < 8)
    throw std::domain_error("f_condition_check: nodes >= 8");
  const int N = nodes - 1;
  const double dx = H / N;

  std::vector<double> f(static_cast<std::size_t>(nodes));
  for (int j = 0; j <= N; ++j)
    f[static_cast<std::size_t>(j)] = kernel_f((j == N) ? H : H * j / N, H, g);

  FConditionReport rep{0.0, 0.0};
  for (int i = 0; i <= N; ++i) {
    const double x = (i == N) ? H : H * i / N;
    double integral = 0.0;
    const int count = N - i + 1;
    if (count >= 2) {
      const std::vector<double> w = quad_weights(rule, count, dx);
      for (int j = i; j <= N; ++j)
        integral += w[static_cast<std::size_t>(j - i)] *
                    kernel_q(x, (j == N) ? H : H * j / N, g) *
                    f[static_cast<std::size_t>(j)];
    }
    const double rhs = -g.epsilon * kernel_q(x, H, g) - kernel_psi_H(x, H, g);
    const double residual = f[static_cast<std::size_t>(i)] - integral - rhs;
    rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(residual));
    rep.max_abs_rhs = std::max(rep.max_abs_rhs, std::abs(rhs));
  }
  return rep;
}

}  // namespace icestate
