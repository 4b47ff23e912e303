#include "icestate/bessel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace icestate {

namespace {

// Leading series coefficient 1/(2^j j!), exact in double for small j.
double lead_coeff(int j) {
  double denom = 1.0;
  for (int k = 1; k <= j; ++k) denom *= 2.0 * k;
  return 1.0 / denom;
}

// Sum_{k>=0} t_k with t_0 = 1/(2^j j!) and t_k = t_{k-1} * (s*z^2/4) / (k*(k+j)),
// where s = +1 gives I_j(z)/z^j and s = -1 gives J_j(z)/z^j.
double ratio_series(int j, double z, double sign) {
  const double quarter_z2 = sign * z * z * 0.25;
  double term = lead_coeff(j);
  double sum = term;
  double comp = 0.0;  // Kahan compensation
  for (int k = 1; k <= 400; ++k) {
    term *= quarter_z2 / (static_cast<double>(k) * (k + j));
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (std::abs(term) < 1e-15 * std::max(1.0, std::abs(sum))) return sum;
  }
  return sum;
}

}  // namespace

double bessel_ratio_I(int j, double z) {
  if (j < 1 || j > 3)
    throw std::domain_error("bessel_ratio_I: order must be 1..3, got " +
                            std::to_string(j));
  if (!(z >= 0.0))
    throw std::domain_error("bessel_ratio_I: argument must be >= 0");
  if (z == 0.0) return lead_coeff(j);
  return ratio_series(j, z, +1.0);
}

double bessel_ratio_J(int j, double z) {
  if (j < 1 || j > 2)
    throw std::domain_error("bessel_ratio_J: order must be 1..2, got " +
                            std::to_string(j));
  if (!(z >= 0.0))
    throw std::domain_error("bessel_ratio_J: argument must be >= 0");
  if (z == 0.0) return lead_coeff(j);
  return ratio_series(j, z, -1.0);
}

}  // namespace icestate
