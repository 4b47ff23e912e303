#pragma once

namespace icestate {

// Scaled Bessel ratios I_j(z)/z^j and J_j(z)/z^j evaluated by their power
// series in z^2.  Both ratios are entire functions of z^2; the removable
// singularity at z = 0 evaluates to the leading series term 1/(2^j j!).
// Terms are accumulated upward with compensated (Kahan) summation so the
// alternating J series stays finite for z up to ~50; truncation stops once
// a term falls below 1e-15 of the running sum.

// Modified Bessel ratio I_j(z)/z^j.  j in 1..3, z >= 0.
double bessel_ratio_I(int j, double z);

// Bessel ratio J_j(z)/z^j.  j in 1..2, z >= 0.
double bessel_ratio_J(int j, double z);

}  // namespace icestate
