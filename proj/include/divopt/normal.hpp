#pragma once

namespace divopt {

// Standard normal CDF via erfc; absolute error well under 1e-15.
double norm_cdf(double x);

// Standard normal density.
double norm_pdf(double x);

// Inverse standard normal CDF (Wichura's AS241 double-precision rational
// approximation); u in (0, 1).
double inv_norm_cdf(double u);

}  // namespace divopt
