#pragma once

namespace mbvar {

// Standard normal CDF via erfc.
double normal_cdf(double z);

// Standard normal density.
double normal_pdf(double z);

// Standard normal quantile, <= 1e-9 absolute error: Acklam's rational
// approximation polished by one Newton step against the erfc-based CDF.
double normal_quantile(double eps);

}  // namespace mbvar
