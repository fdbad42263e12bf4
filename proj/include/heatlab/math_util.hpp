#pragma once

#include <cmath>

namespace heatlab {

inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) * 0.3989422804014326779399461; }
inline double normal_pdf(double x, double mean, double sigma) {
    return normal_pdf((x - mean) / sigma) / sigma;
}
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

/// P(a < X < b) for X ~ N(mean, sigma^2).
inline double gauss_interval_mass(double mean, double sigma, double a, double b) {
    if (!(b > a)) return 0.0;
    return normal_cdf((b - mean) / sigma) - normal_cdf((a - mean) / sigma);
}

}  // namespace heatlab
