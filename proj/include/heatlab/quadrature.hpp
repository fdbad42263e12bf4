#pragma once

#include <functional>
#include <vector>

namespace heatlab {

struct QuadResult {
    double value = 0.0;
    double error_bound = 0.0;  ///< accumulated estimate, not a hard certificate
    bool converged = true;     ///< false when the depth cap was hit somewhere
};

/// Adaptive Gauss-Kronrod 15(7) with recursive bisection. The integrand is
/// assumed piecewise-smooth; split at known breakpoints via the list overload.
QuadResult adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                              double abs_tol, int max_depth = 48);

/// Integrate over [points.front(), points.back()] splitting at interior points.
QuadResult adaptive_integrate(const std::function<double(double)>& f,
                              const std::vector<double>& points, double abs_tol,
                              int max_depth = 48);

/// Tensor-adaptive 2-D integral over [ax,bx] x [ay,by] (outer adaptive in x,
/// inner adaptive in y).
QuadResult adaptive_integrate_2d(const std::function<double(double, double)>& f, double ax,
                                 double bx, double ay, double by, double abs_tol);

}  // namespace heatlab
