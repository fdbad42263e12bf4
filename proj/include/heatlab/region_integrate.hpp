#pragma once

#include <array>
#include <vector>

#include "heatlab/geometry.hpp"

namespace heatlab {

/// vol{ y in box : a . y <= b }. Closed form (corner decomposition), n <= 3.
double halfspace_box_volume(const AlignedBox& box, const Vec& a, double b);

/// Exact area of disk(center,r) intersected with an axis-aligned rectangle.
double disk_box_area(const AlignedBox& rect, double cx, double cy, double r);

/// Volume of ball intersect box in 3-D: z-slices of the exact 2-D area,
/// integrated adaptively between geometric breakpoints.
double ball_box_volume_3d(const AlignedBox& box, const Ball& ball, double abs_tol);

/// Ball intersect box volume for any n in {1,2,3} (exact for n=1,2).
double ball_box_volume(const AlignedBox& box, const Ball& ball, double abs_tol);

/// Mass of the isotropic normal N(mean, sigma^2 I_n) on ball(center, r).
/// Closed form in 1-D and 3-D; smooth 1-D quadrature in 2-D.
double gauss_ball_mass(const Vec& mean, double sigma, const Ball& ball, double abs_tol);

/// Integrand of the form scale * exp(-(sum_i a_i y_i^2 + b_i y_i) - c).
/// Products of axis-aligned Gaussians and constants stay in this family, which
/// is what certified min/max bounds over a cell need.
struct SeparableGaussian {
    int n = 1;
    double scale = 1.0;
    double c = 0.0;
    std::array<double, 3> a{0.0, 0.0, 0.0};
    std::array<double, 3> b{0.0, 0.0, 0.0};

    static SeparableGaussian constant(int n, double level);
    /// weight * density of N(mean, var I_n)
    static SeparableGaussian normal_density(const Vec& mean, double var, double weight);
    /// heat kernel factor W(x - y, t) as a function of y
    static SeparableGaussian heat_kernel_factor(const Vec& x, double t);

    SeparableGaussian& operator*=(const SeparableGaussian& o);

    double eval(const Vec& y) const;
    /// min/max over an axis-aligned cell
    void bounds(const AlignedBox& cell, double& lo, double& hi) const;
    /// integral over all of R^n (finite only if every a_i > 0)
    double total_integral() const;
};

struct CertifiedValue {
    double lower = 0.0;
    double upper = 0.0;
    double value() const { return 0.5 * (lower + upper); }
    double error() const { return 0.5 * (upper - lower); }
};

/// Certified integral of a SeparableGaussian over box intersect (all balls).
/// Adaptive cell subdivision; straddling cells are sandwiched between chord and
/// tangent halfspace cuts, so the gap shrinks like h^2 per boundary layer.
CertifiedValue integrate_over_region(const SeparableGaussian& f, const AlignedBox& box,
                                     const std::vector<Ball>& balls, double abs_tol,
                                     int max_cells = 400000);

}  // namespace heatlab
