#include "heatlab/region_integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "heatlab/math_util.hpp"
#include "heatlab/quadrature.hpp"

namespace heatlab {

// ============================================================================
// Halfspace-box volume (corner decomposition)
// ============================================================================

double halfspace_box_volume(const AlignedBox& box, const Vec& a_in, double b) {
    const int n = box.dim();
    double lo[3], hi[3], a[3];
    for (int i = 0; i < n; ++i) {
        lo[i] = box.lo[i];
        hi[i] = box.hi[i];
        a[i] = a_in[i];
    }
    // flip axes with negative coefficient: y -> lo+hi-y keeps the box
    for (int i = 0; i < n; ++i) {
        if (a[i] < 0.0) {
            b -= a[i] * (lo[i] + hi[i]);
            a[i] = -a[i];
        }
    }
    // drop zero axes (they contribute a plain length factor)
    double factor = 1.0;
    int m = 0;
    double l2[3], h2[3], a2[3];
    for (int i = 0; i < n; ++i) {
        if (a[i] == 0.0) {
            factor *= hi[i] - lo[i];
        } else {
            l2[m] = lo[i];
            h2[m] = hi[i];
            a2[m] = a[i];
            ++m;
        }
    }
    if (m == 0) return b >= 0.0 ? factor : 0.0;

    static const double factorial[4] = {1.0, 1.0, 2.0, 6.0};
    double total = 0.0;
    for (int mask = 0; mask < (1 << m); ++mask) {
        double s = b;
        int bits = 0;
        for (int i = 0; i < m; ++i) {
            const bool high = mask & (1 << i);
            bits += high ? 1 : 0;
            s -= a2[i] * (high ? h2[i] : l2[i]);
        }
        if (s > 0.0) {
            double p = 1.0;
            for (int k = 0; k < m; ++k) p *= s;
            total += (bits % 2 == 0 ? p : -p);
        }
    }
    double denom = factorial[m];
    for (int i = 0; i < m; ++i) denom *= a2[i];
    return std::clamp(factor * total / denom, 0.0, box.volume());
}

// ============================================================================
// Exact disk-box area
// ============================================================================

namespace {

// area of {u <= X, v <= Y, u^2+v^2 <= r^2} for a disk centred at the origin
double quadrant_area(double X, double Y, double r) {
    X = std::min(X, r);
    Y = std::min(Y, r);
    if (X <= -r || Y <= -r) return 0.0;
    auto arc = [r](double u) {  // antiderivative of sqrt(r^2-u^2)
        u = std::clamp(u, -r, r);
        const double w = std::sqrt(std::max(r * r - u * u, 0.0));
        return 0.5 * (u * w + r * r * std::asin(std::clamp(u / r, -1.0, 1.0)));
    };
    if (Y >= r) return 2.0 * (arc(X) - arc(-r));
    const double s = std::sqrt(std::max(r * r - Y * Y, 0.0));
    double total = 0.0;
    if (Y >= 0.0) {
        // u < -s: full chord 2w; -s < u < s: chord cut at height Y; u > s: full chord
        const double b0 = std::min(X, -s);
        if (b0 > -r) total += 2.0 * (arc(b0) - arc(-r));
        const double b1 = std::min(X, s);
        if (b1 > -s) total += Y * (b1 + s) + (arc(b1) - arc(-s));
        if (X > s) total += 2.0 * (arc(X) - arc(s));
    } else {
        // chord nonempty only where w(u) > -Y, i.e. |u| < s
        const double b1 = std::min(X, s);
        if (b1 > -s) total += Y * (b1 + s) + (arc(b1) - arc(-s));
    }
    return std::max(total, 0.0);
}

}  // namespace

double disk_box_area(const AlignedBox& rect, double cx, double cy, double r) {
    const double X0 = rect.lo[0] - cx, X1 = rect.hi[0] - cx;
    const double Y0 = rect.lo[1] - cy, Y1 = rect.hi[1] - cy;
    const double a = quadrant_area(X1, Y1, r) - quadrant_area(X0, Y1, r) -
                     quadrant_area(X1, Y0, r) + quadrant_area(X0, Y0, r);
    return std::clamp(a, 0.0, std::min(rect.volume(), M_PI * r * r));
}

// ============================================================================
// 3-D ball-box volume by z-slices of the exact area
// ============================================================================

double ball_box_volume_3d(const AlignedBox& box, const Ball& ball, double abs_tol) {
    const double cx = ball.center[0], cy = ball.center[1], cz = ball.center[2];
    const double r = ball.radius;
    const double zlo = std::max(box.lo[2], cz - r);
    const double zhi = std::min(box.hi[2], cz + r);
    if (!(zhi > zlo)) return 0.0;

    AlignedBox rect(Vec(2, {box.lo[0], box.lo[1]}), Vec(2, {box.hi[0], box.hi[1]}));

    // Distances from the disk centre to rectangle features create breakpoints
    // in the slice-area function; split the z-integral there.
    std::vector<double> feature_d;
    for (double ex : {std::abs(box.lo[0] - cx), std::abs(box.hi[0] - cx)}) feature_d.push_back(ex);
    for (double ey : {std::abs(box.lo[1] - cy), std::abs(box.hi[1] - cy)}) feature_d.push_back(ey);
    for (double ex : {box.lo[0], box.hi[0]})
        for (double ey : {box.lo[1], box.hi[1]})
            feature_d.push_back(std::hypot(ex - cx, ey - cy));

    std::vector<double> points{zlo, zhi};
    for (double d : feature_d) {
        if (d < r) {
            const double dz = std::sqrt(r * r - d * d);
            for (double z : {cz - dz, cz + dz})
                if (z > zlo && z < zhi) points.push_back(z);
        }
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    auto slice_area = [&](double z) {
        const double q = r * r - (z - cz) * (z - cz);
        if (q <= 0.0) return 0.0;
        return disk_box_area(rect, cx, cy, std::sqrt(q));
    };
    return adaptive_integrate(slice_area, points, abs_tol).value;
}

double ball_box_volume(const AlignedBox& box, const Ball& ball, double abs_tol) {
    require_same_dim(box.dim(), ball.dim(), "ball_box_volume");
    switch (box.dim()) {
        case 1: {
            const double lo = std::max(box.lo[0], ball.center[0] - ball.radius);
            const double hi = std::min(box.hi[0], ball.center[0] + ball.radius);
            return std::max(0.0, hi - lo);
        }
        case 2:
            return disk_box_area(box, ball.center[0], ball.center[1], ball.radius);
        default:
            return ball_box_volume_3d(box, ball, abs_tol);
    }
}

// ============================================================================
// Isotropic Gaussian mass on a ball
// ============================================================================

namespace {

double gauss_ball_mass_3d(double d, double sigma, double r) {
    if (d < 1e-12 * sigma) {
        // central chi_3
        const double z = r / sigma;
        return std::erf(z * M_SQRT1_2) - std::sqrt(2.0 / M_PI) * z * std::exp(-0.5 * z * z);
    }
    // (2 pi)^{-1/2} (sigma d)^{-1} * int_0^r rho [e^{-(rho-d)^2/2s^2} - e^{-(rho+d)^2/2s^2}] drho
    auto anti = [&](double sign, double rho) {
        const double u = (rho - sign * d) / sigma;
        return -sigma * sigma * std::exp(-0.5 * u * u) +
               sign * d * sigma * std::sqrt(2.0 * M_PI) * normal_cdf(u);
    };
    const double term_near = anti(+1.0, r) - anti(+1.0, 0.0);
    const double term_far = anti(-1.0, r) - anti(-1.0, 0.0);
    return std::clamp((term_near - term_far) / (std::sqrt(2.0 * M_PI) * sigma * d), 0.0, 1.0);
}

double gauss_ball_mass_2d(double d, double sigma, double r, double abs_tol) {
    // x = r sin(theta) substitution keeps the integrand analytic at the rim
    auto f = [&](double theta) {
        const double x = r * std::sin(theta);
        const double w = r * std::cos(theta);
        return normal_pdf(x, d, sigma) * std::erf(w / (sigma * M_SQRT2)) * w;
    };
    const double v = adaptive_integrate(f, -M_PI_2, M_PI_2, abs_tol).value;
    return std::clamp(v, 0.0, 1.0);
}

}  // namespace

double gauss_ball_mass(const Vec& mean, double sigma, const Ball& ball, double abs_tol) {
    require_same_dim(mean.n, ball.dim(), "gauss_ball_mass");
    const double d = dist(mean, ball.center);
    switch (mean.n) {
        case 1:
            return gauss_interval_mass(mean[0], sigma, ball.center[0] - ball.radius,
                                       ball.center[0] + ball.radius);
        case 2:
            return gauss_ball_mass_2d(d, sigma, ball.radius, abs_tol);
        default:
            return gauss_ball_mass_3d(d, sigma, ball.radius);
    }
}

// ============================================================================
// SeparableGaussian
// ============================================================================

SeparableGaussian SeparableGaussian::constant(int n, double level) {
    SeparableGaussian g;
    g.n = n;
    g.scale = level;
    return g;
}

SeparableGaussian SeparableGaussian::normal_density(const Vec& mean, double var, double weight) {
    SeparableGaussian g;
    g.n = mean.n;
    g.scale = weight * std::pow(2.0 * M_PI * var, -0.5 * mean.n);
    for (int i = 0; i < mean.n; ++i) {
        g.a[i] = 0.5 / var;
        g.b[i] = -mean[i] / var;
        g.c += 0.5 * mean[i] * mean[i] / var;
    }
    return g;
}

SeparableGaussian SeparableGaussian::heat_kernel_factor(const Vec& x, double t) {
    SeparableGaussian g;
    g.n = x.n;
    g.scale = std::pow(4.0 * M_PI * t, -0.5 * x.n);
    for (int i = 0; i < x.n; ++i) {
        g.a[i] = 0.25 / t;
        g.b[i] = -0.5 * x[i] / t;
        g.c += 0.25 * x[i] * x[i] / t;
    }
    return g;
}

SeparableGaussian& SeparableGaussian::operator*=(const SeparableGaussian& o) {
    scale *= o.scale;
    c += o.c;
    for (int i = 0; i < n; ++i) {
        a[i] += o.a[i];
        b[i] += o.b[i];
    }
    return *this;
}

double SeparableGaussian::eval(const Vec& y) const {
    double q = c;
    for (int i = 0; i < n; ++i) q += (a[i] * y[i] + b[i]) * y[i];
    return scale * std::exp(-q);
}

void SeparableGaussian::bounds(const AlignedBox& cell, double& lo, double& hi) const {
    double qmin = c, qmax = c;
    for (int i = 0; i < n; ++i) {
        auto q = [&](double y) { return (a[i] * y + b[i]) * y; };
        const double ql = q(cell.lo[i]), qh = q(cell.hi[i]);
        qmax += std::max(ql, qh);
        if (a[i] > 0.0) {
            const double ystar = std::clamp(-0.5 * b[i] / a[i], cell.lo[i], cell.hi[i]);
            qmin += std::min({ql, qh, q(ystar)});
        } else {
            qmin += std::min(ql, qh);
        }
    }
    lo = scale * std::exp(-qmax);
    hi = scale * std::exp(-qmin);
}

double SeparableGaussian::total_integral() const {
    double v = scale * std::exp(-c);
    for (int i = 0; i < n; ++i) {
        if (!(a[i] > 0.0)) return std::numeric_limits<double>::infinity();
        // int exp(-(a y^2 + b y)) dy = sqrt(pi/a) exp(b^2/4a)
        v *= std::sqrt(M_PI / a[i]) * std::exp(0.25 * b[i] * b[i] / a[i]);
    }
    return v;
}

// ============================================================================
// Certified cell integrator over box intersect balls
// ============================================================================

namespace {

enum class BallSide { Outside, Inside, Straddle };

BallSide classify(const AlignedBox& cell, const Ball& ball) {
    double dmin2 = 0.0, dmax2 = 0.0;
    for (int i = 0; i < cell.dim(); ++i) {
        const double cc = ball.center[i];
        const double lo = cell.lo[i], hi = cell.hi[i];
        const double near = std::clamp(cc, lo, hi) - cc;
        dmin2 += near * near;
        const double far = std::max(cc - lo, hi - cc);
        dmax2 += far * far;
    }
    const double r2 = ball.radius * ball.radius;
    if (dmin2 >= r2) return BallSide::Outside;
    if (dmax2 <= r2) return BallSide::Inside;
    return BallSide::Straddle;
}

// volume bounds for cell intersect one straddling ball (tangent/chord cuts)
void straddle_volume_bounds(const AlignedBox& cell, const Ball& ball, double& vlo, double& vhi) {
    const int n = cell.dim();
    const double vol = cell.volume();
    Vec dir = cell.center() - ball.center;
    double len = dir.norm();
    if (len < 1e-300) {
        dir = Vec::zero(n);
        dir[0] = 1.0;
        len = 1.0;
    }
    for (int i = 0; i < n; ++i) dir[i] /= len;

    // upper: ball lies inside its tangent halfspace {dir.(y-c) <= r}
    double dot_c = 0.0;
    for (int i = 0; i < n; ++i) dot_c += dir[i] * ball.center[i];
    vhi = std::min(vol, halfspace_box_volume(cell, dir, dot_c + ball.radius));

    // lower: chord halfspace at offset g = sqrt(r^2 - rho_perp^2)
    double rho2 = 0.0, smin = std::numeric_limits<double>::infinity();
    const int corners = 1 << n;
    for (int m = 0; m < corners; ++m) {
        Vec y = Vec::zero(n);
        for (int i = 0; i < n; ++i) y[i] = (m & (1 << i)) ? cell.hi[i] : cell.lo[i];
        const Vec rel = y - ball.center;
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += rel[i] * dir[i];
        smin = std::min(smin, s);
        rho2 = std::max(rho2, rel.norm2() - s * s);
    }
    vlo = 0.0;
    if (rho2 < ball.radius * ball.radius) {
        const double g = std::sqrt(ball.radius * ball.radius - rho2);
        if (smin >= -g) vlo = std::clamp(halfspace_box_volume(cell, dir, dot_c + g), 0.0, vol);
    }
}

struct CellEntry {
    AlignedBox cell;
    double lo, hi;  // contribution bounds
    double gap() const { return hi - lo; }
};

struct GapLess {
    bool operator()(const CellEntry& a, const CellEntry& b) const { return a.gap() < b.gap(); }
};

// contribution bounds of one cell; returns false when the cell is fully outside
bool cell_bounds(const SeparableGaussian& f, const AlignedBox& cell,
                 const std::vector<Ball>& balls, double& lo, double& hi) {
    const double vol = cell.volume();
    double vlo = vol, vhi = vol;
    for (const Ball& b : balls) {
        switch (classify(cell, b)) {
            case BallSide::Outside:
                return false;
            case BallSide::Inside:
                break;
            case BallSide::Straddle: {
                double l, h;
                straddle_volume_bounds(cell, b, l, h);
                // intersecting several straddling constraints: min of uppers,
                // inclusion-exclusion for the lower
                vhi = std::min(vhi, h);
                vlo = std::max(0.0, vlo - (vol - l));
                break;
            }
        }
    }
    double flo, fhi;
    f.bounds(cell, flo, fhi);
    lo = vlo * flo;
    hi = vhi * fhi;
    return true;
}

}  // namespace

CertifiedValue integrate_over_region(const SeparableGaussian& f, const AlignedBox& box,
                                     const std::vector<Ball>& balls, double abs_tol,
                                     int max_cells) {
    std::priority_queue<CellEntry, std::vector<CellEntry>, GapLess> open;
    double settled_lo = 0.0, settled_hi = 0.0;
    double open_lo = 0.0, open_hi = 0.0;

    auto push = [&](const AlignedBox& cell) {
        double lo, hi;
        if (!cell_bounds(f, cell, balls, lo, hi)) return;
        // cells that are already essentially exact go straight to the total
        if (hi - lo <= 1e-18 * std::max(1.0, hi)) {
            settled_lo += lo;
            settled_hi += hi;
            return;
        }
        open_lo += lo;
        open_hi += hi;
        open.push(CellEntry{cell, lo, hi});
    };

    push(box);
    int processed = 1;
    while (!open.empty() && open_hi + settled_hi - (open_lo + settled_lo) > abs_tol &&
           processed < max_cells) {
        CellEntry e = open.top();
        open.pop();
        open_lo -= e.lo;
        open_hi -= e.hi;
        // split along the longest axis
        int axis = 0;
        double best = e.cell.hi[0] - e.cell.lo[0];
        for (int i = 1; i < e.cell.dim(); ++i) {
            const double w = e.cell.hi[i] - e.cell.lo[i];
            if (w > best) {
                best = w;
                axis = i;
            }
        }
        const double mid = 0.5 * (e.cell.lo[axis] + e.cell.hi[axis]);
        AlignedBox left = e.cell, right = e.cell;
        left.hi[axis] = mid;
        right.lo[axis] = mid;
        push(left);
        push(right);
        processed += 2;
    }
    while (!open.empty()) {
        settled_lo += open.top().lo;
        settled_hi += open.top().hi;
        open.pop();
    }
    return {settled_lo, settled_hi};
}

}  // namespace heatlab
