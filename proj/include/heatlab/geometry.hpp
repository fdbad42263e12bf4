#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace heatlab {

/// Point in R^n for n in {1,2,3}. Fixed storage, explicit dimension.
struct Vec {
    int n = 1;
    std::array<double, 3> c{0.0, 0.0, 0.0};

    Vec() = default;
    Vec(int dim, std::initializer_list<double> coords) : n(dim) {
        if (dim < 1 || dim > 3) throw std::invalid_argument("Vec: dimension must be 1, 2 or 3");
        int i = 0;
        for (double v : coords) {
            if (i >= dim) break;
            c[i++] = v;
        }
    }
    static Vec zero(int dim) { return Vec(dim, {0.0, 0.0, 0.0}); }
    static Vec scalar(double x) { return Vec(1, {x}); }

    double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

    double norm2() const {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += c[i] * c[i];
        return s;
    }
    double norm() const { return std::sqrt(norm2()); }

    bool finite() const {
        for (int i = 0; i < n; ++i)
            if (!std::isfinite(c[i])) return false;
        return true;
    }
};

inline Vec operator+(const Vec& a, const Vec& b) {
    Vec r = a;
    for (int i = 0; i < a.n; ++i) r[i] += b[i];
    return r;
}
inline Vec operator-(const Vec& a, const Vec& b) {
    Vec r = a;
    for (int i = 0; i < a.n; ++i) r[i] -= b[i];
    return r;
}
inline Vec operator*(double s, const Vec& a) {
    Vec r = a;
    for (int i = 0; i < a.n; ++i) r[i] *= s;
    return r;
}
inline double dist2(const Vec& a, const Vec& b) { return (a - b).norm2(); }
inline double dist(const Vec& a, const Vec& b) { return std::sqrt(dist2(a, b)); }

/// Open ball B(center, radius).
struct Ball {
    Vec center;
    double radius = 1.0;

    Ball() = default;
    Ball(Vec c, double r) : center(c), radius(r) {
        if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("Ball: radius must be positive and finite");
        if (!center.finite()) throw std::invalid_argument("Ball: center must be finite");
    }
    int dim() const { return center.n; }
    bool contains(const Vec& p) const { return dist2(p, center) < radius * radius; }
};

/// Axis-aligned box, lo < hi per coordinate.
struct AlignedBox {
    Vec lo, hi;

    AlignedBox() = default;
    AlignedBox(Vec l, Vec h) : lo(l), hi(h) {
        if (l.n != h.n) throw std::invalid_argument("AlignedBox: dimension mismatch");
        for (int i = 0; i < l.n; ++i)
            if (!(l[i] < h[i])) throw std::invalid_argument("AlignedBox: requires lo < hi per coordinate");
    }
    int dim() const { return lo.n; }
    double volume() const {
        double v = 1.0;
        for (int i = 0; i < dim(); ++i) v *= hi[i] - lo[i];
        return v;
    }
    Vec center() const { return 0.5 * (lo + hi); }
};

/// Point in the upper half-space R^n x (0, inf).
struct SpaceTimePoint {
    Vec x;
    double t = 1.0;

    SpaceTimePoint() = default;
    SpaceTimePoint(Vec x_, double t_) : x(x_), t(t_) {
        if (!(t_ > 0.0) || !std::isfinite(t_)) throw std::invalid_argument("SpaceTimePoint: t must be positive and finite");
    }
};

/// Volume of the unit ball in R^n.
inline double unit_ball_volume(int n) {
    switch (n) {
        case 1: return 2.0;
        case 2: return M_PI;
        case 3: return 4.0 * M_PI / 3.0;
        default: throw std::invalid_argument("unit_ball_volume: dimension must be 1, 2 or 3");
    }
}

inline double ball_volume(int n, double r) { return unit_ball_volume(n) * std::pow(r, n); }

inline void require_same_dim(int a, int b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace heatlab
