#include "heatlab/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace heatlab {
namespace {

// Gauss-Kronrod 15(7) on [-1,1]. Kronrod nodes are symmetric; xk[7] = 0.
constexpr double xk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
// Gauss-7 weights, attached to Kronrod nodes 1,3,5 and the center.
constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Gk15 {
    double kronrod;
    double gauss;
};

Gk15 gk15(const std::function<double(double)>& f, double a, double b) {
    const double h = 0.5 * (b - a);
    const double m = 0.5 * (a + b);
    double resk = 0.0, resg = 0.0;
    for (int i = 0; i < 7; ++i) {
        const double fv = f(m - h * xk[i]) + f(m + h * xk[i]);
        resk += wk[i] * fv;
        if (i % 2 == 1) resg += wg[i / 2] * fv;
    }
    const double fc = f(m);
    resk += wk[7] * fc;
    resg += wg[3] * fc;
    return {resk * h, resg * h};
}

void recurse(const std::function<double(double)>& f, double a, double b, double tol, int depth,
             QuadResult& out) {
    const auto r = gk15(f, a, b);
    const double err = std::abs(r.kronrod - r.gauss);
    if (err <= tol || depth <= 0) {
        out.value += r.kronrod;
        out.error_bound += err;
        if (err > tol) out.converged = false;
        return;
    }
    const double m = 0.5 * (a + b);
    recurse(f, a, m, 0.5 * tol, depth - 1, out);
    recurse(f, m, b, 0.5 * tol, depth - 1, out);
}

}  // namespace

QuadResult adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                              double abs_tol, int max_depth) {
    QuadResult out;
    if (a == b) return out;
    recurse(f, a, b, abs_tol, max_depth, out);
    return out;
}

QuadResult adaptive_integrate(const std::function<double(double)>& f,
                              const std::vector<double>& points, double abs_tol, int max_depth) {
    QuadResult out;
    if (points.size() < 2) return out;
    const double total = points.back() - points.front();
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const double a = points[i], b = points[i + 1];
        if (!(b > a)) continue;
        const double share = abs_tol * std::max(1e-3, (b - a) / total);
        QuadResult piece = adaptive_integrate(f, a, b, share, max_depth);
        out.value += piece.value;
        out.error_bound += piece.error_bound;
        out.converged = out.converged && piece.converged;
    }
    return out;
}

QuadResult adaptive_integrate_2d(const std::function<double(double, double)>& f, double ax,
                                 double bx, double ay, double by, double abs_tol) {
    QuadResult out;
    const double inner_tol = abs_tol / (4.0 * std::max(1.0, bx - ax));
    bool inner_ok = true;
    auto outer = [&](double x) {
        QuadResult inner = adaptive_integrate([&](double y) { return f(x, y); }, ay, by, inner_tol);
        inner_ok = inner_ok && inner.converged;
        return inner.value;
    };
    out = adaptive_integrate(outer, ax, bx, 0.5 * abs_tol);
    out.converged = out.converged && inner_ok;
    return out;
}

}  // namespace heatlab
