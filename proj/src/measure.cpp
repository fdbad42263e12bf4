#include "heatlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "heatlab/math_util.hpp"

namespace heatlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

/// 1-D target interval with endpoint semantics.
struct TargetInterval {
    double lo = -kInf, hi = kInf;
    bool incl_lo = false, incl_hi = false;

    bool empty() const { return lo > hi || (lo == hi && !(incl_lo && incl_hi)); }
    bool contains(double y) const {
        if (y < lo || y > hi) return false;
        if (y == lo && !incl_lo) return false;
        if (y == hi && !incl_hi) return false;
        return true;
    }
    void intersect_open(double a, double b) {
        if (a > lo || (a == lo && incl_lo)) {
            lo = a;
            incl_lo = false;
        }
        if (b < hi || (b == hi && incl_hi)) {
            hi = b;
            incl_hi = false;
        }
    }
};

TargetInterval ball_target_1d(const Ball& b, const std::vector<Ball>& clips) {
    TargetInterval t;
    t.lo = b.center[0] - b.radius;
    t.hi = b.center[0] + b.radius;
    for (const Ball& c : clips) t.intersect_open(c.center[0] - c.radius, c.center[0] + c.radius);
    return t;
}

}  // namespace

// ============================================================================
// SelfSimilar
// ============================================================================

void SelfSimilar::finalize() {
    if (maps.empty()) throw std::invalid_argument("SelfSimilar: needs at least one map");
    if (maps.size() != probs.size())
        throw std::invalid_argument("SelfSimilar: maps/probs size mismatch");
    double psum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) throw std::invalid_argument("SelfSimilar: probabilities must be >= 0");
        psum += p;
    }
    if (std::abs(psum - 1.0) > 1e-12)
        throw std::invalid_argument("SelfSimilar: probabilities must sum to 1");
    if (!(weight >= 0.0)) throw std::invalid_argument("SelfSimilar: weight must be >= 0");
    double mean_ratio = 0.0, mean_offset = 0.0;
    hull_lo = kInf;
    hull_hi = -kInf;
    for (std::size_t i = 0; i < maps.size(); ++i) {
        if (!(maps[i].ratio > 0.0 && maps[i].ratio < 1.0))
            throw std::invalid_argument("SelfSimilar: contraction ratio must be in (0,1)");
        const double fp = maps[i].fixed_point();
        hull_lo = std::min(hull_lo, fp);
        hull_hi = std::max(hull_hi, fp);
        mean_ratio += probs[i] * maps[i].ratio;
        mean_offset += probs[i] * maps[i].offset;
    }
    barycenter = mean_offset / (1.0 - mean_ratio);
}

SelfSimilar SelfSimilar::standard_cantor(double weight) {
    SelfSimilar ss;
    ss.maps = {{1.0 / 3.0, 0.0}, {1.0 / 3.0, 2.0 / 3.0}};
    ss.probs = {0.5, 0.5};
    ss.weight = weight;
    ss.finalize();
    return ss;
}

// ============================================================================
// Measure construction
// ============================================================================

Measure Measure::lebesgue(int n) {
    Measure m(n);
    m.lebesgue_weight = 1.0;
    return m;
}

Measure Measure::point_mass(const Vec& location, double weight) {
    Measure m(location.n);
    m.add(PointMass{location, weight});
    return m;
}

Measure Measure::box_density(const AlignedBox& box, double level) {
    Measure m(box.dim());
    m.add(BoxDensity{box, level});
    return m;
}

Measure Measure::gaussian(const Vec& mean, double variance, double weight) {
    Measure m(mean.n);
    m.add(GaussianDensity{mean, variance, weight});
    return m;
}

Measure Measure::self_similar(SelfSimilar ss) {
    ss.finalize();
    Measure m(1);
    m.add(std::move(ss));
    return m;
}

Measure& Measure::add(Primitive p, std::vector<Ball> clips) {
    terms.push_back(Term{std::move(p), std::move(clips)});
    validate();
    return *this;
}

Measure& Measure::add_lebesgue(double weight) {
    if (!(weight >= 0.0)) throw std::invalid_argument("Measure: Lebesgue weight must be >= 0");
    lebesgue_weight += weight;
    return *this;
}

void Measure::validate() const {
    if (dim < 1 || dim > 3) throw std::invalid_argument("Measure: dimension must be 1, 2 or 3");
    if (!(lebesgue_weight >= 0.0)) throw std::invalid_argument("Measure: negative Lebesgue part");
    for (const Term& t : terms) {
        std::visit(
            [&](const auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, PointMass>) {
                    require_same_dim(p.location.n, dim, "Measure");
                    if (!(p.weight >= 0.0) || !p.location.finite())
                        throw std::invalid_argument("PointMass: bad weight or location");
                } else if constexpr (std::is_same_v<T, BoxDensity>) {
                    require_same_dim(p.box.dim(), dim, "Measure");
                    if (!(p.level >= 0.0)) throw std::invalid_argument("BoxDensity: level must be >= 0");
                } else if constexpr (std::is_same_v<T, GaussianDensity>) {
                    require_same_dim(p.mean.n, dim, "Measure");
                    if (!(p.variance > 0.0)) throw std::invalid_argument("GaussianDensity: variance must be > 0");
                    if (!(p.weight >= 0.0)) throw std::invalid_argument("GaussianDensity: weight must be >= 0");
                } else if constexpr (std::is_same_v<T, SelfSimilar>) {
                    if (dim != 1) throw std::invalid_argument("SelfSimilar: supported in 1-D only");
                }
            },
            t.prim);
        for (const Ball& c : t.clips) require_same_dim(c.dim(), dim, "Measure clip");
    }
}

// ============================================================================
// Self-similar cylinder engine
// ============================================================================

namespace {

struct Cylinder {
    double scale, offset, mass;
    double est, err;
    bool operator<(const Cylinder& o) const { return err < o.err; }
};

}  // namespace

static CertifiedValue self_similar_target_integral(
    const SelfSimilar& ss, const TargetInterval& target, const std::function<double(double)>& g,
    const std::function<void(double, double, double&, double&)>& g_range, double lip, double m2,
    double abs_tol, int max_cylinders) {
    const double hull_len = ss.hull_hi - ss.hull_lo;

    // classify + score one cylinder; returns false if it contributes nothing
    auto score = [&](Cylinder& cyl) {
        const double a = cyl.offset + cyl.scale * ss.hull_lo;
        const double len = cyl.scale * hull_len;
        const double b = a + len;
        if (len == 0.0) {  // degenerate attractor: a point mass
            cyl.est = target.contains(a) ? cyl.mass * g(a) : 0.0;
            cyl.err = 0.0;
            return cyl.est != 0.0 || cyl.err != 0.0;
        }
        if (b <= target.lo || a >= target.hi) return false;
        const bool inside = a > target.lo && b < target.hi;

        double gmin = 0.0, gmax = kInf;
        if (g_range) g_range(a, b, gmin, gmax);

        if (inside) {
            double best_est = 0.0, best_err = kInf;
            if (g_range && gmax - gmin < best_err) {
                best_est = 0.5 * (gmin + gmax);
                best_err = 0.5 * (gmax - gmin);
            }
            const double taylor = std::min(lip * len, 0.5 * m2 * len * len);
            if (taylor < best_err) {
                best_est = g(cyl.offset + cyl.scale * ss.barycenter);
                best_err = taylor;
            }
            cyl.est = cyl.mass * best_est;
            cyl.err = cyl.mass * best_err;
        } else {
            // straddles a target endpoint: only [0, mass * sup g] is certain
            double sup = gmax;
            if (!std::isfinite(sup)) sup = g(0.5 * (a + b)) + 0.5 * lip * len;
            cyl.est = 0.5 * cyl.mass * sup;
            cyl.err = 0.5 * cyl.mass * sup;
        }
        return true;
    };

    std::priority_queue<Cylinder> queue;
    double sum_est = 0.0, sum_err = 0.0;
    auto push = [&](Cylinder cyl) {
        if (!score(cyl)) return;
        sum_est += cyl.est;
        sum_err += cyl.err;
        if (cyl.err > 0.0) queue.push(cyl);
    };

    push(Cylinder{1.0, 0.0, 1.0, 0.0, 0.0});
    int produced = 1;
    while (!queue.empty() && sum_err * ss.weight > abs_tol && produced < max_cylinders) {
        Cylinder parent = queue.top();
        queue.pop();
        sum_est -= parent.est;
        sum_err -= parent.err;
        for (std::size_t i = 0; i < ss.maps.size(); ++i) {
            Cylinder child;
            child.scale = parent.scale * ss.maps[i].ratio;
            child.offset = parent.offset + parent.scale * ss.maps[i].offset;
            child.mass = parent.mass * ss.probs[i];
            push(child);
            ++produced;
        }
    }
    const double w = ss.weight;
    return {w * (sum_est - sum_err), w * (sum_est + sum_err)};
}

CertifiedValue self_similar_integral(
    const SelfSimilar& ss, double clip_lo, double clip_hi,
    const std::function<double(double)>& g,
    const std::function<void(double, double, double&, double&)>& g_range, double lip, double m2,
    double abs_tol, int max_cylinders) {
    TargetInterval t;
    t.lo = clip_lo;
    t.hi = clip_hi;
    return self_similar_target_integral(ss, t, g, g_range, lip, m2, abs_tol, max_cylinders);
}

// ============================================================================
// Ball / interval mass
// ============================================================================

namespace {

// mass of one term over a 1-D target interval
CertifiedValue term_mass_1d(const Term& term, TargetInterval target, double abs_tol) {
    for (const Ball& c : term.clips)
        target.intersect_open(c.center[0] - c.radius, c.center[0] + c.radius);
    if (target.empty()) return {0.0, 0.0};

    return std::visit(
        [&](const auto& p) -> CertifiedValue {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PointMass>) {
                const double v = target.contains(p.location[0]) ? p.weight : 0.0;
                return {v, v};
            } else if constexpr (std::is_same_v<T, BoxDensity>) {
                const double lo = std::max(target.lo, p.box.lo[0]);
                const double hi = std::min(target.hi, p.box.hi[0]);
                const double v = p.level * std::max(0.0, hi - lo);
                return {v, v};
            } else if constexpr (std::is_same_v<T, GaussianDensity>) {
                const double v =
                    p.weight * gauss_interval_mass(p.mean[0], p.sigma(), target.lo, target.hi);
                return {v, v};
            } else {
                static const std::function<double(double)> one = [](double) { return 1.0; };
                static const std::function<void(double, double, double&, double&)> one_range =
                    [](double, double, double& lo, double& hi) {
                        lo = 1.0;
                        hi = 1.0;
                    };
                return self_similar_target_integral(p, target, one, one_range, 0.0, 0.0, abs_tol,
                                                    2000000);
            }
        },
        term.prim);
}

AlignedBox ball_bounding_box(const Ball& b) {
    Vec lo = b.center, hi = b.center;
    for (int i = 0; i < b.dim(); ++i) {
        lo[i] -= b.radius;
        hi[i] += b.radius;
    }
    return AlignedBox(lo, hi);
}

std::optional<AlignedBox> intersect_boxes(const AlignedBox& a, const AlignedBox& b) {
    Vec lo = a.lo, hi = a.hi;
    for (int i = 0; i < a.dim(); ++i) {
        lo[i] = std::max(lo[i], b.lo[i]);
        hi[i] = std::min(hi[i], b.hi[i]);
        if (!(lo[i] < hi[i])) return std::nullopt;
    }
    return AlignedBox(lo, hi);
}

// mass of one term over an open ball, n >= 2
CertifiedValue term_mass_nd(const Term& term, const Ball& ball, double abs_tol) {
    return std::visit(
        [&](const auto& p) -> CertifiedValue {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PointMass>) {
                bool in = ball.contains(p.location);
                for (const Ball& c : term.clips) in = in && c.contains(p.location);
                const double v = in ? p.weight : 0.0;
                return {v, v};
            } else if constexpr (std::is_same_v<T, BoxDensity>) {
                if (term.clips.empty()) {
                    const double v = p.level * ball_box_volume(p.box, ball, abs_tol / std::max(p.level, 1e-300));
                    return {std::max(0.0, v - abs_tol), v + abs_tol};
                }
                std::vector<Ball> balls = term.clips;
                balls.push_back(ball);
                return integrate_over_region(
                    SeparableGaussian::constant(p.box.dim(), p.level), p.box, balls, abs_tol);
            } else if constexpr (std::is_same_v<T, GaussianDensity>) {
                if (term.clips.empty()) {
                    const double v = p.weight * gauss_ball_mass(p.mean, p.sigma(), ball,
                                                                abs_tol / std::max(p.weight, 1e-300));
                    return {std::max(0.0, v - abs_tol), v + abs_tol};
                }
                std::vector<Ball> balls = term.clips;
                balls.push_back(ball);
                std::optional<AlignedBox> dom = ball_bounding_box(ball);
                for (const Ball& c : term.clips) {
                    dom = intersect_boxes(*dom, ball_bounding_box(c));
                    if (!dom) return {0.0, 0.0};
                }
                return integrate_over_region(
                    SeparableGaussian::normal_density(p.mean, p.variance, p.weight), *dom, balls,
                    abs_tol);
            } else {
                throw std::logic_error("SelfSimilar term in dimension > 1");
            }
        },
        term.prim);
}

}  // namespace

CertifiedValue ball_mass_certified(const Measure& mu, const Ball& b, double abs_tol) {
    require_same_dim(mu.dim, b.dim(), "ball_mass");
    CertifiedValue total;
    if (mu.lebesgue_weight > 0.0) {
        const double v = mu.lebesgue_weight * ball_volume(mu.dim, b.radius);
        total.lower += v;
        total.upper += v;
    }
    const double share = abs_tol / static_cast<double>(std::max<std::size_t>(mu.terms.size(), 1));
    for (const Term& t : mu.terms) {
        CertifiedValue part;
        if (mu.dim == 1) {
            TargetInterval target;
            target.lo = b.center[0] - b.radius;
            target.hi = b.center[0] + b.radius;
            part = term_mass_1d(t, target, share);
        } else {
            part = term_mass_nd(t, b, share);
        }
        total.lower += part.lower;
        total.upper += part.upper;
    }
    total.lower = std::max(total.lower, 0.0);
    return total;
}

double ball_mass(const Measure& mu, const Ball& b, double abs_tol) {
    return ball_mass_certified(mu, b, abs_tol).value();
}

double interval_mass(const Measure& mu, double a, double b, bool include_left, bool include_right,
                     double abs_tol) {
    if (mu.dim != 1) throw std::invalid_argument("interval_mass: 1-D only");
    if (!(b >= a)) throw std::invalid_argument("interval_mass: requires a <= b");
    TargetInterval target{a, b, include_left, include_right};
    double total = 0.0;
    if (mu.lebesgue_weight > 0.0) total += mu.lebesgue_weight * (b - a);
    const double share = abs_tol / static_cast<double>(std::max<std::size_t>(mu.terms.size(), 1));
    for (const Term& t : mu.terms) total += term_mass_1d(t, target, share).value();
    return std::max(total, 0.0);
}

// ============================================================================
// translate / dilate / restrict
// ============================================================================

Measure translate(const Measure& mu, const Vec& x0) {
    require_same_dim(mu.dim, x0.n, "translate");
    if (!x0.finite()) throw std::invalid_argument("translate: shift must be finite");
    Measure out(mu.dim);
    out.lebesgue_weight = mu.lebesgue_weight;
    for (const Term& t : mu.terms) {
        Term nt = t;
        std::visit(
            [&](auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, PointMass>) {
                    p.location = p.location - x0;
                } else if constexpr (std::is_same_v<T, BoxDensity>) {
                    p.box = AlignedBox(p.box.lo - x0, p.box.hi - x0);
                } else if constexpr (std::is_same_v<T, GaussianDensity>) {
                    p.mean = p.mean - x0;
                } else if constexpr (std::is_same_v<T, SelfSimilar>) {
                    // S'_i(y) = S_i(y + x0) - x0
                    for (IfsMap& m : p.maps) m.offset += (m.ratio - 1.0) * x0[0];
                    p.finalize();
                }
            },
            nt.prim);
        for (Ball& c : nt.clips) c = Ball(c.center - x0, c.radius);
        out.terms.push_back(std::move(nt));
    }
    out.validate();
    return out;
}

Measure dilate(const Measure& mu, double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("dilate: r must be positive and finite");
    const double rn = std::pow(r, -mu.dim);
    Measure out(mu.dim);
    out.lebesgue_weight = mu.lebesgue_weight;  // Lebesgue is dilation invariant
    for (const Term& t : mu.terms) {
        Term nt = t;
        std::visit(
            [&](auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, PointMass>) {
                    p.location = (1.0 / r) * p.location;
                    p.weight *= rn;
                } else if constexpr (std::is_same_v<T, BoxDensity>) {
                    p.box = AlignedBox((1.0 / r) * p.box.lo, (1.0 / r) * p.box.hi);
                } else if constexpr (std::is_same_v<T, GaussianDensity>) {
                    p.mean = (1.0 / r) * p.mean;
                    p.variance /= r * r;
                    p.weight *= rn;
                } else if constexpr (std::is_same_v<T, SelfSimilar>) {
                    for (IfsMap& m : p.maps) m.offset /= r;
                    p.weight *= rn;
                    p.finalize();
                }
            },
            nt.prim);
        for (Ball& c : nt.clips) c = Ball((1.0 / r) * c.center, c.radius / r);
        out.terms.push_back(std::move(nt));
    }
    out.validate();
    return out;
}

Measure restrict_to_ball(const Measure& mu, const Ball& b) {
    require_same_dim(mu.dim, b.dim(), "restrict_to_ball");
    Measure out(mu.dim);

    auto clip_term_1d = [&](Term nt) {
        // in 1-D every clip is an interval; keep a single equivalent clip
        TargetInterval target;
        target.lo = b.center[0] - b.radius;
        target.hi = b.center[0] + b.radius;
        for (const Ball& c : nt.clips)
            target.intersect_open(c.center[0] - c.radius, c.center[0] + c.radius);
        if (target.empty()) return;
        nt.clips.clear();
        if (auto* box = std::get_if<BoxDensity>(&nt.prim)) {
            const double lo = std::max(target.lo, box->box.lo[0]);
            const double hi = std::min(target.hi, box->box.hi[0]);
            if (!(lo < hi)) return;
            box->box = AlignedBox(Vec(1, {lo}), Vec(1, {hi}));
        } else if (auto* pm = std::get_if<PointMass>(&nt.prim)) {
            if (!target.contains(pm->location[0])) return;
        } else {
            nt.clips.push_back(
                Ball(Vec(1, {0.5 * (target.lo + target.hi)}), 0.5 * (target.hi - target.lo)));
        }
        out.terms.push_back(std::move(nt));
    };

    if (mu.lebesgue_weight > 0.0) {
        Term leb{BoxDensity{ball_bounding_box(b), mu.lebesgue_weight}, {}};
        if (mu.dim > 1) leb.clips.push_back(b);
        out.terms.push_back(std::move(leb));
    }
    for (const Term& t : mu.terms) {
        if (mu.dim == 1) {
            clip_term_1d(t);
            continue;
        }
        Term nt = t;
        if (auto* pm = std::get_if<PointMass>(&nt.prim)) {
            bool in = b.contains(pm->location);
            for (const Ball& c : nt.clips) in = in && c.contains(pm->location);
            if (!in) continue;
            nt.clips.clear();
        } else {
            nt.clips.push_back(b);
        }
        out.terms.push_back(std::move(nt));
    }
    out.validate();
    return out;
}

// ============================================================================
// Class M certificate
// ============================================================================

ClassMCertificate class_m_check(const Measure& mu, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("class_m_check: t must be positive");
    const int n = mu.dim;
    double bound = mu.lebesgue_weight * std::pow(4.0 * M_PI * t, 0.5 * n);
    const double sigma = std::sqrt(2.0 * t);  // exp(-|y|^2/4t) is a N(0, 2t) shape
    for (const Term& term : mu.terms) {
        bound += std::visit(
            [&](const auto& p) -> double {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, PointMass>) {
                    return p.weight * std::exp(-0.25 * p.location.norm2() / t);
                } else if constexpr (std::is_same_v<T, BoxDensity>) {
                    double v = p.level;
                    for (int i = 0; i < n; ++i)
                        v *= sigma * std::sqrt(2.0 * M_PI) *
                             gauss_interval_mass(0.0, sigma, p.box.lo[i], p.box.hi[i]);
                    return v;
                } else if constexpr (std::is_same_v<T, GaussianDensity>) {
                    const double s2 = p.variance + 2.0 * t;
                    return p.weight * std::pow(2.0 * t / s2, 0.5 * n) *
                           std::exp(-0.5 * p.mean.norm2() / s2);
                } else {
                    const double d = (0.0 < p.hull_lo)   ? p.hull_lo
                                     : (0.0 > p.hull_hi) ? -p.hull_hi
                                                         : 0.0;
                    return p.weight * std::exp(-0.25 * d * d / t);
                }
            },
            term.prim);
    }
    return {true, bound};
}

}  // namespace heatlab
