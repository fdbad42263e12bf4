#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "heatlab/geometry.hpp"
#include "heatlab/region_integrate.hpp"
#include "heatlab/tolerances.hpp"

namespace heatlab {

// ============================================================================
// Primitives
// ============================================================================

struct PointMass {
    Vec location;
    double weight = 1.0;
};

struct BoxDensity {
    AlignedBox box;
    double level = 1.0;
};

struct GaussianDensity {
    Vec mean;
    double variance = 1.0;
    double weight = 1.0;
    double sigma() const { return std::sqrt(variance); }
};

/// y -> ratio * y + offset, ratio in (0,1)
struct IfsMap {
    double ratio = 1.0 / 3.0;
    double offset = 0.0;
    double fixed_point() const { return offset / (1.0 - ratio); }
};

/// Invariant measure of a 1-D iterated function system, scaled by `weight`:
/// mu = weight * sum_i p_i * mu o S_i^{-1}.
struct SelfSimilar {
    std::vector<IfsMap> maps;
    std::vector<double> probs;
    double weight = 1.0;

    // derived at construction
    double hull_lo = 0.0;   ///< convex hull of the attractor
    double hull_hi = 1.0;
    double barycenter = 0.5;

    void finalize();  ///< validates and computes hull/barycenter
    static SelfSimilar standard_cantor(double weight = 1.0);
};

using Primitive = std::variant<PointMass, BoxDensity, GaussianDensity, SelfSimilar>;

/// One summand of a measure: a primitive, optionally restricted to open balls.
struct Term {
    Primitive prim;
    std::vector<Ball> clips;
};

/// Positive Borel measure on R^n (n in {1,2,3}) represented as an optional
/// multiple of Lebesgue measure plus a finite sum of primitive terms.
struct Measure {
    int dim = 1;
    double lebesgue_weight = 0.0;
    std::vector<Term> terms;

    Measure() = default;
    explicit Measure(int n) : dim(n) {
        if (n < 1 || n > 3) throw std::invalid_argument("Measure: dimension must be 1, 2 or 3");
    }

    static Measure lebesgue(int n);
    static Measure point_mass(const Vec& location, double weight);
    static Measure box_density(const AlignedBox& box, double level);
    static Measure gaussian(const Vec& mean, double variance, double weight);
    static Measure self_similar(SelfSimilar ss);

    Measure& add(Primitive p, std::vector<Ball> clips = {});
    Measure& add_lebesgue(double weight);

    bool is_zero() const { return lebesgue_weight == 0.0 && terms.empty(); }
    void validate() const;  ///< throws on any invariant violation
};

// ============================================================================
// Operations
// ============================================================================

/// mu(B) for an open ball, certified to within abs_tol.
double ball_mass(const Measure& mu, const Ball& b, double abs_tol = 1e-10);
CertifiedValue ball_mass_certified(const Measure& mu, const Ball& b, double abs_tol = 1e-10);

/// 1-D interval mass with explicit endpoint semantics (needed for the
/// distribution-function difference quotients, where [a,b) is the rule).
double interval_mass(const Measure& mu, double a, double b, bool include_left,
                     bool include_right, double abs_tol = 1e-10);

/// nu(E) = mu(E + x0)  (support moves by -x0)
Measure translate(const Measure& mu, const Vec& x0);

/// nu_r(E) = r^{-n} mu(rE)
Measure dilate(const Measure& mu, double r);

/// restriction of mu to the open ball b
Measure restrict_to_ball(const Measure& mu, const Ball& b);

struct ClassMCertificate {
    bool finite = true;   ///< always true for this representation
    double bound = 0.0;   ///< upper bound on int exp(-|y|^2/4t) dmu(y)
};

/// Certifies that the Gauss-Weierstrass integral of mu exists at time t and
/// reports the Gaussian-weighted mass bound used for tail control.
ClassMCertificate class_m_check(const Measure& mu, double t);

// ============================================================================
// Self-similar cylinder engine
// ============================================================================

/// int g d(cylinder measure) over the part of the attractor inside the open
/// interval (clip_lo, clip_hi), certified by adaptive cylinder refinement.
///
/// g_range, when given, returns exact [min,max] of g on an interval (used for
/// the unimodal heat kernel); lip and m2 are global bounds on |g'| and |g''|
/// (either may be infinity). The per-cylinder error is the best of the three.
CertifiedValue self_similar_integral(
    const SelfSimilar& ss, double clip_lo, double clip_hi,
    const std::function<double(double)>& g,
    const std::function<void(double, double, double&, double&)>& g_range, double lip, double m2,
    double abs_tol, int max_cylinders = 2000000);

}  // namespace heatlab
