#pragma once

namespace heatlab {

/// Numerical knobs shared across the lab. Defaults chosen so that each layer's
/// error budget sits well below the one that consumes it:
/// mass (1e-10) < gw (1e-8) < dual (1e-7) < limit (1e-6) < agree (1e-4).
struct Tolerances {
    double mass = 1e-10;    ///< absolute ball-mass error
    double gw = 1e-8;       ///< absolute Gauss-Weierstrass evaluation error
    double dual = 1e-7;     ///< duality residual budget
    double limit = 1e-6;    ///< oscillation threshold for limit detection
    double agree = 1e-4;    ///< agreement threshold between independent limits
    double max_slack = 1e-6;///< slack for maximal-function comparisons

    double unbounded_threshold = 1e12;  ///< quotient level that counts as blow-up

    // geometric scale grid r_k = scale_r0 * scale_rho^k, k <= scale_max_k
    double scale_r0 = 1.0;
    double scale_rho = 0.5;
    int scale_max_k = 60;
    int stability_window = 5;  ///< K consecutive samples checked for convergence

    // parabolic-limit slice sampler
    double slice_shrink = 1e-3;  ///< keeps slice samples strictly inside the open region
    int slice_points = 33;       ///< samples per axis on a region slice

    // maximal-function search
    int maximal_grid_lo = -60;   ///< r = 2^k grid, lowest k
    int maximal_grid_hi = 20;    ///< highest k
    int golden_iters = 20;

    // parabolic maximal sampler
    double pmax_t_lo = 1e-12;
    double pmax_t_hi = 1e4;
    int pmax_t_steps = 61;
};

inline const Tolerances& default_tolerances() {
    static const Tolerances t{};
    return t;
}

}  // namespace heatlab
