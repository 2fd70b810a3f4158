#pragma once

#include <optional>
#include <span>
#include <vector>

#include "horocauchy/quadric.hpp"
#include "horocauchy/test_functions.hpp"
#include "horocauchy/transforms.hpp"

namespace horocauchy {

/// zeta = lambda xi with xi real, box(xi) = 0; Im lambda != 0 unless on the boundary (lambda real).
class XiHPoint {
public:
    static XiHPoint interior(const QuadraticSpace& space, Complex lambda, RVector xi);
    static XiHPoint boundary(const QuadraticSpace& space, RVector xi, double lambda = 1.0);

    Complex lambda() const noexcept { return lambda_; }
    const RVector& xi() const noexcept { return xi_; }
    bool on_boundary() const noexcept { return boundary_; }
    CVector zeta() const { return lambda_ * xi_.cast<Complex>(); }

private:
    XiHPoint(const QuadraticSpace& space, Complex lambda, RVector xi, bool boundary);

    Complex lambda_;
    RVector xi_;
    bool boundary_;
};

/// A function on H known to vanish outside the geodesic ball of `radius` around `center`.
struct SupportedFunction {
    SphereFunction f;
    HyperboloidPoint center;
    double radius;

    static SupportedFunction from_bump(const TestFunction& bump);
};

/**
 * Geodesic-polar product grid around the support center: Gauss-Legendre in r
 * on [0, radius] (n_radial) and on [radius, r_max] (n_outer), trapezoid in
 * the angle. r_max defaults to radius + margin.
 *
 * Boundary values use horocyclic coordinates instead: n_along Gauss nodes on
 * each horocycle's exact support interval, and Gauss panels of panel_order
 * nodes in t = xi.z, graded geometrically toward the kernel pole down to a
 * width of min_panel (relative to the pole location).
 */
struct HyperbolicGrid {
    int n_radial = 96;
    int n_outer = 16;
    int n_angular = 128;
    double margin = 0.1;
    int n_along = 64;
    int panel_order = 16;
    int n_panels = 8;
    double min_panel = 1e-7;
};

/// Nodes z of the H-chart with f(z) times the omega_H weight 2 det[z, z_r, z_theta] dr dtheta.
struct HyperbolicQuadrature {
    QuadraticSpace space;
    std::vector<CVector> points;
    std::vector<Complex> weighted;
    double r_max = 0.0;
    SupportedFunction source;
    HyperbolicGrid grid;
};

/**
 * Push-forward of f omega_H under z -> t = xi_hat . z, xi_hat = xi / xi_0:
 * integral over H of f omega_H g(xi_hat . z) = sum_i weight_i h_i g(t_i).
 * Each h_i integrates f along the horocycle xi_hat . z = t_i.
 */
struct HorocyclicProfile {
    RVector direction; ///< xi_hat, with direction_0 = 1
    std::vector<double> t;
    std::vector<double> weight;
    std::vector<Complex> h;
};

/// Profile for the direction of xi; t-panels are graded toward `pole` when it lies inside the support.
HorocyclicProfile horocyclic_profile(const SupportedFunction& f, const RVector& xi, const HyperbolicGrid& grid = {},
                                     std::optional<double> pole = std::nullopt);

/// (-1)^k k! sum_i weight_i h_i / (p - a t_i)^{k+1}, k = 0..max_order; a = lambda xi_0 for zeta = lambda xi.
std::vector<Complex> profile_kernel_integrals(const HorocyclicProfile& profile, Complex a, Complex p, int max_order);

HyperbolicQuadrature hyperbolic_quadrature(const SupportedFunction& f, const HyperbolicGrid& grid = {},
                                           std::optional<double> r_max = std::nullopt);

/// (-1)^k k! integral over H of f omega_H / (p - zeta . z)^{k+1}, k = 0..max_order.
std::vector<Complex> hyperbolic_kernel_integrals(const HyperbolicQuadrature& quad, const CVector& zeta, Complex p,
                                                 int max_order);

/// f-hat(zeta) = integral over H of f omega_H / (1 - zeta . z).
Complex hyperbolic_forward(const HyperbolicQuadrature& quad, const XiHPoint& zeta);
Complex hyperbolic_forward(const SupportedFunction& f, const XiHPoint& zeta, const HyperbolicGrid& grid = {},
                           std::optional<double> r_max = std::nullopt);

/// 0.1, 0.05, ... down to 1e-4.
std::vector<double> default_boundary_eps();

struct BoundaryValue {
    Complex value;                       ///< extrapolated limit eps -> 0 (diagonal entry with the smallest correction)
    double tail_slope = 0.0;             ///< |g(eps_K) - g(eps_{K-1})| / (eps_{K-1} - eps_K)
    std::vector<double> eps;
    std::vector<Complex> samples;        ///< g(eps_k)
    std::vector<double> error_estimates; ///< successive differences of the extrapolation diagonal
    bool monotone = true;                ///< estimates strictly decrease until they reach 1e-8 |value|
};

/// Polynomial (Neville) extrapolation of g(eps_k) to eps = 0 with convergence diagnostics.
BoundaryValue extrapolate_to_boundary(std::span<const double> eps, std::span<const Complex> samples);

/// Limit of f-hat((1 + i eps) xi) as eps -> 0+, sampled on the horocyclic profile of xi.
BoundaryValue boundary_value(const HyperbolicQuadrature& quad, const RVector& xi,
                             std::span<const double> eps = {});

/// Limit of (L f-hat)((1 + i eps) xi), with L applied through the p-derivatives of the integrand.
BoundaryValue ell_boundary_value(const HyperbolicQuadrature& quad, const RVector& xi,
                                 std::span<const double> eps = {});

/// Circle xi(s) = x + mu(s), mu . x = 0, mu . mu = -1, with trapezoid nodes in s.
struct HyperbolicCycle {
    HyperboloidPoint basepoint;
    std::vector<double> params;
    std::vector<double> weights;
    std::vector<RVector> mu;
    std::vector<RVector> dmu;

    RVector point(std::size_t i) const { return basepoint.coords() + mu[i]; }
    std::size_t size() const noexcept { return params.size(); }
};

HyperbolicCycle hyperbolic_cycle(const HyperboloidPoint& x, int n_nodes);

using BoundaryFunction = std::function<Complex(const RVector&)>;

/// F-check(x) = integral over the cycle of F(xi) (d-1)! det[x, xi, xi'] ds.
Complex hyperbolic_dual(const BoundaryFunction& F, const HyperboloidPoint& x, int n_nodes = 64);

/// SO(1, d) boost taking (1, 0, ..., 0) to x.
RMatrix lorentz_boost(const HyperboloidPoint& x);

struct HyperbolicInversionProbe {
    std::vector<Complex> values;    ///< dual of the boundary values of L f-hat at each point
    std::vector<Complex> reference; ///< f at each point
    std::vector<Complex> ratios;
    Complex constant = 0.0;         ///< mean ratio
    double spread = 0.0;            ///< max |ratio / constant - 1|
};

/// Exploratory: compares x -> (L f-hat)^check(x) with f(x) up to one measured constant.
HyperbolicInversionProbe probe_hyperbolic_inversion(const SupportedFunction& f,
                                                    std::span<const HyperboloidPoint> points,
                                                    const HyperbolicGrid& grid, int cycle_nodes,
                                                    std::span<const double> eps);

} // namespace horocauchy
