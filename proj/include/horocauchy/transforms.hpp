#pragma once

#include <functional>
#include <vector>

#include "horocauchy/cycle.hpp"
#include "horocauchy/quadric.hpp"

namespace horocauchy {

/// Functions on the sphere side (f) and on the cone side (F) share one signature.
using SphereFunction = std::function<Complex(const CVector&)>;
using ConeFunction = std::function<Complex(const CVector&)>;

inline constexpr double kDefaultSeparationThreshold = 1e-6;

/**
 * Integration data of the sphere side: a cycle S(u) with its omega-weights,
 * the kernel separation threshold, and the node count used for L_R(x).
 *
 * With align_quadrature set, forward() and forward_extended() integrate over
 * the same cycle re-parametrised by g.R.S(0), where R is a real rotation
 * taking e1, e2 onto the real and imaginary directions of g^T zeta. The cycle
 * (as a set) is unchanged; only the placement of the nodes follows the kernel.
 */
class TransformContext {
public:
    explicit TransformContext(Cycle sphere_cycle, double separation_threshold = kDefaultSeparationThreshold,
                              int circle_nodes = 64, bool align_quadrature = true);

    /// S(0) for d = 2 with the given node counts.
    static TransformContext standard(int n_polar = 64, int n_azimuthal = 64, int circle_nodes = 64);

    const QuadraticSpace& space() const noexcept { return cycle_.space(); }
    const Cycle& sphere_cycle() const noexcept { return cycle_; }
    const std::vector<Complex>& omega_weights() const noexcept { return omega_weights_; }
    double separation_threshold() const noexcept { return threshold_; }
    int circle_nodes() const noexcept { return circle_nodes_; }
    bool align_quadrature() const noexcept { return align_; }

    TransformContext with_cycle(Cycle cycle) const;
    TransformContext with_alignment(bool align) const;

private:
    Cycle cycle_;
    std::vector<Complex> omega_weights_;
    double threshold_;
    int circle_nodes_;
    bool align_;
};

/// The cycle actually used for the kernel at zeta (aligned re-parametrisation or the context cycle).
Cycle quadrature_cycle(const TransformContext& ctx, const CVector& zeta);

/// f-hat(zeta) = integral over S of f omega / (1 - zeta . z).
Complex forward(const TransformContext& ctx, const SphereFunction& f, const ConePoint& zeta);

/// Homogeneous degree -1 extension: integral of f omega / (p - zeta . z), zeta anywhere in C^{d+1}.
Complex forward_extended(const TransformContext& ctx, const SphereFunction& f, const CVector& zeta, Complex p);

/// k-th p-derivative of the extension, (-1)^k k! integral f omega / (p - zeta . z)^{k+1}, for k = 0..max_order.
std::vector<Complex> forward_extended_derivatives(const TransformContext& ctx, const SphereFunction& f,
                                                  const CVector& zeta, Complex p, int max_order);

/// f(z) times omega-weight at every node of the context cycle.
std::vector<Complex> weighted_samples(const TransformContext& ctx, const SphereFunction& f);

/// f-tilde(m; zeta) = integral over S of f (zeta . z)^m omega.
Complex fourier_component(const TransformContext& ctx, const SphereFunction& f, int m, const ConePoint& zeta);

/// f-tilde(m; zeta) for m = 0..max_degree from precomputed weighted samples; zeta need not be null.
std::vector<Complex> fourier_components(const TransformContext& ctx, const std::vector<Complex>& samples,
                                        int max_degree, const CVector& zeta);

/// Partial sum of the geometric-series expansion of the kernel, degrees 0..M.
Complex series_sum(const TransformContext& ctx, const SphereFunction& f, const ConePoint& zeta, int max_degree);

/// F-check(x) = integral over L_R(x) of F nu_x.
Complex dual(const ConeFunction& F, const SpherePoint& x, const Cycle& lcycle);

/// Same integral with an arbitrary vector z in the first bracket column and the cycle held fixed.
Complex dual_extended(const ConeFunction& F, const CVector& z, const Cycle& lcycle);

/// f_m(x) = integral over L_R(x) of f-tilde(m; zeta) nu_x(dzeta).
Complex projector(const TransformContext& ctx, const SphereFunction& f, int m, const SpherePoint& x);

/// f_m(x) for m = 0..max_degree from precomputed weighted samples.
std::vector<Complex> projectors(const TransformContext& ctx, const std::vector<Complex>& samples, int max_degree,
                                const SpherePoint& x);

} // namespace horocauchy
