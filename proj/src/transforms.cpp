#include "horocauchy/transforms.hpp"

#include <cmath>
#include <optional>
#include <string>

#include <Eigen/Geometry>

#include "horocauchy/errors.hpp"
#include "horocauchy/quadrature.hpp"

namespace horocauchy {

namespace {

void require_finite(Complex v, std::size_t node, const char* what) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw NumericalError(std::string("non-finite ") + what + " at node " + std::to_string(node));
    }
}

/// Real orthonormal frame with e1 along Re(v) and e2 along the part of Im(v) orthogonal to it.
Eigen::Matrix3d kernel_frame(const CVector& v) {
    const Eigen::Vector3d re = v.real();
    const Eigen::Vector3d im = v.imag();
    Eigen::Vector3d e1, e2;
    if (re.norm() > 1e-300) {
        e1 = re.normalized();
    } else if (im.norm() > 1e-300) {
        e1 = im.normalized();
    } else {
        return Eigen::Matrix3d::Identity();
    }
    e2 = im - im.dot(e1) * e1;
    if (e2.norm() < 1e-12 * std::max(1.0, im.norm())) {
        Eigen::Index axis = 0;
        e1.cwiseAbs().minCoeff(&axis);
        const Eigen::Vector3d a = Eigen::Vector3d::Unit(axis);
        e2 = a - a.dot(e1) * e1;
    }
    e2.normalize();
    Eigen::Matrix3d r;
    r.col(0) = e1;
    r.col(1) = e2;
    r.col(2) = e1.cross(e2);
    return r;
}

void check_separation(const TransformContext& ctx, const Cycle& cycle, const CVector& zeta, Complex p) {
    const SeparationResult sep = kernel_separation(zeta, p, cycle, /*refine=*/true);
    if (sep.distance <= ctx.separation_threshold()) {
        const auto& param = cycle.node(sep.node).param;
        std::string where = "(";
        for (std::size_t k = 0; k < param.size(); ++k) where += (k ? ", " : "") + std::to_string(param[k]);
        throw DomainError("kernel singular on the cycle: |p - zeta.z| = " + std::to_string(sep.distance) +
                          " at node " + std::to_string(sep.node) + " " + where + ")");
    }
}

} // namespace

TransformContext::TransformContext(Cycle sphere_cycle, double separation_threshold, int circle_nodes, bool align)
    : cycle_(std::move(sphere_cycle)), threshold_(separation_threshold), circle_nodes_(circle_nodes), align_(align) {
    if (cycle_.manifold() != CycleManifold::Sphere || cycle_.dim() != cycle_.space().dim()) {
        throw ArgumentError("transform context needs a sphere cycle of dimension d");
    }
    if (circle_nodes_ < 1) {
        throw ArgumentError("circle node count must be positive");
    }
    omega_weights_ = form_weights(FormSpec::omega(), cycle_);
}

TransformContext TransformContext::standard(int n_polar, int n_azimuthal, int circle_nodes) {
    return TransformContext(standard_sphere_cycle(2, n_polar, n_azimuthal), kDefaultSeparationThreshold, circle_nodes);
}

TransformContext TransformContext::with_cycle(Cycle cycle) const {
    return TransformContext(std::move(cycle), threshold_, circle_nodes_, align_);
}

TransformContext TransformContext::with_alignment(bool align) const {
    return TransformContext(cycle_, threshold_, circle_nodes_, align);
}

namespace {

std::optional<Cycle> aligned_cycle(const TransformContext& ctx, const CVector& zeta) {
    const Cycle& base = ctx.sphere_cycle();
    if (!ctx.align_quadrature() || !base.sphere_frame() || base.grid_shape().size() != 2) {
        return std::nullopt;
    }
    const CMatrix& frame = *base.sphere_frame();
    // zeta . (F x) = (F^T zeta) . x for the Euclidean form.
    const CVector pulled = frame.transpose() * zeta;
    const CMatrix aligned = frame * kernel_frame(pulled).cast<Complex>();
    Cycle cycle = sphere_cycle(aligned, base.grid_shape()[0], base.grid_shape()[1]);
    return base.orientation() == 1 ? cycle : cycle.with_orientation(base.orientation());
}

} // namespace

Cycle quadrature_cycle(const TransformContext& ctx, const CVector& zeta) {
    auto aligned = aligned_cycle(ctx, zeta);
    return aligned ? std::move(*aligned) : ctx.sphere_cycle();
}

std::vector<Complex> forward_extended_derivatives(const TransformContext& ctx, const SphereFunction& f,
                                                  const CVector& zeta, Complex p, int max_order) {
    const QuadraticSpace& space = ctx.space();
    space.check(zeta);
    if (max_order < 0) {
        throw ArgumentError("derivative order must be >= 0");
    }
    const std::optional<Cycle> aligned = aligned_cycle(ctx, zeta);
    const Cycle& cycle = aligned ? *aligned : ctx.sphere_cycle();
    check_separation(ctx, cycle, zeta, p);
    const std::vector<Complex> weights = aligned ? form_weights(FormSpec::omega(), cycle) : ctx.omega_weights();

    std::vector<CompensatedSum> sums(max_order + 1);
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const CVector& z = cycle.node(i).point;
        const Complex fz = f(z);
        require_finite(fz, i, "integrand");
        const Complex inv = 1.0 / (p - space.pair(zeta, z));
        Complex term = weights[i] * fz * inv;
        double factor = 1.0;
        for (int k = 0; k <= max_order; ++k) {
            sums[k].add(factor * term);
            term *= inv;
            factor *= -(k + 1.0);
        }
    }
    std::vector<Complex> out(max_order + 1);
    for (int k = 0; k <= max_order; ++k) out[k] = sums[k].value();
    return out;
}

Complex forward_extended(const TransformContext& ctx, const SphereFunction& f, const CVector& zeta, Complex p) {
    return forward_extended_derivatives(ctx, f, zeta, p, 0)[0];
}

Complex forward(const TransformContext& ctx, const SphereFunction& f, const ConePoint& zeta) {
    if (!(zeta.space() == ctx.space())) {
        throw ArgumentError("cone point and context use different quadratic spaces");
    }
    return forward_extended(ctx, f, zeta.coords(), 1.0);
}

std::vector<Complex> weighted_samples(const TransformContext& ctx, const SphereFunction& f) {
    const Cycle& cycle = ctx.sphere_cycle();
    std::vector<Complex> out(cycle.size());
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const Complex fz = f(cycle.node(i).point);
        require_finite(fz, i, "integrand");
        out[i] = ctx.omega_weights()[i] * fz;
    }
    return out;
}

std::vector<Complex> fourier_components(const TransformContext& ctx, const std::vector<Complex>& samples,
                                        int max_degree, const CVector& zeta) {
    const Cycle& cycle = ctx.sphere_cycle();
    if (samples.size() != cycle.size()) {
        throw ArgumentError("sample vector does not match the context cycle");
    }
    if (max_degree < 0) {
        throw ArgumentError("harmonic degree must be >= 0");
    }
    ctx.space().check(zeta);
    std::vector<CompensatedSum> sums(max_degree + 1);
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const Complex t = ctx.space().pair(zeta, cycle.node(i).point);
        Complex term = samples[i];
        for (int m = 0; m <= max_degree; ++m) {
            sums[m].add(term);
            term *= t;
        }
    }
    std::vector<Complex> out(max_degree + 1);
    for (int m = 0; m <= max_degree; ++m) out[m] = sums[m].value();
    return out;
}

Complex fourier_component(const TransformContext& ctx, const SphereFunction& f, int m, const ConePoint& zeta) {
    if (m < 0) {
        throw ArgumentError("harmonic degree must be >= 0");
    }
    return fourier_components(ctx, weighted_samples(ctx, f), m, zeta.coords())[m];
}

Complex series_sum(const TransformContext& ctx, const SphereFunction& f, const ConePoint& zeta, int max_degree) {
    const Cycle& cycle = ctx.sphere_cycle();
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const double q = std::abs(ctx.space().pair(zeta.coords(), cycle.node(i).point));
        if (q >= 1.0) {
            throw DomainError("geometric series diverges: |zeta.z| = " + std::to_string(q) + " at node " +
                              std::to_string(i));
        }
    }
    const auto comps = fourier_components(ctx, weighted_samples(ctx, f), max_degree, zeta.coords());
    CompensatedSum sum;
    for (const Complex& c : comps) sum.add(c);
    return sum.value();
}

Complex dual_extended(const ConeFunction& F, const CVector& z, const Cycle& lcycle) {
    if (lcycle.manifold() != CycleManifold::Section) {
        throw ArgumentError("dual transform integrates over a section cycle L_R(x)");
    }
    return integrate(lcycle, F, FormSpec::nu_at(z));
}

Complex dual(const ConeFunction& F, const SpherePoint& x, const Cycle& lcycle) {
    if (!lcycle.section_base() || (*lcycle.section_base() - x.coords()).norm() > 1e-12) {
        throw ArgumentError("cycle is not L_R(x) for the given point");
    }
    return dual_extended(F, x.coords(), lcycle);
}

std::vector<Complex> projectors(const TransformContext& ctx, const std::vector<Complex>& samples, int max_degree,
                                const SpherePoint& x) {
    const Cycle lc = l_cycle(x, ctx.circle_nodes());
    const std::vector<Complex> nu = form_weights(FormSpec::nu(x), lc);
    std::vector<CompensatedSum> sums(max_degree + 1);
    for (std::size_t j = 0; j < lc.size(); ++j) {
        const auto comps = fourier_components(ctx, samples, max_degree, lc.node(j).point);
        for (int m = 0; m <= max_degree; ++m) sums[m].add(nu[j] * comps[m]);
    }
    std::vector<Complex> out(max_degree + 1);
    for (int m = 0; m <= max_degree; ++m) out[m] = sums[m].value();
    return out;
}

Complex projector(const TransformContext& ctx, const SphereFunction& f, int m, const SpherePoint& x) {
    if (m < 0) {
        throw ArgumentError("harmonic degree must be >= 0");
    }
    return projectors(ctx, weighted_samples(ctx, f), m, x)[m];
}

} // namespace horocauchy
