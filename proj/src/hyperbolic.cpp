#include "horocauchy/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/LU>

#include "horocauchy/errors.hpp"
#include "horocauchy/quadrature.hpp"
#include "horocauchy/spectral.hpp"

namespace horocauchy {

namespace {

constexpr double kDenominatorFloor = 1e-10;
constexpr double kCycleTolerance = 1e-12;
constexpr double kExtrapolationFloor = 1e-8;

void check_null(const QuadraticSpace& space, const RVector& xi) {
    if (space.is_euclidean()) {
        throw ArgumentError("Xi_H lives in a Lorentzian space");
    }
    const CVector c = xi.cast<Complex>();
    space.check(c);
    if (xi.norm() == 0.0) {
        throw ValidationError("xi must be nonzero");
    }
    if (std::abs(space.delta(c)) > 1e-10 * xi.squaredNorm()) {
        throw ValidationError("xi is not a null vector of the Lorentzian form");
    }
}

} // namespace

XiHPoint::XiHPoint(const QuadraticSpace& space, Complex lambda, RVector xi, bool boundary)
    : lambda_(lambda), xi_(std::move(xi)), boundary_(boundary) {
    check_null(space, xi_);
}

XiHPoint XiHPoint::interior(const QuadraticSpace& space, Complex lambda, RVector xi) {
    if (lambda.imag() == 0.0) {
        throw ValidationError("interior points of Xi_H need Im lambda != 0");
    }
    return XiHPoint(space, lambda, std::move(xi), false);
}

XiHPoint XiHPoint::boundary(const QuadraticSpace& space, RVector xi, double lambda) {
    return XiHPoint(space, lambda, std::move(xi), true);
}

SupportedFunction SupportedFunction::from_bump(const TestFunction& bump) {
    if (bump.kind() != TestFunction::Kind::Bump) {
        throw ArgumentError("expected a bump test function");
    }
    return {[bump](const CVector& z) { return bump(z); }, *bump.center(), bump.radius()};
}

RMatrix lorentz_boost(const HyperboloidPoint& x) {
    const int n = x.space().ambient();
    const RVector& c = x.coords();
    const RVector v = c.tail(n - 1);
    RMatrix b(n, n);
    b(0, 0) = c[0];
    b.block(0, 1, 1, n - 1) = v.transpose();
    b.block(1, 0, n - 1, 1) = v;
    b.block(1, 1, n - 1, n - 1) = RMatrix::Identity(n - 1, n - 1) + v * v.transpose() / (1.0 + c[0]);
    return b;
}

HyperbolicQuadrature hyperbolic_quadrature(const SupportedFunction& f, const HyperbolicGrid& grid,
                                           std::optional<double> r_max) {
    const QuadraticSpace& space = f.center.space();
    if (space.dim() != 2) {
        throw FeatureError("hyperbolic quadrature is implemented for d = 2");
    }
    if (grid.n_radial < 1 || grid.n_angular < 1 || grid.n_outer < 0) {
        throw ArgumentError("hyperbolic grid needs positive node counts");
    }
    const double radius = f.radius;
    const double outer = r_max.value_or(radius + grid.margin);
    if (radius > outer) {
        throw ArgumentError("support radius " + std::to_string(radius) + " exceeds r_max " + std::to_string(outer));
    }

    // Panels [0, radius] and [radius, r_max]; f vanishes identically on the second.
    QuadratureRule radial = gauss_legendre(grid.n_radial, 0.0, radius);
    if (outer > radius && grid.n_outer > 0) {
        const QuadratureRule tail = gauss_legendre(grid.n_outer, radius, outer);
        radial.nodes.insert(radial.nodes.end(), tail.nodes.begin(), tail.nodes.end());
        radial.weights.insert(radial.weights.end(), tail.weights.begin(), tail.weights.end());
    }
    const QuadratureRule angular = periodic_trapezoid(grid.n_angular, 0.0, 2.0 * std::numbers::pi);
    const Eigen::Matrix3d boost = lorentz_boost(f.center);

    HyperbolicQuadrature quad{space, {}, {}, outer, f, grid};
    quad.points.reserve(radial.nodes.size() * angular.nodes.size());
    quad.weighted.reserve(quad.points.capacity());
    for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
        const double r = radial.nodes[i];
        const double ch = std::cosh(r), sh = std::sinh(r);
        for (std::size_t j = 0; j < angular.nodes.size(); ++j) {
            const double c = std::cos(angular.nodes[j]), s = std::sin(angular.nodes[j]);
            Eigen::Matrix3d frame;
            frame.col(0) = boost * Eigen::Vector3d(ch, sh * c, sh * s);
            frame.col(1) = boost * Eigen::Vector3d(sh, ch * c, ch * s);
            frame.col(2) = boost * Eigen::Vector3d(0.0, -sh * s, sh * c);
            const CVector z = frame.col(0).cast<Complex>();
            const Complex fz = f.f(z);
            if (!std::isfinite(fz.real()) || !std::isfinite(fz.imag())) {
                throw NumericalError("non-finite function value on the hyperboloid grid");
            }
            const double density = 2.0 * frame.determinant(); // d! det[z, z_r, z_theta]
            quad.points.push_back(z);
            quad.weighted.push_back(radial.weights[i] * angular.weights[j] * density * fz);
        }
    }
    return quad;
}

namespace {

/// Gauss panels on [a, b], graded geometrically toward `pole` when it lies strictly inside.
QuadratureRule graded_rule(double a, double b, std::optional<double> pole, const HyperbolicGrid& grid) {
    std::vector<double> breaks;
    const auto uniform = [&](double lo, double hi) {
        for (int k = 0; k <= grid.n_panels; ++k) breaks.push_back(lo + (hi - lo) * k / grid.n_panels);
    };
    if (pole && *pole > a && *pole < b) {
        const double floor = grid.min_panel * std::abs(*pole);
        std::vector<double> left{a}, right{b};
        for (double w = (*pole - a) / 2; w > floor; w /= 2) left.push_back(*pole - w);
        for (double w = (b - *pole) / 2; w > floor; w /= 2) right.push_back(*pole + w);
        breaks = left;
        breaks.push_back(*pole);
        breaks.insert(breaks.end(), right.rbegin(), right.rend());
    } else {
        uniform(a, b);
    }
    const QuadratureRule unit = gauss_legendre(grid.panel_order, -1.0, 1.0);
    QuadratureRule rule;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const QuadratureRule panel = mapped(unit, breaks[k], breaks[k + 1]);
        rule.nodes.insert(rule.nodes.end(), panel.nodes.begin(), panel.nodes.end());
        rule.weights.insert(rule.weights.end(), panel.weights.begin(), panel.weights.end());
    }
    return rule;
}

} // namespace

HorocyclicProfile horocyclic_profile(const SupportedFunction& f, const RVector& xi, const HyperbolicGrid& grid,
                                     std::optional<double> pole) {
    const QuadraticSpace& space = f.center.space();
    if (space.dim() != 2) {
        throw FeatureError("horocyclic profiles are implemented for d = 2");
    }
    check_null(space, xi);
    if (xi[0] <= 0.0) {
        throw ValidationError("xi must lie on the future null cone");
    }
    if (grid.n_along < 1 || grid.panel_order < 1 || grid.n_panels < 1 || !(grid.min_panel > 0.0)) {
        throw ArgumentError("horocyclic grid needs positive node counts and panel floor");
    }
    // Null frame: n . m = 2, e . e = -1, e orthogonal to both; z(t, b) = (1 + b^2)/(2t) n + t/2 m + b e
    // has n . z = t and omega_H = (2 / t) dt db.
    const Eigen::Vector3d n = xi / xi[0];
    const Eigen::Vector3d m(1.0, -n[1], -n[2]);
    const Eigen::Vector3d e(0.0, -n[2], n[1]);
    const Eigen::Vector3d c = f.center.coords();
    const auto lp = [](const Eigen::Vector3d& u, const Eigen::Vector3d& v) { return u[0] * v[0] - u[1] * v[1] - u[2] * v[2]; };
    const double cn = lp(c, n), cm = lp(c, m), ce = lp(c, e);
    const double ch = std::cosh(f.radius);

    HorocyclicProfile out{n, {}, {}, {}};
    const QuadratureRule along = gauss_legendre(grid.n_along, -1.0, 1.0);
    const QuadratureRule trule = graded_rule(cn * std::exp(-f.radius), cn * std::exp(f.radius), pole, grid);
    for (std::size_t i = 0; i < trule.nodes.size(); ++i) {
        const double t = trule.nodes[i];
        // c . z(t, b) <= cosh(radius) is a quadratic condition in b.
        const double A = cn / (2.0 * t), B = ce, C = cn / (2.0 * t) + cm * t / 2.0 - ch;
        const double disc = B * B - 4.0 * A * C;
        CompensatedSum sum;
        if (disc > 0.0) {
            const double root = std::sqrt(disc);
            const QuadratureRule brule = mapped(along, (-B - root) / (2.0 * A), (-B + root) / (2.0 * A));
            for (std::size_t j = 0; j < brule.nodes.size(); ++j) {
                const double b = brule.nodes[j];
                const Eigen::Vector3d z = (1.0 + b * b) / (2.0 * t) * n + t / 2.0 * m + b * e;
                const Complex fz = f.f(z.cast<Complex>());
                if (!std::isfinite(fz.real()) || !std::isfinite(fz.imag())) {
                    throw NumericalError("non-finite function value on a horocycle");
                }
                sum.add(brule.weights[j] * fz);
            }
        }
        out.t.push_back(t);
        out.weight.push_back(trule.weights[i] * 2.0 / t);
        out.h.push_back(sum.value());
    }
    return out;
}

std::vector<Complex> profile_kernel_integrals(const HorocyclicProfile& profile, Complex a, Complex p, int max_order) {
    std::vector<CompensatedSum> sums(max_order + 1);
    for (std::size_t i = 0; i < profile.t.size(); ++i) {
        if (profile.h[i] == 0.0) continue;
        const Complex den = p - a * profile.t[i];
        if (std::abs(den) < kDenominatorFloor) {
            throw DomainError("hyperbolic kernel denominator below 1e-10 at horocycle t = " + std::to_string(profile.t[i]));
        }
        const Complex inv = 1.0 / den;
        Complex term = profile.weight[i] * profile.h[i] * inv;
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

std::vector<Complex> hyperbolic_kernel_integrals(const HyperbolicQuadrature& quad, const CVector& zeta, Complex p,
                                                 int max_order) {
    quad.space.check(zeta);
    std::vector<CompensatedSum> sums(max_order + 1);
    for (std::size_t i = 0; i < quad.points.size(); ++i) {
        if (quad.weighted[i] == 0.0) continue;
        const Complex den = p - quad.space.pair(zeta, quad.points[i]);
        if (std::abs(den) < kDenominatorFloor) {
            throw DomainError("hyperbolic kernel denominator below 1e-10 at grid node " + std::to_string(i));
        }
        const Complex inv = 1.0 / den;
        Complex term = quad.weighted[i] * inv;
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

Complex hyperbolic_forward(const HyperbolicQuadrature& quad, const XiHPoint& zeta) {
    return hyperbolic_kernel_integrals(quad, zeta.zeta(), 1.0, 0)[0];
}

Complex hyperbolic_forward(const SupportedFunction& f, const XiHPoint& zeta, const HyperbolicGrid& grid,
                           std::optional<double> r_max) {
    return hyperbolic_forward(hyperbolic_quadrature(f, grid, r_max), zeta);
}

std::vector<double> default_boundary_eps() {
    std::vector<double> eps;
    for (double e = 0.1; e >= 1e-4 * (1.0 - 1e-12); e *= 0.5) eps.push_back(e);
    return eps;
}

BoundaryValue extrapolate_to_boundary(std::span<const double> eps, std::span<const Complex> samples) {
    if (eps.size() != samples.size() || eps.size() < 2) {
        throw ArgumentError("boundary extrapolation needs at least two (eps, value) samples");
    }
    for (std::size_t k = 1; k < eps.size(); ++k) {
        if (!(eps[k] < eps[k - 1]) || !(eps[k] > 0.0)) {
            throw ArgumentError("eps sequence must be positive and strictly decreasing");
        }
    }
    BoundaryValue out;
    out.eps.assign(eps.begin(), eps.end());
    out.samples.assign(samples.begin(), samples.end());

    // Neville tableau evaluated at eps = 0; diagonal[k] uses samples 0..k.
    const std::size_t n = eps.size();
    std::vector<Complex> column(samples.begin(), samples.end());
    std::vector<Complex> diagonal{column[0]};
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = 0; i + level < n; ++i) {
            const double xi = eps[i], xj = eps[i + level];
            column[i] = (xi * column[i + 1] - xj * column[i]) / (xi - xj);
        }
        diagonal.push_back(column[0]);
    }
    for (std::size_t k = 1; k < diagonal.size(); ++k) {
        out.error_estimates.push_back(std::abs(diagonal[k] - diagonal[k - 1]));
    }
    // Take the diagonal entry with the smallest correction; past the roundoff floor the estimates stall.
    const auto best = std::min_element(out.error_estimates.begin(), out.error_estimates.end());
    out.value = diagonal[static_cast<std::size_t>(best - out.error_estimates.begin()) + 1];
    const double floor = kExtrapolationFloor * std::max(1.0, std::abs(out.value));
    for (std::size_t k = 1; k < out.error_estimates.size(); ++k) {
        if (out.error_estimates[k - 1] > floor && !(out.error_estimates[k] < out.error_estimates[k - 1])) {
            out.monotone = false;
        }
    }
    out.tail_slope = std::abs(samples[n - 1] - samples[n - 2]) / (eps[n - 2] - eps[n - 1]);

    const double last_increment = std::abs(samples[n - 1] - samples[n - 2]);
    if (*best > 10.0 * std::max(last_increment, 1e-300) && *best > floor) {
        throw NumericalError("boundary extrapolation does not converge: best correction " + std::to_string(*best) +
                             " vs last increment " + std::to_string(last_increment));
    }
    return out;
}

namespace {

template <class Sampler>
BoundaryValue boundary_from(std::span<const double> eps, Sampler&& sample) {
    const std::vector<double> seq = eps.empty() ? default_boundary_eps() : std::vector<double>(eps.begin(), eps.end());
    std::vector<Complex> values;
    values.reserve(seq.size());
    for (double e : seq) values.push_back(sample(e));
    return extrapolate_to_boundary(seq, values);
}

} // namespace

BoundaryValue boundary_value(const HyperbolicQuadrature& quad, const RVector& xi, std::span<const double> eps) {
    // zeta . z = (1 + i eps) xi_0 t; the pole of the limit sits at t = 1 / xi_0.
    const HorocyclicProfile profile = horocyclic_profile(quad.source, xi, quad.grid, 1.0 / xi[0]);
    return boundary_from(eps, [&](double e) {
        return profile_kernel_integrals(profile, Complex(1.0, e) * xi[0], 1.0, 0)[0];
    });
}

BoundaryValue ell_boundary_value(const HyperbolicQuadrature& quad, const RVector& xi, std::span<const double> eps) {
    const EllOperator op(quad.space.dim());
    const HorocyclicProfile profile = horocyclic_profile(quad.source, xi, quad.grid, 1.0 / xi[0]);
    return boundary_from(eps, [&](double e) {
        const auto derivs = profile_kernel_integrals(profile, Complex(1.0, e) * xi[0], 1.0, op.derivative_count() - 1);
        return op.apply(derivs);
    });
}

HyperbolicCycle hyperbolic_cycle(const HyperboloidPoint& x, int n_nodes) {
    const QuadraticSpace& space = x.space();
    if (space.dim() != 2) {
        throw FeatureError("hyperbolic cycles are implemented for d = 2");
    }
    if (n_nodes < 1) {
        throw ArgumentError("hyperbolic cycle needs at least one node");
    }
    const RMatrix b = lorentz_boost(x);
    const RVector e = b.col(1);
    const RVector f = b.col(2); // det[x, e, f] = det(b) = +1
    const QuadratureRule rule = periodic_trapezoid(n_nodes, 0.0, 2.0 * std::numbers::pi);
    HyperbolicCycle cycle{x, rule.nodes, rule.weights, {}, {}};
    const CVector xc = x.ccoords();
    for (double s : rule.nodes) {
        RVector mu = std::cos(s) * e + std::sin(s) * f;
        RVector dmu = -std::sin(s) * e + std::cos(s) * f;
        const CVector mc = mu.cast<Complex>();
        if (std::abs(space.pair(mc, xc)) > kCycleTolerance || std::abs(space.delta(mc) + 1.0) > kCycleTolerance) {
            throw ValidationError("hyperbolic cycle node violates mu.x = 0, mu.mu = -1");
        }
        cycle.mu.push_back(std::move(mu));
        cycle.dmu.push_back(std::move(dmu));
    }
    return cycle;
}

Complex hyperbolic_dual(const BoundaryFunction& F, const HyperboloidPoint& x, int n_nodes) {
    const HyperbolicCycle cycle = hyperbolic_cycle(x, n_nodes);
    CompensatedSum sum;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const RVector xi = cycle.point(i);
        const Complex v = F(xi);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw NumericalError("non-finite boundary function at cycle node " + std::to_string(i));
        }
        Eigen::Matrix3d frame;
        frame.col(0) = x.coords();
        frame.col(1) = xi;
        frame.col(2) = cycle.dmu[i];
        sum.add(cycle.weights[i] * frame.determinant() * v);
    }
    return sum.value();
}

HyperbolicInversionProbe probe_hyperbolic_inversion(const SupportedFunction& f,
                                                    std::span<const HyperboloidPoint> points,
                                                    const HyperbolicGrid& grid, int cycle_nodes,
                                                    std::span<const double> eps) {
    if (points.empty()) {
        throw ArgumentError("inversion probe needs at least one point");
    }
    const HyperbolicQuadrature quad = hyperbolic_quadrature(f, grid);
    HyperbolicInversionProbe probe;
    for (const HyperboloidPoint& x : points) {
        const Complex value = hyperbolic_dual(
            [&](const RVector& xi) { return ell_boundary_value(quad, xi, eps).value; }, x, cycle_nodes);
        const Complex ref = f.f(x.ccoords());
        probe.values.push_back(value);
        probe.reference.push_back(ref);
        probe.ratios.push_back(value / ref);
    }
    Complex sum = 0.0;
    for (const Complex& r : probe.ratios) sum += r;
    probe.constant = sum / static_cast<double>(probe.ratios.size());
    for (const Complex& r : probe.ratios) probe.spread = std::max(probe.spread, std::abs(r / probe.constant - 1.0));
    return probe;
}

} // namespace horocauchy
