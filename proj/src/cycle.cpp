#include "horocauchy/cycle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Geometry>
#include <Eigen/LU>

#include "horocauchy/errors.hpp"
#include "horocauchy/quadrature.hpp"

namespace horocauchy {

namespace {

constexpr double kManifoldTolerance = 1e-10;

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

std::string describe_param(std::span<const double> p) {
    std::string s = "(";
    for (std::size_t k = 0; k < p.size(); ++k) {
        s += (k ? ", " : "") + std::to_string(p[k]);
    }
    return s + ")";
}

CMatrix difference_tangents(const Chart& chart, int k, std::span<const double> param) {
    std::vector<double> p(param.begin(), param.end());
    const CVector z0 = chart(p);
    CMatrix t(z0.size(), k);
    for (int a = 0; a < k; ++a) {
        const double x0 = p[a];
        p[a] = x0 + kChartDifferenceStep;
        const CVector plus = chart(p);
        p[a] = x0 - kChartDifferenceStep;
        const CVector minus = chart(p);
        p[a] = x0;
        t.col(a) = (plus - minus) / (2.0 * kChartDifferenceStep);
    }
    return t;
}

} // namespace

double ParameterBox::volume() const {
    double v = 1.0;
    for (std::size_t k = 0; k < lower.size(); ++k) v *= upper[k] - lower[k];
    return v;
}

Cycle::Cycle(Spec spec) : spec_(std::move(spec)) {
    const auto& s = spec_;
    if (s.dim < 1 || s.dim > s.space.dim()) {
        throw ArgumentError("cycle dimension must be in [1, d]");
    }
    if (!s.chart) {
        throw ArgumentError("cycle needs a chart");
    }
    if (s.box.lower.size() != static_cast<std::size_t>(s.dim) || s.box.upper.size() != s.box.lower.size()) {
        throw ArgumentError("parameter box dimension does not match cycle dimension");
    }
    if (s.params.size() != s.weights.size()) {
        throw ArgumentError("cycle needs one weight per parameter node");
    }
    if (s.orientation != 1 && s.orientation != -1) {
        throw ArgumentError("orientation must be +1 or -1");
    }
    if (s.manifold == CycleManifold::Section && !s.section_base) {
        throw ArgumentError("section cycles need a base point");
    }

    CompensatedSum sum;
    for (double w : s.weights) {
        if (!(w > 0.0)) throw ArgumentError("quadrature weights must be positive");
        sum.add(w);
    }
    const double total = sum.value().real();
    if (!s.params.empty() && std::abs(total - s.box.volume()) > 1e-12 * std::max(1.0, s.box.volume())) {
        throw ArgumentError("quadrature weights do not sum to the parameter-box volume");
    }

    nodes_.reserve(s.params.size());
    for (std::size_t i = 0; i < s.params.size(); ++i) {
        const auto& p = s.params[i];
        if (p.size() != static_cast<std::size_t>(s.dim)) {
            throw ArgumentError("parameter node has wrong dimension");
        }
        CycleNode node{p, s.weights[i], s.chart(p), tangents_at(p)};
        if (node.point.size() != s.space.ambient() || !node.point.allFinite()) {
            throw ArgumentError("chart image at " + describe_param(p) + " is malformed");
        }
        switch (s.manifold) {
        case CycleManifold::Sphere:
            if (std::abs(s.space.delta(node.point) - 1.0) > kManifoldTolerance) {
                throw ValidationError("chart image at " + describe_param(p) + " is off the sphere");
            }
            break;
        case CycleManifold::Section:
            if (std::abs(s.space.delta(node.point)) > kManifoldTolerance ||
                std::abs(s.space.pair(node.point, *s.section_base) - 1.0) > kManifoldTolerance) {
                throw ValidationError("chart image at " + describe_param(p) + " is off the section L(x)");
            }
            break;
        case CycleManifold::Unconstrained:
            break;
        }
        nodes_.push_back(std::move(node));
    }
}

CMatrix Cycle::tangents_at(std::span<const double> param) const {
    if (spec_.jacobian) {
        return spec_.jacobian(param);
    }
    return difference_tangents(spec_.chart, spec_.dim, param);
}

Cycle Cycle::with_orientation(int orientation) const {
    Spec s = spec_;
    s.orientation = orientation;
    return Cycle(std::move(s));
}

Cycle sphere_cycle(const CMatrix& frame, int n_polar, int n_azimuthal) {
    if (frame.rows() != 3 || frame.cols() != 3) {
        throw FeatureError("sphere cycles are implemented for d = 2 only");
    }
    if (n_polar < 1 || n_azimuthal < 1) {
        throw ArgumentError("sphere cycle needs positive node counts");
    }
    const double pi = std::numbers::pi;
    const QuadratureRule polar = gauss_legendre(n_polar, 0.0, pi);
    const QuadratureRule azimuthal = periodic_trapezoid(n_azimuthal, 0.0, 2.0 * pi);

    Cycle::Spec spec;
    spec.space = QuadraticSpace::euclidean(2);
    spec.dim = 2;
    spec.chart = [frame](std::span<const double> p) -> CVector {
        const double st = std::sin(p[0]);
        CVector x(3);
        x << std::cos(p[0]), st * std::cos(p[1]), st * std::sin(p[1]);
        return frame * x;
    };
    spec.jacobian = [frame](std::span<const double> p) -> CMatrix {
        const double st = std::sin(p[0]), ct = std::cos(p[0]);
        const double sp = std::sin(p[1]), cp = std::cos(p[1]);
        CMatrix t(3, 2);
        t << -st, 0.0,
             ct * cp, -st * sp,
             ct * sp, st * cp;
        return frame * t;
    };
    spec.box = {{0.0, 0.0}, {pi, 2.0 * pi}};
    spec.params.reserve(static_cast<std::size_t>(n_polar) * n_azimuthal);
    spec.weights.reserve(spec.params.capacity());
    for (int i = 0; i < n_polar; ++i) {
        for (int j = 0; j < n_azimuthal; ++j) {
            spec.params.push_back({polar.nodes[i], azimuthal.nodes[j]});
            spec.weights.push_back(polar.weights[i] * azimuthal.weights[j]);
        }
    }
    spec.manifold = CycleManifold::Sphere;
    spec.sphere_frame = frame;
    spec.grid_shape = {n_polar, n_azimuthal};
    return Cycle(std::move(spec));
}

Cycle standard_sphere_cycle(int d, int n_polar, int n_azimuthal) {
    if (d != 2) {
        throw FeatureError("standard sphere cycle is implemented for d = 2 only (got d = " + std::to_string(d) + ")");
    }
    return sphere_cycle(CMatrix::Identity(3, 3), n_polar, n_azimuthal);
}

Cycle l_cycle(const SpherePoint& x, int n_nodes) {
    if (x.space().dim() != 2 || !x.space().is_euclidean()) {
        throw FeatureError("L_R(x) cycles are implemented for the Euclidean d = 2 case only");
    }
    if (!x.is_real()) {
        throw ArgumentError("L_R(x) needs a real sphere point");
    }
    if (n_nodes < 1) {
        throw ArgumentError("l_cycle needs at least one node");
    }
    const Eigen::Vector3d xr = x.real_coords().normalized();
    Eigen::Index axis = 0;
    xr.cwiseAbs().minCoeff(&axis);
    Eigen::Vector3d a = Eigen::Vector3d::Unit(axis);
    const Eigen::Vector3d e = (a - a.dot(xr) * xr).normalized();
    const Eigen::Vector3d f = xr.cross(e); // det[x, e, f] = |x cross e|^2 = 1

    const CVector xc = xr.cast<Complex>();
    const CVector ec = e.cast<Complex>();
    const CVector fc = f.cast<Complex>();
    const Complex i(0.0, 1.0);
    const QuadratureRule rule = periodic_trapezoid(n_nodes, 0.0, 2.0 * std::numbers::pi);

    Cycle::Spec spec;
    spec.space = x.space();
    spec.dim = 1;
    spec.chart = [xc, ec, fc, i](std::span<const double> p) -> CVector {
        return xc + i * (std::cos(p[0]) * ec + std::sin(p[0]) * fc);
    };
    spec.jacobian = [ec, fc, i](std::span<const double> p) -> CMatrix {
        CMatrix t(3, 1);
        t.col(0) = i * (-std::sin(p[0]) * ec + std::cos(p[0]) * fc);
        return t;
    };
    spec.box = {{0.0}, {2.0 * std::numbers::pi}};
    for (int k = 0; k < n_nodes; ++k) {
        spec.params.push_back({rule.nodes[k]});
        spec.weights.push_back(rule.weights[k]);
    }
    spec.manifold = CycleManifold::Section;
    spec.section_base = xc;
    spec.grid_shape = {n_nodes};
    return Cycle(std::move(spec));
}

Cycle rotate_cycle(const ComplexRotation& g, const Cycle& cycle) {
    if (!(g.space() == cycle.space())) {
        throw ArgumentError("rotation and cycle live in different quadratic spaces");
    }
    const CMatrix m = g.matrix();
    Cycle::Spec spec = cycle.spec();
    const Chart old_chart = spec.chart;
    const ChartJacobian old_jacobian = spec.jacobian;
    const int k = spec.dim;
    spec.chart = [m, old_chart](std::span<const double> p) -> CVector { return m * old_chart(p); };
    // Tangents of the old chart, analytic or differenced, then mapped linearly.
    spec.jacobian = [m, old_chart, old_jacobian, k](std::span<const double> p) -> CMatrix {
        return m * (old_jacobian ? old_jacobian(p) : difference_tangents(old_chart, k, p));
    };
    if (spec.section_base) spec.section_base = m * *spec.section_base;
    if (spec.sphere_frame) spec.sphere_frame = m * *spec.sphere_frame;
    return Cycle(std::move(spec));
}

SeparationResult kernel_separation(const CVector& zeta, Complex p, const Cycle& cycle, bool refine) {
    if (cycle.size() == 0) {
        throw ArgumentError("separation needs a cycle with quadrature nodes");
    }
    const QuadraticSpace& space = cycle.space();
    space.check(zeta);
    auto dist_at = [&](const CVector& z) { return std::abs(p - space.pair(zeta, z)); };

    SeparationResult best{dist_at(cycle.node(0).point), 0, cycle.node(0).param};
    for (std::size_t i = 1; i < cycle.size(); ++i) {
        const double dist = dist_at(cycle.node(i).point);
        if (dist < best.distance) {
            best = {dist, i, cycle.node(i).param};
        }
    }
    if (!refine) return best;

    // Compass search in the parameter box, starting at grid resolution.
    const ParameterBox& box = cycle.box();
    const int k = cycle.dim();
    const auto& shape = cycle.grid_shape();
    double step = 0.0;
    for (int a = 0; a < k; ++a) {
        const double cells = a < static_cast<int>(shape.size()) ? shape[a] : std::cbrt(double(cycle.size()));
        step = std::max(step, (box.upper[a] - box.lower[a]) / std::max(1.0, cells));
    }
    std::vector<double> x = best.param;
    double fx = best.distance;
    for (int iter = 0; iter < 4000 && step > 1e-12 && fx > 0.0; ++iter) {
        bool improved = false;
        for (int a = 0; a < k && !improved; ++a) {
            for (double dir : {1.0, -1.0}) {
                std::vector<double> y = x;
                y[a] = std::clamp(y[a] + dir * step, box.lower[a], box.upper[a]);
                const double fy = dist_at(cycle.evaluate(y));
                if (fy < fx) {
                    x = std::move(y);
                    fx = fy;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    best.distance = fx;
    best.param = std::move(x);
    return best;
}

double horosphere_separation(const ConePoint& zeta, const Cycle& cycle) {
    return kernel_separation(zeta.coords(), 1.0, cycle, true).distance;
}

Complex pullback_density(const FormSpec& form, const Cycle& cycle, std::size_t i) {
    const CycleNode& node = cycle.node(i);
    const int n = cycle.space().ambient();
    const int d = cycle.space().dim();
    CMatrix frame(n, n);
    double scale = 0.0;
    switch (form.kind) {
    case FormKind::Omega:
        if (cycle.dim() != d) {
            throw ArgumentError("omega needs a cycle of dimension d");
        }
        frame.col(0) = node.point;
        frame.rightCols(d) = node.tangents;
        scale = factorial(d);
        break;
    case FormKind::Nu:
        if (cycle.dim() != d - 1) {
            throw ArgumentError("nu needs a cycle of dimension d - 1");
        }
        if (!form.basepoint || form.basepoint->size() != n) {
            throw ArgumentError("nu needs a basepoint in C^{d+1}");
        }
        frame.col(0) = *form.basepoint;
        frame.col(1) = node.point;
        frame.rightCols(d - 1) = node.tangents;
        scale = factorial(d - 1);
        break;
    }
    return static_cast<double>(cycle.orientation()) * scale * frame.determinant();
}

std::vector<Complex> form_weights(const FormSpec& form, const Cycle& cycle) {
    std::vector<Complex> w(cycle.size());
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        w[i] = cycle.node(i).weight * pullback_density(form, cycle, i);
    }
    return w;
}

Complex integrate(const Cycle& cycle, const PointFunction& integrand, const FormSpec& form) {
    CompensatedSum sum;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const Complex v = integrand(cycle.node(i).point);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw NumericalError("non-finite integrand at cycle node " + std::to_string(i) + " " +
                                 describe_param(cycle.node(i).param));
        }
        sum.add(cycle.node(i).weight * pullback_density(form, cycle, i) * v);
    }
    return sum.value();
}

} // namespace horocauchy
