#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/LU>

#include "horocauchy/cycle.hpp"
#include "horocauchy/errors.hpp"

using namespace horocauchy;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex I(0.0, 1.0);

// Integral against the surface measure: omega carries d! = 2.
Complex surface_integral(const Cycle& c, const PointFunction& f) { return integrate(c, f, FormSpec::omega()) / 2.0; }

SpherePoint real_point(double a, double b, double c) {
    Eigen::Vector3d v(a, b, c);
    return SpherePoint(QuadraticSpace::euclidean(2), v.normalized().cast<Complex>());
}

} // namespace

TEST(StandardSphereCycle, NodeCountAndWeights) {
    const Cycle c = standard_sphere_cycle(2, 32, 64);
    EXPECT_EQ(c.size(), 32u * 64u);
    double total = 0.0;
    for (const auto& n : c.nodes()) total += n.weight;
    EXPECT_NEAR(total, c.box().volume(), 1e-12);
    EXPECT_NEAR(c.box().volume(), 2 * kPi * kPi, 1e-12);
}

TEST(StandardSphereCycle, AreaAndSecondMoment) {
    const Cycle c = standard_sphere_cycle(2, 32, 64);
    EXPECT_NEAR(std::abs(surface_integral(c, [](const CVector&) { return Complex(1.0); }) - 4 * kPi), 0.0, 1e-10);
    for (int j = 0; j < 3; ++j) {
        const Complex m = surface_integral(c, [j](const CVector& z) { return z[j] * z[j]; });
        EXPECT_NEAR(std::abs(m - 4 * kPi / 3), 0.0, 1e-10);
    }
    const Complex off = surface_integral(c, [](const CVector& z) { return z[0] * z[1]; });
    EXPECT_NEAR(std::abs(off), 0.0, 1e-12);
}

TEST(StandardSphereCycle, UnsupportedDimension) {
    EXPECT_THROW(standard_sphere_cycle(3, 8, 8), FeatureError);
}

TEST(StandardSphereCycle, OmegaDensityIsTwoSinTheta) {
    const Cycle c = standard_sphere_cycle(2, 12, 10);
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double theta = c.node(i).param[0];
        EXPECT_NEAR(std::abs(pullback_density(FormSpec::omega(), c, i) - 2.0 * std::sin(theta)), 0.0, 1e-12);
    }
}

TEST(StandardSphereCycle, PositiveFrameDeterminant) {
    const Cycle c = standard_sphere_cycle(2, 8, 8);
    for (const auto& n : c.nodes()) {
        CMatrix frame(3, 3);
        frame << n.point, n.tangents;
        EXPECT_GT(frame.determinant().real(), 0.0);
    }
}

TEST(Integrate, ZeroAndConstant) {
    const Cycle c = standard_sphere_cycle(2, 32, 64);
    EXPECT_EQ(integrate(c, [](const CVector&) { return Complex(0.0); }, FormSpec::omega()), Complex(0.0));
    EXPECT_NEAR(std::abs(integrate(c, [](const CVector&) { return Complex(1.0); }, FormSpec::omega()) - 8 * kPi), 0.0,
                1e-8);
}

TEST(Integrate, NonFiniteIntegrandNamesTheNode) {
    const Cycle c = standard_sphere_cycle(2, 4, 4);
    try {
        integrate(c, [](const CVector& z) { return z[0].real() > 0.5 ? Complex(NAN) : Complex(1.0); },
                  FormSpec::omega());
        FAIL() << "expected NumericalError";
    } catch (const NumericalError& e) {
        EXPECT_NE(std::string(e.what()).find("node"), std::string::npos);
    }
}

TEST(Integrate, SpectralConvergenceOnSmoothIntegrand) {
    auto f = [](const CVector& z) { return std::exp(z[0] + 0.3 * z[1]) / (2.0 - z[2]); };
    for (int n : {32, 48}) {
        const Complex coarse = integrate(standard_sphere_cycle(2, n, n), f, FormSpec::omega());
        const Complex fine = integrate(standard_sphere_cycle(2, 2 * n, 2 * n), f, FormSpec::omega());
        EXPECT_LE(std::abs(fine - coarse), 1e-10 * std::abs(fine));
    }
}

TEST(RotateCycle, IdentityKeepsChart) {
    const Cycle c = standard_sphere_cycle(2, 6, 6);
    const Cycle r = rotate_cycle(ComplexRotation::identity(c.space()), c);
    for (std::size_t i = 0; i < c.size(); ++i) {
        EXPECT_EQ((r.node(i).point - c.node(i).point).norm(), 0.0);
        EXPECT_EQ(r.node(i).weight, c.node(i).weight);
    }
}

TEST(RotateCycle, ComplexRotationKeepsImagesOnTheSphere) {
    std::mt19937_64 rng(2);
    const Cycle c = standard_sphere_cycle(2, 16, 16);
    const ComplexRotation g = ComplexRotation::exp(c.space(), random_so_generator(3, 0.4, rng));
    const Cycle r = rotate_cycle(g, c);
    for (const auto& n : r.nodes()) {
        EXPECT_LE(std::abs(r.space().delta(n.point) - 1.0), 1e-10);
    }
    ASSERT_TRUE(r.sphere_frame().has_value());
    EXPECT_LE((*r.sphere_frame() - g.matrix()).norm(), 1e-15);
}

TEST(RotateCycle, RealRotationCovariance) {
    std::mt19937_64 rng(8);
    const Cycle c = standard_sphere_cycle(2, 40, 40);
    const RMatrix rot = random_rotation(3, rng);
    const ComplexRotation g(c.space(), rot.cast<Complex>());
    const CMatrix ginv = rot.transpose().cast<Complex>();
    auto f = [](const CVector& z) { return std::exp(0.7 * z[0] - 0.2 * z[2]) * (1.0 + z[1] * z[1]); };
    const Complex base = integrate(c, f, FormSpec::omega());
    const Complex moved = integrate(
        rotate_cycle(g, c), [&](const CVector& z) { return f(ginv * z); }, FormSpec::omega());
    EXPECT_LE(std::abs(moved - base), 1e-9);
}

TEST(PullbackDensity, OrientationFlip) {
    // Reversing phi negates the density; the orientation sign restores the integral.
    const Cycle c = standard_sphere_cycle(2, 24, 24);
    Cycle::Spec spec = c.spec();
    const Chart chart = spec.chart;
    spec.chart = [chart](std::span<const double> p) {
        const double q[2] = {p[0], 2 * kPi - p[1]};
        return chart(std::span<const double>(q, 2));
    };
    spec.jacobian = nullptr;
    spec.sphere_frame.reset();
    const Cycle flipped(spec);
    for (std::size_t i = 0; i < c.size(); i += 37) {
        EXPECT_NEAR(std::abs(pullback_density(FormSpec::omega(), flipped, i) +
                             pullback_density(FormSpec::omega(), c, i)),
                    0.0, 1e-8);
    }
    auto f = [](const CVector& z) { return z[0] * z[0] + z[1]; };
    const Complex a = integrate(c, f, FormSpec::omega());
    const Complex b = integrate(flipped.with_orientation(-1), f, FormSpec::omega());
    EXPECT_NEAR(std::abs(a - b), 0.0, 1e-8);
}

TEST(PullbackDensity, DegenerateChartGivesZero) {
    Cycle::Spec spec;
    spec.dim = 2;
    spec.chart = [](std::span<const double> p) {
        CVector z(3);
        z << std::cos(p[1]), std::sin(p[1]), 0.0;
        return z;
    };
    spec.box = {{0.0, 0.0}, {1.0, 1.0}};
    spec.params = {{0.5, 0.25}};
    spec.weights = {1.0};
    const Cycle c(spec);
    EXPECT_EQ(pullback_density(FormSpec::omega(), c, 0), Complex(0.0));
}

TEST(PullbackDensity, FormDimensionMismatch) {
    const Cycle s = standard_sphere_cycle(2, 4, 4);
    EXPECT_THROW(pullback_density(FormSpec::nu(real_point(1, 0, 0)), s, 0), ArgumentError);
    const Cycle l = l_cycle(real_point(1, 0, 0), 8);
    EXPECT_THROW(pullback_density(FormSpec::omega(), l, 0), ArgumentError);
}

TEST(LCycle, FirstNodeForFirstAxis) {
    const Cycle l = l_cycle(real_point(1, 0, 0), 16);
    const CVector& z0 = l.node(0).point;
    EXPECT_NEAR(std::abs(z0[0] - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(z0[1] - I), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(z0[2]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(l.space().delta(z0)), 0.0, 1e-15);
}

TEST(LCycle, NodesLieOnConeAndHyperplane) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 10; ++t) {
        const RVector v = random_unit_vector(3, rng);
        const SpherePoint x(QuadraticSpace::euclidean(2), v.cast<Complex>());
        const Cycle l = l_cycle(x, 33);
        for (const auto& n : l.nodes()) {
            EXPECT_LE(std::abs(l.space().pair(n.point, x.coords()) - 1.0), 1e-12);
            EXPECT_LE(std::abs(l.space().delta(n.point)), 1e-12);
        }
    }
}

TEST(LCycle, NuDensityOracle) {
    // det[x, zeta, zeta'] = i^2 det[x, e, f] = -1 for the right-handed frame.
    const SpherePoint x = real_point(0, 0, 1);
    const Cycle l = l_cycle(x, 128);
    for (std::size_t i = 0; i < l.size(); ++i) {
        const CVector& z = l.node(i).point;
        const CVector& t = l.node(i).tangents.col(0);
        const CVector& b = x.coords();
        const Complex det = b[0] * (z[1] * t[2] - z[2] * t[1]) - b[1] * (z[0] * t[2] - z[2] * t[0]) +
                            b[2] * (z[0] * t[1] - z[1] * t[0]);
        EXPECT_NEAR(std::abs(det + 1.0), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(pullback_density(FormSpec::nu(x), l, i) + 1.0), 0.0, 1e-8);
    }
    const Complex total = integrate(l, [](const CVector&) { return Complex(1.0); }, FormSpec::nu(x));
    EXPECT_NEAR(std::abs(total + 2 * kPi), 0.0, 1e-10);
}

TEST(LCycle, RejectsComplexBasepoint) {
    const double t = 0.2;
    CVector z(3);
    z << std::cosh(t), -I * std::sinh(t), 0.0;
    EXPECT_THROW(l_cycle(SpherePoint(QuadraticSpace::euclidean(2), z), 8), ArgumentError);
}

TEST(CycleSpec, ValidatesWeightsAndManifold) {
    Cycle::Spec spec = standard_sphere_cycle(2, 4, 4).spec();
    spec.weights[0] *= 1.5;
    EXPECT_THROW((Cycle(spec)), ArgumentError);
    Cycle::Spec off = standard_sphere_cycle(2, 4, 4).spec();
    off.chart = [](std::span<const double>) { return CVector(CVector::Constant(3, 2.0)); };
    off.jacobian = nullptr;
    EXPECT_THROW((Cycle(off)), ValidationError);
}

#include "horocauchy/quadrature.hpp"

TEST(GaussLegendre, ExactForPolynomialsUpToDegree2nMinus1) {
    for (int n : {1, 2, 7, 64, 150}) {
        const QuadratureRule r = gauss_legendre(n, -0.5, 2.0);
        for (int deg : {0, 1, 2 * n - 1}) {
            double q = 0.0;
            for (int i = 0; i < n; ++i) q += r.weights[i] * std::pow(r.nodes[i], deg);
            const double exact = (std::pow(2.0, deg + 1) - std::pow(-0.5, deg + 1)) / (deg + 1);
            EXPECT_NEAR(q, exact, 1e-13 * std::max(1.0, std::abs(exact))) << "n=" << n << " deg=" << deg;
        }
        for (int i = 1; i < n; ++i) EXPECT_LT(r.nodes[i - 1], r.nodes[i]);
    }
}
