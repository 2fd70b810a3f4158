#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "horocauchy/errors.hpp"
#include "horocauchy/test_functions.hpp"
#include "horocauchy/transforms.hpp"

using namespace horocauchy;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex I(0.0, 1.0);
const QuadraticSpace kE = QuadraticSpace::euclidean(2);

CVector vec3(Complex a, Complex b, Complex c) {
    CVector v(3);
    v << a, b, c;
    return v;
}

const TransformContext& ctx64() {
    static const TransformContext ctx = TransformContext::standard(64, 64, 64);
    return ctx;
}

double double_factorial(int n) {
    double v = 1.0;
    for (int k = n; k > 1; k -= 2) v *= k;
    return v;
}

// Funk-Hecke on S^2: int (a.z)^l (b.z)^l dsigma = 4 pi l! / (2l+1)!! (a.b)^l for null a, b,
// and the kernel expansion keeps only the degree-l term: f-hat = 2 * that with b = zeta.
Complex forward_oracle(const CVector& a, int l, const CVector& zeta) {
    double lf = 1.0;
    for (int k = 2; k <= l; ++k) lf *= k;
    return 8.0 * kPi * lf / double_factorial(2 * l + 1) * std::pow(kE.pair(a, zeta), l);
}

ConePoint random_xi_s(std::mt19937_64& rng, double max_delta) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double s = std::sqrt(max_delta * u(rng));
    return ConePoint(kE, random_null_vector(2, std::polar(s, 2 * kPi * u(rng)), rng));
}

SpherePoint random_real_point(std::mt19937_64& rng) {
    return SpherePoint(kE, random_unit_vector(3, rng).cast<Complex>());
}

const SphereFunction one = [](const CVector&) { return Complex(1.0); };
const SphereFunction zero = [](const CVector&) { return Complex(0.0); };

} // namespace

TEST(Forward, ConstantGivesEightPi) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 20; ++t) {
        const ConePoint zeta = random_xi_s(rng, 0.8);
        EXPECT_LE(std::abs(forward(ctx64(), one, zeta) - 8 * kPi), 1e-7 * 8 * kPi);
    }
}

TEST(Forward, ZeroFunction) {
    EXPECT_EQ(forward(ctx64(), zero, ConePoint(kE, 0.3 * vec3(1, I, 0))), Complex(0.0));
}

TEST(Forward, NullHarmonicMatchesFunkHeckeOracle) {
    std::mt19937_64 rng(2);
    for (int l = 0; l <= 5; ++l) {
        const CVector a = random_null_vector(2, 1.0, rng);
        const TestFunction f = TestFunction::null_harmonic(kE, a, l);
        const ConePoint zeta = random_xi_s(rng, 0.7);
        const Complex expected = forward_oracle(a, l, zeta.coords());
        EXPECT_LE(std::abs(forward(ctx64(), f, zeta) - expected), 1e-10 * std::max(1.0, std::abs(expected))) << l;
    }
}

TEST(Forward, SingularKernelIsADomainError) {
    // E(zeta) touches S at (1, 0, 0).
    EXPECT_THROW(forward(ctx64(), one, ConePoint(kE, vec3(1, I, 0))), DomainError);
    EXPECT_THROW(forward(ctx64().with_alignment(false), one, ConePoint(kE, vec3(1, I, 0))), DomainError);
}

TEST(Forward, AlignmentRemovesAliasingNearTheBoundaryOfXiS) {
    // Same cycle, two parametrisations: unaligned nodes alias the kernel at |zeta.z| ~ 0.89.
    const ConePoint zeta(kE, std::sqrt(0.8) * vec3(0, 1, I));
    const Complex aligned = forward(ctx64(), one, zeta);
    const Complex plain = forward(ctx64().with_alignment(false), one, zeta);
    EXPECT_LE(std::abs(aligned - 8 * kPi), 1e-10);
    EXPECT_GT(std::abs(plain - 8 * kPi), 1e-6);
}

TEST(Forward, ProductSeriesExampleMatchesSeriesSum) {
    const CVector a = null_vector(2, 2, 3);
    const TestFunction f = TestFunction::null_harmonic(kE, a, 1);
    for (double t : {0.1, 0.25, 0.4}) {
        const ConePoint zeta(kE, t * vec3(1, I, 0));
        EXPECT_LE(std::abs(forward(ctx64(), f, zeta) - series_sum(ctx64(), f, zeta, 40)), 1e-8);
    }
}

TEST(FourierComponent, Examples) {
    std::mt19937_64 rng(3);
    const ConePoint zeta = random_xi_s(rng, 0.9);
    EXPECT_LE(std::abs(fourier_component(ctx64(), one, 0, zeta) - 8 * kPi), 1e-8);
    EXPECT_LE(std::abs(fourier_component(ctx64(), one, 1, zeta)), 1e-8);
    const CVector a = random_null_vector(2, 1.0, rng);
    const TestFunction f = TestFunction::null_harmonic(kE, a, 1);
    const Complex expected = 8 * kPi / 3 * kE.pair(a, zeta.coords());
    EXPECT_LE(std::abs(fourier_component(ctx64(), f, 1, zeta) - expected), 1e-8);
    EXPECT_THROW(fourier_component(ctx64(), f, -1, zeta), ArgumentError);
}

TEST(FourierComponent, HomogeneousOfDegreeM) {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n;
    const TestFunction f = TestFunction::rational(kE, 0.3 * null_vector(2, 1, 3));
    for (int t = 0; t < 10; ++t) {
        const ConePoint zeta = random_xi_s(rng, 0.5);
        const Complex c(n(rng), n(rng));
        const ConePoint scaled(kE, c * zeta.coords());
        for (int m = 0; m <= 6; ++m) {
            const Complex base = fourier_component(ctx64(), f, m, zeta);
            const Complex moved = fourier_component(ctx64(), f, m, scaled);
            EXPECT_LE(std::abs(moved - std::pow(c, m) * base), 1e-10 * std::max(std::abs(moved), 1e-3));
        }
    }
}

TEST(SeriesSum, ConstantIsEightPiAtEveryTruncation) {
    const ConePoint zeta(kE, 0.4 * vec3(0, 1, I));
    for (int M : {0, 1, 5, 20}) {
        EXPECT_LE(std::abs(series_sum(ctx64(), one, zeta, M) - 8 * kPi), 1e-8);
    }
}

TEST(SeriesSum, OddFunctionHasNoDegreeZeroPart) {
    const TestFunction f = TestFunction::null_harmonic(kE, null_vector(2, 1, 2), 1);
    EXPECT_LE(std::abs(series_sum(ctx64(), f, ConePoint(kE, 0.3 * vec3(1, 0, I)), 0)), 1e-12);
}

TEST(SeriesSum, GeometricTailBound) {
    const TestFunction f = TestFunction::rational(kE, 0.4 * null_vector(2, 2, 3));
    const ConePoint zeta(kE, 0.6 * vec3(1, I, 0));
    const Complex full = forward(ctx64(), f, zeta);
    double q = 0.0;
    for (const auto& node : ctx64().sphere_cycle().nodes()) q = std::max(q, std::abs(kE.pair(zeta.coords(), node.point)));
    // |f| <= 1/(1-0.4) on the real sphere, so |tail| <= 8 pi / 0.6 * q^{M+1} / (1 - q).
    for (int M = 0; M <= 30; M += 5) {
        const double bound = 8 * kPi / 0.6 * std::pow(q, M + 1) / (1 - q);
        EXPECT_LE(std::abs(series_sum(ctx64(), f, zeta, M) - full), bound + 1e-12) << M;
    }
}

TEST(SeriesSum, DivergentSeriesIsADomainError) {
    EXPECT_THROW(series_sum(ctx64(), one, ConePoint(kE, 1.2 * vec3(1, I, 0)), 5), DomainError);
}

TEST(SeriesSum, ConsistentWithForward) {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 10; ++t) {
        const ConePoint zeta(kE, random_null_vector(2, std::polar(0.5, 0.3 * t), rng));
        const TestFunction f = TestFunction::rational(kE, random_null_vector(2, 0.35, rng));
        EXPECT_LE(std::abs(series_sum(ctx64(), f, zeta, 40) - forward(ctx64(), f, zeta)), 1e-8);
    }
}

TEST(Dual, Examples) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 5; ++t) {
        const SpherePoint x = random_real_point(rng);
        const Cycle lc = l_cycle(x, 64);
        EXPECT_LE(std::abs(dual(one, x, lc) + 2 * kPi), 1e-8);
        EXPECT_LE(std::abs(dual([](const CVector& z) { return z[0]; }, x, lc) + 2 * kPi * x.coords()[0]), 1e-8);
        EXPECT_EQ(dual(zero, x, lc), Complex(0.0));
    }
}

TEST(Dual, NonFiniteIntegrand) {
    const SpherePoint x(kE, vec3(0, 0, 1));
    EXPECT_THROW(dual([](const CVector&) { return Complex(INFINITY); }, x, l_cycle(x, 16)), NumericalError);
    const SpherePoint other(kE, vec3(1, 0, 0));
    EXPECT_THROW(dual(one, other, l_cycle(x, 16)), ArgumentError);
}

TEST(Projector, Examples) {
    const SpherePoint x(kE, vec3(1, 0, 0));
    EXPECT_LE(std::abs(projector(ctx64(), one, 0, x) + 16 * kPi * kPi), 1e-6);
    EXPECT_LE(std::abs(projector(ctx64(), one, 1, x)), 1e-8);
    const TestFunction h2 = TestFunction::null_harmonic(kE, null_vector(2, 1, 2), 2);
    EXPECT_LE(std::abs(projector(ctx64(), h2, 1, x)), 1e-7);
}

TEST(Projector, LinearityAndDegreeOrthogonality) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> n;
    std::vector<TestFunction> parts;
    std::vector<Complex> coeffs;
    for (int l = 0; l <= 4; ++l) {
        parts.push_back(TestFunction::null_harmonic(kE, random_null_vector(2, 1.0, rng), l));
        coeffs.emplace_back(n(rng), n(rng));
    }
    const SphereFunction f = [&](const CVector& z) {
        Complex v = 0.0;
        for (std::size_t l = 0; l < parts.size(); ++l) v += coeffs[l] * parts[l](z);
        return v;
    };
    for (int t = 0; t < 3; ++t) {
        const SpherePoint x = random_real_point(rng);
        for (int m = 0; m <= 4; ++m) {
            const Complex whole = projector(ctx64(), f, m, x);
            const Complex single = coeffs[m] * projector(ctx64(), parts[m], m, x);
            EXPECT_LE(std::abs(whole - single), 1e-7) << m;
        }
    }
}

TEST(ForwardExtended, Examples) {
    EXPECT_LE(std::abs(forward_extended(ctx64(), one, CVector::Zero(3), 1.0) - 8 * kPi), 1e-12);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n;
    const TestFunction f = TestFunction::rational(kE, 0.3 * null_vector(2, 1, 2));
    for (int t = 0; t < 5; ++t) {
        CVector zeta(3);
        for (int j = 0; j < 3; ++j) zeta[j] = 0.2 * Complex(n(rng), n(rng));
        const Complex a = forward_extended(ctx64(), f, zeta, 1.0);
        const Complex b = forward_extended(ctx64(), f, 2.0 * zeta, 2.0);
        EXPECT_LE(std::abs(b - 0.5 * a), 1e-10 * std::abs(a));
    }
    const ConePoint cone(kE, 0.4 * vec3(I, 1, 0));
    EXPECT_EQ(forward_extended(ctx64(), f, cone.coords(), 1.0), forward(ctx64(), f, cone));
}

TEST(ForwardExtended, DerivativesInPMatchDifferences) {
    const TestFunction f = TestFunction::rational(kE, 0.3 * null_vector(2, 1, 2));
    CVector zeta(3);
    zeta << 0.2, Complex(0.1, 0.3), -0.15;
    const Complex p(1.1, 0.2);
    const auto d = forward_extended_derivatives(ctx64(), f, zeta, p, 2);
    const double h = 1e-4;
    const Complex fd1 = (forward_extended(ctx64(), f, zeta, p + h) - forward_extended(ctx64(), f, zeta, p - h)) / (2 * h);
    const Complex fd2 = (forward_extended(ctx64(), f, zeta, p + h) - 2.0 * d[0] + forward_extended(ctx64(), f, zeta, p - h)) / (h * h);
    EXPECT_LE(std::abs(d[1] - fd1), 1e-7 * std::abs(d[1]));
    EXPECT_LE(std::abs(d[2] - fd2), 1e-5 * std::abs(d[2]));
}

TEST(Forward, IndependentOfTheCycle) {
    std::mt19937_64 rng(10);
    const TestFunction f = TestFunction::null_harmonic(kE, random_null_vector(2, 1.0, rng), 3);
    const TestFunction r = TestFunction::rational(kE, random_null_vector(2, 0.3, rng));
    const SphereFunction g = [&](const CVector& z) { return f(z) + r(z); };
    const ConePoint zeta = random_xi_s(rng, 0.5);
    const Complex base = forward(ctx64(), g, zeta);
    int checked = 0;
    while (checked < 5) {
        const ComplexRotation rot = ComplexRotation::exp(kE, random_so_generator(3, 0.15, rng));
        const TransformContext moved = ctx64().with_cycle(rotate_cycle(rot, ctx64().sphere_cycle()));
        const Complex v = forward(moved, g, zeta);
        EXPECT_LE(std::abs(v - base), 1e-7 * std::abs(base));
        ++checked;
    }
}

TEST(Pde, WaveIdentityForExtendedForward) {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> n;
    const TestFunction f = TestFunction::rational(kE, 0.3 * null_vector(2, 1, 2));
    const double h = 1e-2;
    for (int t = 0; t < 10; ++t) {
        CVector zeta(3);
        for (int j = 0; j < 3; ++j) zeta[j] = 0.1 * Complex(n(rng), n(rng));
        const Complex p = std::polar(1.5, 0.3 * n(rng));
        auto F = [&](const CVector& z, Complex q) { return forward_extended(ctx64(), f, z, q); };
        const Complex center = F(zeta, p);
        Complex lap = 0.0;
        for (int j = 0; j < 3; ++j) {
            CVector zp = zeta, zm = zeta;
            zp[j] += h;
            zm[j] -= h;
            lap += (F(zp, p) - 2.0 * center + F(zm, p)) / (h * h);
        }
        const Complex dpp = (F(zeta, p + h) - 2.0 * center + F(zeta, p - h)) / (h * h);
        EXPECT_LE(std::abs(lap - dpp), 1e-4 * std::abs(dpp));
    }
}

TEST(Pde, DualExtensionIsHarmonic) {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> n;
    const double h = 1e-3;
    const SphereFunction F = [](const CVector& z) { return std::exp(0.3 * z[0]) * (z[1] + 2.0 * z[2] * z[2]); };
    for (int t = 0; t < 10; ++t) {
        const SpherePoint x = random_real_point(rng);
        const Cycle lc = l_cycle(x, 64);
        CVector z = x.coords();
        for (int j = 0; j < 3; ++j) z[j] += 0.05 * n(rng);
        const Complex center = dual_extended(F, z, lc);
        Complex lap = 0.0;
        for (int j = 0; j < 3; ++j) {
            CVector zp = z, zm = z;
            zp[j] += h;
            zm[j] -= h;
            lap += (dual_extended(F, zp, lc) - 2.0 * center + dual_extended(F, zm, lc)) / (h * h);
        }
        EXPECT_LE(std::abs(lap), 1e-4 * std::max(1.0, std::abs(center)));
    }
}
