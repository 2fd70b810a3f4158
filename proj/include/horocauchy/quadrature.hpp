#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace horocauchy {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// A rule given on [-1, 1] moved affinely onto [a, b].
inline QuadratureRule mapped(const QuadratureRule& unit, double a, double b) {
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    QuadratureRule out{unit.nodes, unit.weights};
    for (std::size_t i = 0; i < out.nodes.size(); ++i) {
        out.nodes[i] = mid + half * unit.nodes[i];
        out.weights[i] *= half;
    }
    return out;
}

/// n-point periodic trapezoid rule on [a, a + period), nodes a + k*period/n.
QuadratureRule periodic_trapezoid(int n, double a, double period);

/// Neumaier-compensated accumulator for complex sums, real and imaginary parts kept separately.
class CompensatedSum {
public:
    void add(std::complex<double> v) noexcept {
        add_part(re_, re_c_, v.real());
        add_part(im_, im_c_, v.imag());
    }
    std::complex<double> value() const noexcept { return {re_ + re_c_, im_ + im_c_}; }

private:
    static void add_part(double& sum, double& comp, double x) noexcept {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }

    double re_ = 0.0, re_c_ = 0.0;
    double im_ = 0.0, im_c_ = 0.0;
};

} // namespace horocauchy
