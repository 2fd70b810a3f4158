#include "horocauchy/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "horocauchy/errors.hpp"

namespace horocauchy {

QuadratureRule gauss_legendre(int n, double a, double b) {
    if (n < 1) {
        throw ArgumentError("Gauss-Legendre rule needs at least one node");
    }
    // Newton on P_n from the Tricomi-type initial guess, recurrence in long double.
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const long double pi = std::numbers::pi_v<long double>;
    const long double half = 0.5L * (static_cast<long double>(b) - a);
    const long double mid = 0.5L * (static_cast<long double>(b) + a);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        long double x = std::cos(pi * (i + 0.75L) / (n + 0.5L));
        long double dp = 0.0L;
        for (int iter = 0; iter < 100; ++iter) {
            long double p0 = 1.0L, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0L);
            const long double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-19L) break;
        }
        {
            long double p0 = 1.0L, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0L);
        }
        const long double w = 2.0L / ((1.0L - x * x) * dp * dp);
        // ascending order on [a, b]
        rule.nodes[i] = static_cast<double>(mid - half * x);
        rule.nodes[n - 1 - i] = static_cast<double>(mid + half * x);
        rule.weights[i] = rule.weights[n - 1 - i] = static_cast<double>(half * w);
    }
    return rule;
}

QuadratureRule periodic_trapezoid(int n, double a, double period) {
    if (n < 1) {
        throw ArgumentError("trapezoid rule needs at least one node");
    }
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.assign(n, period / n);
    for (int k = 0; k < n; ++k) rule.nodes[k] = a + period * k / n;
    return rule;
}

} // namespace horocauchy
