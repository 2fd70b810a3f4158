#include "horocauchy/spectral.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "horocauchy/errors.hpp"
#include "horocauchy/test_functions.hpp"

namespace horocauchy {

namespace {

nlohmann::json complex_json(Complex v) { return nlohmann::json::array({v.real(), v.imag()}); }

nlohmann::json complex_list(const std::vector<Complex>& vs) {
    nlohmann::json out = nlohmann::json::array();
    for (const Complex& v : vs) out.push_back(complex_json(v));
    return out;
}

} // namespace

EllOperator::EllOperator(int d) : d_(d) {
    if (d < 2) {
        throw ArgumentError("the operator L needs d >= 2 (derivative order d-2 is undefined for d = 1)");
    }
    const Complex base(0.0, -2.0 * std::numbers::pi);
    c_ = static_cast<double>(d) / std::pow(base, d);
}

Complex EllOperator::apply(std::span<const Complex> p_derivatives) const {
    if (static_cast<int>(p_derivatives.size()) < d_) {
        throw ArgumentError("L needs p-derivatives of orders 0..d-1");
    }
    return c_ * (0.5 * (d_ - 1) * p_derivatives[d_ - 2] - 2.0 * p_derivatives[d_ - 1]);
}

Complex EllOperator::eigenvalue(int m) const {
    if (m < 0) {
        throw ArgumentError("harmonic degree must be >= 0");
    }
    // k-th derivative of p^{-m-1} at p = 1 is (-1)^k (m+1)(m+2)...(m+k).
    auto derivative = [m](int k) {
        double v = 1.0;
        for (int j = 1; j <= k; ++j) v *= -(m + j);
        return v;
    };
    return c_ * (0.5 * (d_ - 1) * derivative(d_ - 2) - 2.0 * derivative(d_ - 1));
}

double CalibrationReport::kappa_flatness() const {
    double worst = 0.0;
    if (kappa.empty()) return worst;
    for (const Complex& k : kappa) worst = std::max(worst, std::abs(k / kappa.front() - 1.0));
    return worst;
}

nlohmann::json CalibrationReport::to_json() const {
    nlohmann::json residual = nlohmann::json::array();
    for (double r : fit_residual) residual.push_back(r);
    nlohmann::json trials = nlohmann::json::array();
    for (const auto& t : kappa_trials) trials.push_back(complex_list(t));
    return {
        {"d", d},
        {"degrees", degrees},
        {"gamma", complex_list(gamma)},
        {"ell", complex_list(ell)},
        {"kappa", complex_list(kappa)},
        {"kappa_trials", trials},
        {"kappa_mean", complex_json(kappa_mean)},
        {"kappa_spread", kappa_spread},
        {"kappa_flatness", kappa_flatness()},
        {"fit_residual", residual},
    };
}

CalibrationReport calibrate(const TransformContext& ctx, std::span<const int> degrees,
                            const CalibrationOptions& options) {
    if (degrees.empty()) {
        throw ArgumentError("calibration needs at least one degree");
    }
    if (ctx.space().dim() != 2) {
        throw FeatureError("calibration is implemented for d = 2");
    }
    if (options.trials_per_degree < 1 || options.sample_points < 1) {
        throw ArgumentError("calibration needs at least one trial and one sample point");
    }
    const int d = ctx.space().dim();
    const EllOperator op(d);
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

    CalibrationReport report;
    report.d = d;
    for (int m : degrees) {
        if (m < 0) {
            throw ArgumentError("harmonic degree must be >= 0");
        }
        report.degrees.push_back(m);
        std::vector<Complex> gammas;
        double worst_residual = 0.0;
        for (int trial = 0; trial < options.trials_per_degree; ++trial) {
            bool fitted = false;
            for (int attempt = 0; attempt <= options.max_retries && !fitted; ++attempt) {
                const CVector a = random_null_vector(d, std::polar(1.0, phase(rng)), rng);
                const TestFunction h = TestFunction::null_harmonic(ctx.space(), a, m);
                const std::vector<Complex> samples = weighted_samples(ctx, h);
                Complex num = 0.0;
                double norm2 = 0.0, proj2 = 0.0;
                std::vector<Complex> hv, pv;
                for (int s = 0; s < options.sample_points; ++s) {
                    const SpherePoint x(ctx.space(), random_unit_vector(d + 1, rng).cast<Complex>());
                    const Complex hx = h(x.coords());
                    const Complex px = projectors(ctx, samples, m, x)[m];
                    hv.push_back(hx);
                    pv.push_back(px);
                    num += std::conj(hx) * px;
                    norm2 += std::norm(hx);
                    proj2 += std::norm(px);
                }
                if (norm2 < 1e-12 * options.sample_points) {
                    continue;
                }
                const Complex gamma = num / norm2;
                double res2 = 0.0;
                for (std::size_t s = 0; s < hv.size(); ++s) res2 += std::norm(pv[s] - gamma * hv[s]);
                worst_residual = std::max(worst_residual, std::sqrt(res2 / std::max(proj2, 1e-300)));
                gammas.push_back(gamma);
                fitted = true;
            }
            if (!fitted) {
                throw NumericalError("degenerate projector fit for degree " + std::to_string(m) + " after " +
                                     std::to_string(options.max_retries) + " retries");
            }
        }
        Complex mean = 0.0;
        for (const Complex& g : gammas) mean += g;
        mean /= static_cast<double>(gammas.size());
        const Complex ell = op.eigenvalue(m);
        std::vector<Complex> kappas;
        for (const Complex& g : gammas) kappas.push_back(1.0 / (g * ell));
        report.gamma.push_back(mean);
        report.ell.push_back(ell);
        report.kappa.push_back(1.0 / (mean * ell));
        report.kappa_trials.push_back(std::move(kappas));
        report.fit_residual.push_back(worst_residual);
    }
    Complex sum = 0.0;
    for (const Complex& k : report.kappa) sum += k;
    report.kappa_mean = sum / static_cast<double>(report.kappa.size());
    for (const auto& trials : report.kappa_trials) {
        for (const Complex& k : trials) {
            report.kappa_spread = std::max(report.kappa_spread, std::abs(k / report.kappa_mean - 1.0));
        }
    }
    return report;
}

Complex invert_samples(const TransformContext& ctx, const std::vector<Complex>& samples, const SpherePoint& x,
                       int max_degree, Complex kappa) {
    if (max_degree < 0) {
        throw ArgumentError("truncation degree must be >= 0");
    }
    const EllOperator op(ctx.space().dim());
    const std::vector<Complex> parts = projectors(ctx, samples, max_degree, x);
    Complex sum = 0.0;
    for (int m = 0; m <= max_degree; ++m) sum += op.eigenvalue(m) * parts[m];
    return kappa * sum;
}

Complex invert(const TransformContext& ctx, const SphereFunction& f, const SpherePoint& x, int max_degree,
               std::optional<Complex> kappa) {
    return invert_samples(ctx, weighted_samples(ctx, f), x, max_degree, kappa.value_or(1.0));
}

Complex invert(const TransformContext& ctx, const SphereFunction& f, const SpherePoint& x, int max_degree,
               const CalibrationReport& calibration) {
    return invert(ctx, f, x, max_degree, calibration.kappa_mean);
}

} // namespace horocauchy
