#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "horocauchy/transforms.hpp"

namespace horocauchy {

/**
 * The operator L acting on the degree -1 homogeneous extension F(zeta, p):
 *
 *   L F = c ( (d-1)/2 d^{d-2}F/dp^{d-2} - 2 d^{d-1}F/dp^{d-1} ) at p = 1,
 *   c   = d / (-2 pi i)^d.
 *
 * On a degree-m component F = p^{-m-1} F_m(zeta) it is multiplication by
 * eigenvalue(m). Undefined for d < 2.
 */
class EllOperator {
public:
    explicit EllOperator(int d);

    int dim() const noexcept { return d_; }
    Complex constant() const noexcept { return c_; }

    /// Number of p-derivatives (orders 0..d-1) that apply() reads.
    int derivative_count() const noexcept { return d_; }

    /// L from the p-derivatives F, F', ..., F^{(d-1)} at p = 1.
    Complex apply(std::span<const Complex> p_derivatives) const;

    /// Multiplier on degree-m homogeneous functions.
    Complex eigenvalue(int m) const;

private:
    int d_;
    Complex c_;
};

inline Complex ell_eigenvalue(const EllOperator& op, int m) { return op.eigenvalue(m); }

/**
 * Measured projector multipliers gamma(m) (projector(h, m, .) = gamma(m) h on
 * degree-m harmonics) and kappa(m) = 1 / (gamma(m) L(m)). The inversion
 * formula holds up to one global constant iff kappa does not depend on m.
 */
struct CalibrationReport {
    int d = 2;
    std::vector<int> degrees;
    std::vector<Complex> gamma;
    std::vector<Complex> ell;
    std::vector<Complex> kappa;
    std::vector<std::vector<Complex>> kappa_trials;
    std::vector<double> fit_residual; ///< worst relative least-squares residual per degree
    Complex kappa_mean = 0.0;
    double kappa_spread = 0.0; ///< max over degrees and trials of |kappa / kappa_mean - 1|

    /// max over degrees of |kappa(m) / kappa(first degree) - 1|.
    double kappa_flatness() const;
    nlohmann::json to_json() const;
};

struct CalibrationOptions {
    int trials_per_degree = 3;
    int sample_points = 20;
    int max_retries = 5;
    std::uint64_t seed = 0;
};

CalibrationReport calibrate(const TransformContext& ctx, std::span<const int> degrees,
                            const CalibrationOptions& options = {});

/// sum_{m <= M} kappa L(m) f_m(x); kappa = 1 unless given.
Complex invert(const TransformContext& ctx, const SphereFunction& f, const SpherePoint& x, int max_degree,
               std::optional<Complex> kappa = std::nullopt);

/// As above with kappa = calibration.kappa_mean.
Complex invert(const TransformContext& ctx, const SphereFunction& f, const SpherePoint& x, int max_degree,
               const CalibrationReport& calibration);

/// Inversion from precomputed weighted samples (reuse across many points).
Complex invert_samples(const TransformContext& ctx, const std::vector<Complex>& samples, const SpherePoint& x,
                       int max_degree, Complex kappa);

} // namespace horocauchy
