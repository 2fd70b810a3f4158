#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "horocauchy/quadric.hpp"

namespace horocauchy {

using Chart = std::function<CVector(std::span<const double>)>;
/// Columns are the partial derivatives of the chart, shape (d+1) x k.
using ChartJacobian = std::function<CMatrix(std::span<const double>)>;

/// Step of the central differences used when a chart comes without a Jacobian.
inline constexpr double kChartDifferenceStep = 1e-6;

/// Which equations the chart images must satisfy.
enum class CycleManifold {
    Sphere,       ///< Delta(z) = 1
    Section,      ///< Delta(zeta) = 0 and zeta . x = 1 for the section base x
    Unconstrained ///< no check (test charts)
};

struct ParameterBox {
    std::vector<double> lower;
    std::vector<double> upper;

    double volume() const;
};

struct CycleNode {
    std::vector<double> param;
    double weight = 0.0;
    CVector point;
    CMatrix tangents;
};

/**
 * A compact real k-cycle in C^{d+1}, given by a chart on a parameter box and a
 * product quadrature on that box. Images and tangent frames are computed once
 * at construction; the value is immutable afterwards.
 *
 * Sphere cycles of the family g.S(0) additionally remember g (the "frame"),
 * which lets the transforms re-parametrise the same cycle by g.R.S(0) for a
 * real rotation R.
 */
class Cycle {
public:
    struct Spec {
        QuadraticSpace space = QuadraticSpace::euclidean(2);
        int dim = 0;
        Chart chart;
        ChartJacobian jacobian; ///< optional; central differences when empty
        ParameterBox box;
        std::vector<std::vector<double>> params;
        std::vector<double> weights;
        int orientation = 1;
        CycleManifold manifold = CycleManifold::Unconstrained;
        std::optional<CVector> section_base;
        std::optional<CMatrix> sphere_frame;
        std::vector<int> grid_shape; ///< product-grid sizes, informational
    };

    explicit Cycle(Spec spec);

    const QuadraticSpace& space() const noexcept { return spec_.space; }
    int dim() const noexcept { return spec_.dim; }
    int orientation() const noexcept { return spec_.orientation; }
    CycleManifold manifold() const noexcept { return spec_.manifold; }
    const std::optional<CVector>& section_base() const noexcept { return spec_.section_base; }
    const std::optional<CMatrix>& sphere_frame() const noexcept { return spec_.sphere_frame; }
    const std::vector<int>& grid_shape() const noexcept { return spec_.grid_shape; }
    const ParameterBox& box() const noexcept { return spec_.box; }
    const Chart& chart() const noexcept { return spec_.chart; }
    const ChartJacobian& jacobian() const noexcept { return spec_.jacobian; }

    std::size_t size() const noexcept { return nodes_.size(); }
    const CycleNode& node(std::size_t i) const { return nodes_.at(i); }
    const std::vector<CycleNode>& nodes() const noexcept { return nodes_; }

    CVector evaluate(std::span<const double> param) const { return spec_.chart(param); }
    CMatrix tangents_at(std::span<const double> param) const;

    /// Same chart and nodes, opposite orientation sign.
    Cycle with_orientation(int orientation) const;

    /// Copy of the defining spec (to derive new cycles).
    const Spec& spec() const noexcept { return spec_; }

private:
    Spec spec_;
    std::vector<CycleNode> nodes_;
};

/// Sphere cycle frame . S(0): z = frame * (cos t, sin t cos p, sin t sin p), d = 2 only.
Cycle sphere_cycle(const CMatrix& frame, int n_polar, int n_azimuthal);

/// The real sphere S(0) with Gauss-Legendre in theta times trapezoid in phi.
Cycle standard_sphere_cycle(int d, int n_polar, int n_azimuthal);

/// Real form L_R(x) of the section L(x): zeta(s) = x + i(cos s e + sin s f), det[x, e, f] = +1.
Cycle l_cycle(const SpherePoint& x, int n_nodes);

/// g applied to every chart image and tangent; weights unchanged.
Cycle rotate_cycle(const ComplexRotation& g, const Cycle& cycle);

struct SeparationResult {
    double distance;       ///< min |p - zeta . z| found
    std::size_t node;      ///< best quadrature node
    std::vector<double> param; ///< refined parameter location
};

/// min over the cycle of |p - zeta . z|: node scan, then local refinement from the best node.
SeparationResult kernel_separation(const CVector& zeta, Complex p, const Cycle& cycle, bool refine = true);

/// min |1 - zeta . z| over the cycle; values below ~1e-6 mean E(zeta) meets the cycle.
double horosphere_separation(const ConePoint& zeta, const Cycle& cycle);

enum class FormKind { Omega, Nu };

/**
 * omega = [z, dz^{d}] on d-cycles in the sphere, or nu_z = [z, zeta, dzeta^{d-1}]
 * on (d-1)-cycles in a section. For nu the basepoint fills the first column.
 */
struct FormSpec {
    FormKind kind = FormKind::Omega;
    std::optional<CVector> basepoint;

    static FormSpec omega() { return {}; }
    static FormSpec nu(const SpherePoint& z) { return {FormKind::Nu, z.coords()}; }
    /// nu with an arbitrary first column (off-sphere extension of the dual transform).
    static FormSpec nu_at(CVector z) { return {FormKind::Nu, std::move(z)}; }
};

/// Chart pullback of the form at node i, including the factorial and the orientation sign.
Complex pullback_density(const FormSpec& form, const Cycle& cycle, std::size_t i);

/// weight * pullback density per node.
std::vector<Complex> form_weights(const FormSpec& form, const Cycle& cycle);

using PointFunction = std::function<Complex(const CVector&)>;

/// Sum over nodes of weight * density * integrand, compensated, in node order.
Complex integrate(const Cycle& cycle, const PointFunction& integrand, const FormSpec& form);

} // namespace horocauchy
