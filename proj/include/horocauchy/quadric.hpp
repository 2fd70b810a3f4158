#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace horocauchy {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kValidationTolerance = 1e-12;

/**
 * Ambient space C^{d+1} with the diagonal bilinear form
 *   pair(a, b) = sum_j signs_j a_j b_j
 * and its quadratic form delta(a) = pair(a, a). Signs all +1 give the
 * sphere/cone picture; (+, -, ..., -) gives the hyperboloid picture.
 *
 * The form is bilinear, not Hermitian: no conjugation anywhere.
 */
class QuadraticSpace {
public:
    QuadraticSpace(int dim, std::vector<int> signs);

    static QuadraticSpace euclidean(int dim);
    static QuadraticSpace lorentzian(int dim);

    int dim() const noexcept { return dim_; }
    int ambient() const noexcept { return dim_ + 1; }
    const std::vector<int>& signs() const noexcept { return signs_; }
    bool is_euclidean() const noexcept;

    /// Q = diag(signs).
    RMatrix form_matrix() const;

    Complex pair(const CVector& a, const CVector& b) const;
    Complex delta(const CVector& a) const;

    /// Throws ArgumentError unless v has ambient() entries, all finite.
    void check(const CVector& v) const;

    friend bool operator==(const QuadraticSpace&, const QuadraticSpace&) = default;

private:
    int dim_;
    std::vector<int> signs_;
};

/// A point z with delta(z) = 1.
class SpherePoint {
public:
    SpherePoint(const QuadraticSpace& space, CVector z, double tol = kValidationTolerance);

    const CVector& coords() const noexcept { return z_; }
    const QuadraticSpace& space() const noexcept { return space_; }
    bool is_real(double tol = kValidationTolerance) const;
    RVector real_coords() const { return z_.real(); }

private:
    QuadraticSpace space_;
    CVector z_;
};

/// A nonzero point zeta with delta(zeta) = 0.
class ConePoint {
public:
    ConePoint(const QuadraticSpace& space, CVector zeta, double tol = kValidationTolerance);

    const CVector& coords() const noexcept { return zeta_; }
    const QuadraticSpace& space() const noexcept { return space_; }

private:
    QuadraticSpace space_;
    CVector zeta_;
};

/// A real point of the upper sheet x_1 > 0 of box(x) = 1 (Lorentzian signs).
class HyperboloidPoint {
public:
    HyperboloidPoint(const QuadraticSpace& space, RVector x, double tol = kValidationTolerance);

    /// Point at geodesic distance r from (1, 0, ..., 0) in unit direction u of R^d.
    static HyperboloidPoint from_polar(const QuadraticSpace& space, double r, const RVector& direction);

    const RVector& coords() const noexcept { return x_; }
    CVector ccoords() const { return x_.cast<Complex>(); }
    const QuadraticSpace& space() const noexcept { return space_; }

private:
    QuadraticSpace space_;
    RVector x_;
};

/// Element of the complex orthogonal group of the form: g^T Q g = Q.
class ComplexRotation {
public:
    ComplexRotation(const QuadraticSpace& space, CMatrix g, double tol = kValidationTolerance);

    static ComplexRotation identity(const QuadraticSpace& space);
    /// exp(A) for A in the Lie algebra (A^T Q + Q A = 0, checked).
    static ComplexRotation exp(const QuadraticSpace& space, const CMatrix& generator);

    const CMatrix& matrix() const noexcept { return g_; }
    const QuadraticSpace& space() const noexcept { return space_; }
    CVector apply(const CVector& v) const { return g_ * v; }

private:
    QuadraticSpace space_;
    CMatrix g_;
};

/// Membership in Xi_S = {Delta(Re zeta) = Delta(Im zeta) < 1}; Euclidean space only.
bool in_xi_s(const ConePoint& zeta);

/// zeta = scale * (a + i b) with (a, b) a random orthonormal pair, scale complex.
CVector random_null_vector(int dim, Complex scale, std::mt19937_64& rng);

/// Uniform random point of the real unit sphere S^d.
RVector random_unit_vector(int ambient, std::mt19937_64& rng);

/// Random real rotation in SO(ambient).
RMatrix random_rotation(int ambient, std::mt19937_64& rng);

/// Random antisymmetric complex matrix with Frobenius norm `size`.
CMatrix random_so_generator(int ambient, double size, std::mt19937_64& rng);

} // namespace horocauchy
