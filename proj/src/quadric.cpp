#include "horocauchy/quadric.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "horocauchy/errors.hpp"

namespace horocauchy {

namespace {

std::string describe(const CVector& v) {
    std::ostringstream os;
    os << "(";
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        os << (j ? ", " : "") << v[j];
    }
    os << ")";
    return os.str();
}

} // namespace

QuadraticSpace::QuadraticSpace(int dim, std::vector<int> signs) : dim_(dim), signs_(std::move(signs)) {
    if (dim_ < 1) {
        throw ArgumentError("quadratic space dimension must be >= 1");
    }
    if (static_cast<int>(signs_.size()) != dim_ + 1) {
        throw ArgumentError("signature length must be dim + 1");
    }
    for (int s : signs_) {
        if (s != 1 && s != -1) {
            throw ArgumentError("signature entries must be +1 or -1");
        }
    }
}

QuadraticSpace QuadraticSpace::euclidean(int dim) {
    return QuadraticSpace(dim, std::vector<int>(dim + 1, 1));
}

QuadraticSpace QuadraticSpace::lorentzian(int dim) {
    std::vector<int> signs(dim + 1, -1);
    signs[0] = 1;
    return QuadraticSpace(dim, std::move(signs));
}

bool QuadraticSpace::is_euclidean() const noexcept {
    for (int s : signs_) {
        if (s != 1) return false;
    }
    return true;
}

RMatrix QuadraticSpace::form_matrix() const {
    RMatrix q = RMatrix::Zero(ambient(), ambient());
    for (int j = 0; j < ambient(); ++j) q(j, j) = signs_[j];
    return q;
}

void QuadraticSpace::check(const CVector& v) const {
    if (v.size() != ambient()) {
        throw ArgumentError("vector length " + std::to_string(v.size()) + " does not match ambient dimension " +
                            std::to_string(ambient()));
    }
    if (!v.allFinite()) {
        throw ArgumentError("vector has non-finite entries: " + describe(v));
    }
}

Complex QuadraticSpace::pair(const CVector& a, const CVector& b) const {
    check(a);
    check(b);
    Complex acc = 0.0;
    for (int j = 0; j < ambient(); ++j) {
        acc += static_cast<double>(signs_[j]) * a[j] * b[j];
    }
    return acc;
}

Complex QuadraticSpace::delta(const CVector& a) const { return pair(a, a); }

SpherePoint::SpherePoint(const QuadraticSpace& space, CVector z, double tol) : space_(space), z_(std::move(z)) {
    const Complex d = space_.delta(z_);
    if (std::abs(d - 1.0) > tol) {
        throw ValidationError("not on the sphere: Delta(z) = " + std::to_string(d.real()) + " + " +
                              std::to_string(d.imag()) + "i for z = " + describe(z_));
    }
}

bool SpherePoint::is_real(double tol) const { return z_.imag().cwiseAbs().maxCoeff() <= tol; }

ConePoint::ConePoint(const QuadraticSpace& space, CVector zeta, double tol) : space_(space), zeta_(std::move(zeta)) {
    space_.check(zeta_);
    const double scale = zeta_.cwiseAbs().maxCoeff();
    if (scale == 0.0) {
        throw ValidationError("cone point must be nonzero");
    }
    // Relative to |zeta|^2 so that scaled null vectors validate uniformly.
    if (std::abs(space_.delta(zeta_)) > tol * std::max(1.0, scale * scale)) {
        throw ValidationError("not on the null cone: zeta = " + describe(zeta_));
    }
}

HyperboloidPoint::HyperboloidPoint(const QuadraticSpace& space, RVector x, double tol) : space_(space), x_(std::move(x)) {
    if (space_.is_euclidean()) {
        throw ArgumentError("hyperboloid points need a Lorentzian space");
    }
    const CVector cx = x_.cast<Complex>();
    space_.check(cx);
    if (std::abs(space_.delta(cx) - 1.0) > tol * std::max(1.0, x_.squaredNorm()) || x_[0] <= 0.0) {
        throw ValidationError("not on the upper sheet of the hyperboloid: x = " + describe(cx));
    }
}

HyperboloidPoint HyperboloidPoint::from_polar(const QuadraticSpace& space, double r, const RVector& direction) {
    if (direction.size() != space.dim()) {
        throw ArgumentError("direction must have length d");
    }
    RVector x(space.ambient());
    x[0] = std::cosh(r);
    x.tail(space.dim()) = std::sinh(r) * direction.normalized();
    return HyperboloidPoint(space, std::move(x));
}

ComplexRotation::ComplexRotation(const QuadraticSpace& space, CMatrix g, double tol) : space_(space), g_(std::move(g)) {
    if (g_.rows() != space_.ambient() || g_.cols() != space_.ambient()) {
        throw ValidationError("rotation matrix has wrong shape");
    }
    if (!g_.allFinite()) {
        throw ValidationError("rotation matrix has non-finite entries");
    }
    const CMatrix q = space_.form_matrix().cast<Complex>();
    const CMatrix defect = g_.transpose() * q * g_ - q;
    if (defect.cwiseAbs().maxCoeff() > tol * std::max(1.0, g_.cwiseAbs2().maxCoeff())) {
        throw ValidationError("matrix does not preserve the quadratic form (g^T Q g != Q)");
    }
}

ComplexRotation ComplexRotation::identity(const QuadraticSpace& space) {
    return ComplexRotation(space, CMatrix::Identity(space.ambient(), space.ambient()));
}

ComplexRotation ComplexRotation::exp(const QuadraticSpace& space, const CMatrix& generator) {
    const CMatrix q = space.form_matrix().cast<Complex>();
    if ((generator.transpose() * q + q * generator).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, generator.norm())) {
        throw ValidationError("generator is not in the Lie algebra of the form");
    }
    return ComplexRotation(space, generator.exp());
}

bool in_xi_s(const ConePoint& zeta) {
    const QuadraticSpace& space = zeta.space();
    if (!space.is_euclidean()) {
        throw ArgumentError("Xi_S membership is defined for the Euclidean form only");
    }
    const RVector xi = zeta.coords().real();
    const RVector eta = zeta.coords().imag();
    const double dxi = xi.squaredNorm();
    const double deta = eta.squaredNorm();
    // Both hold automatically on the cone; a violation means the point was not really null.
    if (std::abs(dxi - deta) > 1e-10 * (1.0 + dxi) || std::abs(xi.dot(eta)) > 1e-10 * (1.0 + xi.norm() * eta.norm())) {
        throw ValidationError("cone point violates Delta(xi) = Delta(eta), xi.eta = 0");
    }
    return dxi < 1.0;
}

RVector random_unit_vector(int ambient, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    RVector v(ambient);
    do {
        for (int j = 0; j < ambient; ++j) v[j] = normal(rng);
    } while (v.norm() < 1e-8);
    return v.normalized();
}

RMatrix random_rotation(int ambient, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    RMatrix a(ambient, ambient);
    for (int i = 0; i < ambient; ++i)
        for (int j = 0; j < ambient; ++j) a(i, j) = normal(rng);
    Eigen::HouseholderQR<RMatrix> qr(a);
    RMatrix q = qr.householderQ();
    if (q.determinant() < 0) q.col(0) *= -1.0;
    return q;
}

CVector random_null_vector(int dim, Complex scale, std::mt19937_64& rng) {
    const RMatrix r = random_rotation(dim + 1, rng);
    CVector v(dim + 1);
    for (int j = 0; j <= dim; ++j) v[j] = Complex(r(j, 0), r(j, 1));
    return scale * v;
}

CMatrix random_so_generator(int ambient, double size, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    CMatrix a = CMatrix::Zero(ambient, ambient);
    for (int i = 0; i < ambient; ++i) {
        for (int j = i + 1; j < ambient; ++j) {
            const Complex v(normal(rng), normal(rng));
            a(i, j) = v;
            a(j, i) = -v;
        }
    }
    return a * (size / a.norm());
}

} // namespace horocauchy
