#pragma once

#include "qpr/common.hpp"

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

namespace qpr {

using Matrix2c = Eigen::Matrix2cd;

inline Matrix2c pauli_identity() {
    return Matrix2c::Identity();
}

inline Matrix2c pauli_x() {
    Matrix2c m;
    m << 0, 1, 1, 0;
    return m;
}

inline Matrix2c pauli_y() {
    using namespace std::complex_literals;
    Matrix2c m;
    m << 0, -1i, 1i, 0;
    return m;
}

inline Matrix2c pauli_z() {
    Matrix2c m;
    m << 1, 0, 0, -1;
    return m;
}

/// Hermitian qubit operator in the Pauli coefficient basis:
/// w*I + x0*X + x1*Y + x2*Z. Eigenvalues are w ± |x|, trace is 2w.
struct HermitianOp {
    double w = 0.0;
    Vec3 x = Vec3::Zero();

    Matrix2c to_matrix() const {
        return w * pauli_identity() + x[0] * pauli_x() + x[1] * pauli_y() + x[2] * pauli_z();
    }

    double trace() const { return 2.0 * w; }

    std::pair<double, double> eigenvalues() const {
        const double r = x.norm();
        return {w + r, w - r};
    }
};

/// Qubit density operator rho(x) = (I + x.sigma)/2, |x| <= 1.
struct DensityOp {
    Vec3 bloch = Vec3::Zero();

    HermitianOp op() const { return {0.5, 0.5 * bloch}; }
    Matrix2c to_matrix() const { return op().to_matrix(); }
    bool is_valid(double tol = default_tol()) const { return bloch.norm() <= 1.0 + tol; }
};

/// POVM element E(m, p) = m*I + p.sigma. E and I-E are positive exactly
/// when |p| <= m <= 1 - |p|, a double cone over the radius-1/2 ball.
struct PovmElement {
    double m = 0.0;
    Vec3 p = Vec3::Zero();

    HermitianOp op() const { return {m, p}; }
    Matrix2c to_matrix() const { return op().to_matrix(); }

    bool is_valid(double tol = default_tol()) const {
        const double r = p.norm();
        return r <= m + tol && r <= 1.0 - m + tol;
    }
};

/// Discrete POVM: elements sum to the identity, i.e. sum m_k = 1 and
/// sum p_k = 0.
struct Povm {
    std::vector<PovmElement> elements;
};

/// Decompose a Hermitian 2x2 matrix into Pauli coefficients
/// (w = Tr(M)/2, x_i = Tr(M sigma_i)/2). Throws std::invalid_argument if
/// the input is not Hermitian within `tol`.
inline HermitianOp pauli_decompose(const Matrix2c& m, double tol = default_tol()) {
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > tol) {
        std::ostringstream os;
        os << "pauli_decompose: matrix is not Hermitian (max asymmetry " << asym << ")";
        throw std::invalid_argument(os.str());
    }
    HermitianOp op;
    op.w = 0.5 * m.trace().real();
    op.x[0] = 0.5 * (m * pauli_x()).trace().real();
    op.x[1] = 0.5 * (m * pauli_y()).trace().real();
    op.x[2] = 0.5 * (m * pauli_z()).trace().real();
    return op;
}

inline std::pair<double, double> eigenvalues(const HermitianOp& op) {
    return op.eigenvalues();
}

/// Born probability Tr(rho(x) E(m, p)) = m + x.p.
inline double born_probability(const DensityOp& rho, const PovmElement& e) {
    return e.m + rho.bloch.dot(e.p);
}

/// Check the POVM invariants: each element inside its cone, coefficients of
/// I summing to 1 and Pauli parts summing to zero. Reports the first
/// failing condition.
inline Status validate_povm(const Povm& povm, double tol = default_tol()) {
    double m_sum = 0.0;
    Vec3 p_sum = Vec3::Zero();
    for (std::size_t k = 0; k < povm.elements.size(); ++k) {
        const auto& e = povm.elements[k];
        if (!e.is_valid(tol)) {
            std::ostringstream os;
            os << "element " << k << " is not a POVM element (m=" << e.m
               << ", |p|=" << e.p.norm() << ")";
            return Status::bad(os.str());
        }
        m_sum += e.m;
        p_sum += e.p;
    }
    if (std::abs(m_sum - 1.0) > tol) {
        std::ostringstream os;
        os << "identity coefficients sum to " << m_sum << ", expected 1";
        return Status::bad(os.str());
    }
    if (p_sum.norm() > tol) {
        std::ostringstream os;
        os << "Pauli parts sum to |" << p_sum.transpose() << "| = " << p_sum.norm()
           << ", expected 0";
        return Status::bad(os.str());
    }
    return Status::good();
}

namespace detail {

inline void check_mixture_weights(std::span<const double> weights, double tol) {
    if (weights.empty()) {
        throw std::invalid_argument("mix: empty mixture");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (w < -tol) {
            throw std::invalid_argument("mix: negative weight");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > tol) {
        std::ostringstream os;
        os << "mix: weights sum to " << sum << ", expected 1";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace detail

/// Convex combination of density operators (coefficientwise on Bloch
/// vectors). Weights must be nonnegative and sum to 1 within `tol`.
inline DensityOp mix(std::span<const std::pair<double, DensityOp>> items,
                     double tol = default_tol()) {
    std::vector<double> ws;
    ws.reserve(items.size());
    for (const auto& [w, _] : items) ws.push_back(w);
    detail::check_mixture_weights(ws, tol);
    DensityOp out;
    for (const auto& [w, rho] : items) out.bloch += w * rho.bloch;
    return out;
}

/// Convex combination of POVM elements. The cone is convex, so the result
/// is a valid element whenever the inputs are.
inline PovmElement mix(std::span<const std::pair<double, PovmElement>> items,
                       double tol = default_tol()) {
    std::vector<double> ws;
    ws.reserve(items.size());
    for (const auto& [w, _] : items) ws.push_back(w);
    detail::check_mixture_weights(ws, tol);
    PovmElement out;
    for (const auto& [w, e] : items) {
        out.m += w * e.m;
        out.p += w * e.p;
    }
    return out;
}

/// Uniform Bloch vector in the ball of radius `radius` (rejection from the
/// bounding cube; deterministic given the generator state).
inline Vec3 random_ball_vector(std::mt19937_64& rng, double radius = 1.0) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    while (true) {
        const Vec3 v(u(rng), u(rng), u(rng));
        if (v.squaredNorm() <= 1.0) {
            return radius * v;
        }
    }
}

inline DensityOp random_density(std::mt19937_64& rng) {
    return DensityOp{random_ball_vector(rng)};
}

/// Valid POVM element: p uniform in the radius-1/2 ball, then m uniform in
/// [|p|, 1-|p|].
inline PovmElement random_povm_element(std::mt19937_64& rng) {
    const Vec3 p = random_ball_vector(rng, 0.5);
    const double r = p.norm();
    std::uniform_real_distribution<double> u(r, 1.0 - r);
    return PovmElement{u(rng), p};
}

}  // namespace qpr
