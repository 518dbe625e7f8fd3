#pragma once

#include "qpr/certifier.hpp"
#include "qpr/common.hpp"
#include "qpr/ontic.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <random>
#include <span>
#include <sstream>
#include <vector>

namespace qpr {

using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

inline Status validate_hermitian(const MatrixXc& m, double tol = default_tol()) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        return Status::bad("matrix is not square");
    }
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > tol) {
        std::ostringstream os;
        os << "matrix is not Hermitian (max asymmetry " << asym << ")";
        return Status::bad(os.str());
    }
    return Status::good();
}

inline Status validate_density_matrix(const MatrixXc& m, double tol = default_tol()) {
    if (auto st = validate_hermitian(m, tol); !st) return st;
    if (std::abs(m.trace().real() - 1.0) > tol) {
        return Status::bad("density matrix does not have trace 1");
    }
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol) {
        std::ostringstream os;
        os << "density matrix has negative eigenvalue " << es.eigenvalues().minCoeff();
        return Status::bad(os.str());
    }
    return Status::good();
}

inline Status validate_effect_matrix(const MatrixXc& m, double tol = default_tol()) {
    if (auto st = validate_hermitian(m, tol); !st) return st;
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol || es.eigenvalues().maxCoeff() > 1.0 + tol) {
        std::ostringstream os;
        os << "effect spectrum [" << es.eigenvalues().minCoeff() << ", "
           << es.eigenvalues().maxCoeff() << "] is not inside [0, 1]";
        return Status::bad(os.str());
    }
    return Status::good();
}

/// Isometric inclusion of H' (dimension k) into H (dimension d), together
/// with the anchor unit vector |alpha> in H' used to extend effects on the
/// orthogonal complement.
struct Embedding {
    MatrixXc isometry;  // d x k, orthonormal columns
    VectorXc anchor;    // k, unit norm

    Eigen::Index big_dim() const { return isometry.rows(); }
    Eigen::Index small_dim() const { return isometry.cols(); }

    Status validate(double tol = default_tol()) const {
        if (isometry.rows() < isometry.cols() || isometry.cols() < 1) {
            return Status::bad("embedding: isometry must be a tall d x k matrix");
        }
        const MatrixXc gram = isometry.adjoint() * isometry;
        const double defect =
            (gram - MatrixXc::Identity(small_dim(), small_dim())).cwiseAbs().maxCoeff();
        if (defect > tol) {
            std::ostringstream os;
            os << "embedding: columns are not orthonormal (defect " << defect << ")";
            return Status::bad(os.str());
        }
        if (anchor.size() != small_dim()) {
            return Status::bad("embedding: anchor dimension mismatch");
        }
        if (std::abs(anchor.norm() - 1.0) > tol) {
            return Status::bad("embedding: anchor is not a unit vector");
        }
        return Status::good();
    }

    /// Coordinate inclusion onto the listed basis vectors of H, anchored at
    /// the first of them.
    static Embedding coordinate(Eigen::Index d, std::span<const Eigen::Index> indices) {
        Embedding emb;
        emb.isometry = MatrixXc::Zero(d, static_cast<Eigen::Index>(indices.size()));
        for (Eigen::Index j = 0; j < emb.isometry.cols(); ++j) {
            if (indices[j] < 0 || indices[j] >= d) {
                throw std::invalid_argument("coordinate embedding: basis index out of range");
            }
            emb.isometry(indices[j], j) = 1.0;
        }
        emb.anchor = VectorXc::Zero(emb.isometry.cols());
        emb.anchor[0] = 1.0;
        return emb;
    }
};

/// rho_bar = i rho p: the state acts as rho on H' and as zero on the
/// orthogonal complement. Preserves trace and mixtures.
inline MatrixXc lift_density(const MatrixXc& rho_small, const Embedding& emb) {
    if (rho_small.rows() != emb.small_dim() || rho_small.cols() != emb.small_dim()) {
        throw std::invalid_argument("lift_density: dimension mismatch");
    }
    return emb.isometry * rho_small * emb.isometry.adjoint();
}

/// E_bar agrees with E on H' and acts as <alpha|E|alpha> times the identity
/// on the orthogonal complement. Sends identity to identity and zero to
/// zero, and maps POVMs on H' to POVMs on H.
inline MatrixXc lift_effect(const MatrixXc& e_small, const Embedding& emb) {
    if (e_small.rows() != emb.small_dim() || e_small.cols() != emb.small_dim()) {
        throw std::invalid_argument("lift_effect: dimension mismatch");
    }
    const double scalar = (emb.anchor.adjoint() * e_small * emb.anchor)(0, 0).real();
    const MatrixXc proj = emb.isometry * emb.isometry.adjoint();
    return emb.isometry * e_small * emb.isometry.adjoint() +
           scalar * (MatrixXc::Identity(emb.big_dim(), emb.big_dim()) - proj);
}

/// Tr(rho_bar E_bar) = Tr(rho E): the complement contributes nothing since
/// rho_bar vanishes there.
inline CheckReport trace_preservation_check(const MatrixXc& rho_small, const MatrixXc& e_small,
                                            const Embedding& emb, double tol = default_tol()) {
    const double lifted =
        (lift_density(rho_small, emb) * lift_effect(e_small, emb)).trace().real();
    const double original = (rho_small * e_small).trace().real();
    CheckReport report;
    report.worst_defect = std::abs(lifted - original);
    report.pass = report.worst_defect <= tol;
    if (!report.pass) {
        std::ostringstream os;
        os << "Tr(lift rho lift E) = " << lifted << " vs Tr(rho E) = " << original;
        report.witness = os.str();
    }
    return report;
}

/// Query-based representation of a d-dimensional system over a finite
/// ontic space: state or effect matrix in, ontic function out. Stateless
/// queries, safe to call concurrently.
struct MatrixRep {
    Eigen::Index dim = 0;
    OnticSpace space;
    std::function<OnticFunction(const MatrixXc&)> mu;
    std::function<OnticFunction(const MatrixXc&)> xi;
};

/// Orthonormal basis of the Hermitian d x d matrices under <M,N> = Tr(MN):
/// diagonal units, symmetric pairs, antisymmetric pairs.
inline std::vector<MatrixXc> hermitian_basis(Eigen::Index d) {
    using namespace std::complex_literals;
    std::vector<MatrixXc> basis;
    basis.reserve(static_cast<std::size_t>(d * d));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (Eigen::Index i = 0; i < d; ++i) {
        MatrixXc m = MatrixXc::Zero(d, d);
        m(i, i) = 1.0;
        basis.push_back(std::move(m));
    }
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i + 1; j < d; ++j) {
            MatrixXc s = MatrixXc::Zero(d, d);
            s(i, j) = inv_sqrt2;
            s(j, i) = inv_sqrt2;
            basis.push_back(std::move(s));
            MatrixXc a = MatrixXc::Zero(d, d);
            a(i, j) = -1i * inv_sqrt2;
            a(j, i) = 1i * inv_sqrt2;
            basis.push_back(std::move(a));
        }
    }
    return basis;
}

/// mu_rho(k) = Tr(rho F_k), xi_E(k) = Tr(G_k E) with {G_k} the
/// pseudoinverse dual of the frame. QPR3 holds by construction whenever
/// the frame spans the Hermitian space; throws on rank-deficient frames.
inline MatrixRep frame_representation(Eigen::Index d, std::span<const MatrixXc> frame,
                                      double rank_tol = 1e-9) {
    const Eigen::Index dims = d * d;
    const Eigen::Index count = static_cast<Eigen::Index>(frame.size());
    if (count < dims) {
        throw std::invalid_argument("frame_representation: frame cannot span the Hermitian space");
    }
    const auto basis = hermitian_basis(d);
    Eigen::MatrixXd coords(count, dims);  // row k = frame element k in the Hermitian basis
    for (Eigen::Index k = 0; k < count; ++k) {
        if (frame[k].rows() != d || frame[k].cols() != d) {
            throw std::invalid_argument("frame_representation: element dimension mismatch");
        }
        for (Eigen::Index a = 0; a < dims; ++a) {
            coords(k, a) = (frame[k] * basis[static_cast<std::size_t>(a)]).trace().real();
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(coords, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sigma = svd.singularValues();
    if (sigma[sigma.size() - 1] <= rank_tol * sigma[0]) {
        throw std::invalid_argument("frame_representation: frame is rank-deficient");
    }
    // Dual coordinates: duals = coords (coords^T coords)^{-1}, so that
    // coords^T duals = identity on the Hermitian space.
    const Eigen::MatrixXd duals = svd.matrixU().leftCols(dims) *
                                  sigma.cwiseInverse().asDiagonal() *
                                  svd.matrixV().transpose();
    MatrixRep rep;
    rep.dim = d;
    for (Eigen::Index k = 0; k < count; ++k) {
        rep.space.labels.push_back("k" + std::to_string(k));
    }
    rep.space.weights = Eigen::VectorXd::Ones(count);
    auto vectorize = [basis, dims](const MatrixXc& m) {
        Eigen::VectorXd v(dims);
        for (Eigen::Index a = 0; a < dims; ++a) {
            v[a] = (m * basis[static_cast<std::size_t>(a)]).trace().real();
        }
        return v;
    };
    rep.mu = [coords, vectorize, d](const MatrixXc& rho) -> OnticFunction {
        if (rho.rows() != d || rho.cols() != d) {
            throw std::invalid_argument("frame representation: state dimension mismatch");
        }
        return coords * vectorize(rho);
    };
    rep.xi = [duals, vectorize, d](const MatrixXc& e) -> OnticFunction {
        if (e.rows() != d || e.cols() != d) {
            throw std::invalid_argument("frame representation: effect dimension mismatch");
        }
        return duals * vectorize(e);
    };
    return rep;
}

/// A deterministic informationally complete POVM with exactly d^2 elements:
/// the standard tomography set (basis projectors plus the +/i superposition
/// projectors for each pair), renormalized by the inverse square root of
/// its sum so the elements add up to the identity.
inline std::vector<MatrixXc> standard_ic_frame(Eigen::Index d) {
    using namespace std::complex_literals;
    std::vector<MatrixXc> raw;
    raw.reserve(static_cast<std::size_t>(d * d));
    for (Eigen::Index i = 0; i < d; ++i) {
        VectorXc v = VectorXc::Zero(d);
        v[i] = 1.0;
        raw.push_back(v * v.adjoint());
    }
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i + 1; j < d; ++j) {
            VectorXc plus = VectorXc::Zero(d);
            plus[i] = 1.0 / std::sqrt(2.0);
            plus[j] = 1.0 / std::sqrt(2.0);
            raw.push_back(plus * plus.adjoint());
            VectorXc imag = VectorXc::Zero(d);
            imag[i] = 1.0 / std::sqrt(2.0);
            imag[j] = 1i / std::sqrt(2.0);
            raw.push_back(imag * imag.adjoint());
        }
    }
    MatrixXc total = MatrixXc::Zero(d, d);
    for (const auto& r : raw) total += r;
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(total);
    const MatrixXc inv_sqrt = es.operatorInverseSqrt();
    std::vector<MatrixXc> frame;
    frame.reserve(raw.size());
    for (const auto& r : raw) {
        frame.push_back(inv_sqrt * r * inv_sqrt);
    }
    return frame;
}

/// Restriction of a representation on H to the subspace H': answer the
/// H'-queries by lifting and querying the big representation. The ontic
/// space is unchanged; QPR1-3, nonnegativity on queried lifts, and
/// convex-linearity are inherited pointwise.
inline MatrixRep restrict_representation(const MatrixRep& big, const Embedding& emb) {
    if (big.dim != emb.big_dim()) {
        throw std::invalid_argument("restrict_representation: embedding dimension mismatch");
    }
    MatrixRep rep;
    rep.dim = emb.small_dim();
    rep.space = big.space;
    rep.mu = [mu = big.mu, emb](const MatrixXc& rho) { return mu(lift_density(rho, emb)); };
    rep.xi = [xi = big.xi, emb](const MatrixXc& e) { return xi(lift_effect(e, emb)); };
    return rep;
}

/// Materialize a restriction onto a 2-dimensional subspace as affine
/// coefficient representations, by probing the restricted queries on the
/// coefficient probe set.
inline std::pair<AffineStateRep, AffineEffectRep> restrict_to_qubit_rep(const MatrixRep& big,
                                                                        const Embedding& emb) {
    if (emb.small_dim() != 2) {
        throw std::invalid_argument("restrict_to_qubit_rep: subspace must be 2-dimensional");
    }
    const MatrixRep small = restrict_representation(big, emb);
    const auto ex = extract_coefficients(
        [&](const DensityOp& rho) { return small.mu(rho.to_matrix()); },
        [&](const PovmElement& e) { return small.xi(e.to_matrix()); });
    AffineStateRep srep{small.space, ex.A, ex.C};
    AffineEffectRep erep{small.space, ex.B, ex.D, ex.F};
    return {std::move(srep), std::move(erep)};
}

// --- random instances for checks ---------------------------------------------

inline MatrixXc random_complex_matrix(Eigen::Index rows, Eigen::Index cols,
                                      std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    MatrixXc m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = std::complex<double>(gauss(rng), gauss(rng));
        }
    }
    return m;
}

inline MatrixXc random_density_matrix(Eigen::Index d, std::mt19937_64& rng) {
    const MatrixXc g = random_complex_matrix(d, d, rng);
    const MatrixXc rho = g * g.adjoint();
    return rho / rho.trace().real();
}

/// Random effect: a random Hermitian matrix rescaled affinely so its
/// spectrum lands in [0, 1] (touching both ends).
inline MatrixXc random_effect_matrix(Eigen::Index d, std::mt19937_64& rng) {
    const MatrixXc g = random_complex_matrix(d, d, rng);
    const MatrixXc h = 0.5 * (g + g.adjoint());
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(h);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (hi - lo < 1e-12) {
        return MatrixXc::Identity(d, d) * 0.5;
    }
    return (h - lo * MatrixXc::Identity(d, d)) / (hi - lo);
}

/// Random POVM with `count` elements: Gram positive parts renormalized by
/// the inverse square root of their sum.
inline std::vector<MatrixXc> random_matrix_povm(Eigen::Index d, Eigen::Index count,
                                                std::mt19937_64& rng) {
    std::vector<MatrixXc> raw;
    raw.reserve(static_cast<std::size_t>(count));
    MatrixXc total = MatrixXc::Zero(d, d);
    for (Eigen::Index k = 0; k < count; ++k) {
        const MatrixXc g = random_complex_matrix(d, d, rng);
        raw.push_back(g * g.adjoint());
        total += raw.back();
    }
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(total);
    const MatrixXc inv_sqrt = es.operatorInverseSqrt();
    for (auto& r : raw) {
        r = inv_sqrt * r * inv_sqrt;
    }
    return raw;
}

inline MatrixXc random_isometry(Eigen::Index d, Eigen::Index k, std::mt19937_64& rng) {
    const MatrixXc g = random_complex_matrix(d, k, rng);
    Eigen::HouseholderQR<MatrixXc> qr(g);
    return MatrixXc(qr.householderQ()).leftCols(k);
}

inline VectorXc random_unit_vector(Eigen::Index d, std::mt19937_64& rng) {
    const MatrixXc g = random_complex_matrix(d, 1, rng);
    return g.col(0) / g.col(0).norm();
}

}  // namespace qpr
