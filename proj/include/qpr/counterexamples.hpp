#pragma once

#include "qpr/affine.hpp"
#include "qpr/common.hpp"
#include "qpr/ontic.hpp"

#include <array>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qpr {

/// Regular tetrahedron of unit Bloch vectors: sum 0, pairwise inner
/// products -1/3, frame operator sum a_k a_k^T = (4/3) I. Pinned to one
/// orientation so every output is reproducible.
struct SicFrame {
    std::array<Vec3, 4> bloch;

    static SicFrame regular_tetrahedron() {
        const double s = 1.0 / std::sqrt(3.0);
        SicFrame frame;
        frame.bloch = {Vec3(s, s, s), Vec3(s, -s, -s), Vec3(-s, s, -s), Vec3(-s, -s, s)};
        return frame;
    }

    Status validate(double tol = default_tol()) const {
        Vec3 sum = Vec3::Zero();
        Eigen::Matrix3d frame_op = Eigen::Matrix3d::Zero();
        for (const auto& a : bloch) {
            if (std::abs(a.norm() - 1.0) > tol) {
                return Status::bad("tetrahedron vector is not unit length");
            }
            sum += a;
            frame_op += a * a.transpose();
        }
        if (sum.norm() > tol) {
            return Status::bad("tetrahedron vectors do not sum to zero");
        }
        for (std::size_t j = 0; j < 4; ++j) {
            for (std::size_t k = j + 1; k < 4; ++k) {
                if (std::abs(bloch[j].dot(bloch[k]) + 1.0 / 3.0) > tol) {
                    return Status::bad("tetrahedron inner products are not -1/3");
                }
            }
        }
        if ((frame_op - (4.0 / 3.0) * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tol) {
            return Status::bad("tetrahedron frame operator is not (4/3) I");
        }
        return Status::good();
    }

    /// The associated SIC POVM: E(1/4, a_k/4).
    Povm povm() const {
        Povm p;
        for (const auto& a : bloch) {
            p.elements.push_back(PovmElement{0.25, 0.25 * a});
        }
        return p;
    }
};

/// The concrete baseline representation on four unit-weight points:
/// A(l_k) = (3/4) a_k, C = 1/4, B(l_k) = a_k, D = 1, F = 0. Satisfies
/// QPR1-3 exactly, has nonnegative xi everywhere, and mu dips to -1/2 —
/// the canonical witness that QPR1-3 alone do not force nonnegativity.
inline std::pair<AffineStateRep, AffineEffectRep> sic_baseline() {
    const SicFrame frame = SicFrame::regular_tetrahedron();
    OnticSpace space;
    space.weights = Eigen::VectorXd::Ones(4);
    Eigen::Matrix3Xd a(3, 4);
    Eigen::Matrix3Xd b(3, 4);
    for (int k = 0; k < 4; ++k) {
        space.labels.push_back("k" + std::to_string(k));
        a.col(k) = 0.75 * frame.bloch[static_cast<std::size_t>(k)];
        b.col(k) = frame.bloch[static_cast<std::size_t>(k)];
    }
    AffineStateRep srep{space, a, Eigen::VectorXd::Constant(4, 0.25)};
    AffineEffectRep erep{space, b, Eigen::VectorXd::Ones(4), Eigen::VectorXd::Zero(4)};
    return {std::move(srep), std::move(erep)};
}

/// Disjoint union of two copies of the ontic space with the averaged
/// measure, all functions copied to both copies, and the sign function
/// sigma (+1 on the first copy, -1 on the second). sigma integrates to
/// zero against every xi_E, so it is invisible to QPR1-3.
struct DuplicatedRep {
    AffineStateRep state;
    AffineEffectRep effect;
    OnticFunction sigma;
};

inline DuplicatedRep duplicate_ontic_space(const AffineStateRep& srep,
                                           const AffineEffectRep& erep) {
    const Eigen::Index n = srep.space.size();
    DuplicatedRep dup;
    OnticSpace space;
    space.weights.resize(2 * n);
    for (Eigen::Index copy = 0; copy < 2; ++copy) {
        for (Eigen::Index k = 0; k < n; ++k) {
            space.labels.push_back(srep.space.labels[static_cast<std::size_t>(k)] +
                                   (copy == 0 ? "/1" : "/2"));
            space.weights[copy * n + k] = 0.5 * srep.space.weights[k];
        }
    }
    auto doubled = [n](const Eigen::VectorXd& f) {
        Eigen::VectorXd out(2 * n);
        out << f, f;
        return out;
    };
    Eigen::Matrix3Xd a(3, 2 * n);
    Eigen::Matrix3Xd b(3, 2 * n);
    a << srep.A, srep.A;
    b << erep.B, erep.B;
    dup.state = AffineStateRep{space, a, doubled(srep.C)};
    dup.effect = AffineEffectRep{space, b, doubled(erep.D), doubled(erep.F)};
    dup.sigma.resize(2 * n);
    dup.sigma.head(n).setConstant(1.0);
    dup.sigma.tail(n).setConstant(-1.0);
    return dup;
}

/// Perturb the duplicated representation: mu'_rho = mu_rho + c(rho) sigma
/// on the cataloged states. Normalization and QPR3 survive for every
/// cataloged state (sigma is orthogonal to the weights and to every xi),
/// but convex-linearity fails whenever c is not affine in the Bloch vector.
inline TabulatedStateRep perturb_mu(const AffineStateRep& dup_state, const OnticFunction& sigma,
                                    const std::function<double(const DensityOp&)>& c_assignment,
                                    std::span<const DensityOp> catalog) {
    if (sigma.size() != dup_state.space.size()) {
        throw std::invalid_argument("perturb_mu: sigma does not match the ontic space");
    }
    TabulatedStateRep rep;
    rep.space = dup_state.space;
    for (const auto& rho : catalog) {
        rep.catalog.emplace_back(rho, dup_state.mu(rho) + c_assignment(rho) * sigma);
    }
    return rep;
}

/// The default incoherent coefficient rule: c(rho) = |x|^2, the simplest
/// rotation-invariant choice that is not affine in the Bloch vector.
inline double incoherent_c(const DensityOp& rho) {
    return rho.bloch.squaredNorm();
}

/// Ready-made fixture: SIC baseline, duplicated, perturbed with
/// c(rho) = |x|^2 on the catalog {+e3, -e3, 0}. Passes QPR1 and QPR3 on
/// the catalog and fails convex-linearity with pointwise defect 1.
struct DuplicationFixture {
    TabulatedStateRep state;
    AffineEffectRep effect;
    OnticFunction sigma;
    std::vector<DensityOp> catalog;
};

inline DuplicationFixture duplication_fixture() {
    const auto [srep, erep] = sic_baseline();
    DuplicatedRep dup = duplicate_ontic_space(srep, erep);
    DuplicationFixture fixture;
    fixture.catalog = {DensityOp{Vec3(0, 0, 1)}, DensityOp{Vec3(0, 0, -1)},
                       DensityOp{Vec3::Zero()}};
    fixture.state = perturb_mu(dup.state, dup.sigma, incoherent_c, fixture.catalog);
    fixture.effect = std::move(dup.effect);
    fixture.sigma = std::move(dup.sigma);
    return fixture;
}

/// The constant-1 map on a spanning set of Hermitian operators that
/// excludes 0 but contains two orthogonal projections and their sum, in
/// Pauli coordinates (w, x, y, z): convex-linear (hence translated-linear
/// extendable), yet no linear extension exists because P + Q - I is a
/// dependency the values fail to respect.
inline PointValueSet constant_one_example() {
    PointValueSet pvs;
    pvs.points.resize(5, 4);
    pvs.points << 0.5, 0.0, 0.0, 0.5,   // P = diag(1, 0)
                  0.5, 0.0, 0.0, -0.5,  // Q = diag(0, 1)
                  1.0, 0.0, 0.0, 0.0,   // I = P + Q
                  0.5, 0.5, 0.0, 0.0,   // (I + X)/2
                  0.5, 0.0, 0.5, 0.0;   // (I + Y)/2
    pvs.values = Eigen::MatrixXd::Ones(5, 1);
    return pvs;
}

}  // namespace qpr
