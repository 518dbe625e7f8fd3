#pragma once

#include "qpr/common.hpp"

#include <Eigen/Dense>

#include <sstream>
#include <stdexcept>
#include <vector>

namespace qpr {

/// Thrown when a translated-linear extension is requested for data that is
/// not convex-linear (no extension exists).
struct ExtensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sampled map: points[i] (row) maps to values[i] (row). The points are a
/// finite subset S of the domain space, the values f(S).
struct PointValueSet {
    Eigen::MatrixXd points;
    Eigen::MatrixXd values;

    Eigen::Index count() const { return points.rows(); }
    Eigen::Index domain_dim() const { return points.cols(); }
    Eigen::Index codomain_dim() const { return values.cols(); }

    Status validate() const {
        if (points.rows() != values.rows()) {
            return Status::bad("point/value count mismatch");
        }
        if (points.rows() == 0 || points.cols() == 0 || values.cols() == 0) {
            return Status::bad("empty point-value set");
        }
        return Status::good();
    }
};

/// Affine subspace base + L, with an orthonormal basis of the parallel
/// linear subspace L.
struct AffineSubspace {
    Eigen::VectorXd base;
    Eigen::MatrixXd basis;  // columns orthonormal

    Eigen::Index dim() const { return basis.cols(); }

    Eigen::VectorXd coords(const Eigen::VectorXd& v) const {
        return basis.transpose() * (v - base);
    }

    double membership_residual(const Eigen::VectorXd& v) const {
        const Eigen::VectorXd d = v - base;
        return (d - basis * (basis.transpose() * d)).norm();
    }

    bool contains(const Eigen::VectorXd& v, double tol = default_tol()) const {
        return membership_residual(v) <= tol;
    }
};

/// Affine hull of a point set: base point plus an orthonormal basis of the
/// span of the differences, with numerical rank decided by a singular-value
/// threshold relative to the largest singular value. Duplicate points are
/// harmless (they contribute zero columns).
inline AffineSubspace affine_hull(const Eigen::MatrixXd& points, double rank_tol = 1e-9) {
    if (points.rows() == 0) {
        throw std::invalid_argument("affine_hull: need at least one point");
    }
    AffineSubspace hull;
    hull.base = points.row(0).transpose();
    const Eigen::Index n = points.cols();
    if (points.rows() == 1) {
        hull.basis = Eigen::MatrixXd::Zero(n, 0);
        return hull;
    }
    Eigen::MatrixXd diffs(n, points.rows() - 1);
    for (Eigen::Index i = 1; i < points.rows(); ++i) {
        diffs.col(i - 1) = points.row(i).transpose() - hull.base;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(diffs, Eigen::ComputeThinU);
    const auto& sigma = svd.singularValues();
    const double cutoff = sigma.size() > 0 ? rank_tol * sigma[0] : 0.0;
    Eigen::Index rank = 0;
    while (rank < sigma.size() && sigma[rank] > cutoff && sigma[rank] > 0.0) {
        ++rank;
    }
    hull.basis = svd.matrixU().leftCols(rank);
    return hull;
}

/// f(v) = offset + linear . coords(v), defined on base + span(basis).
/// `linear` is the matrix of the linear part in the orthonormal basis
/// coordinates of the parallel subspace.
struct TranslatedLinearMap {
    Eigen::VectorXd base;    // u0
    Eigen::VectorXd offset;  // w0
    Eigen::MatrixXd basis;   // n x k, orthonormal columns spanning L
    Eigen::MatrixXd linear;  // m x k

    Eigen::Index domain_dim() const { return basis.rows(); }
    Eigen::Index codomain_dim() const { return offset.size(); }

    Eigen::VectorXd eval(const Eigen::VectorXd& v) const {
        return offset + linear * (basis.transpose() * (v - base));
    }

    double membership_residual(const Eigen::VectorXd& v) const {
        const Eigen::VectorXd d = v - base;
        return (d - basis * (basis.transpose() * d)).norm();
    }

    /// Linear part filled with zeros on the orthogonal complement of L, as
    /// an m x n matrix on the ambient space. Off the affine hull this
    /// extension is a convention, not unique.
    Eigen::MatrixXd ambient_linear() const { return linear * basis.transpose(); }
};

namespace detail {

struct TranslatedLinearFit {
    TranslatedLinearMap map;
    double residual = 0.0;
    Eigen::Index worst_row = 0;
};

/// Least-squares translated-linear fit over the affine hull of the points.
/// The design matrix [coords | 1] has full column rank by construction of
/// the hull basis, so the fit on the hull is unique.
inline TranslatedLinearFit fit_translated_linear(const PointValueSet& pvs,
                                                 double rank_tol = 1e-9) {
    if (auto st = pvs.validate(); !st) {
        throw std::invalid_argument("fit_translated_linear: " + st.message);
    }
    const AffineSubspace hull = affine_hull(pvs.points, rank_tol);
    const Eigen::Index n_pts = pvs.count();
    const Eigen::Index k = hull.dim();
    Eigen::MatrixXd design(n_pts, k + 1);
    for (Eigen::Index i = 0; i < n_pts; ++i) {
        design.row(i).head(k) = hull.coords(pvs.points.row(i).transpose()).transpose();
        design(i, k) = 1.0;
    }
    const Eigen::MatrixXd theta =
        design.colPivHouseholderQr().solve(pvs.values);  // (k+1) x m
    TranslatedLinearFit fit;
    fit.map.base = hull.base;
    fit.map.basis = hull.basis;
    fit.map.linear = theta.topRows(k).transpose();
    fit.map.offset = theta.row(k).transpose();
    const Eigen::MatrixXd resid = design * theta - pvs.values;
    fit.residual = 0.0;
    for (Eigen::Index i = 0; i < n_pts; ++i) {
        const double r = resid.row(i).cwiseAbs().maxCoeff();
        if (r > fit.residual) {
            fit.residual = r;
            fit.worst_row = i;
        }
    }
    return fit;
}

}  // namespace detail

/// A map sampled on S is convex-linear exactly when the affine hull of its
/// graph is the graph of a function, i.e. some translated-linear map
/// reproduces all samples. Implemented as a least-squares fit with a
/// zero-residual test.
inline CheckReport convex_linearity_check(const PointValueSet& pvs,
                                          double tol = default_tol()) {
    const auto fit = detail::fit_translated_linear(pvs);
    CheckReport report;
    report.worst_defect = fit.residual;
    report.pass = fit.residual <= tol;
    if (!report.pass) {
        std::ostringstream os;
        os << "point " << fit.worst_row << " deviates from the best translated-linear fit by "
           << fit.residual;
        report.witness = os.str();
    }
    return report;
}

/// Unique translated-linear extension of a convex-linear map to the affine
/// hull of its sample points. Throws ExtensionError when the data is
/// inconsistent (no extension exists).
inline TranslatedLinearMap translated_linear_extend(const PointValueSet& pvs,
                                                    double tol = default_tol()) {
    auto fit = detail::fit_translated_linear(pvs);
    if (fit.residual > tol) {
        std::ostringstream os;
        os << "translated_linear_extend: data is not convex-linear (residual " << fit.residual
           << " at point " << fit.worst_row << ")";
        throw ExtensionError(os.str());
    }
    return std::move(fit.map);
}

/// Result of testing for a genuinely linear (not just translated-linear)
/// extension. When none exists, `witness` holds coefficients c with
/// sum c_i s_i = 0 but sum c_i f(s_i) != 0 — a linear dependency among the
/// points that the values fail to respect.
struct LinearExtensionResult {
    bool exists = false;
    Eigen::MatrixXd map;           // m x n least-squares linear map
    double residual = 0.0;
    Eigen::VectorXd witness;       // dependency coefficients (when !exists)
    double witness_value = 0.0;    // max |sum c_i f(s_i)_j|
};

inline LinearExtensionResult linear_extension_exists(const PointValueSet& pvs,
                                                     double tol = default_tol(),
                                                     double rank_tol = 1e-9) {
    if (auto st = pvs.validate(); !st) {
        throw std::invalid_argument("linear_extension_exists: " + st.message);
    }
    LinearExtensionResult result;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(pvs.points, Eigen::ComputeFullU | Eigen::ComputeThinV);
    const auto& sigma = svd.singularValues();
    const double cutoff = sigma.size() > 0 ? rank_tol * sigma[0] : 0.0;
    Eigen::Index rank = 0;
    while (rank < sigma.size() && sigma[rank] > cutoff && sigma[rank] > 0.0) {
        ++rank;
    }
    // Minimum-norm least-squares solve of points * map^T = values.
    const Eigen::MatrixXd ut_v = svd.matrixU().leftCols(rank).transpose() * pvs.values;
    result.map = (svd.matrixV().leftCols(rank) *
                  sigma.head(rank).cwiseInverse().asDiagonal() * ut_v)
                     .transpose();
    result.residual = (pvs.points * result.map.transpose() - pvs.values).cwiseAbs().maxCoeff();
    result.exists = result.residual <= tol;
    if (!result.exists) {
        // The residual lives in the left null space of the point matrix:
        // some null vector c (a linear dependency of the points) pairs
        // nontrivially with the values.
        const Eigen::MatrixXd null_basis =
            svd.matrixU().rightCols(svd.matrixU().cols() - rank);
        for (Eigen::Index j = 0; j < null_basis.cols(); ++j) {
            const double value =
                (pvs.values.transpose() * null_basis.col(j)).cwiseAbs().maxCoeff();
            if (value > result.witness_value) {
                result.witness_value = value;
                result.witness = null_basis.col(j);
            }
        }
    }
    return result;
}

}  // namespace qpr
