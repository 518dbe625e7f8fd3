#pragma once

#include "qpr/common.hpp"
#include "qpr/pauli.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

namespace qpr {

/// Real-valued function on an ontic space, one value per point.
using OnticFunction = Eigen::VectorXd;

/// Finite ontic space: labelled points with strictly positive weights.
/// Integration against the measure is the weighted sum over points, so
/// "almost everywhere" statements become exact pointwise statements.
struct OnticSpace {
    std::vector<std::string> labels;
    Eigen::VectorXd weights;

    Eigen::Index size() const { return weights.size(); }

    Status validate() const {
        if (static_cast<Eigen::Index>(labels.size()) != weights.size()) {
            return Status::bad("ontic space: label/weight count mismatch");
        }
        if (weights.size() == 0) {
            return Status::bad("ontic space: no points");
        }
        for (Eigen::Index i = 0; i < weights.size(); ++i) {
            if (!(weights[i] > 0.0)) {
                return Status::bad("ontic space: weight of point " + labels[i] +
                                   " is not strictly positive");
            }
        }
        std::unordered_set<std::string> seen;
        for (const auto& l : labels) {
            if (!seen.insert(l).second) {
                return Status::bad("ontic space: duplicate label " + l);
            }
        }
        return Status::good();
    }

    double integrate(const OnticFunction& f) const { return weights.dot(f); }

    double inner(const OnticFunction& f, const OnticFunction& g) const {
        return (weights.array() * f.array() * g.array()).sum();
    }

    bool same_as(const OnticSpace& other, double tol = default_tol()) const {
        return labels == other.labels && weights.size() == other.weights.size() &&
               (weights - other.weights).cwiseAbs().maxCoeff() <= tol;
    }
};

/// Coefficient form of a convex-linear state representation:
/// mu_rho(x)(lambda) = x . A(lambda) + C(lambda).
struct AffineStateRep {
    OnticSpace space;
    Eigen::Matrix3Xd A;  // row i holds A_i over the points
    Eigen::VectorXd C;

    OnticFunction mu(const DensityOp& rho) const { return A.transpose() * rho.bloch + C; }
};

/// Coefficient form of a convex-linear effect representation:
/// xi_E(m,p)(lambda) = p . B(lambda) + m * D(lambda) + F(lambda).
/// The QPR axioms force D == 1 and F == 0; the checkers verify that
/// rather than assume it.
struct AffineEffectRep {
    OnticSpace space;
    Eigen::Matrix3Xd B;
    Eigen::VectorXd D;
    Eigen::VectorXd F;

    OnticFunction xi(const PovmElement& e) const {
        return B.transpose() * e.p + e.m * D + F;
    }
};

/// Catalog-based state representation for maps that are not convex-linear
/// and hence admit no coefficient form. Evaluation outside the catalog is
/// an error, not an extrapolation.
struct TabulatedStateRep {
    OnticSpace space;
    std::vector<std::pair<DensityOp, OnticFunction>> catalog;

    const OnticFunction& mu(const DensityOp& rho, double tol = default_tol()) const {
        for (const auto& [state, values] : catalog) {
            if ((state.bloch - rho.bloch).norm() <= tol) {
                return values;
            }
        }
        std::ostringstream os;
        os << "tabulated representation: state with Bloch vector ["
           << rho.bloch.transpose() << "] is not in the catalog";
        throw std::out_of_range(os.str());
    }
};

using StateRep = std::variant<AffineStateRep, TabulatedStateRep>;

inline const OnticSpace& space_of(const StateRep& rep) {
    return std::visit([](const auto& r) -> const OnticSpace& { return r.space; }, rep);
}

inline OnticFunction mu_eval(const AffineStateRep& rep, const DensityOp& rho) {
    return rep.mu(rho);
}

inline OnticFunction mu_eval(const TabulatedStateRep& rep, const DensityOp& rho,
                             double tol = default_tol()) {
    return rep.mu(rho, tol);
}

inline OnticFunction mu_eval(const StateRep& rep, const DensityOp& rho,
                             double tol = default_tol()) {
    if (const auto* affine = std::get_if<AffineStateRep>(&rep)) {
        return affine->mu(rho);
    }
    return std::get<TabulatedStateRep>(rep).mu(rho, tol);
}

inline OnticFunction xi_eval(const AffineEffectRep& rep, const PovmElement& e) {
    return rep.xi(e);
}

/// Probe states used for coefficient extraction: the maximally mixed state
/// and the six Bloch-axis pure states. Minimal and well conditioned.
inline std::vector<DensityOp> probe_states() {
    std::vector<DensityOp> probes;
    probes.push_back(DensityOp{Vec3::Zero()});
    for (int i = 0; i < 3; ++i) {
        Vec3 e = Vec3::Zero();
        e[i] = 1.0;
        probes.push_back(DensityOp{e});
        probes.push_back(DensityOp{-e});
    }
    return probes;
}

/// Probe effects: zero operator, identity, and E(1/2, +-e_i/2).
inline std::vector<PovmElement> probe_effects() {
    std::vector<PovmElement> probes;
    probes.push_back(PovmElement{0.0, Vec3::Zero()});
    probes.push_back(PovmElement{1.0, Vec3::Zero()});
    for (int i = 0; i < 3; ++i) {
        Vec3 e = Vec3::Zero();
        e[i] = 0.5;
        probes.push_back(PovmElement{0.5, e});
        probes.push_back(PovmElement{0.5, -e});
    }
    return probes;
}

/// QPR3 check: |<mu_rho, xi_E>_w - Tr(rho E)| <= tol for every sample pair.
inline CheckReport check_qpr3(const StateRep& srep, const AffineEffectRep& erep,
                              std::span<const std::pair<DensityOp, PovmElement>> samples,
                              double tol = default_tol()) {
    if (!space_of(srep).same_as(erep.space)) {
        throw std::invalid_argument("check_qpr3: representations live on different ontic spaces");
    }
    const OnticSpace& space = erep.space;
    CheckReport report;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& [rho, e] = samples[i];
        const double lhs = space.inner(mu_eval(srep, rho, tol), xi_eval(erep, e));
        const double defect = std::abs(lhs - born_probability(rho, e));
        if (defect > report.worst_defect) {
            report.worst_defect = defect;
            std::ostringstream os;
            os << "sample " << i << ": x=[" << rho.bloch.transpose() << "], m=" << e.m
               << ", p=[" << e.p.transpose() << "]";
            report.witness = os.str();
        }
    }
    report.pass = report.worst_defect <= tol;
    return report;
}

/// QPR1 normalization: integral of mu_rho is 1 for each state.
inline CheckReport check_normalization(const StateRep& srep, std::span<const DensityOp> states,
                                       double tol = default_tol()) {
    const OnticSpace& space = space_of(srep);
    CheckReport report;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const double defect = std::abs(space.integrate(mu_eval(srep, states[i], tol)) - 1.0);
        if (defect > report.worst_defect) {
            report.worst_defect = defect;
            std::ostringstream os;
            os << "state " << i << ": x=[" << states[i].bloch.transpose() << "]";
            report.witness = os.str();
        }
    }
    report.pass = report.worst_defect <= tol;
    return report;
}

/// QPR2 unit sum: the xi functions of a POVM sum to the unit function.
inline CheckReport check_unit_sum(const AffineEffectRep& erep, const Povm& povm,
                                  double tol = default_tol()) {
    OnticFunction total = OnticFunction::Zero(erep.space.size());
    for (const auto& e : povm.elements) {
        total += xi_eval(erep, e);
    }
    CheckReport report;
    for (Eigen::Index k = 0; k < total.size(); ++k) {
        const double defect = std::abs(total[k] - 1.0);
        if (defect > report.worst_defect) {
            report.worst_defect = defect;
            report.witness = "point " + erep.space.labels[static_cast<std::size_t>(k)];
        }
    }
    report.pass = report.worst_defect <= tol;
    return report;
}

/// Mixture that witnesses a convex-linearity failure, with the worst
/// ontic point.
struct MixtureWitness {
    DensityOp mixed;
    std::vector<std::pair<double, DensityOp>> components;
    Eigen::Index point = 0;
};

struct ConvexLinearityReport {
    bool pass = true;
    double worst_defect = 0.0;
    std::size_t mixtures_checked = 0;
    std::optional<MixtureWitness> witness;
};

namespace detail {

inline void record_mixture_defect(ConvexLinearityReport& report, const OnticFunction& lhs,
                                  const OnticFunction& rhs, const DensityOp& mixed,
                                  std::vector<std::pair<double, DensityOp>> components) {
    ++report.mixtures_checked;
    Eigen::Index worst_point = 0;
    const double defect = (lhs - rhs).cwiseAbs().maxCoeff(&worst_point);
    if (defect > report.worst_defect) {
        report.worst_defect = defect;
        report.witness = MixtureWitness{mixed, std::move(components), worst_point};
    }
}

}  // namespace detail

/// Convex-linearity check. Affine representations are checked on random
/// mixtures (structurally exact). Tabulated representations are checked on
/// every catalog triple (rho_i, rho_j, rho_k) with rho_k on the segment
/// between rho_i and rho_j, i.e. the mixtures available inside the catalog.
inline ConvexLinearityReport check_convex_linearity(const StateRep& rep, int trials = 100,
                                                    std::uint64_t seed = 0,
                                                    double tol = default_tol()) {
    ConvexLinearityReport report;
    if (const auto* affine = std::get_if<AffineStateRep>(&rep)) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int t = 0; t < trials; ++t) {
            const int n = 2 + static_cast<int>(rng() % 2);
            std::vector<std::pair<double, DensityOp>> comps;
            double sum = 0.0;
            for (int j = 0; j < n; ++j) {
                comps.emplace_back(u(rng) + 1e-3, random_density(rng));
                sum += comps.back().first;
            }
            for (auto& [w, _] : comps) w /= sum;
            const DensityOp mixed = mix(std::span<const std::pair<double, DensityOp>>(comps));
            OnticFunction rhs = OnticFunction::Zero(affine->space.size());
            for (const auto& [w, rho] : comps) rhs += w * affine->mu(rho);
            detail::record_mixture_defect(report, affine->mu(mixed), rhs, mixed, comps);
        }
    } else {
        const auto& tab = std::get<TabulatedStateRep>(rep);
        const auto& cat = tab.catalog;
        for (std::size_t i = 0; i < cat.size(); ++i) {
            for (std::size_t j = i + 1; j < cat.size(); ++j) {
                const Vec3 d = cat[i].first.bloch - cat[j].first.bloch;
                const double len2 = d.squaredNorm();
                if (len2 <= tol * tol) {
                    continue;
                }
                for (std::size_t k = 0; k < cat.size(); ++k) {
                    if (k == i || k == j) continue;
                    const double t = (cat[k].first.bloch - cat[j].first.bloch).dot(d) / len2;
                    if (t < -tol || t > 1.0 + tol) continue;
                    const Vec3 combo = t * cat[i].first.bloch + (1.0 - t) * cat[j].first.bloch;
                    if ((cat[k].first.bloch - combo).norm() > tol) continue;
                    const OnticFunction rhs = t * cat[i].second + (1.0 - t) * cat[j].second;
                    detail::record_mixture_defect(
                        report, cat[k].second, rhs, cat[k].first,
                        {{t, cat[i].first}, {1.0 - t, cat[j].first}});
                }
            }
        }
    }
    report.pass = report.worst_defect <= tol;
    return report;
}

/// State-side negativity. min_value is the least mu value achievable over
/// valid states, min over points of C - |A|; the witness state is
/// x = -A/|A| at the argmin (x = 0 when A vanishes there). `negativity`
/// clamps at zero: it is 0 exactly when the representation is nonnegative.
struct StateNegativityResult {
    double min_value = 0.0;
    double negativity = 0.0;
    Eigen::Index witness_point = 0;
    DensityOp witness_state;
};

inline StateNegativityResult negativity(const AffineStateRep& rep) {
    StateNegativityResult result;
    result.min_value = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < rep.space.size(); ++k) {
        const double value = rep.C[k] - rep.A.col(k).norm();
        if (value < result.min_value) {
            result.min_value = value;
            result.witness_point = k;
        }
    }
    const Vec3 a = rep.A.col(result.witness_point);
    result.witness_state.bloch = a.norm() > 0.0 ? Vec3(-a / a.norm()) : Vec3::Zero();
    result.negativity = std::min(0.0, result.min_value);
    return result;
}

/// Effect-side negativity: minimum of xi over the whole POVM-element cone.
/// For fixed lambda the minimum over p sits at p = -min(m, 1-m) B/|B|, so
/// the cone minimum is min(F, D/2 + F - |B|/2, D + F) per point.
struct EffectNegativityResult {
    double min_value = 0.0;
    double negativity = 0.0;
    Eigen::Index witness_point = 0;
    PovmElement witness_effect;
};

inline EffectNegativityResult effect_negativity(const AffineEffectRep& rep) {
    EffectNegativityResult result;
    result.min_value = std::numeric_limits<double>::infinity();
    double witness_m = 0.0;
    for (Eigen::Index k = 0; k < rep.space.size(); ++k) {
        const double nb = rep.B.col(k).norm();
        const double at_zero = rep.F[k];
        const double at_half = 0.5 * rep.D[k] + rep.F[k] - 0.5 * nb;
        const double at_one = rep.D[k] + rep.F[k];
        double value = at_zero;
        double m = 0.0;
        if (at_half < value) {
            value = at_half;
            m = 0.5;
        }
        if (at_one < value) {
            value = at_one;
            m = 1.0;
        }
        if (value < result.min_value) {
            result.min_value = value;
            result.witness_point = k;
            witness_m = m;
        }
    }
    const Vec3 b = rep.B.col(result.witness_point);
    Vec3 p = Vec3::Zero();
    if (witness_m == 0.5 && b.norm() > 0.0) {
        p = -0.5 * b / b.norm();
    }
    result.witness_effect = PovmElement{witness_m, p};
    result.negativity = std::min(0.0, result.min_value);
    return result;
}

}  // namespace qpr
