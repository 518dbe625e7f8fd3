#pragma once

#include "qpr/common.hpp"
#include "qpr/ontic.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace qpr {

/// The nine coefficient functions of the affine ansatz
///   mu_rho(x) = x.A + C,  xi_E(m,p) = p.B + m*D + F,
/// extracted from probe evaluations, plus the worst probe-mixture defect.
/// A residual above tolerance means the candidate is inconsistent with the
/// ansatz on the probe set (a convex-linearity failure).
struct CoefficientExtract {
    Eigen::Matrix3Xd A;
    Eigen::VectorXd C;
    Eigen::Matrix3Xd B;
    Eigen::VectorXd D;
    Eigen::VectorXd F;
    double fit_residual = 0.0;
    int worst_probe_axis = 0;       // axis i of the worst probe mixture
    bool worst_probe_is_state = true;
};

using StateEvaluator = std::function<OnticFunction(const DensityOp&)>;
using EffectEvaluator = std::function<OnticFunction(const PovmElement&)>;

/// Extract coefficients from black-box evaluators:
///   C = mu(0), A_i = (mu(+e_i) - mu(-e_i))/2,
///   F = xi(E(0,0)), D = xi(E(1,0)) - F, B_i = xi(1/2,+e_i/2) - xi(1/2,-e_i/2).
/// The residual is the worst of |mu(+e_i)/2 + mu(-e_i)/2 - C| and the
/// analogous effect-probe mixture defects.
inline CoefficientExtract extract_coefficients(const StateEvaluator& mu,
                                               const EffectEvaluator& xi) {
    CoefficientExtract ex;
    ex.C = mu(DensityOp{Vec3::Zero()});
    const Eigen::Index n = ex.C.size();
    ex.A.resize(3, n);
    ex.B.resize(3, n);
    ex.F = xi(PovmElement{0.0, Vec3::Zero()});
    ex.D = xi(PovmElement{1.0, Vec3::Zero()}) - ex.F;
    const OnticFunction half_dneg = 0.5 * ex.D + ex.F;  // xi value of E(1/2, 0)
    for (int i = 0; i < 3; ++i) {
        Vec3 e = Vec3::Zero();
        e[i] = 1.0;
        const OnticFunction mu_plus = mu(DensityOp{e});
        const OnticFunction mu_minus = mu(DensityOp{-e});
        ex.A.row(i) = 0.5 * (mu_plus - mu_minus).transpose();
        const double state_defect =
            (0.5 * mu_plus + 0.5 * mu_minus - ex.C).cwiseAbs().maxCoeff();
        if (state_defect > ex.fit_residual) {
            ex.fit_residual = state_defect;
            ex.worst_probe_axis = i;
            ex.worst_probe_is_state = true;
        }
        const OnticFunction xi_plus = xi(PovmElement{0.5, 0.5 * e});
        const OnticFunction xi_minus = xi(PovmElement{0.5, -0.5 * e});
        ex.B.row(i) = (xi_plus - xi_minus).transpose();
        const double effect_defect =
            (0.5 * xi_plus + 0.5 * xi_minus - half_dneg).cwiseAbs().maxCoeff();
        if (effect_defect > ex.fit_residual) {
            ex.fit_residual = effect_defect;
            ex.worst_probe_axis = i;
            ex.worst_probe_is_state = false;
        }
    }
    return ex;
}

inline CoefficientExtract extract_coefficients(const StateRep& srep,
                                               const AffineEffectRep& erep,
                                               double tol = default_tol()) {
    return extract_coefficients(
        [&](const DensityOp& rho) { return mu_eval(srep, rho, tol); },
        [&](const PovmElement& e) { return xi_eval(erep, e); });
}

/// Axiom check: the zero operator must map to the zero function (F == 0)
/// and the identity to the unit function (D == 1).
struct AxiomReport {
    bool pass = true;
    double f_defect = 0.0;
    double d_defect = 0.0;
    Eigen::Index worst_f_point = 0;
    Eigen::Index worst_d_point = 0;
};

inline AxiomReport check_axioms(const CoefficientExtract& ex, double tol = default_tol()) {
    AxiomReport report;
    report.f_defect = ex.F.cwiseAbs().maxCoeff(&report.worst_f_point);
    report.d_defect = (ex.D.array() - 1.0).abs().maxCoeff(&report.worst_d_point);
    report.pass = report.f_defect <= tol && report.d_defect <= tol;
    return report;
}

/// The four frame conditions forced by QPR3 on the coefficient functions:
///   (2) sum_l w B_i A_j = delta_ij   (3) sum_l w B_i C = 0
///   (4) sum_l w A_i = 0              (5) sum_l w C = 1
struct FrameConditionReport {
    bool pass = true;
    std::array<double, 4> defect{};        // indexed by equation - 2
    std::array<std::array<int, 2>, 4> worst_ij{};
    int worst_equation = 2;
    double worst_defect = 0.0;
};

inline FrameConditionReport check_frame_conditions(const CoefficientExtract& ex,
                                                   const OnticSpace& space,
                                                   double tol = default_tol()) {
    FrameConditionReport report;
    const auto& w = space.weights;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double value = (w.array() * ex.B.row(i).transpose().array() *
                                  ex.A.row(j).transpose().array())
                                     .sum();
            const double d = std::abs(value - (i == j ? 1.0 : 0.0));
            if (d > report.defect[0]) {
                report.defect[0] = d;
                report.worst_ij[0] = {i, j};
            }
        }
        const double bc =
            std::abs((w.array() * ex.B.row(i).transpose().array() * ex.C.array()).sum());
        if (bc > report.defect[1]) {
            report.defect[1] = bc;
            report.worst_ij[1] = {i, 0};
        }
        const double ai = std::abs((w.array() * ex.A.row(i).transpose().array()).sum());
        if (ai > report.defect[2]) {
            report.defect[2] = ai;
            report.worst_ij[2] = {i, 0};
        }
    }
    report.defect[3] = std::abs(space.integrate(ex.C) - 1.0);
    for (int q = 0; q < 4; ++q) {
        if (report.defect[q] > report.worst_defect) {
            report.worst_defect = report.defect[q];
            report.worst_equation = q + 2;
        }
    }
    report.pass = report.worst_defect <= tol;
    return report;
}

/// Pointwise norm bounds forced by nonnegativity: |B(l)| <= 1 (effect side)
/// and |A(l)| <= C(l) (state side).
struct NormBoundReport {
    bool pass = true;
    double a_defect = 0.0;  // max over points of |A| - C
    double b_defect = 0.0;  // max over points of |B| - 1
    Eigen::Index worst_a_point = 0;
    Eigen::Index worst_b_point = 0;
};

inline NormBoundReport check_norm_bounds(const CoefficientExtract& ex, const OnticSpace& space,
                                         double tol = default_tol()) {
    NormBoundReport report;
    report.a_defect = -std::numeric_limits<double>::infinity();
    report.b_defect = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < space.size(); ++k) {
        const double a = ex.A.col(k).norm() - ex.C[k];
        if (a > report.a_defect) {
            report.a_defect = a;
            report.worst_a_point = k;
        }
        const double b = ex.B.col(k).norm() - 1.0;
        if (b > report.b_defect) {
            report.b_defect = b;
            report.worst_b_point = k;
        }
    }
    report.pass = report.a_defect <= tol && report.b_defect <= tol;
    return report;
}

/// Overlap score T = sum_i sum_l w B_i A_i. QPR3 demands T = 3 (the trace
/// of delta_ij); for any candidate with |B| <= 1, |A| <= C and
/// sum w C = 1, the pointwise Cauchy-Schwarz chain forces T <= 1, so the
/// gap to 3 quantifies the obstruction.
inline double overlap_score(const CoefficientExtract& ex, const OnticSpace& space) {
    double t = 0.0;
    for (int i = 0; i < 3; ++i) {
        t += (space.weights.array() * ex.B.row(i).transpose().array() *
              ex.A.row(i).transpose().array())
                 .sum();
    }
    return t;
}

// --- certificates -----------------------------------------------------------

enum class CertificateKind {
    ConvexLinearityViolation,
    AxiomViolation,
    StateNegativity,
    EffectNegativity,
    FrameCondition,
    NormBound,
    OverlapGap,
    NoViolation,
};

inline const char* to_string(CertificateKind kind) {
    switch (kind) {
        case CertificateKind::ConvexLinearityViolation: return "ConvexLinearityViolation";
        case CertificateKind::AxiomViolation: return "AxiomViolation";
        case CertificateKind::StateNegativity: return "StateNegativity";
        case CertificateKind::EffectNegativity: return "EffectNegativity";
        case CertificateKind::FrameCondition: return "FrameCondition";
        case CertificateKind::NormBound: return "NormBound";
        case CertificateKind::OverlapGap: return "OverlapGap";
        case CertificateKind::NoViolation: return "NoViolation";
    }
    return "?";
}

struct AxiomWitness {
    char which = 'F';  // 'F' or 'D'
    Eigen::Index point = 0;
};

struct NegativityWitness {
    DensityOp state;
    Eigen::Index point = 0;
};

struct EffectNegativityWitness {
    PovmElement effect;
    Eigen::Index point = 0;
};

struct FrameConditionWitness {
    int equation = 2;  // 2..5
    int i = 0;
    int j = 0;
};

struct NormBoundWitness {
    char which = 'A';  // 'A' for |A|<=C, 'B' for |B|<=1
    Eigen::Index point = 0;
};

struct OverlapWitness {
    double score = 0.0;  // T; QPR3 requires 3
};

using CertificateWitness =
    std::variant<std::monostate, MixtureWitness, AxiomWitness, NegativityWitness,
                 EffectNegativityWitness, FrameConditionWitness, NormBoundWitness,
                 OverlapWitness>;

/// Conviction record: which necessary condition the candidate violates,
/// by how much, and a witness from which the defect can be recomputed
/// independently of the pipeline.
struct NoGoCertificate {
    CertificateKind kind = CertificateKind::NoViolation;
    double defect = 0.0;
    std::string detail;
    CertificateWitness witness;
};

enum class CheckStage {
    ConvexLinearity,
    Axioms,
    Negativity,
    FrameConditions,
    NormBounds,
    Overlap,
};

constexpr std::array<CheckStage, 6> default_check_order{
    CheckStage::ConvexLinearity, CheckStage::Axioms,     CheckStage::Negativity,
    CheckStage::FrameConditions, CheckStage::NormBounds, CheckStage::Overlap,
};

namespace detail {

inline std::optional<NoGoCertificate> run_stage(CheckStage stage, const StateRep& srep,
                                                const CoefficientExtract& ex,
                                                const OnticSpace& space, double tol) {
    switch (stage) {
        case CheckStage::ConvexLinearity: {
            if (std::holds_alternative<TabulatedStateRep>(srep)) {
                const auto cl = check_convex_linearity(srep, 0, 0, tol);
                if (!cl.pass && cl.witness) {
                    NoGoCertificate cert;
                    cert.kind = CertificateKind::ConvexLinearityViolation;
                    cert.defect = cl.worst_defect;
                    cert.detail = "catalog mixture violates convex-linearity";
                    cert.witness = *cl.witness;
                    return cert;
                }
            }
            if (ex.fit_residual > tol) {
                NoGoCertificate cert;
                cert.kind = CertificateKind::ConvexLinearityViolation;
                cert.defect = ex.fit_residual;
                Vec3 e = Vec3::Zero();
                e[ex.worst_probe_axis] = 1.0;
                if (ex.worst_probe_is_state) {
                    cert.detail = "probe mixture (rho(+e) + rho(-e))/2 != rho(0)";
                    MixtureWitness w;
                    w.mixed = DensityOp{Vec3::Zero()};
                    w.components = {{0.5, DensityOp{e}}, {0.5, DensityOp{-e}}};
                    cert.witness = w;
                } else {
                    cert.detail = "effect probe mixture (E(1/2,+e/2) + E(1/2,-e/2))/2 != E(1/2,0)";
                    cert.witness = std::monostate{};
                }
                return cert;
            }
            return std::nullopt;
        }
        case CheckStage::Axioms: {
            const auto ax = check_axioms(ex, tol);
            if (ax.pass) return std::nullopt;
            NoGoCertificate cert;
            cert.kind = CertificateKind::AxiomViolation;
            if (ax.f_defect >= ax.d_defect) {
                cert.defect = ax.f_defect;
                cert.detail = "xi of the zero operator is not the zero function (F != 0)";
                cert.witness = AxiomWitness{'F', ax.worst_f_point};
            } else {
                cert.defect = ax.d_defect;
                cert.detail = "xi of the identity is not the unit function (D != 1)";
                cert.witness = AxiomWitness{'D', ax.worst_d_point};
            }
            return cert;
        }
        case CheckStage::Negativity: {
            AffineStateRep view{space, ex.A, ex.C};
            const auto sneg = negativity(view);
            AffineEffectRep eview{space, ex.B, ex.D, ex.F};
            const auto eneg = effect_negativity(eview);
            if (sneg.min_value < -tol && sneg.min_value <= eneg.min_value) {
                NoGoCertificate cert;
                cert.kind = CertificateKind::StateNegativity;
                cert.defect = -sneg.min_value;
                cert.detail = "mu takes a negative value";
                cert.witness = NegativityWitness{sneg.witness_state, sneg.witness_point};
                return cert;
            }
            if (eneg.min_value < -tol) {
                NoGoCertificate cert;
                cert.kind = CertificateKind::EffectNegativity;
                cert.defect = -eneg.min_value;
                cert.detail = "xi takes a negative value";
                cert.witness = EffectNegativityWitness{eneg.witness_effect, eneg.witness_point};
                return cert;
            }
            return std::nullopt;
        }
        case CheckStage::FrameConditions: {
            const auto fc = check_frame_conditions(ex, space, tol);
            if (fc.pass) return std::nullopt;
            NoGoCertificate cert;
            cert.kind = CertificateKind::FrameCondition;
            cert.defect = fc.worst_defect;
            const int q = fc.worst_equation;
            const auto ij = fc.worst_ij[q - 2];
            std::ostringstream os;
            switch (q) {
                case 2: os << "sum w B_" << ij[0] << " A_" << ij[1] << " != delta"; break;
                case 3: os << "sum w B_" << ij[0] << " C != 0"; break;
                case 4: os << "sum w A_" << ij[0] << " != 0"; break;
                default: os << "sum w C != 1"; break;
            }
            cert.detail = os.str();
            cert.witness = FrameConditionWitness{q, ij[0], ij[1]};
            return cert;
        }
        case CheckStage::NormBounds: {
            const auto nb = check_norm_bounds(ex, space, tol);
            if (nb.pass) return std::nullopt;
            NoGoCertificate cert;
            cert.kind = CertificateKind::NormBound;
            if (nb.a_defect >= nb.b_defect) {
                cert.defect = nb.a_defect;
                cert.detail = "|A| <= C violated";
                cert.witness = NormBoundWitness{'A', nb.worst_a_point};
            } else {
                cert.defect = nb.b_defect;
                cert.detail = "|B| <= 1 violated";
                cert.witness = NormBoundWitness{'B', nb.worst_b_point};
            }
            return cert;
        }
        case CheckStage::Overlap: {
            const double t = overlap_score(ex, space);
            if (std::abs(t - 3.0) <= tol) return std::nullopt;
            NoGoCertificate cert;
            cert.kind = CertificateKind::OverlapGap;
            cert.defect = std::abs(t - 3.0);
            cert.detail = "overlap score T != 3";
            cert.witness = OverlapWitness{t};
            return cert;
        }
    }
    return std::nullopt;
}

}  // namespace detail

/// Run the necessary-condition checks in the given order and return the
/// first violation. Theorem-level guarantee: a candidate that truly
/// satisfies the QPR axioms and convex-linearity over a finite ontic space
/// always violates at least one remaining condition, so NoViolation never
/// occurs for genuine inputs.
inline NoGoCertificate certify_ordered(const StateRep& srep, const AffineEffectRep& erep,
                                       std::span<const CheckStage> order,
                                       double tol = default_tol()) {
    if (!space_of(srep).same_as(erep.space)) {
        throw std::invalid_argument("certify: representations live on different ontic spaces");
    }
    // For tabulated candidates the catalog mixtures are checked before the
    // probe extraction, which may be impossible for them (probes outside
    // the catalog).
    if (std::holds_alternative<TabulatedStateRep>(srep)) {
        const auto cl = check_convex_linearity(srep, 0, 0, tol);
        if (!cl.pass && cl.witness) {
            NoGoCertificate cert;
            cert.kind = CertificateKind::ConvexLinearityViolation;
            cert.defect = cl.worst_defect;
            cert.detail = "catalog mixture violates convex-linearity";
            cert.witness = *cl.witness;
            return cert;
        }
    }
    const CoefficientExtract ex = extract_coefficients(srep, erep, tol);
    const OnticSpace& space = erep.space;
    for (CheckStage stage : order) {
        if (auto cert = detail::run_stage(stage, srep, ex, space, tol)) {
            return *cert;
        }
    }
    return NoGoCertificate{};
}

inline NoGoCertificate certify(const StateRep& srep, const AffineEffectRep& erep,
                               double tol = default_tol()) {
    return certify_ordered(srep, erep, default_check_order, tol);
}

/// Recompute a certificate's defect from the raw representations alone,
/// without any pipeline state. Used to validate that witnesses are
/// independently checkable.
inline double recompute_defect(const NoGoCertificate& cert, const StateRep& srep,
                               const AffineEffectRep& erep, double tol = default_tol()) {
    switch (cert.kind) {
        case CertificateKind::ConvexLinearityViolation: {
            if (const auto* w = std::get_if<MixtureWitness>(&cert.witness)) {
                OnticFunction rhs = OnticFunction::Zero(erep.space.size());
                for (const auto& [weight, rho] : w->components) {
                    rhs += weight * mu_eval(srep, rho, tol);
                }
                return (mu_eval(srep, w->mixed, tol) - rhs).cwiseAbs().maxCoeff();
            }
            return extract_coefficients(srep, erep, tol).fit_residual;
        }
        case CertificateKind::AxiomViolation: {
            const auto& w = std::get<AxiomWitness>(cert.witness);
            const OnticFunction f = xi_eval(erep, PovmElement{0.0, Vec3::Zero()});
            if (w.which == 'F') {
                return std::abs(f[w.point]);
            }
            const OnticFunction d = xi_eval(erep, PovmElement{1.0, Vec3::Zero()}) - f;
            return std::abs(d[w.point] - 1.0);
        }
        case CertificateKind::StateNegativity: {
            const auto& w = std::get<NegativityWitness>(cert.witness);
            return -mu_eval(srep, w.state, tol)[w.point];
        }
        case CertificateKind::EffectNegativity: {
            const auto& w = std::get<EffectNegativityWitness>(cert.witness);
            return -xi_eval(erep, w.effect)[w.point];
        }
        case CertificateKind::FrameCondition: {
            const auto& w = std::get<FrameConditionWitness>(cert.witness);
            const auto ex = extract_coefficients(srep, erep, tol);
            const auto& wt = erep.space.weights;
            switch (w.equation) {
                case 2: {
                    const double v = (wt.array() * ex.B.row(w.i).transpose().array() *
                                      ex.A.row(w.j).transpose().array())
                                         .sum();
                    return std::abs(v - (w.i == w.j ? 1.0 : 0.0));
                }
                case 3: {
                    const double v =
                        (wt.array() * ex.B.row(w.i).transpose().array() * ex.C.array()).sum();
                    return std::abs(v);
                }
                case 4:
                    return std::abs((wt.array() * ex.A.row(w.i).transpose().array()).sum());
                default:
                    return std::abs(erep.space.integrate(ex.C) - 1.0);
            }
        }
        case CertificateKind::NormBound: {
            const auto& w = std::get<NormBoundWitness>(cert.witness);
            const auto ex = extract_coefficients(srep, erep, tol);
            if (w.which == 'A') {
                return ex.A.col(w.point).norm() - ex.C[w.point];
            }
            return ex.B.col(w.point).norm() - 1.0;
        }
        case CertificateKind::OverlapGap: {
            const auto ex = extract_coefficients(srep, erep, tol);
            return std::abs(overlap_score(ex, erep.space) - 3.0);
        }
        case CertificateKind::NoViolation:
            return 0.0;
    }
    return 0.0;
}

// --- random nonnegative candidates ------------------------------------------

/// Seeded sampler for candidates built to pass every nonnegativity-side
/// condition by construction: C >= 0 with sum w C = 1, |A| <= C pointwise,
/// |B| <= 1 pointwise, D == 1, F == 0. The certifier must convict each of
/// them of a QPR3-side violation.
struct CandidateSampler {
    std::mt19937_64 rng;
    Eigen::Index min_points = 1;
    Eigen::Index max_points = 64;

    explicit CandidateSampler(std::uint64_t seed) : rng(seed) {}

    std::pair<AffineStateRep, AffineEffectRep> sample() {
        std::uniform_int_distribution<Eigen::Index> size_dist(min_points, max_points);
        const Eigen::Index n = size_dist(rng);
        OnticSpace space;
        space.weights.resize(n);
        std::uniform_real_distribution<double> weight_dist(0.1, 2.0);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (Eigen::Index k = 0; k < n; ++k) {
            space.labels.push_back("p" + std::to_string(k));
            space.weights[k] = weight_dist(rng);
        }
        Eigen::VectorXd c(n);
        for (Eigen::Index k = 0; k < n; ++k) c[k] = unit(rng);
        double total = space.weights.dot(c);
        if (total < 1e-12) {  // all-zero draw; fall back to a flat C
            c.setOnes();
            total = space.weights.sum();
        }
        c /= total;
        Eigen::Matrix3Xd a(3, n);
        Eigen::Matrix3Xd b(3, n);
        for (Eigen::Index k = 0; k < n; ++k) {
            a.col(k) = c[k] * random_ball_vector(rng);
            b.col(k) = random_ball_vector(rng);
        }
        AffineStateRep srep{space, a, c};
        AffineEffectRep erep{space, b, Eigen::VectorXd::Ones(n), Eigen::VectorXd::Zero(n)};
        return {std::move(srep), std::move(erep)};
    }
};

// --- contradiction chain -----------------------------------------------------

/// Numerical replay of the equality-forcing argument. The componentwise
/// bounds |A_i| <= C and |B_i| <= 1 (consequences of nonnegativity) squeeze
/// 1 = |sum w B_i A_i| <= sum w |B_i||A_i| <= sum w C = 1 per axis; both
/// inequalities saturate, pinning |B_i| = 1 on the support of C, hence
/// |B| = sqrt(3) there against the bound |B| <= 1 — unless C vanishes,
/// which conflicts with sum w C = 1 instead.
struct ChainReport {
    bool state_premise_holds = true;   // |A_i| <= C on every point
    bool effect_premise_holds = true;  // |B_i| <= 1 on every point
    std::array<double, 3> pairing{};      // sum w B_i A_i per axis
    std::array<double, 3> abs_pairing{};  // sum w |B_i| |A_i| per axis
    double c_integral = 0.0;              // sum w C
    Eigen::Index support_size = 0;        // points with C > tol
    std::array<double, 3> min_abs_b_on_support{};
    double max_b_norm_on_support = 0.0;
    enum class Terminal { PremiseFailure, NormConflict, Eq5Conflict, NoConflict } terminal =
        Terminal::NoConflict;
    std::string narrative;
};

inline ChainReport contradiction_chain_report(const CoefficientExtract& ex,
                                              const OnticSpace& space,
                                              double tol = default_tol()) {
    ChainReport report;
    for (Eigen::Index k = 0; k < space.size(); ++k) {
        for (int i = 0; i < 3; ++i) {
            if (std::abs(ex.A(i, k)) > ex.C[k] + tol) report.state_premise_holds = false;
            if (std::abs(ex.B(i, k)) > 1.0 + tol) report.effect_premise_holds = false;
        }
    }
    for (int i = 0; i < 3; ++i) {
        report.pairing[i] = (space.weights.array() * ex.B.row(i).transpose().array() *
                             ex.A.row(i).transpose().array())
                                .sum();
        report.abs_pairing[i] = (space.weights.array() * ex.B.row(i).transpose().array().abs() *
                                 ex.A.row(i).transpose().array().abs())
                                    .sum();
        report.min_abs_b_on_support[i] = std::numeric_limits<double>::infinity();
    }
    report.c_integral = space.integrate(ex.C);
    for (Eigen::Index k = 0; k < space.size(); ++k) {
        if (ex.C[k] > tol) {
            ++report.support_size;
            for (int i = 0; i < 3; ++i) {
                report.min_abs_b_on_support[i] =
                    std::min(report.min_abs_b_on_support[i], std::abs(ex.B(i, k)));
            }
            report.max_b_norm_on_support =
                std::max(report.max_b_norm_on_support, ex.B.col(k).norm());
        }
    }
    std::ostringstream os;
    if (report.support_size == 0) {
        report.terminal = ChainReport::Terminal::Eq5Conflict;
        os << "C vanishes on every point, so sum w C = " << report.c_integral
           << " cannot equal 1";
    } else if (!report.state_premise_holds || !report.effect_premise_holds) {
        report.terminal = ChainReport::Terminal::PremiseFailure;
        os << "nonnegativity premises already fail ("
           << (report.state_premise_holds ? "" : "|A_i|<=C ")
           << (report.effect_premise_holds ? "" : "|B_i|<=1")
           << "); max |B| on the support of C is " << report.max_b_norm_on_support;
    } else if (report.max_b_norm_on_support > 1.0 + tol) {
        report.terminal = ChainReport::Terminal::NormConflict;
        os << "|B| reaches " << report.max_b_norm_on_support
           << " on the support of C, conflicting with |B| <= 1";
    } else {
        report.terminal = ChainReport::Terminal::NoConflict;
        os << "no forced conflict at this stage; equality chain not saturated";
    }
    report.narrative = os.str();
    return report;
}

}  // namespace qpr
