#pragma once

#include "qpr/affine.hpp"
#include "qpr/certifier.hpp"
#include "qpr/common.hpp"
#include "qpr/counterexamples.hpp"
#include "qpr/ontic.hpp"
#include "qpr/pauli.hpp"
#include "qpr/reduction.hpp"

#include <json.hpp>

#include <complex>
#include <string>
#include <vector>

namespace qpr {

using nlohmann::json;

// --- Eigen adapters ----------------------------------------------------------

inline json to_json_array(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

inline Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = j.at(static_cast<std::size_t>(i)).get<double>();
    return v;
}

inline Vec3 vec3_from_json(const json& j) {
    if (j.size() != 3) {
        throw std::invalid_argument("expected a 3-vector");
    }
    return Vec3(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
}

inline json to_json_rows(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        rows.push_back(to_json_array(m.row(i).transpose()));
    }
    return rows;
}

inline Eigen::MatrixXd matrix_from_json(const json& j) {
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) return {};
    const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = j.at(static_cast<std::size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw std::invalid_argument("ragged matrix in JSON");
        }
        for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
    }
    return m;
}

/// Complex scalars are [re, im]; complex matrices are row-major lists of
/// those pairs.
inline json to_json_complex(const MatrixXc& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            row.push_back({m(i, k).real(), m(i, k).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline MatrixXc complex_matrix_from_json(const json& j) {
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) return {};
    const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
    MatrixXc m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = j.at(static_cast<std::size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw std::invalid_argument("ragged complex matrix in JSON");
        }
        for (Eigen::Index k = 0; k < cols; ++k) {
            const auto& entry = row.at(static_cast<std::size_t>(k));
            m(i, k) = std::complex<double>(entry.at(0).get<double>(), entry.at(1).get<double>());
        }
    }
    return m;
}

inline json to_json_complex_vector(const VectorXc& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        arr.push_back({v[i].real(), v[i].imag()});
    }
    return arr;
}

inline VectorXc complex_vector_from_json(const json& j) {
    VectorXc v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const auto& entry = j.at(static_cast<std::size_t>(i));
        v[i] = std::complex<double>(entry.at(0).get<double>(), entry.at(1).get<double>());
    }
    return v;
}

// --- operator types ----------------------------------------------------------

inline void to_json(json& j, const HermitianOp& op) {
    j = json{{"w", op.w}, {"x", to_json_array(op.x)}};
}

inline void from_json(const json& j, HermitianOp& op) {
    op.w = j.at("w").get<double>();
    op.x = vec3_from_json(j.at("x"));
}

inline void to_json(json& j, const DensityOp& rho) {
    j = json{{"bloch", to_json_array(rho.bloch)}};
}

inline void from_json(const json& j, DensityOp& rho) {
    rho.bloch = vec3_from_json(j.at("bloch"));
}

inline void to_json(json& j, const PovmElement& e) {
    j = json{{"m", e.m}, {"p", to_json_array(e.p)}};
}

inline void from_json(const json& j, PovmElement& e) {
    e.m = j.at("m").get<double>();
    e.p = vec3_from_json(j.at("p"));
}

inline void to_json(json& j, const Povm& povm) {
    j = json{{"elements", povm.elements}};
}

inline void from_json(const json& j, Povm& povm) {
    povm.elements = j.at("elements").get<std::vector<PovmElement>>();
}

// --- ontic types --------------------------------------------------------------

inline void to_json(json& j, const OnticSpace& space) {
    j = json{{"labels", space.labels}, {"weights", to_json_array(space.weights)}};
}

inline void from_json(const json& j, OnticSpace& space) {
    space.labels = j.at("labels").get<std::vector<std::string>>();
    space.weights = vector_from_json(j.at("weights"));
    if (auto st = space.validate(); !st) {
        throw std::invalid_argument(st.message);
    }
}

inline void to_json(json& j, const AffineStateRep& rep) {
    json a = json::array();
    for (int i = 0; i < 3; ++i) a.push_back(to_json_array(rep.A.row(i).transpose()));
    j = json{{"space", rep.space}, {"A", std::move(a)}, {"C", to_json_array(rep.C)}};
}

inline void from_json(const json& j, AffineStateRep& rep) {
    rep.space = j.at("space").get<OnticSpace>();
    const auto& a = j.at("A");
    if (a.size() != 3) throw std::invalid_argument("AffineStateRep: A must have 3 rows");
    rep.A.resize(3, rep.space.size());
    for (int i = 0; i < 3; ++i) {
        rep.A.row(i) = vector_from_json(a.at(static_cast<std::size_t>(i))).transpose();
    }
    rep.C = vector_from_json(j.at("C"));
    if (rep.C.size() != rep.space.size() || rep.A.cols() != rep.space.size()) {
        throw std::invalid_argument("AffineStateRep: function length does not match the space");
    }
}

inline void to_json(json& j, const AffineEffectRep& rep) {
    json b = json::array();
    for (int i = 0; i < 3; ++i) b.push_back(to_json_array(rep.B.row(i).transpose()));
    j = json{{"space", rep.space},
             {"B", std::move(b)},
             {"D", to_json_array(rep.D)},
             {"F", to_json_array(rep.F)}};
}

inline void from_json(const json& j, AffineEffectRep& rep) {
    rep.space = j.at("space").get<OnticSpace>();
    const auto& b = j.at("B");
    if (b.size() != 3) throw std::invalid_argument("AffineEffectRep: B must have 3 rows");
    rep.B.resize(3, rep.space.size());
    for (int i = 0; i < 3; ++i) {
        rep.B.row(i) = vector_from_json(b.at(static_cast<std::size_t>(i))).transpose();
    }
    rep.D = vector_from_json(j.at("D"));
    rep.F = vector_from_json(j.at("F"));
    if (rep.D.size() != rep.space.size() || rep.F.size() != rep.space.size() ||
        rep.B.cols() != rep.space.size()) {
        throw std::invalid_argument("AffineEffectRep: function length does not match the space");
    }
}

inline void to_json(json& j, const TabulatedStateRep& rep) {
    json catalog = json::array();
    for (const auto& [state, mu] : rep.catalog) {
        catalog.push_back(json{{"state", state}, {"mu", to_json_array(mu)}});
    }
    j = json{{"space", rep.space}, {"catalog", std::move(catalog)}};
}

inline void from_json(const json& j, TabulatedStateRep& rep) {
    rep.space = j.at("space").get<OnticSpace>();
    rep.catalog.clear();
    for (const auto& entry : j.at("catalog")) {
        auto state = entry.at("state").get<DensityOp>();
        auto mu = vector_from_json(entry.at("mu"));
        if (mu.size() != rep.space.size()) {
            throw std::invalid_argument("TabulatedStateRep: mu length does not match the space");
        }
        rep.catalog.emplace_back(std::move(state), std::move(mu));
    }
}

/// State-representation files are dispatched on their shape: a "catalog"
/// key means tabulated, an "A" key means affine.
inline StateRep state_rep_from_json(const json& j) {
    if (j.contains("catalog")) {
        return j.get<TabulatedStateRep>();
    }
    return j.get<AffineStateRep>();
}

inline json state_rep_to_json(const StateRep& rep) {
    return std::visit([](const auto& r) { return json(r); }, rep);
}

// --- reports -------------------------------------------------------------------

inline void to_json(json& j, const CheckReport& report) {
    j = json{{"pass", report.pass},
             {"worst_defect", report.worst_defect},
             {"witness", report.witness}};
}

inline void to_json(json& j, const MixtureWitness& w) {
    json comps = json::array();
    for (const auto& [weight, rho] : w.components) {
        comps.push_back(json{{"weight", weight}, {"state", rho}});
    }
    j = json{{"mixed", w.mixed}, {"components", std::move(comps)}, {"point", w.point}};
}

inline void to_json(json& j, const ConvexLinearityReport& report) {
    j = json{{"pass", report.pass},
             {"worst_defect", report.worst_defect},
             {"mixtures_checked", report.mixtures_checked}};
    if (report.witness) {
        j["witness"] = *report.witness;
    }
}

inline void to_json(json& j, const StateNegativityResult& r) {
    j = json{{"min_value", r.min_value},
             {"negativity", r.negativity},
             {"witness_point", r.witness_point},
             {"witness_state", r.witness_state}};
}

inline void to_json(json& j, const EffectNegativityResult& r) {
    j = json{{"min_value", r.min_value},
             {"negativity", r.negativity},
             {"witness_point", r.witness_point},
             {"witness_effect", r.witness_effect}};
}

// --- affine extension types -----------------------------------------------------

inline void to_json(json& j, const PointValueSet& pvs) {
    j = json{{"points", to_json_rows(pvs.points)}, {"values", to_json_rows(pvs.values)}};
}

inline void from_json(const json& j, PointValueSet& pvs) {
    pvs.points = matrix_from_json(j.at("points"));
    pvs.values = matrix_from_json(j.at("values"));
    if (auto st = pvs.validate(); !st) {
        throw std::invalid_argument(st.message);
    }
}

inline void to_json(json& j, const TranslatedLinearMap& map) {
    json basis = json::array();
    for (Eigen::Index k = 0; k < map.basis.cols(); ++k) {
        basis.push_back(to_json_array(map.basis.col(k)));
    }
    j = json{{"u0", to_json_array(map.base)},
             {"w0", to_json_array(map.offset)},
             {"basis", std::move(basis)},
             {"h", to_json_rows(map.linear)}};
}

inline void from_json(const json& j, TranslatedLinearMap& map) {
    map.base = vector_from_json(j.at("u0"));
    map.offset = vector_from_json(j.at("w0"));
    const auto& basis = j.at("basis");
    map.basis.resize(map.base.size(), static_cast<Eigen::Index>(basis.size()));
    for (Eigen::Index k = 0; k < map.basis.cols(); ++k) {
        map.basis.col(k) = vector_from_json(basis.at(static_cast<std::size_t>(k)));
    }
    map.linear = matrix_from_json(j.at("h"));
}

inline void to_json(json& j, const LinearExtensionResult& r) {
    j = json{{"exists", r.exists}, {"residual", r.residual}};
    if (r.exists) {
        j["map"] = to_json_rows(r.map);
    } else {
        j["witness"] = to_json_array(r.witness);
        j["witness_value"] = r.witness_value;
    }
}

// --- reduction types -------------------------------------------------------------

inline void to_json(json& j, const Embedding& emb) {
    j = json{{"V", to_json_complex(emb.isometry)}, {"alpha", to_json_complex_vector(emb.anchor)}};
}

inline void from_json(const json& j, Embedding& emb) {
    emb.isometry = complex_matrix_from_json(j.at("V"));
    emb.anchor = complex_vector_from_json(j.at("alpha"));
}

// --- certificates ------------------------------------------------------------------

inline void to_json(json& j, const ChainReport& r) {
    j = json{{"state_premise_holds", r.state_premise_holds},
             {"effect_premise_holds", r.effect_premise_holds},
             {"pairing", r.pairing},
             {"abs_pairing", r.abs_pairing},
             {"c_integral", r.c_integral},
             {"support_size", r.support_size},
             {"min_abs_b_on_support", r.min_abs_b_on_support},
             {"max_b_norm_on_support", r.max_b_norm_on_support},
             {"narrative", r.narrative}};
    switch (r.terminal) {
        case ChainReport::Terminal::PremiseFailure: j["terminal"] = "PremiseFailure"; break;
        case ChainReport::Terminal::NormConflict: j["terminal"] = "NormConflict"; break;
        case ChainReport::Terminal::Eq5Conflict: j["terminal"] = "Eq5Conflict"; break;
        case ChainReport::Terminal::NoConflict: j["terminal"] = "NoConflict"; break;
    }
}

inline json witness_to_json(const CertificateWitness& witness) {
    return std::visit(
        [](const auto& w) -> json {
            using T = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return json::object();
            } else if constexpr (std::is_same_v<T, MixtureWitness>) {
                return json(w);
            } else if constexpr (std::is_same_v<T, AxiomWitness>) {
                return json{{"which", std::string(1, w.which)}, {"point", w.point}};
            } else if constexpr (std::is_same_v<T, NegativityWitness>) {
                return json{{"state", w.state}, {"point", w.point}};
            } else if constexpr (std::is_same_v<T, EffectNegativityWitness>) {
                return json{{"effect", w.effect}, {"point", w.point}};
            } else if constexpr (std::is_same_v<T, FrameConditionWitness>) {
                return json{{"equation", w.equation}, {"i", w.i}, {"j", w.j}};
            } else if constexpr (std::is_same_v<T, NormBoundWitness>) {
                return json{{"which", std::string(1, w.which)}, {"point", w.point}};
            } else {
                static_assert(std::is_same_v<T, OverlapWitness>);
                return json{{"score", w.score}};
            }
        },
        witness);
}

inline void to_json(json& j, const NoGoCertificate& cert) {
    j = json{{"kind", to_string(cert.kind)},
             {"defect", cert.defect},
             {"detail", cert.detail},
             {"witness", witness_to_json(cert.witness)}};
}

}  // namespace qpr
