#include "qpr/json_io.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace qpr;

namespace {

AffineStateRep random_state_rep(std::mt19937_64& rng) {
    CandidateSampler sampler(rng());
    return sampler.sample().first;
}

}  // namespace

TEST_CASE("serialize-parse-serialize is the identity on rep files", "[json]") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        CandidateSampler sampler(rng());
        const auto [srep, erep] = sampler.sample();
        const json s1 = srep;
        const json s2 = json(s1.get<AffineStateRep>());
        CHECK(s1.dump() == s2.dump());
        const json e1 = erep;
        const json e2 = json(e1.get<AffineEffectRep>());
        CHECK(e1.dump() == e2.dump());
    }
    const auto fixture = duplication_fixture();
    const json t1 = fixture.state;
    const json t2 = json(t1.get<TabulatedStateRep>());
    CHECK(t1.dump() == t2.dump());

    const PointValueSet pvs = constant_one_example();
    const json p1 = pvs;
    const json p2 = json(p1.get<PointValueSet>());
    CHECK(p1.dump() == p2.dump());

    std::mt19937_64 mrng(62);
    Embedding emb;
    emb.isometry = random_isometry(4, 2, mrng);
    emb.anchor = random_unit_vector(2, mrng);
    const json m1 = emb;
    const json m2 = json(m1.get<Embedding>());
    CHECK(m1.dump() == m2.dump());

    const HermitianOp op{0.75, Vec3(0.1, -0.2, 0.3)};
    const json h1 = op;
    CHECK(h1.dump() == json(h1.get<HermitianOp>()).dump());
    const Povm povm = SicFrame::regular_tetrahedron().povm();
    const json v1 = povm;
    CHECK(v1.dump() == json(v1.get<Povm>()).dump());
}

TEST_CASE("state_rep_from_json dispatches on shape", "[json]") {
    const auto [srep, erep] = sic_baseline();
    const StateRep affine = state_rep_from_json(json(srep));
    CHECK(std::holds_alternative<AffineStateRep>(affine));
    const auto fixture = duplication_fixture();
    const StateRep tabulated = state_rep_from_json(json(fixture.state));
    CHECK(std::holds_alternative<TabulatedStateRep>(tabulated));
}

TEST_CASE("round-tripped reps evaluate identically", "[json]") {
    std::mt19937_64 rng(63);
    const AffineStateRep srep = random_state_rep(rng);
    const AffineStateRep back = json(srep).get<AffineStateRep>();
    for (int i = 0; i < 20; ++i) {
        const DensityOp rho = random_density(rng);
        CHECK((mu_eval(srep, rho) - mu_eval(back, rho)).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("certificates serialize with kind, defect and witness", "[json]") {
    const auto [srep, erep] = sic_baseline();
    const json j = certify(srep, erep);
    CHECK(j.at("kind") == "StateNegativity");
    CHECK(j.at("defect").get<double>() == Catch::Approx(0.5).margin(1e-12));
    CHECK(j.at("witness").contains("state"));
    CHECK(j.at("witness").contains("point"));

    const auto fixture = duplication_fixture();
    const json jc = certify(StateRep{fixture.state}, fixture.effect);
    CHECK(jc.at("kind") == "ConvexLinearityViolation");
    CHECK(jc.at("witness").contains("components"));
}

TEST_CASE("malformed input is rejected", "[json]") {
    CHECK_THROWS(json::parse(std::string("{ truncated")));
    json j = json{{"labels", {"a", "b"}}, {"weights", {1.0}}};
    CHECK_THROWS_AS(j.get<OnticSpace>(), std::invalid_argument);
    json neg = json{{"labels", {"a"}}, {"weights", {-1.0}}};
    CHECK_THROWS_AS(neg.get<OnticSpace>(), std::invalid_argument);
    json rep = json{{"space", json{{"labels", {"a"}}, {"weights", {1.0}}}},
                    {"A", {{0.0}, {0.0}, {0.0}}},
                    {"C", {0.5, 0.5}}};
    CHECK_THROWS_AS(rep.get<AffineStateRep>(), std::invalid_argument);
}
