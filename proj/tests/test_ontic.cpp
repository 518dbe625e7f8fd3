#include "qpr/ontic.hpp"

#include "qpr/counterexamples.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace qpr;

namespace {

std::vector<std::pair<DensityOp, PovmElement>> random_pairs(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<DensityOp, PovmElement>> pairs;
    pairs.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        pairs.emplace_back(random_density(rng), random_povm_element(rng));
    }
    return pairs;
}

// State-independent representation: A = 0, C = 1/4 on the four unit-weight
// SIC points (normalized so QPR1 holds).
AffineStateRep flat_state_rep() {
    auto [srep, erep] = sic_baseline();
    srep.A.setZero();
    return srep;
}

}  // namespace

TEST_CASE("OnticSpace validation and integration", "[ontic]") {
    OnticSpace space{{"a", "b"}, Eigen::Vector2d(0.5, 1.5)};
    CHECK(space.validate().ok);
    CHECK(space.integrate(Eigen::Vector2d(2.0, 2.0)) == 4.0);
    CHECK(space.inner(Eigen::Vector2d(1.0, 2.0), Eigen::Vector2d(3.0, 1.0)) == 4.5);

    OnticSpace zero_weight{{"a"}, Eigen::VectorXd::Zero(1)};
    CHECK_FALSE(zero_weight.validate().ok);
    OnticSpace duplicate{{"a", "a"}, Eigen::Vector2d(1.0, 1.0)};
    CHECK_FALSE(duplicate.validate().ok);
}

TEST_CASE("mu_eval on the SIC baseline", "[ontic]") {
    const auto [srep, erep] = sic_baseline();
    SECTION("maximally mixed state is uniform") {
        const OnticFunction mu = mu_eval(srep, DensityOp{Vec3::Zero()});
        for (Eigen::Index k = 0; k < 4; ++k) {
            CHECK(mu[k] == 0.25);
        }
    }
    SECTION("antipode of a tetrahedron vertex dips to -1/2") {
        const SicFrame frame = SicFrame::regular_tetrahedron();
        const OnticFunction mu = mu_eval(srep, DensityOp{-frame.bloch[0]});
        CHECK(mu[0] == Catch::Approx(-0.5).margin(1e-15));
        CHECK(mu[1] == Catch::Approx(0.5).margin(1e-15));
        CHECK(mu[2] == Catch::Approx(0.5).margin(1e-15));
        CHECK(mu[3] == Catch::Approx(0.5).margin(1e-15));
    }
    SECTION("state-independent rep ignores the state") {
        const AffineStateRep flat = flat_state_rep();
        std::mt19937_64 rng(21);
        const OnticFunction base = mu_eval(flat, DensityOp{Vec3::Zero()});
        for (int i = 0; i < 20; ++i) {
            CHECK((mu_eval(flat, random_density(rng)) - base).norm() == 0.0);
        }
    }
}

TEST_CASE("xi_eval axioms and SIC values", "[ontic]") {
    const auto [srep, erep] = sic_baseline();
    SECTION("identity maps to the unit function") {
        const OnticFunction xi = xi_eval(erep, PovmElement{1.0, Vec3::Zero()});
        CHECK((xi - OnticFunction::Ones(4)).cwiseAbs().maxCoeff() == 0.0);
    }
    SECTION("zero operator maps to the zero function") {
        const OnticFunction xi = xi_eval(erep, PovmElement{0.0, Vec3::Zero()});
        CHECK(xi.cwiseAbs().maxCoeff() == 0.0);
    }
    SECTION("half-Z effect values are 1/2 +- 1/(2 sqrt 3)") {
        const OnticFunction xi = xi_eval(erep, PovmElement{0.5, Vec3(0, 0, 0.5)});
        const double delta = 0.5 / std::sqrt(3.0);
        CHECK(xi[0] == Catch::Approx(0.5 + delta).margin(1e-15));
        CHECK(xi[1] == Catch::Approx(0.5 - delta).margin(1e-15));
        CHECK(xi[2] == Catch::Approx(0.5 - delta).margin(1e-15));
        CHECK(xi[3] == Catch::Approx(0.5 + delta).margin(1e-15));
    }
}

TEST_CASE("tabulated reps only answer cataloged states", "[ontic]") {
    const auto fixture = duplication_fixture();
    CHECK_NOTHROW(mu_eval(StateRep{fixture.state}, DensityOp{Vec3(0, 0, 1)}));
    CHECK_THROWS_AS(mu_eval(StateRep{fixture.state}, DensityOp{Vec3(1, 0, 0)}),
                    std::out_of_range);
}

TEST_CASE("check_qpr3", "[ontic]") {
    const auto [srep, erep] = sic_baseline();
    SECTION("SIC baseline reproduces the Born rule") {
        const auto pairs = random_pairs(100, 22);
        const auto report = check_qpr3(srep, erep, pairs, 1e-12);
        CHECK(report.pass);
        CHECK(report.worst_defect <= 1e-12);
    }
    SECTION("flat state rep against a trivial effect rep misses by 1/2") {
        const AffineStateRep flat = flat_state_rep();
        AffineEffectRep trivial = erep;
        trivial.B.setZero();
        const std::vector<std::pair<DensityOp, PovmElement>> sample{
            {DensityOp{Vec3(0, 0, 1)}, PovmElement{0.5, Vec3(0, 0, 0.5)}}};
        const auto report = check_qpr3(flat, trivial, sample, 1e-12);
        CHECK_FALSE(report.pass);
        CHECK(report.worst_defect == Catch::Approx(0.5).margin(1e-15));
    }
    SECTION("the zero operator contributes a vacuous identity") {
        const AffineStateRep flat = flat_state_rep();
        AffineEffectRep trivial = erep;
        trivial.B.setZero();
        const std::vector<std::pair<DensityOp, PovmElement>> sample{
            {DensityOp{Vec3(0, 0, 1)}, PovmElement{0.0, Vec3::Zero()}}};
        CHECK(check_qpr3(flat, trivial, sample, 1e-12).pass);
    }
    SECTION("space mismatch is rejected") {
        const auto doubled = duplicate_ontic_space(srep, erep);
        const auto pairs = random_pairs(1, 23);
        CHECK_THROWS_AS(check_qpr3(srep, doubled.effect, pairs), std::invalid_argument);
    }
}

TEST_CASE("check_normalization and check_unit_sum", "[ontic]") {
    const auto [srep, erep] = sic_baseline();
    SECTION("SIC states normalize") {
        const std::vector<DensityOp> states{DensityOp{Vec3(0, 0, 1)}, DensityOp{Vec3::Zero()},
                                            DensityOp{Vec3(0.3, -0.4, 0.2)}};
        const auto report = check_normalization(srep, states, 1e-12);
        CHECK(report.pass);
    }
    SECTION("Z measurement sums to the unit function") {
        const Povm z{{PovmElement{0.5, Vec3(0, 0, 0.5)}, PovmElement{0.5, Vec3(0, 0, -0.5)}}};
        CHECK(check_unit_sum(erep, z, 1e-12).pass);
    }
    SECTION("F = 0.1 breaks the unit sum for the trivial POVM") {
        AffineEffectRep biased = erep;
        biased.F.setConstant(0.1);
        const Povm trivial{{PovmElement{1.0, Vec3::Zero()}}};
        const auto report = check_unit_sum(biased, trivial, 1e-12);
        CHECK_FALSE(report.pass);
        CHECK(report.worst_defect == Catch::Approx(0.1).margin(1e-15));
    }
}

TEST_CASE("convex-linearity of affine reps is structural", "[ontic]") {
    const auto [srep, erep] = sic_baseline();
    const auto report = check_convex_linearity(StateRep{srep}, 200, 24, 1e-12);
    CHECK(report.pass);
    CHECK(report.mixtures_checked == 200);
}

TEST_CASE("convex-linearity of a single-state catalog passes vacuously", "[ontic]") {
    TabulatedStateRep rep;
    rep.space = sic_baseline().first.space;
    rep.catalog.emplace_back(DensityOp{Vec3(0, 0, 1)}, OnticFunction::Constant(4, 0.25));
    const auto report = check_convex_linearity(StateRep{rep}, 0, 0, 1e-12);
    CHECK(report.pass);
    CHECK(report.mixtures_checked == 0);
}

TEST_CASE("negativity of the SIC baseline is -1/2", "[ontic]") {
    const auto [srep, erep] = sic_baseline();
    const auto result = negativity(srep);
    CHECK(result.min_value == Catch::Approx(-0.5).margin(1e-12));
    CHECK(result.negativity == Catch::Approx(-0.5).margin(1e-12));
    // Witness is the antipode of the tetrahedron vertex at the witness point.
    const SicFrame frame = SicFrame::regular_tetrahedron();
    const Vec3 expected = -frame.bloch[static_cast<std::size_t>(result.witness_point)];
    CHECK((result.witness_state.bloch - expected).norm() <= 1e-12);
    // The witness is independently checkable: mu at that state and point.
    const OnticFunction mu = mu_eval(srep, result.witness_state);
    CHECK(mu[result.witness_point] == Catch::Approx(result.min_value).margin(1e-12));
}

TEST_CASE("negativity of a nonnegative rep clamps at zero", "[ontic]") {
    const AffineStateRep flat = flat_state_rep();  // A = 0, C = 1/4
    const auto result = negativity(flat);
    CHECK(result.min_value == 0.25);
    CHECK(result.negativity == 0.0);
    CHECK(result.witness_state.bloch.norm() == 0.0);
}

TEST_CASE("nonnegative verdict bounds mu on random states", "[ontic]") {
    // |A| <= C pointwise (boundary case A = C a_k), so min_value is 0 and
    // mu must be >= 0 for every valid state at every point.
    auto [srep, erep] = sic_baseline();
    srep.A /= 3.0;  // A = (1/4) a_k, |A| = 1/4 = C
    const auto result = negativity(srep);
    CHECK(result.min_value >= -1e-12);
    std::mt19937_64 rng(25);
    for (int i = 0; i < 1000; ++i) {
        CHECK(mu_eval(srep, random_density(rng)).minCoeff() >= -1e-12);
    }
}

TEST_CASE("effect-side negativity of the SIC baseline is exactly zero", "[ontic]") {
    const auto [srep, erep] = sic_baseline();
    const auto result = effect_negativity(erep);
    CHECK(result.min_value == 0.0);
    CHECK(result.negativity == 0.0);
}

TEST_CASE("effect-side negativity flags |B| > 1", "[ontic]") {
    auto [srep, erep] = sic_baseline();
    erep.B *= 2.0;  // |B| = 2 on every point
    const auto result = effect_negativity(erep);
    CHECK(result.min_value == Catch::Approx(-0.5).margin(1e-12));  // (1 - 2)/2
    CHECK(result.witness_effect.m == 0.5);
    // Witness effect evaluates to the reported minimum.
    const OnticFunction xi = xi_eval(erep, result.witness_effect);
    CHECK(xi[result.witness_point] == Catch::Approx(result.min_value).margin(1e-12));
}

TEST_CASE("QPR3 on probes extends to random pairs for affine reps", "[ontic]") {
    const auto [srep, erep] = sic_baseline();
    // Probe pairs all reproduce the Born rule...
    std::vector<std::pair<DensityOp, PovmElement>> probe_pairs;
    for (const auto& rho : probe_states()) {
        for (const auto& e : probe_effects()) {
            probe_pairs.emplace_back(rho, e);
        }
    }
    CHECK(check_qpr3(srep, erep, probe_pairs, 1e-12).pass);
    // ...and bilinearity carries that to arbitrary pairs.
    const auto pairs = random_pairs(500, 26);
    CHECK(check_qpr3(srep, erep, pairs, 1e-12).pass);
    // Contrapositive: a rep that fails on random pairs also fails on probes.
    auto broken = srep;
    broken.C.setConstant(0.3);
    CHECK_FALSE(check_qpr3(broken, erep, pairs, 1e-12).pass);
    CHECK_FALSE(check_qpr3(broken, erep, probe_pairs, 1e-12).pass);
}
