// qprcert: command-line front end for the qubit quasiprobability toolkit.
// Subcommands: certify | extend | reduce | counterexample | negativity.
// Exit codes: 0 = ran and produced a report, 2 = input/validation error,
// 3 = requested construction is mathematically impossible (extend).

#include "qpr/json_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using qpr::json;

namespace {

struct GlobalConfig {
    double tol = 1e-9;
    std::uint64_t seed = 42;
    std::string format = "json";
    std::string out_dir = ".";
};

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitImpossible = 3;

[[noreturn]] void fail_input(const std::string& message) {
    std::cerr << "error: " << message << "\n";
    std::exit(kExitInputError);
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        fail_input("cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const std::exception& e) {
        fail_input(path + ": " + e.what());
    }
}

void write_json_file(const fs::path& path, const json& j) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path);
    if (!out) {
        fail_input("cannot write " + path.string());
    }
    out << j.dump(2) << "\n";
}

// Table output: dotted key paths, floats truncated at 12 significant digits.
void print_table(const json& j, const std::string& prefix, std::ostream& os) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            print_table(value, prefix.empty() ? key : prefix + "." + key, os);
        }
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            print_table(j.at(i), prefix + "[" + std::to_string(i) + "]", os);
        }
    } else if (j.is_number_float()) {
        std::ostringstream num;
        num << std::setprecision(12) << j.get<double>();
        os << prefix << " = " << num.str() << "\n";
    } else {
        os << prefix << " = " << j.dump() << "\n";
    }
}

void emit(const GlobalConfig& cfg, const json& report) {
    if (cfg.format == "table") {
        print_table(report, "", std::cout);
    } else {
        std::cout << report.dump(2) << "\n";
    }
}

std::vector<std::pair<qpr::DensityOp, qpr::PovmElement>> sample_pairs(int count,
                                                                      std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<qpr::DensityOp, qpr::PovmElement>> pairs;
    pairs.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        pairs.emplace_back(qpr::random_density(rng), qpr::random_povm_element(rng));
    }
    return pairs;
}

// --- certify -----------------------------------------------------------------

struct CertifyOptions {
    std::string state_file;
    std::string effect_file;
    std::string demo;
    bool random_nonnegative = false;
    int trials = 1000;
    bool with_chain = false;
};

int run_certify(const GlobalConfig& cfg, const CertifyOptions& opt) {
    if (opt.random_nonnegative) {
        qpr::CandidateSampler sampler(cfg.seed);
        json results = json::array();
        std::map<std::string, int> kind_counts;
        int no_violation = 0;
        for (int trial = 0; trial < opt.trials; ++trial) {
            const auto [srep, erep] = sampler.sample();
            const auto cert = qpr::certify(srep, erep, cfg.tol);
            const auto ex = qpr::extract_coefficients(srep, erep, cfg.tol);
            json entry = cert;
            entry["trial"] = trial;
            entry["points"] = srep.space.size();
            entry["overlap_score"] = qpr::overlap_score(ex, srep.space);
            results.push_back(std::move(entry));
            ++kind_counts[qpr::to_string(cert.kind)];
            if (cert.kind == qpr::CertificateKind::NoViolation) {
                ++no_violation;
            }
        }
        json report{{"mode", "random-nonnegative"},
                    {"seed", cfg.seed},
                    {"tol", cfg.tol},
                    {"trials", opt.trials},
                    {"results", std::move(results)},
                    {"summary", json{{"kinds", kind_counts}, {"no_violation", no_violation}}}};
        emit(cfg, report);
        return kExitOk;
    }

    qpr::StateRep srep = qpr::AffineStateRep{};
    qpr::AffineEffectRep erep;
    if (!opt.demo.empty()) {
        if (opt.demo != "sic") {
            fail_input("unknown demo '" + opt.demo + "' (available: sic)");
        }
        auto [s, e] = qpr::sic_baseline();
        srep = std::move(s);
        erep = std::move(e);
    } else {
        if (opt.state_file.empty() || opt.effect_file.empty()) {
            fail_input("certify needs STATE_FILE and EFFECT_FILE (or --demo / --random-nonnegative)");
        }
        try {
            srep = qpr::state_rep_from_json(load_json_file(opt.state_file));
            erep = load_json_file(opt.effect_file).get<qpr::AffineEffectRep>();
        } catch (const std::exception& e) {
            fail_input(e.what());
        }
    }
    try {
        const auto cert = qpr::certify(srep, erep, cfg.tol);
        json report = cert;
        if (opt.with_chain && std::holds_alternative<qpr::AffineStateRep>(srep)) {
            const auto ex = qpr::extract_coefficients(srep, erep, cfg.tol);
            report["chain"] = qpr::contradiction_chain_report(ex, erep.space, cfg.tol);
        }
        emit(cfg, report);
        return kExitOk;
    } catch (const std::exception& e) {
        fail_input(e.what());
    }
}

// --- extend --------------------------------------------------------------------

struct ExtendOptions {
    std::string pvs_file;
    std::string demo;
    std::vector<std::string> queries;
    bool require_linear = false;
};

qpr::PointValueSet demo_pvs(const std::string& name) {
    if (name == "line") {
        qpr::PointValueSet pvs;
        pvs.points.resize(2, 2);
        pvs.points << 0, 1, 1, 0;
        pvs.values.resize(2, 1);
        pvs.values << 5, 7;
        return pvs;
    }
    if (name == "constant-one") {
        return qpr::constant_one_example();
    }
    fail_input("unknown demo '" + name + "' (available: line, constant-one)");
}

Eigen::VectorXd parse_query(const std::string& csv, Eigen::Index expected_dim) {
    std::vector<double> entries;
    std::stringstream ss(csv);
    std::string token;
    while (std::getline(ss, token, ',')) {
        try {
            entries.push_back(std::stod(token));
        } catch (const std::exception&) {
            fail_input("query '" + csv + "' is not a comma-separated list of numbers");
        }
    }
    if (static_cast<Eigen::Index>(entries.size()) != expected_dim) {
        fail_input("query '" + csv + "' has " + std::to_string(entries.size()) +
                   " coordinates, expected " + std::to_string(expected_dim));
    }
    return Eigen::Map<Eigen::VectorXd>(entries.data(), static_cast<Eigen::Index>(entries.size()));
}

int run_extend(const GlobalConfig& cfg, const ExtendOptions& opt) {
    qpr::PointValueSet pvs;
    if (!opt.demo.empty()) {
        pvs = demo_pvs(opt.demo);
    } else if (!opt.pvs_file.empty()) {
        try {
            pvs = load_json_file(opt.pvs_file).get<qpr::PointValueSet>();
        } catch (const std::exception& e) {
            fail_input(e.what());
        }
    } else {
        fail_input("extend needs a point-value file or --demo");
    }

    const auto consistency = qpr::convex_linearity_check(pvs, cfg.tol);
    if (!consistency.pass) {
        json report{{"error", "data admits no translated-linear extension"},
                    {"residual", consistency.worst_defect},
                    {"witness", consistency.witness}};
        emit(cfg, report);
        return kExitImpossible;
    }
    const auto map = qpr::translated_linear_extend(pvs, cfg.tol);
    const auto linear = qpr::linear_extension_exists(pvs, cfg.tol);
    if (opt.require_linear && !linear.exists) {
        json report{{"error", "no linear extension exists"}, {"linear_extension", linear}};
        emit(cfg, report);
        return kExitImpossible;
    }
    json queries = json::array();
    for (const auto& q : opt.queries) {
        const Eigen::VectorXd point = parse_query(q, pvs.domain_dim());
        const bool in_hull = map.membership_residual(point) <= cfg.tol;
        json entry{{"point", qpr::to_json_array(point)}, {"in_hull", in_hull}};
        if (in_hull) {
            entry["value"] = qpr::to_json_array(map.eval(point));
        }
        queries.push_back(std::move(entry));
    }
    json report{{"map", map},
                {"hull_dim", map.basis.cols()},
                {"linear_extension", linear},
                {"queries", std::move(queries)}};
    emit(cfg, report);
    return kExitOk;
}

// --- reduce --------------------------------------------------------------------

struct ReduceOptions {
    std::string frame_file;
    int frame_dim = 0;
    std::string subspace;
    std::string isometry_file;
    int samples = 200;
};

int run_reduce(const GlobalConfig& cfg, const ReduceOptions& opt) {
    Eigen::Index dim = 0;
    std::vector<qpr::MatrixXc> frame;
    if (opt.frame_dim > 0) {
        dim = opt.frame_dim;
        frame = qpr::standard_ic_frame(dim);
    } else if (!opt.frame_file.empty()) {
        const json j = load_json_file(opt.frame_file);
        try {
            dim = j.at("dim").get<Eigen::Index>();
            for (const auto& entry : j.at("frame")) {
                frame.push_back(qpr::complex_matrix_from_json(entry));
            }
        } catch (const std::exception& e) {
            fail_input(e.what());
        }
    } else {
        fail_input("reduce needs --frame DIM or a frame file");
    }

    qpr::Embedding emb;
    if (!opt.isometry_file.empty()) {
        try {
            emb = load_json_file(opt.isometry_file).get<qpr::Embedding>();
        } catch (const std::exception& e) {
            fail_input(e.what());
        }
    } else if (!opt.subspace.empty()) {
        std::vector<Eigen::Index> indices;
        std::stringstream ss(opt.subspace);
        std::string token;
        while (std::getline(ss, token, ',')) {
            try {
                // accept both "0,1" and "e1,e2" style
                if (!token.empty() && token[0] == 'e') {
                    indices.push_back(std::stol(token.substr(1)) - 1);
                } else {
                    indices.push_back(std::stol(token));
                }
            } catch (const std::exception&) {
                fail_input("bad subspace spec '" + opt.subspace + "'");
            }
        }
        try {
            emb = qpr::Embedding::coordinate(dim, indices);
        } catch (const std::exception& e) {
            fail_input(e.what());
        }
    } else {
        fail_input("reduce needs --subspace or --isometry");
    }
    if (auto st = emb.validate(cfg.tol); !st) {
        fail_input(st.message);
    }
    if (emb.big_dim() != dim) {
        fail_input("embedding dimension does not match the frame dimension");
    }

    try {
        const qpr::MatrixRep big = qpr::frame_representation(dim, frame);
        const qpr::MatrixRep restricted = qpr::restrict_representation(big, emb);
        const Eigen::Index k = emb.small_dim();
        std::mt19937_64 rng(cfg.seed);

        double worst_trace = 0.0;
        double worst_qpr3 = 0.0;
        for (int i = 0; i < opt.samples; ++i) {
            const qpr::MatrixXc rho = qpr::random_density_matrix(k, rng);
            const qpr::MatrixXc effect = qpr::random_effect_matrix(k, rng);
            const auto tp = qpr::trace_preservation_check(rho, effect, emb, cfg.tol);
            worst_trace = std::max(worst_trace, tp.worst_defect);
            const double lhs = restricted.space.inner(restricted.mu(rho), restricted.xi(effect));
            worst_qpr3 = std::max(worst_qpr3, std::abs(lhs - (rho * effect).trace().real()));
        }
        json report{{"dim", dim},
                    {"subspace_dim", k},
                    {"samples", opt.samples},
                    {"trace_preservation_worst_defect", worst_trace},
                    {"qpr3_worst_defect", worst_qpr3},
                    {"qpr3_pass", worst_qpr3 <= cfg.tol}};

        if (k == 2) {
            const auto [srep, erep] = qpr::restrict_to_qubit_rep(big, emb);
            const auto pairs = sample_pairs(opt.samples, cfg.seed + 1);
            const auto qpr3 = qpr::check_qpr3(qpr::StateRep{srep}, erep, pairs, cfg.tol);
            report["qubit_rep"] = json{{"qpr3", qpr3}};
            const fs::path sp = fs::path(cfg.out_dir) / "restricted_state.json";
            const fs::path ep = fs::path(cfg.out_dir) / "restricted_effect.json";
            write_json_file(sp, json(srep));
            write_json_file(ep, json(erep));
            report["files"] = json::array({sp.string(), ep.string()});
        }
        emit(cfg, report);
        return kExitOk;
    } catch (const std::exception& e) {
        fail_input(e.what());
    }
}

// --- counterexample --------------------------------------------------------------

json check_entry(const std::string& name, bool pass, bool expected_pass, double defect) {
    return json{{"check", name},
                {"pass", pass},
                {"expected_pass", expected_pass},
                {"as_expected", pass == expected_pass},
                {"defect", defect}};
}

int run_counterexample(const GlobalConfig& cfg, const std::string& name) {
    json checks = json::array();
    json files = json::array();
    if (name == "sic") {
        const auto [srep, erep] = qpr::sic_baseline();
        const fs::path sp = fs::path(cfg.out_dir) / "sic_state.json";
        const fs::path ep = fs::path(cfg.out_dir) / "sic_effect.json";
        write_json_file(sp, json(srep));
        write_json_file(ep, json(erep));
        files = json::array({sp.string(), ep.string()});

        const auto pairs = sample_pairs(1000, cfg.seed);
        const auto qpr3 = qpr::check_qpr3(qpr::StateRep{srep}, erep, pairs, cfg.tol);
        checks.push_back(check_entry("qpr3", qpr3.pass, true, qpr3.worst_defect));
        std::vector<qpr::DensityOp> states;
        for (const auto& [rho, e] : pairs) states.push_back(rho);
        const auto norm = qpr::check_normalization(qpr::StateRep{srep}, states, cfg.tol);
        checks.push_back(check_entry("normalization", norm.pass, true, norm.worst_defect));
        const auto unit =
            qpr::check_unit_sum(erep, qpr::SicFrame::regular_tetrahedron().povm(), cfg.tol);
        checks.push_back(check_entry("unit_sum", unit.pass, true, unit.worst_defect));
        const auto ex = qpr::extract_coefficients(qpr::StateRep{srep}, erep, cfg.tol);
        const auto frame = qpr::check_frame_conditions(ex, srep.space, cfg.tol);
        checks.push_back(check_entry("frame_conditions", frame.pass, true, frame.worst_defect));
        const auto sneg = qpr::negativity(srep);
        checks.push_back(
            check_entry("state_nonnegativity", sneg.min_value >= -cfg.tol, false, -sneg.min_value));
        const auto eneg = qpr::effect_negativity(erep);
        checks.push_back(
            check_entry("effect_nonnegativity", eneg.min_value >= -cfg.tol, true, -eneg.min_value));
        const auto cert = qpr::certify(qpr::StateRep{srep}, erep, cfg.tol);
        json report{{"name", name}, {"files", files}, {"checks", checks}, {"certificate", cert}};
        emit(cfg, report);
        return kExitOk;
    }
    if (name == "duplication") {
        const auto fixture = qpr::duplication_fixture();
        const fs::path sp = fs::path(cfg.out_dir) / "duplication_state.json";
        const fs::path ep = fs::path(cfg.out_dir) / "duplication_effect.json";
        write_json_file(sp, json(fixture.state));
        write_json_file(ep, json(fixture.effect));
        files = json::array({sp.string(), ep.string()});

        const auto norm =
            qpr::check_normalization(qpr::StateRep{fixture.state}, fixture.catalog, cfg.tol);
        checks.push_back(check_entry("normalization", norm.pass, true, norm.worst_defect));
        std::mt19937_64 rng(cfg.seed);
        std::vector<std::pair<qpr::DensityOp, qpr::PovmElement>> pairs;
        for (int i = 0; i < 1000; ++i) {
            pairs.emplace_back(fixture.catalog[static_cast<std::size_t>(rng() % 3)],
                               qpr::random_povm_element(rng));
        }
        const auto qpr3 = qpr::check_qpr3(qpr::StateRep{fixture.state}, fixture.effect, pairs,
                                          cfg.tol);
        checks.push_back(check_entry("qpr3", qpr3.pass, true, qpr3.worst_defect));
        double sigma_overlap = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const auto xi = qpr::xi_eval(fixture.effect, qpr::random_povm_element(rng));
            sigma_overlap =
                std::max(sigma_overlap, std::abs(fixture.effect.space.inner(fixture.sigma, xi)));
        }
        checks.push_back(
            check_entry("sigma_orthogonal_to_xi", sigma_overlap <= cfg.tol, true, sigma_overlap));
        const auto cl = qpr::check_convex_linearity(qpr::StateRep{fixture.state}, 0, 0, cfg.tol);
        checks.push_back(check_entry("convex_linearity", cl.pass, false, cl.worst_defect));
        const auto cert = qpr::certify(qpr::StateRep{fixture.state}, fixture.effect, cfg.tol);
        json report{{"name", name}, {"files", files}, {"checks", checks}, {"certificate", cert}};
        emit(cfg, report);
        return kExitOk;
    }
    if (name == "constant-one") {
        const auto pvs = qpr::constant_one_example();
        const fs::path pp = fs::path(cfg.out_dir) / "constant_one.json";
        write_json_file(pp, json(pvs));
        files = json::array({pp.string()});

        const auto cvx = qpr::convex_linearity_check(pvs, cfg.tol);
        checks.push_back(check_entry("convex_linearity", cvx.pass, true, cvx.worst_defect));
        const auto map = qpr::translated_linear_extend(pvs, cfg.tol);
        checks.push_back(check_entry("translated_linear_extension", true, true,
                                     map.linear.cwiseAbs().maxCoeff()));
        const auto linear = qpr::linear_extension_exists(pvs, cfg.tol);
        checks.push_back(
            check_entry("linear_extension_exists", linear.exists, false, linear.witness_value));
        json report{{"name", name},
                    {"files", files},
                    {"checks", checks},
                    {"map", map},
                    {"linear_extension", linear}};
        emit(cfg, report);
        return kExitOk;
    }
    fail_input("unknown counterexample '" + name +
               "' (available: sic, duplication, constant-one)");
}

// --- negativity -------------------------------------------------------------------

struct NegativityOptions {
    std::string state_file;
    std::string effect_file;
    std::string demo;
};

int run_negativity(const GlobalConfig& cfg, const NegativityOptions& opt) {
    qpr::AffineStateRep srep;
    std::optional<qpr::AffineEffectRep> erep;
    if (!opt.demo.empty()) {
        if (opt.demo != "sic") {
            fail_input("unknown demo '" + opt.demo + "' (available: sic)");
        }
        auto [s, e] = qpr::sic_baseline();
        srep = std::move(s);
        erep = std::move(e);
    } else if (!opt.state_file.empty()) {
        const json j = load_json_file(opt.state_file);
        if (j.contains("catalog")) {
            fail_input("negativity needs an affine state representation (coefficient form)");
        }
        try {
            srep = j.get<qpr::AffineStateRep>();
            if (!opt.effect_file.empty()) {
                erep = load_json_file(opt.effect_file).get<qpr::AffineEffectRep>();
            }
        } catch (const std::exception& e) {
            fail_input(e.what());
        }
    } else {
        fail_input("negativity needs a state file or --demo sic");
    }
    json report{{"state", qpr::negativity(srep)}};
    if (erep) {
        report["effect"] = qpr::effect_negativity(*erep);
    }
    emit(cfg, report);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certifier toolkit for qubit quasiprobability representations"};
    app.require_subcommand(1);
    app.fallthrough();  // accept global flags before or after the subcommand

    GlobalConfig cfg;
    app.add_option("--tol", cfg.tol, "numerical tolerance")->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "random seed");
    app.add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"json", "table"}));
    app.add_option("--out", cfg.out_dir, "directory for emitted files");

    auto* certify = app.add_subcommand("certify", "convict a representation of a violation");
    CertifyOptions copt;
    certify->add_option("state", copt.state_file, "state representation JSON file");
    certify->add_option("effect", copt.effect_file, "effect representation JSON file");
    certify->add_option("--demo", copt.demo, "built-in demo representation (sic)");
    certify->add_flag("--random-nonnegative", copt.random_nonnegative,
                      "certify a batch of random nonnegative candidates");
    certify->add_option("--trials", copt.trials, "batch size")->check(CLI::PositiveNumber);
    certify->add_flag("--chain", copt.with_chain, "attach the contradiction-chain report");

    auto* extend = app.add_subcommand("extend", "translated-linear extension of sampled data");
    ExtendOptions eopt;
    extend->add_option("points", eopt.pvs_file, "point-value set JSON file");
    extend->add_option("--demo", eopt.demo, "built-in data set (line, constant-one)");
    extend->add_option("--query", eopt.queries,
                       "evaluation point as comma-separated coordinates (repeatable)");
    extend->add_flag("--require-linear", eopt.require_linear,
                     "fail (exit 3) unless a genuinely linear extension exists");

    auto* reduce = app.add_subcommand("reduce", "restrict a representation to a subspace");
    ReduceOptions ropt;
    reduce->add_option("frame_file", ropt.frame_file, "frame JSON file {dim, frame}");
    reduce->add_option("--frame", ropt.frame_dim,
                       "build the standard informationally complete frame for this dimension");
    reduce->add_option("--subspace", ropt.subspace, "basis indices, e.g. 0,1 or e1,e2");
    reduce->add_option("--isometry", ropt.isometry_file, "embedding JSON file {V, alpha}");
    reduce->add_option("--samples", ropt.samples, "number of random check samples")
        ->check(CLI::PositiveNumber);

    auto* counter = app.add_subcommand("counterexample", "emit and verify a pinned construction");
    std::string counter_name;
    counter->add_option("name", counter_name, "sic | duplication | constant-one")->required();

    auto* negativity = app.add_subcommand("negativity", "negativity of a representation");
    NegativityOptions nopt;
    negativity->add_option("state", nopt.state_file, "affine state representation JSON file");
    negativity->add_option("--effect", nopt.effect_file, "affine effect representation JSON file");
    negativity->add_option("--demo", nopt.demo, "built-in demo representation (sic)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    qpr::default_tol() = cfg.tol;

    if (certify->parsed()) return run_certify(cfg, copt);
    if (extend->parsed()) return run_extend(cfg, eopt);
    if (reduce->parsed()) return run_reduce(cfg, ropt);
    if (counter->parsed()) return run_counterexample(cfg, counter_name);
    if (negativity->parsed()) return run_negativity(cfg, nopt);
    return kExitInputError;
}
