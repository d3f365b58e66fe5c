// Command-line front door: geometric-measure computations, Takagi
// factorizations, subspace queries, operator maximization, and the
// claim-verification campaigns.
//
// Exit codes: 0 success / all claims pass, 1 claim failure, 2 usage or
// input-file error.

#include "gme/io.hpp"
#include "gme/operator_opt.hpp"
#include "gme/optimizer.hpp"
#include "gme/oracle.hpp"
#include "gme/subspaces.hpp"
#include "gme/takagi.hpp"
#include "gme/tensor.hpp"
#include "gme/verification.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <string>

namespace {

using nlohmann::json;

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string complex_str(gme::cplx z) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.9g%+.9gi", z.real(), z.imag());
    return buf;
}

json unit_vector_json(const gme::UnitVector& v) {
    json amps = json::array();
    for (int i = 0; i < v.dim(); ++i) amps.push_back(gme::detail::dump_pair(v[i]));
    return amps;
}

int cmd_measure(const std::string& path, bool symmetric_only, const std::string& field,
                int restarts, std::uint64_t seed, int iterations, double tolerance, bool as_json) {
    const gme::StateTensor state = gme::load_state_file(path);
    gme::OptimizerConfig cfg;
    cfg.restarts = restarts;
    cfg.master_seed = seed;
    cfg.max_iterations = iterations;
    cfg.convergence_tol = tolerance;
    cfg.field = field == "real" ? gme::Field::Real : gme::Field::Complex;

    if (symmetric_only) {
        const auto res = gme::closest_symmetric_product_state(state, cfg);
        const double g = std::min(res.value, 1.0);
        if (as_json) {
            json doc{{"g", res.value},
                     {"e_g", gme::geometric_measure(g)},
                     {"eps_g", gme::log_geometric_measure(g)},
                     {"maximizer", unit_vector_json(res.maximizer)},
                     {"restart_values", res.restart_values},
                     {"iterations", res.iterations_used},
                     {"converged", res.converged}};
            std::cout << doc.dump(2) << "\n";
        } else {
            std::cout << "G_sym = " << num(res.value) << "\n";
            std::cout << "E_G = " << num(gme::geometric_measure(g)) << "\n";
            std::cout << "eps_G = " << num(gme::log_geometric_measure(g)) << "\n";
            std::cout << "maximizer:";
            for (int i = 0; i < res.maximizer.dim(); ++i) {
                std::cout << " " << complex_str(res.maximizer[i]);
            }
            std::cout << "\n";
        }
        return 0;
    }

    const auto res = gme::closest_product_state(state, cfg);
    const double g = std::min(res.overlap_g, 1.0);
    const bool sym_max = gme::verify_symmetric_maximizer(res, 1e-6);
    if (as_json) {
        json factors = json::array();
        for (const auto& f : res.maximizer.factors()) factors.push_back(unit_vector_json(f));
        json doc{{"g", res.overlap_g},
                 {"e_g", gme::geometric_measure(g)},
                 {"eps_g", gme::log_geometric_measure(g)},
                 {"maximizer_factors", std::move(factors)},
                 {"restart_values", res.restart_values},
                 {"iterations", res.iterations_used},
                 {"converged", res.converged},
                 {"symmetric_maximizer", sym_max}};
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "G = " << num(res.overlap_g) << "\n";
        std::cout << "E_G = " << num(gme::geometric_measure(g)) << "\n";
        std::cout << "eps_G = " << num(gme::log_geometric_measure(g)) << "\n";
        for (int j = 0; j < res.maximizer.n_parties(); ++j) {
            std::cout << "factor " << (j + 1) << ":";
            const auto& f = res.maximizer.factor(j);
            for (int i = 0; i < f.dim(); ++i) std::cout << " " << complex_str(f[i]);
            std::cout << "\n";
        }
        std::cout << "symmetric maximizer: " << (sym_max ? "yes" : "no") << "\n";
    }
    return 0;
}

int cmd_takagi(const std::string& path, bool as_json) {
    const gme::MatrixXcd m = gme::load_matrix_file(path);
    const auto td = gme::takagi_factorize(m);
    const double err = (td.reconstruct() - m).norm() / std::max(m.norm(), 1e-300);
    if (as_json) {
        json values = json::array();
        for (Eigen::Index i = 0; i < td.values.size(); ++i) values.push_back(td.values(i));
        json doc{{"values", std::move(values)},
                 {"unitary", gme::matrix_to_json(td.unitary)},
                 {"relative_reconstruction_error", err}};
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "takagi values:";
        for (Eigen::Index i = 0; i < td.values.size(); ++i) std::cout << " " << num(td.values(i));
        std::cout << "\n";
        std::cout << "relative reconstruction error = " << num(err) << "\n";
    }
    return 0;
}

int cmd_dims(int n, int k, bool as_json) {
    const auto s = gme::dim_symmetric(n, k);
    const auto t = gme::dim_translation_invariant(n, k);
    if (as_json) {
        json doc{{"n", n}, {"k", k}, {"dim_S", s}, {"dim_T", t}, {"dim_X", t - s}};
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "dim S = " << s << "\n";
        std::cout << "dim T = " << t << "\n";
        std::cout << "dim X = " << (t - s) << "\n";
    }
    return 0;
}

int cmd_subspace_basis(const std::string& which, int n, int k, bool as_json) {
    gme::SubspaceLabel label;
    if (which == "S") {
        label = gme::SubspaceLabel::S;
    } else if (which == "T") {
        label = gme::SubspaceLabel::T;
    } else if (which == "X") {
        label = gme::SubspaceLabel::X;
    } else {
        std::cerr << "unknown subspace '" << which << "' (expected S, T or X)\n";
        return 2;
    }
    const auto basis = gme::subspace_basis(label, n, k);
    if (as_json) {
        json vectors = json::array();
        for (const auto& v : basis.vectors) vectors.push_back(gme::state_to_json(v));
        json doc{{"which", which}, {"n", n}, {"k", k}, {"vectors", std::move(vectors)}};
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "basis " << which << "(" << n << "," << k << "): " << basis.vectors.size()
                  << " vectors\n";
        for (std::size_t t = 0; t < basis.vectors.size(); ++t) {
            std::cout << "vector " << (t + 1) << ": " << gme::state_to_json(basis.vectors[t]).dump()
                      << "\n";
        }
    }
    return 0;
}

int cmd_operator_max(const std::string& path, bool symmetric, int restarts, std::uint64_t seed,
                     bool as_json) {
    const gme::HermitianOperator x = gme::load_operator_file(path);
    gme::OptimizerConfig cfg;
    cfg.restarts = restarts;
    cfg.master_seed = seed;
    const gme::SymmetryClass cls = gme::classify(x);
    if (symmetric) {
        const auto [value, vec] = gme::g_hat_symmetric(x, cfg);
        if (as_json) {
            json doc{{"ghat_symmetric", value},
                     {"maximizer", unit_vector_json(vec)},
                     {"perm_invariant", cls.perm_invariant},
                     {"perm_symmetric", cls.perm_symmetric},
                     {"positive", cls.positive}};
            std::cout << doc.dump(2) << "\n";
        } else {
            std::cout << "Ghat_S = " << num(value) << "\n";
        }
        return 0;
    }
    const auto res = gme::g_hat(x, cfg);
    if (as_json) {
        json factors = json::array();
        for (const auto& f : res.maximizer.factors()) factors.push_back(unit_vector_json(f));
        json doc{{"ghat", res.overlap_g},
                 {"maximizer_factors", std::move(factors)},
                 {"perm_invariant", cls.perm_invariant},
                 {"perm_symmetric", cls.perm_symmetric},
                 {"positive", cls.positive},
                 {"full_correlation_qubit", cls.full_correlation_qubit}};
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "Ghat = " << num(res.overlap_g) << "\n";
        std::cout << "perm_invariant = " << (cls.perm_invariant ? "yes" : "no")
                  << ", perm_symmetric = " << (cls.perm_symmetric ? "yes" : "no")
                  << ", positive = " << (cls.positive ? "yes" : "no") << "\n";
    }
    return 0;
}

int cmd_verify(const std::string& claim, int n, int k, int trials, std::uint64_t seed,
               bool as_json) {
    gme::CampaignReport report;
    if (claim == "lemma1") {
        report = gme::run_lemma1_campaign(n, k, trials, seed);
    } else if (claim == "lemma2") {
        report = gme::run_lemma2_campaign(k, trials, seed);
    } else if (claim == "lemma3") {
        report = gme::run_lemma3_campaign(trials, seed);
    } else if (claim == "observation1") {
        report = gme::run_observation1_campaign(trials, seed);
    } else if (claim == "proof-identity") {
        report = gme::run_proof_identity_check(trials, seed);
    } else if (claim == "counterexamples") {
        report = gme::run_counterexample_suite(seed);
    } else {
        std::cerr << "unknown claim '" << claim
                  << "' (expected lemma1, lemma2, lemma3, observation1, proof-identity or "
                     "counterexamples)\n";
        return 2;
    }
    if (as_json) {
        std::cout << report.to_json().dump(2) << "\n";
    } else {
        std::cout << report.claim << ": " << (report.passed() ? "PASS" : "FAIL") << " ("
                  << report.trials << " trials, " << report.failures
                  << " failures, worst deviation " << num(report.worst_deviation) << ", "
                  << num(report.runtime_seconds) << " s)\n";
        for (std::size_t i = 0; i < report.failure_states.size(); ++i) {
            std::cout << "failing input " << report.failure_seeds[i] << ": "
                      << report.failure_states[i].dump() << "\n";
        }
    }
    return report.passed() ? 0 : 1;
}

int cmd_counterexamples(std::uint64_t seed, bool as_json) {
    const auto rows = gme::counterexample_table(seed);
    bool all_pass = true;
    if (as_json) {
        json doc = json::array();
        for (const auto& row : rows) {
            doc.push_back(json{{"name", row.name},
                               {"expected", row.expected},
                               {"computed", row.computed},
                               {"deviation", row.deviation},
                               {"pass", row.pass}});
            all_pass = all_pass && row.pass;
        }
        std::cout << doc.dump(2) << "\n";
    } else {
        std::printf("%-52s %14s %14s %10s  %s\n", "counterexample", "expected", "computed",
                    "deviation", "verdict");
        for (const auto& row : rows) {
            std::printf("%-52s %14s %14s %10.2e  %s\n", row.name.c_str(),
                        num(row.expected).c_str(), num(row.computed).c_str(), row.deviation,
                        row.pass ? "PASS" : "FAIL");
            all_pass = all_pass && row.pass;
        }
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"geometric measure of entanglement toolkit"};
    app.require_subcommand(1);

    std::string state_path, matrix_path, operator_path, which = "S", claim, field = "complex";
    int n = 3, k = 2, trials = 100, restarts = 20, iterations = 2000;
    std::uint64_t seed = 0;
    double tolerance = 1e-12;
    bool symmetric_only = false, symmetric = false, as_json = false;

    auto* measure = app.add_subcommand("measure", "geometric measure of a pure state");
    measure->add_option("state-file", state_path, "state JSON file")->required();
    measure->add_flag("--symmetric-only", symmetric_only,
                      "restrict the maximization to symmetric product states");
    measure->add_option("--field", field, "complex or real")
        ->check(CLI::IsMember({"complex", "real"}));
    measure->add_option("--restarts", restarts, "number of restarts");
    measure->add_option("--seed", seed, "master seed (default 0)");
    measure->add_option("--iterations", iterations, "sweep budget per restart");
    measure->add_option("--tolerance", tolerance, "per-sweep convergence tolerance");
    measure->add_flag("--json", as_json, "machine-readable output");

    auto* takagi = app.add_subcommand("takagi", "Takagi factorization of a symmetric matrix");
    takagi->add_option("matrix-file", matrix_path, "matrix JSON file")->required();
    takagi->add_flag("--json", as_json, "machine-readable output");

    auto* dims = app.add_subcommand("dims", "dimensions of the S, T and X subspaces");
    dims->add_option("--n", n, "number of parties")->required();
    dims->add_option("--k", k, "local dimension")->required();
    dims->add_flag("--json", as_json, "machine-readable output");

    auto* basis = app.add_subcommand("subspace-basis", "orthonormal basis of S, T or X");
    basis->add_option("--which", which, "S, T or X")->required();
    basis->add_option("--n", n, "number of parties")->required();
    basis->add_option("--k", k, "local dimension")->required();
    basis->add_flag("--json", as_json, "machine-readable output");

    auto* opmax = app.add_subcommand("operator-max", "maximal product expectation of an observable");
    opmax->add_option("operator-file", operator_path, "operator JSON file")->required();
    opmax->add_flag("--symmetric", symmetric, "restrict to symmetric product states");
    opmax->add_option("--restarts", restarts, "number of restarts");
    opmax->add_option("--seed", seed, "master seed (default 0)");
    opmax->add_flag("--json", as_json, "machine-readable output");

    auto* verify = app.add_subcommand("verify", "run a claim-verification campaign");
    verify->add_option("claim", claim,
                       "lemma1 | lemma2 | lemma3 | observation1 | proof-identity | counterexamples")
        ->required();
    verify->add_option("--n", n, "number of parties");
    verify->add_option("--k", k, "local dimension");
    verify->add_option("--trials", trials, "number of trials");
    verify->add_option("--seed", seed, "campaign seed (default 0)");
    verify->add_flag("--json", as_json, "machine-readable output");

    auto* counter = app.add_subcommand("counterexamples", "fixed counterexample table");
    counter->add_option("--seed", seed, "optimizer seed (default 0)");
    counter->add_flag("--json", as_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (measure->parsed()) {
            return cmd_measure(state_path, symmetric_only, field, restarts, seed, iterations,
                               tolerance, as_json);
        }
        if (takagi->parsed()) return cmd_takagi(matrix_path, as_json);
        if (dims->parsed()) return cmd_dims(n, k, as_json);
        if (basis->parsed()) return cmd_subspace_basis(which, n, k, as_json);
        if (opmax->parsed()) {
            return cmd_operator_max(operator_path, symmetric, restarts, seed, as_json);
        }
        if (verify->parsed()) return cmd_verify(claim, n, k, trials, seed, as_json);
        if (counter->parsed()) return cmd_counterexamples(seed, as_json);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
