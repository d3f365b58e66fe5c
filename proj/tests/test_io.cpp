#include "gme/io.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace gme;

TEST_CASE("state JSON round-trips bit for bit") {
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 10; ++trial) {
        const StateTensor psi = random_state(3, 2, rng());
        const nlohmann::json doc = state_to_json(psi);
        const StateTensor back = state_from_json(doc);
        CHECK(back.n_parties() == psi.n_parties());
        CHECK(back.local_dim() == psi.local_dim());
        CHECK((back.amplitudes() - psi.amplitudes()).norm() == 0.0);
        // Text-level round trip: dump, parse, dump again.
        const std::string text = doc.dump();
        const std::string again = state_to_json(state_from_json(nlohmann::json::parse(text))).dump();
        CHECK(text == again);
    }
}

TEST_CASE("state loader normalizes slightly-off input and names bad fields") {
    nlohmann::json doc = state_to_json(ghz_state(3));
    // Scale inside the 1e-6 window: loader accepts and normalizes.
    for (auto& pair : doc["amplitudes"]) {
        pair[0] = pair[0].get<double>() * (1.0 + 5e-7);
        pair[1] = pair[1].get<double>() * (1.0 + 5e-7);
    }
    const StateTensor loaded = state_from_json(doc);
    CHECK(std::abs(loaded.amplitudes().norm() - 1.0) <= 1e-12);

    // Out of the window: rejected, message names the field.
    for (auto& pair : doc["amplitudes"]) pair[0] = pair[0].get<double>() * 1.5;
    try {
        state_from_json(doc);
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("amplitudes") != std::string::npos);
    }

    nlohmann::json missing{{"n_parties", 2}, {"local_dim", 2}};
    CHECK_THROWS_AS(state_from_json(missing), std::invalid_argument);
    nlohmann::json short_doc{{"n_parties", 2},
                             {"local_dim", 2},
                             {"amplitudes", nlohmann::json::array({{1.0, 0.0}})}};
    CHECK_THROWS_AS(state_from_json(short_doc), std::invalid_argument);
    nlohmann::json bad_n{{"n_parties", 0},
                         {"local_dim", 2},
                         {"amplitudes", nlohmann::json::array({{1.0, 0.0}})}};
    CHECK_THROWS_AS(state_from_json(bad_n), std::invalid_argument);
}

TEST_CASE("matrix and operator JSON round-trips") {
    std::mt19937_64 rng(89);
    std::normal_distribution<double> dist(0.0, 1.0);
    MatrixXcd m(3, 3);
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) m(r, c) = cplx(dist(rng), dist(rng));
    }
    const MatrixXcd back = matrix_from_json(matrix_to_json(m));
    CHECK((back - m).norm() == 0.0);

    MatrixXcd h(4, 4);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) h(r, c) = cplx(dist(rng), dist(rng));
    }
    h = (h + h.adjoint()).eval();
    const HermitianOperator x(2, 2, h);
    const HermitianOperator back_op = operator_from_json(operator_to_json(x));
    CHECK((back_op.matrix() - x.matrix()).norm() == 0.0);

    // A non-Hermitian payload is rejected via the operator invariant.
    nlohmann::json doc = operator_to_json(x);
    doc["matrix"][0][1] = nlohmann::json::array({99.0, 0.0});
    CHECK_THROWS_AS(operator_from_json(doc), std::invalid_argument);

    nlohmann::json bad_matrix{{"dim", 2}, {"entries", nlohmann::json::array({{1.0, 0.0}})}};
    CHECK_THROWS_AS(matrix_from_json(bad_matrix), std::invalid_argument);
}
