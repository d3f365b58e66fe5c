#ifndef GME_IO_HPP
#define GME_IO_HPP

#include "gme/operator_opt.hpp"
#include "gme/takagi.hpp"
#include "gme/tensor.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>
#include <string>

// JSON file formats. Complex numbers are [re, im] pairs; numbers round-trip
// exactly (shortest representation that reparses to the same double).
//
//   state:    {"n_parties": N, "local_dim": k, "amplitudes": [[re, im], ...]}
//   matrix:   {"dim": k, "entries": [[re, im], ...]}            (row-major)
//   operator: {"n_parties": N, "local_dim": k, "matrix": [[[re, im], ...], ...]}

namespace gme {

namespace detail {

inline cplx parse_pair(const nlohmann::json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw std::invalid_argument("field '" + field + "': expected a [re, im] pair");
    }
    return cplx(j[0].get<double>(), j[1].get<double>());
}

inline nlohmann::json dump_pair(cplx z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

inline std::int64_t require_int(const nlohmann::json& doc, const std::string& field,
                                std::int64_t min_value) {
    if (!doc.contains(field) || !doc[field].is_number_integer()) {
        throw std::invalid_argument("field '" + field + "': missing or not an integer");
    }
    const std::int64_t v = doc[field].get<std::int64_t>();
    if (v < min_value) {
        throw std::invalid_argument("field '" + field + "': must be >= " +
                                    std::to_string(min_value));
    }
    return v;
}

}  // namespace detail

inline StateTensor state_from_json(const nlohmann::json& doc) {
    const int n = static_cast<int>(detail::require_int(doc, "n_parties", 1));
    const int k = static_cast<int>(detail::require_int(doc, "local_dim", 2));
    if (!doc.contains("amplitudes") || !doc["amplitudes"].is_array()) {
        throw std::invalid_argument("field 'amplitudes': missing or not an array");
    }
    const auto& amps = doc["amplitudes"];
    const std::int64_t want = detail::ipow(k, n);
    if (static_cast<std::int64_t>(amps.size()) != want) {
        throw std::invalid_argument("field 'amplitudes': expected " + std::to_string(want) +
                                    " entries, got " + std::to_string(amps.size()));
    }
    VectorXcd v(want);
    for (std::int64_t i = 0; i < want; ++i) v(i) = detail::parse_pair(amps[i], "amplitudes");
    const double norm = v.norm();
    if (std::abs(norm - 1.0) > 1e-6) {
        throw std::invalid_argument("field 'amplitudes': norm " + std::to_string(norm) +
                                    " is not within 1e-6 of 1");
    }
    return StateTensor(n, k, std::move(v));
}

inline nlohmann::json state_to_json(const StateTensor& state) {
    nlohmann::json amps = nlohmann::json::array();
    for (std::int64_t i = 0; i < state.size(); ++i) amps.push_back(detail::dump_pair(state[i]));
    return nlohmann::json{{"n_parties", state.n_parties()},
                          {"local_dim", state.local_dim()},
                          {"amplitudes", std::move(amps)}};
}

inline MatrixXcd matrix_from_json(const nlohmann::json& doc) {
    const int k = static_cast<int>(detail::require_int(doc, "dim", 1));
    if (!doc.contains("entries") || !doc["entries"].is_array()) {
        throw std::invalid_argument("field 'entries': missing or not an array");
    }
    const auto& entries = doc["entries"];
    if (static_cast<std::int64_t>(entries.size()) != static_cast<std::int64_t>(k) * k) {
        throw std::invalid_argument("field 'entries': expected " + std::to_string(k * k) +
                                    " entries, got " + std::to_string(entries.size()));
    }
    MatrixXcd m(k, k);
    for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c) {
            m(r, c) = detail::parse_pair(entries[r * k + c], "entries");
        }
    }
    return m;
}

inline nlohmann::json matrix_to_json(const MatrixXcd& m) {
    nlohmann::json entries = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back(detail::dump_pair(m(r, c)));
    }
    return nlohmann::json{{"dim", m.rows()}, {"entries", std::move(entries)}};
}

inline HermitianOperator operator_from_json(const nlohmann::json& doc) {
    const int n = static_cast<int>(detail::require_int(doc, "n_parties", 1));
    const int k = static_cast<int>(detail::require_int(doc, "local_dim", 2));
    if (!doc.contains("matrix") || !doc["matrix"].is_array()) {
        throw std::invalid_argument("field 'matrix': missing or not an array");
    }
    const std::int64_t dim = detail::ipow(k, n);
    const auto& rows = doc["matrix"];
    if (static_cast<std::int64_t>(rows.size()) != dim) {
        throw std::invalid_argument("field 'matrix': expected " + std::to_string(dim) + " rows");
    }
    MatrixXcd m(dim, dim);
    for (std::int64_t r = 0; r < dim; ++r) {
        if (!rows[r].is_array() || static_cast<std::int64_t>(rows[r].size()) != dim) {
            throw std::invalid_argument("field 'matrix': row " + std::to_string(r) +
                                        " must have " + std::to_string(dim) + " entries");
        }
        for (std::int64_t c = 0; c < dim; ++c) {
            m(r, c) = detail::parse_pair(rows[r][c], "matrix");
        }
    }
    return HermitianOperator(n, k, std::move(m));
}

inline nlohmann::json operator_to_json(const HermitianOperator& x) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < x.matrix().rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < x.matrix().cols(); ++c) {
            row.push_back(detail::dump_pair(x.matrix()(r, c)));
        }
        rows.push_back(std::move(row));
    }
    return nlohmann::json{
        {"n_parties", x.n_parties()}, {"local_dim", x.local_dim()}, {"matrix", std::move(rows)}};
}

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
    }
    return doc;
}

inline StateTensor load_state_file(const std::string& path) {
    return state_from_json(load_json_file(path));
}

inline MatrixXcd load_matrix_file(const std::string& path) {
    return matrix_from_json(load_json_file(path));
}

inline HermitianOperator load_operator_file(const std::string& path) {
    return operator_from_json(load_json_file(path));
}

}  // namespace gme

#endif  // GME_IO_HPP
