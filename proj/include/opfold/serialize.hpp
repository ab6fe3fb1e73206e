#pragma once

// JSON helpers. Needs the single-header nlohmann json on the include path.

#include <string>
#include <vector>

#include "json.hpp"
#include "opfold/bispec.hpp"
#include "opfold/errors.hpp"
#include "opfold/matrix.hpp"
#include "opfold/poly.hpp"
#include "opfold/rational.hpp"

namespace opfold {

using Json = nlohmann::json;

inline Json to_json(const Rational& q) { return to_string(q); }

inline Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (!j.is_string()) throw ParseError("expected a rational string, got " + j.dump());
    return parse_rational(j.get<std::string>());
}

inline Json to_json(const Poly& p) {
    Json a = Json::array();
    for (const auto& c : p.coefficients()) a.push_back(to_string(c));
    return a;
}

inline Poly poly_from_json(const Json& j) {
    if (!j.is_array()) throw ParseError("expected a coefficient list");
    std::vector<Rational> c;
    for (const auto& e : j) c.push_back(rational_from_json(e));
    return Poly(std::move(c));
}

inline Json to_json(const RationalMatrix& m) {
    Json a = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(to_string(m(i, j)));
        a.push_back(std::move(r));
    }
    return a;
}

inline RationalMatrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("expected a non-empty list of rows");
    const std::size_t rows = j.size(), cols = j[0].is_array() ? j[0].size() : 0;
    RationalMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) throw ParseError("ragged matrix");
        for (std::size_t k = 0; k < cols; ++k) m(i, k) = rational_from_json(j[i][k]);
    }
    return m;
}

/// {"N", "order", "coefficients": [{"k", "row", "col", "coeffs": ["p/q", ...]}]}
inline Json to_json(const RightDifferentialOperator& op) {
    Json j;
    j["N"] = op.N;
    j["order"] = op.order();
    Json list = Json::array();
    for (std::size_t k = 0; k < op.coeffs.size(); ++k)
        for (std::size_t r = 0; r < op.dim(); ++r)
            for (std::size_t c = 0; c < op.dim(); ++c) {
                const Poly& p = op.coeffs[k](r, c);
                if (p.is_zero()) continue;
                list.push_back({{"k", k}, {"row", r}, {"col", c}, {"coeffs", to_json(p)}});
            }
    j["coefficients"] = std::move(list);
    return j;
}

inline RightDifferentialOperator operator_from_json(const Json& j) {
    try {
        const auto N = j.at("N").get<unsigned>();
        const auto order = j.at("order").get<std::size_t>();
        std::vector<PolyMatrix> D(order + 1, PolyMatrix(N + 1, N + 1));
        for (const auto& e : j.at("coefficients")) {
            const auto k = e.at("k").get<std::size_t>(), r = e.at("row").get<std::size_t>(),
                       c = e.at("col").get<std::size_t>();
            if (k > order || r > N || c > N) throw ParseError("operator entry out of range");
            D[k](r, c) = poly_from_json(e.at("coeffs"));
        }
        auto op = make_operator(N, std::move(D));
        if (op.order() != order) throw ParseError("declared order does not match the top coefficient");
        return op;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("malformed operator JSON: ") + e.what());
    }
}

}  // namespace opfold
