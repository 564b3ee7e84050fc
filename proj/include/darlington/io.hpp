#pragma once

// JSON problem and result files. Complex numbers are [re, im] pairs (plain
// numbers are accepted as real values); matrices are arrays of rows.

#include "realization.hpp"
#include "scalar.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace darlington {

using json = nlohmann::json;

struct ProblemFile {
    std::optional<Realization> realization;
    std::optional<Polynomial> p1;
    std::optional<Polynomial> q;
    std::optional<Matrix> J;
    bool symmetric = false;
    bool real = false;
    Tolerances tol;
};

inline cplx complex_from_json(const json& v, const std::string& where) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw Error(ErrorKind::Parse, where + ": expected a number or a [re, im] pair");
}

inline json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline Matrix matrix_from_json(const json& v, const std::string& where) {
    if (!v.is_array()) throw Error(ErrorKind::Parse, where + ": expected an array of rows");
    const Index rows = static_cast<Index>(v.size());
    Index cols = 0;
    if (rows > 0) {
        if (!v[0].is_array()) throw Error(ErrorKind::Parse, where + ": expected an array of rows");
        cols = static_cast<Index>(v[0].size());
    }
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const json& row = v[static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols)
            throw Error(ErrorKind::Parse, where + ": rows have different lengths");
        for (Index j = 0; j < cols; ++j)
            m(i, j) = complex_from_json(row[static_cast<size_t>(j)],
                                        where + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
    if (!all_finite(m)) throw Error(ErrorKind::Parse, where + ": non-finite entry");
    return m;
}

inline json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline Polynomial polynomial_from_json(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) throw Error(ErrorKind::Parse, where + ": expected a non-empty coefficient array");
    std::vector<cplx> c;
    for (size_t k = 0; k < v.size(); ++k) c.push_back(complex_from_json(v[k], where + "[" + std::to_string(k) + "]"));
    return Polynomial(c);
}

inline json polynomial_to_json(const Polynomial& p) {
    json out = json::array();
    for (const auto& c : p.coeffs()) out.push_back(complex_to_json(c));
    return out;
}

inline json realization_to_json(const Realization& r) {
    return {{"A", matrix_to_json(r.A)}, {"B", matrix_to_json(r.B)}, {"C", matrix_to_json(r.C)}, {"D", matrix_to_json(r.D)}};
}

inline ProblemFile problem_from_json(const json& doc) {
    if (!doc.is_object()) throw Error(ErrorKind::Parse, "problem file: top level must be an object");
    ProblemFile pf;
    const bool has_state = doc.contains("A") || doc.contains("B") || doc.contains("C") || doc.contains("D");
    if (has_state) {
        for (const char* key : {"A", "B", "C", "D"})
            if (!doc.contains(key)) throw Error(ErrorKind::Parse, std::string("problem file: missing key \"") + key + "\"");
        Matrix a = matrix_from_json(doc["A"], "A");
        Matrix b = matrix_from_json(doc["B"], "B");
        Matrix c = matrix_from_json(doc["C"], "C");
        Matrix d = matrix_from_json(doc["D"], "D");
        // empty state space: [] carries no column count
        if (a.rows() == 0) {
            a.resize(0, 0);
            b.resize(0, d.cols());
            c.resize(d.rows(), 0);
        }
        pf.realization = Realization{a, b, c, d};
        try {
            pf.realization->validate();
        } catch (const Error& e) {
            throw Error(ErrorKind::InvalidInput, std::string("problem file: ") + e.what());
        }
    }
    if (doc.contains("p1") != doc.contains("q"))
        throw Error(ErrorKind::Parse, "problem file: \"p1\" and \"q\" must be given together");
    if (doc.contains("p1")) {
        pf.p1 = polynomial_from_json(doc["p1"], "p1");
        pf.q = polynomial_from_json(doc["q"], "q");
    }
    if (!has_state && !pf.p1) throw Error(ErrorKind::Parse, "problem file: needs A, B, C, D or p1, q");
    if (doc.contains("flags")) {
        const json& f = doc["flags"];
        if (!f.is_object()) throw Error(ErrorKind::Parse, "flags: expected an object");
        pf.symmetric = f.value("symmetric", false);
        pf.real = f.value("real", false);
    }
    if (doc.contains("tolerances")) {
        const json& t = doc["tolerances"];
        if (!t.is_object()) throw Error(ErrorKind::Parse, "tolerances: expected an object");
        pf.tol.rank = t.value("rank", pf.tol.rank);
        pf.tol.cluster = t.value("cluster", pf.tol.cluster);
        pf.tol.symmetry = t.value("symmetry", pf.tol.symmetry);
        pf.tol.psd = t.value("psd", pf.tol.psd);
    }
    if (doc.contains("J")) {
        const json& j = doc["J"];
        if (!j.is_array()) throw Error(ErrorKind::Parse, "J: expected the diagonal as an array of +-1");
        Matrix jm = Matrix::Zero(static_cast<Index>(j.size()), static_cast<Index>(j.size()));
        for (size_t k = 0; k < j.size(); ++k) jm(static_cast<Index>(k), static_cast<Index>(k)) = complex_from_json(j[k], "J");
        pf.J = jm;
    }
    if (pf.symmetric && pf.realization && pf.realization->inputs() != pf.realization->outputs())
        throw Error(ErrorKind::InvalidInput, "problem file: symmetric flag set but D is " +
                                                 std::to_string(pf.realization->outputs()) + "x" +
                                                 std::to_string(pf.realization->inputs()));
    return pf;
}

inline ProblemFile read_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, path + ": " + e.what());
    }
    return problem_from_json(doc);
}

inline void write_json(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
    out << doc.dump(2) << "\n";
}

}  // namespace darlington
