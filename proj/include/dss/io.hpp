// io.hpp — the SystemDocument file schema (JSON with complex entries encoded
// as [re, im] pairs, matrices row-major), vector-sequence files, and a
// deterministic writer (fixed field order, 17 significant digits) so that
// identical inputs always serialize to identical bytes.

#pragma once

#include "dss/core.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

namespace dss {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    ValidationError(std::string msg, ValidationReport rep)
        : std::runtime_error(std::move(msg)), report(std::move(rep)) {}
    ValidationReport report;
};

struct SystemDocument {
    int n = 0;
    int N = 0;
    std::vector<Matrix> S;
    std::vector<Matrix> Psi;
    std::optional<Matrix> alpha;
    std::optional<Matrix> beta;
    std::map<std::string, std::string> metadata;
};

// ── deterministic JSON emission ───────────────────────────────────────────

namespace jsonw {

inline std::string num(double x) {
    if (x == 0.0) x = 0.0;  // normalize -0
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string complex_pair(const Complex& z) {
    return "[" + num(z.real()) + "," + num(z.imag()) + "]";
}

inline std::string matrix(const Matrix& m) {
    std::string out = "[";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (r) out += ",";
        out += "[";
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out += ",";
            out += complex_pair(m(r, c));
        }
        out += "]";
    }
    return out + "]";
}

inline std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += ch;
        }
    }
    return out + "\"";
}

// Ordered object/array builders; fields serialize in insertion order.
struct Object {
    std::string body;
    Object& field(const std::string& key, const std::string& raw_value) {
        if (!body.empty()) body += ",";
        body += quote(key) + ":" + raw_value;
        return *this;
    }
    std::string str() const { return "{" + body + "}"; }
};

struct Array {
    std::string body;
    Array& item(const std::string& raw_value) {
        if (!body.empty()) body += ",";
        body += raw_value;
        return *this;
    }
    std::string str() const { return "[" + body + "]"; }
};

}  // namespace jsonw

inline std::string write_document(const SystemDocument& doc) {
    jsonw::Object root;
    root.field("n", std::to_string(doc.n));
    root.field("N", std::to_string(doc.N));
    jsonw::Array s, psi;
    for (const auto& m : doc.S) s.item(jsonw::matrix(m));
    for (const auto& m : doc.Psi) psi.item(jsonw::matrix(m));
    root.field("S", s.str());
    root.field("Psi", psi.str());
    if (doc.alpha) root.field("alpha", jsonw::matrix(*doc.alpha));
    if (doc.beta) root.field("beta", jsonw::matrix(*doc.beta));
    if (!doc.metadata.empty()) {
        jsonw::Object meta;
        for (const auto& [k, v] : doc.metadata) meta.field(k, jsonw::quote(v));
        root.field("metadata", meta.str());
    }
    return root.str() + "\n";
}

// ── parsing ───────────────────────────────────────────────────────────────

namespace detail {

inline Complex parse_complex(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError("complex entries must be [re, im] number pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline Matrix parse_matrix(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.empty()) throw ParseError(std::string(what) + ": expected a matrix");
    const auto rows = j.size();
    const auto cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) throw ParseError(std::string(what) + ": expected nested rows");
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw ParseError(std::string(what) + ": ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_complex(j[r][c]);
    }
    return m;
}

}  // namespace detail

inline SystemDocument parse_document(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    SystemDocument doc;
    try {
        if (!j.contains("n") || !j.contains("N") || !j.contains("S") || !j.contains("Psi"))
            throw ParseError("document needs fields n, N, S, Psi");
        doc.n = j.at("n").get<int>();
        doc.N = j.at("N").get<int>();
        for (const auto& m : j.at("S")) doc.S.push_back(detail::parse_matrix(m, "S"));
        for (const auto& m : j.at("Psi")) doc.Psi.push_back(detail::parse_matrix(m, "Psi"));
        if (j.contains("alpha")) doc.alpha = detail::parse_matrix(j.at("alpha"), "alpha");
        if (j.contains("beta")) doc.beta = detail::parse_matrix(j.at("beta"), "beta");
        if (j.contains("metadata"))
            for (const auto& [k, v] : j.at("metadata").items())
                doc.metadata[k] = v.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed document: ") + e.what());
    }
    return doc;
}

struct LoadedSystem {
    SymplecticSystem system;
    std::optional<BoundaryMatrix> alpha;
    std::optional<BoundaryMatrix> beta;
    SystemDocument document;
};

// Builds and validates the system from a parsed document.  Dimension
// problems surface as ParseError; numeric validation failures carry the
// full report.
inline LoadedSystem realize_document(const SystemDocument& doc, bool enforce_validation = true,
                                     double tol_struct = 1e-10) {
    std::unique_ptr<SymplecticSystem> sys;
    try {
        sys = std::make_unique<SymplecticSystem>(doc.n, doc.N, doc.S, doc.Psi);
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("document dimensions: ") + e.what());
    }
    if (enforce_validation) {
        ValidationReport rep = validate_system(*sys, tol_struct);
        if (!rep.passed) throw ValidationError("system fails structural validation", rep);
    }
    LoadedSystem out{std::move(*sys), std::nullopt, std::nullopt, doc};
    if (doc.alpha) out.alpha.emplace(*doc.alpha);
    if (doc.beta) out.beta.emplace(*doc.beta);
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline LoadedSystem load_system(const std::string& path, bool enforce_validation = true,
                                double tol_struct = 1e-10) {
    return realize_document(parse_document(read_file(path)), enforce_validation, tol_struct);
}

inline SystemDocument document_from_system(const SymplecticSystem& sys,
                                           std::optional<Matrix> alpha = std::nullopt,
                                           std::optional<Matrix> beta = std::nullopt,
                                           std::map<std::string, std::string> metadata = {}) {
    SystemDocument doc;
    doc.n = sys.n;
    doc.N = sys.N;
    doc.S = sys.S;
    doc.Psi = sys.Psi;
    doc.alpha = std::move(alpha);
    doc.beta = std::move(beta);
    doc.metadata = std::move(metadata);
    return doc;
}

// ── vector-sequence files: {"values": [entry_0, ..., entry_{N+1}]}, each
// entry a 2n-vector (or 2n×m matrix) in the same [re, im] encoding ─────────

inline VectorSequence parse_sequence(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.contains("values") || !j.at("values").is_array())
        throw ParseError("sequence document needs a values array");
    std::vector<Matrix> vals;
    for (const auto& entry : j.at("values")) {
        // vectors may be flat arrays of [re,im]; matrices nested row-major
        if (entry.is_array() && !entry.empty() && entry[0].is_array() && !entry[0].empty() &&
            entry[0][0].is_array()) {
            vals.push_back(detail::parse_matrix(entry, "values"));
        } else {
            Matrix col(static_cast<Eigen::Index>(entry.size()), 1);
            for (std::size_t r = 0; r < entry.size(); ++r)
                col(static_cast<Eigen::Index>(r), 0) = detail::parse_complex(entry[r]);
            vals.push_back(std::move(col));
        }
    }
    try {
        return VectorSequence(std::move(vals));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("sequence document: ") + e.what());
    }
}

inline VectorSequence load_sequence(const std::string& path) {
    return parse_sequence(read_file(path));
}

inline std::string write_sequence(const VectorSequence& z) {
    jsonw::Array vals;
    for (int k = 0; k < z.length(); ++k) {
        if (z.cols() == 1) {
            jsonw::Array col;
            for (Eigen::Index r = 0; r < z[k].rows(); ++r)
                col.item(jsonw::complex_pair(z[k](r, 0)));
            vals.item(col.str());
        } else {
            vals.item(jsonw::matrix(z[k]));
        }
    }
    jsonw::Object root;
    root.field("values", vals.str());
    return root.str() + "\n";
}

}  // namespace dss
