#pragma once

// JSON readers and writers for algebras, elements, functionals, Orlicz
// functions, step elements of the core and isomorphisms.
//
//   algebra:     {"blocks":[{"dim":2,"weight":1.0},{"dim":1,"weight":2.0}]}
//   element:     {"blocks":[ [[[re,im],...],...], ... ]}   rows of complex entries
//   functional:  same layout as element (the density)
//   phi:         {"family":"power","p":2.0} | {"family":"linf"} | {"family":"cosh1"}
//                | {"family":"table","points":[[t,v],...]} ...
//   core:        {"pieces":[{"interval":[0.0,"inf"],"element":{...}}, ...]}
//   isomorphism: {"permutation":[1,0],"unitaries":[U_0, U_1]}
//
// Every reader rejects NaN and infinite entries and reports the JSON path of
// the offending value.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "core_model.hpp"
#include "functorial.hpp"
#include "orlicz_function.hpp"

namespace ncorlicz::io {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline json parse(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(source + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    } catch (const json::exception& e) {
        // e.g. a literal such as 1e999 that overflows binary64
        throw InputError(source + ": " + e.what());
    }
}

inline json parse_file(const std::string& path) { return parse(read_file(path), path); }

/// FNV-1a 64-bit digest, hex.
inline std::string digest(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace detail {

inline double finite_number(const json& j, const std::string& where) {
    if (!j.is_number()) throw InputError(where + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw InputError(where + ": NaN/Inf entries are not allowed");
    return v;
}

inline const json& member(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing \"" + key + "\"");
    return j.at(key);
}

inline Matrix matrix(const json& j, const std::string& where) {
    if (!j.is_array()) throw InputError(where + ": expected an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    Matrix m(rows, rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        const std::string rw = where + "[" + std::to_string(r) + "]";
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows)
            throw InputError(rw + ": expected a row of " + std::to_string(rows) + " entries");
        for (Eigen::Index c = 0; c < rows; ++c) {
            const auto& e = row[static_cast<std::size_t>(c)];
            const std::string ew = rw + "[" + std::to_string(c) + "]";
            if (e.is_number()) {
                m(r, c) = finite_number(e, ew);
            } else if (e.is_array() && e.size() == 2) {
                m(r, c) = Complex(finite_number(e[0], ew + "[0]"), finite_number(e[1], ew + "[1]"));
            } else {
                throw InputError(ew + ": expected [re, im] or a real number");
            }
        }
    }
    return m;
}

inline double endpoint(const json& j, const std::string& where) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return kInf;
        throw InputError(where + ": the only non-numeric endpoint token is \"inf\"");
    }
    return finite_number(j, where);
}

} // namespace detail

inline AlgebraRef algebra_from_json(const json& j, const std::string& where = "algebra") {
    const auto& blocks = detail::member(j, "blocks", where);
    if (!blocks.is_array()) throw InputError(where + ".blocks: expected an array");
    std::vector<int> dims;
    std::vector<double> weights;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const std::string bw = where + ".blocks[" + std::to_string(i) + "]";
        const auto& d = detail::member(blocks[i], "dim", bw);
        if (!d.is_number_integer()) throw InputError(bw + ".dim: expected an integer");
        dims.push_back(d.get<int>());
        weights.push_back(blocks[i].contains("weight") ? detail::finite_number(blocks[i]["weight"], bw + ".weight") : 1.0);
    }
    try {
        return make_algebra(std::move(dims), std::move(weights));
    } catch (const ValidationError& e) {
        throw InputError(where + ": " + e.what());
    }
}

inline std::vector<Matrix> blocks_from_json(const json& j, const std::string& where) {
    const auto& blocks = detail::member(j, "blocks", where);
    if (!blocks.is_array()) throw InputError(where + ".blocks: expected an array");
    std::vector<Matrix> out;
    for (std::size_t i = 0; i < blocks.size(); ++i)
        out.push_back(detail::matrix(blocks[i], where + ".blocks[" + std::to_string(i) + "]"));
    return out;
}

/// Algebra implied by block shapes alone (unit weights).
inline AlgebraRef algebra_from_blocks(const std::vector<Matrix>& blocks) {
    std::vector<int> dims;
    for (const auto& b : blocks) dims.push_back(static_cast<int>(b.rows()));
    return make_algebra(dims, std::vector<double>(dims.size(), 1.0));
}

inline Element element_from_json(const json& j, const AlgebraRef& alg, const std::string& where = "element") {
    auto blocks = blocks_from_json(j, where);
    try {
        const AlgebraRef a = alg ? alg : algebra_from_blocks(blocks);
        return Element(a, std::move(blocks));
    } catch (const ValidationError& e) {
        throw InputError(where + ": " + e.what());
    }
}

inline Functional functional_from_json(const json& j, const AlgebraRef& alg, const std::string& where = "functional") {
    return Functional(element_from_json(j, alg, where));
}

inline OrliczFunction phi_from_json(const json& j, const std::string& where = "phi") {
    const auto& fam = detail::member(j, "family", where);
    if (!fam.is_string()) throw InputError(where + ".family: expected a string");
    const std::string f = fam.get<std::string>();
    try {
        if (f == "power" || f == "scaled-power") {
            const double p = detail::finite_number(detail::member(j, "p", where), where + ".p");
            if (f == "scaled-power") return OrliczFunction::scaled_power(p);
            const double coef = j.contains("coef") ? detail::finite_number(j["coef"], where + ".coef") : 1.0;
            return OrliczFunction::power(p, coef);
        }
        if (f == "linf") return OrliczFunction::linf();
        if (f == "threshold") return OrliczFunction::threshold(detail::finite_number(detail::member(j, "a", where), where + ".a"));
        if (f == "cosh1") return OrliczFunction::cosh1();
        if (f == "exp1") return OrliczFunction::exp1();
        if (f == "cosh1-conjugate") return OrliczFunction::cosh1_conjugate();
        if (f == "exp1-conjugate") return OrliczFunction::exp1_conjugate();
        if (f == "table") {
            const auto& pts = detail::member(j, "points", where);
            if (!pts.is_array()) throw InputError(where + ".points: expected an array");
            std::vector<TablePoint> tp;
            for (std::size_t k = 0; k < pts.size(); ++k) {
                const std::string pw = where + ".points[" + std::to_string(k) + "]";
                if (!pts[k].is_array() || pts[k].size() != 2) throw InputError(pw + ": expected [t, v]");
                tp.push_back({detail::finite_number(pts[k][0], pw + "[0]"), detail::finite_number(pts[k][1], pw + "[1]")});
            }
            Tail tail = Tail::Linear;
            if (j.contains("tail")) {
                const auto t = j["tail"].get<std::string>();
                if (t == "inf") tail = Tail::Infinite;
                else if (t != "linear") throw InputError(where + ".tail: expected \"linear\" or \"inf\"");
            }
            return OrliczFunction::table(std::move(tp), tail);
        }
    } catch (const ValidationError& e) {
        throw InputError(where + ": " + e.what());
    }
    throw InputError(where + ".family: unknown family \"" + f + "\"");
}

inline ordered_json phi_to_json(const OrliczFunction& phi) {
    ordered_json j;
    switch (phi.family()) {
    case Family::Power:
        if (phi.coefficient() == 1.0 / phi.exponent() && phi.exponent() != 1.0) {
            j["family"] = "scaled-power";
            j["p"] = phi.exponent();
        } else {
            j["family"] = "power";
            j["p"] = phi.exponent();
            if (phi.coefficient() != 1.0) j["coef"] = phi.coefficient();
        }
        break;
    case Family::Threshold:
        if (phi.coefficient() == 1.0) j["family"] = "linf";
        else { j["family"] = "threshold"; j["a"] = phi.coefficient(); }
        break;
    case Family::Cosh1: j["family"] = "cosh1"; break;
    case Family::Exp1: j["family"] = "exp1"; break;
    case Family::Cosh1Conjugate: j["family"] = "cosh1-conjugate"; break;
    case Family::Exp1Conjugate: j["family"] = "exp1-conjugate"; break;
    case Family::Table: {
        j["family"] = "table";
        ordered_json pts = ordered_json::array();
        for (const auto& p : phi.points()) pts.push_back({p.t, p.value});
        j["points"] = pts;
        j["tail"] = phi.tail() == Tail::Infinite ? "inf" : "linear";
        break;
    }
    }
    return j;
}

/// Shorthand names: power2, power1.5, scaled-power2, linf, cosh1, exp1.
inline OrliczFunction phi_from_name(const std::string& name) {
    auto number_after = [&](std::size_t prefix) {
        const std::string rest = name.substr(prefix);
        std::size_t used = 0;
        double p = 0.0;
        try {
            p = std::stod(rest, &used);
        } catch (const std::exception&) {
            throw InputError("phi: cannot parse exponent in \"" + name + "\"");
        }
        if (used != rest.size()) throw InputError("phi: cannot parse exponent in \"" + name + "\"");
        return p;
    };
    try {
        if (name == "linf") return OrliczFunction::linf();
        if (name == "cosh1") return OrliczFunction::cosh1();
        if (name == "exp1") return OrliczFunction::exp1();
        if (name.rfind("scaled-power", 0) == 0) return OrliczFunction::scaled_power(number_after(12));
        if (name.rfind("power", 0) == 0) return OrliczFunction::power(number_after(5));
    } catch (const ValidationError& e) {
        throw InputError(std::string("phi: ") + e.what());
    }
    throw InputError("phi: unknown Orlicz function \"" + name + "\"");
}

/// "diag(3,4)" or "diag(1,3;2)" with ';' separating blocks.
inline std::vector<Matrix> blocks_from_diag(const std::string& text) {
    if (text.rfind("diag(", 0) != 0 || text.back() != ')') throw InputError("element: expected diag(...)");
    const std::string body = text.substr(5, text.size() - 6);
    std::vector<Matrix> out;
    std::stringstream blocks(body);
    std::string block;
    while (std::getline(blocks, block, ';')) {
        std::vector<double> vals;
        std::stringstream entries(block);
        std::string e;
        while (std::getline(entries, e, ',')) {
            try {
                vals.push_back(std::stod(e));
            } catch (const std::exception&) {
                throw InputError("element: bad diagonal entry \"" + e + "\"");
            }
            if (!std::isfinite(vals.back())) throw InputError("element: NaN/Inf entries are not allowed");
        }
        if (vals.empty()) throw InputError("element: empty diagonal block");
        Matrix m = Matrix::Zero(static_cast<Eigen::Index>(vals.size()), static_cast<Eigen::Index>(vals.size()));
        for (std::size_t k = 0; k < vals.size(); ++k) m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = vals[k];
        out.push_back(std::move(m));
    }
    return out;
}

inline CoreElement core_from_json(const json& j, const AlgebraRef& alg, const std::string& where = "core") {
    const auto& pieces = detail::member(j, "pieces", where);
    if (!pieces.is_array()) throw InputError(where + ".pieces: expected an array");
    std::vector<CorePiece> ps;
    AlgebraRef a = alg;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const std::string pw = where + ".pieces[" + std::to_string(k) + "]";
        const auto& iv = detail::member(pieces[k], "interval", pw);
        if (!iv.is_array() || iv.size() != 2) throw InputError(pw + ".interval: expected [a, b]");
        const double lo = detail::endpoint(iv[0], pw + ".interval[0]");
        const double hi = detail::endpoint(iv[1], pw + ".interval[1]");
        if (!std::isfinite(lo)) throw InputError(pw + ".interval[0]: left endpoint must be finite");
        Element e = element_from_json(detail::member(pieces[k], "element", pw), a, pw + ".element");
        a = e.algebra();
        ps.push_back({std::move(e), lo, hi});
    }
    if (!a) throw InputError(where + ": empty core element needs --algebra");
    try {
        return CoreElement(a, std::move(ps));
    } catch (const ValidationError& e) {
        throw InputError(where + ": " + e.what());
    }
}

inline Isomorphism isomorphism_from_json(const json& j, const AlgebraRef& alg, const std::string& where = "iso") {
    const auto& perm = detail::member(j, "permutation", where);
    const auto& us = detail::member(j, "unitaries", where);
    if (!perm.is_array() || !us.is_array()) throw InputError(where + ": permutation and unitaries must be arrays");
    std::vector<std::size_t> p;
    for (std::size_t k = 0; k < perm.size(); ++k) {
        if (!perm[k].is_number_integer() || perm[k].get<long long>() < 0)
            throw InputError(where + ".permutation[" + std::to_string(k) + "]: expected a nonnegative integer");
        p.push_back(perm[k].get<std::size_t>());
    }
    std::vector<Matrix> u;
    for (std::size_t k = 0; k < us.size(); ++k) u.push_back(detail::matrix(us[k], where + ".unitaries[" + std::to_string(k) + "]"));
    AlgebraRef source = alg ? alg : algebra_from_blocks(u);
    AlgebraRef target = j.contains("target") ? algebra_from_json(j["target"], where + ".target") : source;
    try {
        return Isomorphism(source, target, std::move(p), std::move(u));
    } catch (const ValidationError& e) {
        throw InputError(where + ": " + e.what());
    }
}

inline ordered_json matrix_to_json(const Matrix& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(row);
    }
    return rows;
}

inline ordered_json element_to_json(const Element& x) {
    ordered_json blocks = ordered_json::array();
    for (const auto& b : x.blocks()) blocks.push_back(matrix_to_json(b));
    return ordered_json{{"blocks", blocks}};
}

inline ordered_json algebra_to_json(const AlgebraDescriptor& a) {
    ordered_json blocks = ordered_json::array();
    for (std::size_t i = 0; i < a.block_count(); ++i) blocks.push_back({{"dim", a.dim(i)}, {"weight", a.weight(i)}});
    return ordered_json{{"blocks", blocks}};
}

/// 17 significant digits; integral values keep a trailing ".0"; non-finite values are
/// emitted as the strings "inf", "-inf", "nan".
inline std::string format_number(double v) {
    if (std::isnan(v)) return "\"nan\"";
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

inline void dump_to(const ordered_json& j, std::string& out) {
    switch (j.type()) {
    case ordered_json::value_t::number_float: out += format_number(j.get<double>()); break;
    case ordered_json::value_t::array: {
        out += '[';
        bool first = true;
        for (const auto& e : j) {
            if (!first) out += ',';
            first = false;
            dump_to(e, out);
        }
        out += ']';
        break;
    }
    case ordered_json::value_t::object: {
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ',';
            first = false;
            out += ordered_json(it.key()).dump();
            out += ':';
            dump_to(it.value(), out);
        }
        out += '}';
        break;
    }
    default: out += j.dump(); break;
    }
}

inline std::string dump(const ordered_json& j) {
    std::string out;
    dump_to(j, out);
    return out;
}

} // namespace ncorlicz::io
