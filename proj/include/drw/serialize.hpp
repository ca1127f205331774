#pragma once

// JSON documents:
//   {"v":1,"p":3,"n":1,"m":3,"umax":8,"dmax":..., <payload>}
// a form is a list of terms {"c":[num,pexp(,den)],"k":[[j,u],...],"I":[1-based indices]},
// c = num / (den * p^pexp); a matrix is a row-major list of rows of forms.

#include "drw/connections.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace drw::io {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

// integers as JSON numbers while they fit in 64 bits, decimal strings beyond
inline json int_to_json(const mpz_class& z) {
    if (z.fits_slong_p()) return json(z.get_si());
    return json(z.get_str());
}

inline mpz_class int_from_json(const json& j, const std::string& where) {
    if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
    if (j.is_string()) {
        mpz_class z;
        if (z.set_str(j.get<std::string>(), 10) != 0) throw Error(ErrorKind::parse, where + ": not a decimal integer");
        return z;
    }
    throw Error(ErrorKind::parse, where + ": expected an integer");
}

inline json rational_to_json(const mpq_class& q) {
    if (q.get_den() == 1) return int_to_json(q.get_num());
    return json(q.get_str());
}

inline std::string xrational_to_string(const XRational& x) { return x.inf ? "inf" : x.v.get_str(); }

inline json coeff_to_json(const mpq_class& c, long p) {
    long v = vp(c, p);
    long pexp = v < 0 ? -v : 0;
    mpz_class num = c.get_num();
    mpz_class den = c.get_den();
    if (pexp > 0) den /= zpow(p, pexp);
    json r = json::array({int_to_json(num), pexp});
    if (den != 1) r.push_back(int_to_json(den));
    return r;
}

inline mpq_class coeff_from_json(const json& j, long p, const std::string& where) {
    if (!j.is_array() || j.size() < 2 || j.size() > 3) throw Error(ErrorKind::parse, where + ": coefficient must be [num, pexp] or [num, pexp, den]");
    mpz_class num = int_from_json(j[0], where + "[0]");
    if (!j[1].is_number_integer() || j[1].get<long long>() < 0) throw Error(ErrorKind::parse, where + "[1]: pexp must be a nonnegative integer");
    long pexp = static_cast<long>(j[1].get<long long>());
    mpz_class den = 1;
    if (j.size() == 3) {
        den = int_from_json(j[2], where + "[2]");
        if (den <= 0 || vp(den, p) != 0) throw Error(ErrorKind::parse, where + "[2]: den must be a positive integer prime to p");
    }
    if (pexp > 0 && vp(num, p) > 0) throw Error(ErrorKind::parse, where + ": numerator divisible by p with pexp > 0 (non-canonical)");
    mpq_class c(num, den * zpow(p, pexp));
    c.canonicalize();
    return c;
}

inline json form_to_json(const Form& f) {
    json terms = json::array();
    const long p = f.ctx().p;
    for (const auto& [k, c] : f.terms()) {
        json ks = json::array();
        for (const auto& co : k.w.coords()) ks.push_back(json::array({co.j, co.u}));
        json I = json::array();
        for (int i : dlog_indices(k.I)) I.push_back(i + 1);
        terms.push_back({{"c", coeff_to_json(c, p)}, {"k", ks}, {"I", I}});
    }
    return terms;
}

inline Form form_from_json(const json& j, const Context& ctx, const std::string& where) {
    if (!j.is_array()) throw Error(ErrorKind::parse, where + ": a form is a list of terms");
    Form f(ctx);
    for (std::size_t t = 0; t < j.size(); ++t) {
        const json& term = j[t];
        const std::string at = where + "[" + std::to_string(t) + "]";
        if (!term.is_object() || !term.contains("c") || !term.contains("k")) throw Error(ErrorKind::parse, at + ": term needs \"c\" and \"k\"");
        mpq_class c = coeff_from_json(term["c"], ctx.p, at + ".c");
        const json& ks = term["k"];
        if (!ks.is_array() || static_cast<int>(ks.size()) != ctx.n) throw Error(ErrorKind::parse, at + ".k: need n = " + std::to_string(ctx.n) + " pairs");
        std::vector<Coord> cs;
        for (const auto& pr : ks) {
            if (!pr.is_array() || pr.size() != 2 || !pr[0].is_number_integer() || !pr[1].is_number_integer())
                throw Error(ErrorKind::parse, at + ".k: each entry is [j, u]");
            cs.push_back({pr[0].get<std::int64_t>(), pr[1].get<int>()});
        }
        Weight w;
        try {
            w = Weight::from_pairs(cs, ctx.p);
        } catch (const Error& e) {
            throw Error(ErrorKind::parse, at + ".k: " + e.what());
        }
        DlogSet I = 0;
        if (term.contains("I")) {
            const json& Ij = term["I"];
            if (!Ij.is_array()) throw Error(ErrorKind::parse, at + ".I: expected a list");
            int last = 0;
            for (const auto& x : Ij) {
                if (!x.is_number_integer()) throw Error(ErrorKind::parse, at + ".I: indices are integers");
                int i = x.get<int>();
                if (i < 1 || i > ctx.n) throw Error(ErrorKind::parse, at + ".I: index out of range");
                if (i <= last) throw Error(ErrorKind::parse, at + ".I: indices must be strictly increasing");
                last = i;
                I |= 1u << (i - 1);
            }
        }
        try {
            f.add_term({w, I}, c);
        } catch (const Error& e) {
            throw Error(ErrorKind::parse, at + ": " + e.what());
        }
    }
    return f;
}

inline json matrix_to_json(const Matrix& M) {
    json rows = json::array();
    for (int i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < M.cols(); ++j) row.push_back(form_to_json(M.at(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline Matrix matrix_from_json(const json& j, const Context& ctx, const std::string& where) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw Error(ErrorKind::parse, where + ": a matrix is a nonempty list of rows");
    const int r = static_cast<int>(j.size()), c = static_cast<int>(j[0].size());
    Matrix M(ctx, r, c);
    for (int i = 0; i < r; ++i) {
        if (!j[i].is_array() || static_cast<int>(j[i].size()) != c) throw Error(ErrorKind::parse, where + ": ragged rows");
        for (int k = 0; k < c; ++k) M.at(i, k) = form_from_json(j[i][k], ctx, where + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
    return M;
}

// polynomial: list of {"c": int, "e": [exponents]}
inline json poly_to_json(const Poly& g) {
    json r = json::array();
    for (const auto& [e, c] : g) r.push_back({{"c", int_to_json(c)}, {"e", e}});
    return r;
}

inline Poly poly_from_json(const json& j, int n, const std::string& where) {
    if (!j.is_array()) throw Error(ErrorKind::parse, where + ": a polynomial is a list of {\"c\", \"e\"}");
    Poly g;
    for (std::size_t t = 0; t < j.size(); ++t) {
        const std::string at = where + "[" + std::to_string(t) + "]";
        const json& term = j[t];
        if (!term.is_object() || !term.contains("c") || !term.contains("e")) throw Error(ErrorKind::parse, at + ": needs \"c\" and \"e\"");
        const json& e = term["e"];
        if (!e.is_array() || static_cast<int>(e.size()) != n) throw Error(ErrorKind::parse, at + ".e: need n exponents");
        Exps ex;
        for (const auto& x : e) {
            if (!x.is_number_integer() || x.get<long>() < 0) throw Error(ErrorKind::parse, at + ".e: exponents are nonnegative integers");
            ex.push_back(x.get<long>());
        }
        poly_add_term(g, ex, int_from_json(term["c"], at + ".c"));
    }
    return g;
}

// classical form: list of {"c": int, "e": [exponents], "I": [1-based dx indices]}
inline json cz_to_json(const CharZeroForm& w) {
    json r = json::array();
    for (const auto& [k, c] : w) {
        json I = json::array();
        for (int i : dlog_indices(k.second)) I.push_back(i + 1);
        r.push_back({{"c", int_to_json(c)}, {"e", k.first}, {"I", I}});
    }
    return r;
}

inline CharZeroForm cz_from_json(const json& j, int n, const std::string& where) {
    if (!j.is_array()) throw Error(ErrorKind::parse, where + ": a classical form is a list of terms");
    CharZeroForm w;
    for (std::size_t t = 0; t < j.size(); ++t) {
        const std::string at = where + "[" + std::to_string(t) + "]";
        const json& term = j[t];
        Poly single = poly_from_json(json::array({{{"c", term.value("c", json(0))}, {"e", term.value("e", json::array())}}}), n, at);
        DlogSet I = 0;
        int last = 0;
        for (const auto& x : term.value("I", json::array())) {
            if (!x.is_number_integer()) throw Error(ErrorKind::parse, at + ".I: indices are integers");
            int i = x.get<int>();
            if (i < 1 || i > n || i <= last) throw Error(ErrorKind::parse, at + ".I: indices must be increasing and in range");
            last = i;
            I |= 1u << (i - 1);
        }
        for (const auto& [e, c] : single) cz_add_term(w, e, I, c);
    }
    return w;
}

inline FrobeniusLift lift_from_json(const json& j, const Context& ctx) {
    if (j.is_null() || j == "canonical") return FrobeniusLift::canonical(ctx.n, ctx.p);
    if (j == "linear") return FrobeniusLift::linear_perturbation(ctx.n, ctx.p);
    if (!j.is_array() || static_cast<int>(j.size()) != ctx.n) throw Error(ErrorKind::parse, "lift: \"canonical\", \"linear\" or a list of n polynomials");
    FrobeniusLift L;
    for (std::size_t i = 0; i < j.size(); ++i) L.F.push_back(poly_from_json(j[i], ctx.n, "lift[" + std::to_string(i) + "]"));
    return L;
}

inline json header_to_json(const Context& ctx) {
    json h = {{"v", kFormatVersion}, {"p", ctx.p}, {"n", ctx.n}, {"m", ctx.m}, {"umax", ctx.umax}};
    if (ctx.dmax) h["dmax"] = *ctx.dmax;
    return h;
}

inline Context context_from_json(const json& doc) {
    if (!doc.is_object()) throw Error(ErrorKind::parse, "document must be a JSON object");
    if (!doc.contains("v") || doc["v"] != kFormatVersion) throw Error(ErrorKind::parse, "missing or unsupported format version \"v\"");
    for (const char* k : {"p", "n", "m"})
        if (!doc.contains(k) || !doc[k].is_number_integer()) throw Error(ErrorKind::parse, std::string("header field \"") + k + "\" must be an integer");
    std::optional<int> umax;
    std::optional<long> dmax;
    if (doc.contains("umax")) {
        if (!doc["umax"].is_number_integer()) throw Error(ErrorKind::parse, "umax must be an integer");
        umax = doc["umax"].get<int>();
    }
    if (doc.contains("dmax")) {
        if (!doc["dmax"].is_number_integer()) throw Error(ErrorKind::parse, "dmax must be an integer");
        dmax = doc["dmax"].get<long>();
    }
    try {
        return Context::make(doc["p"].get<long>(), doc["n"].get<int>(), doc["m"].get<int>(), umax, dmax);
    } catch (const Error& e) {
        throw Error(ErrorKind::parse, std::string("header: ") + e.what());
    }
}

// position-annotated syntax errors
inline json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::parse, "syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

inline std::string dump(const json& j) { return j.dump() + "\n"; }

}  // namespace drw::io
