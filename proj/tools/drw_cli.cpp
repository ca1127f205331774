#include "drw/selftest.hpp"
#include "drw/serialize.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace drw;
using drw::io::json;

namespace {

enum Exit { kOk = 0, kViolation = 1, kParse = 2, kPrecondition = 3 };

struct Options {
    std::string input;
    std::optional<long> p;
    std::optional<int> n, m, umax, rank;
    std::optional<long> dmax;
    std::string epsilon;
    std::uint64_t seed = 0;
    std::optional<long> cases;
    int max_iter = 16;
    bool timing = false;
    std::string kind;  // gen only
};

std::string read_input(const Options& o) {
    std::ostringstream ss;
    if (o.input.empty() || o.input == "-") {
        ss << std::cin.rdbuf();
    } else {
        std::ifstream f(o.input);
        if (!f) throw Error(ErrorKind::precondition, "cannot open " + o.input);
        ss << f.rdbuf();
    }
    return ss.str();
}

std::string digest(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream o;
    o << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
    return o.str();
}

mpq_class parse_epsilon(const std::string& s) {
    mpq_class e;
    if (e.set_str(s, 10) != 0) throw Error(ErrorKind::parse, "--epsilon: not a rational number");
    e.canonicalize();
    if (e <= 0 || e > 1) throw Error(ErrorKind::precondition, "--epsilon must lie in ]0, 1]");
    return e;
}

// d_inverse divides by k_{i0}: the result is only known to p^{m-u}
int effective_precision(const Context& ctx, const std::vector<Form>& dfrp_inputs) {
    int u = 0;
    for (const auto& f : dfrp_inputs)
        for (const auto& [k, c] : f.terms()) u = std::max(u, k.w.u());
    return std::max(0, ctx.m - u);
}

struct Input {
    json doc;
    Context ctx;
    std::string text;

    const json& payload(const char* key) const {
        if (!doc.contains(key)) throw Error(ErrorKind::parse, std::string("document has no \"") + key + "\" payload");
        return doc[key];
    }
    Form form() const { return io::form_from_json(payload("form"), ctx, "form"); }
    std::vector<Form> forms() const {
        std::vector<Form> r;
        if (doc.contains("form")) r.push_back(form());
        if (doc.contains("forms")) {
            const json& fs = doc["forms"];
            if (!fs.is_array()) throw Error(ErrorKind::parse, "forms: expected a list of forms");
            for (std::size_t i = 0; i < fs.size(); ++i) r.push_back(io::form_from_json(fs[i], ctx, "forms[" + std::to_string(i) + "]"));
        }
        return r;
    }
    bool has_named(const char* name) const {
        return (doc.contains("instance") && doc["instance"].contains(name)) || (std::string(name) == "N" && doc.contains("matrix"));
    }
    Matrix named(const char* name) const {
        if (doc.contains("instance") && doc["instance"].contains(name))
            return io::matrix_from_json(doc["instance"][name], ctx, std::string("instance.") + name);
        if (std::string(name) == "N" && doc.contains("matrix")) return io::matrix_from_json(doc["matrix"], ctx, "matrix");
        throw Error(ErrorKind::parse, std::string("document has no matrix \"") + name + "\"");
    }
};

Input load(const Options& o) {
    Input in;
    in.text = read_input(o);
    in.doc = io::parse_text(in.text);
    in.ctx = io::context_from_json(in.doc);
    return in;
}

json document(const Context& ctx) { return io::header_to_json(ctx); }

json form_doc(const Form& f) {
    json d = document(f.ctx());
    d["form"] = io::form_to_json(f);
    return d;
}

json matrix_doc(const Matrix& M) {
    json d = document(M.ctx());
    d["matrix"] = io::matrix_to_json(M);
    return d;
}

struct Report {
    json j;
    bool violated = false;

    Report(const std::string& command, const Input* in) {
        j = {{"v", io::kFormatVersion}, {"command", command}};
        if (in) {
            j["input_digest"] = digest(in->text);
            j["context"] = io::header_to_json(in->ctx);
            j["effective_precision"] = in->ctx.m;
        }
        j["outputs"] = json::object();
        j["properties"] = json::object();
    }
    void out(const std::string& k, json v) { j["outputs"][k] = std::move(v); }
    void property(const std::string& k, bool ok) {
        j["properties"][k] = ok;
        if (!ok) violated = true;
    }
};

int emit(Report& r, const Options& o, std::chrono::steady_clock::time_point t0) {
    if (o.timing) r.j["wall_clock_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    std::cout << io::dump(r.j);
    return r.violated ? kViolation : kOk;
}

Context gen_context(const Options& o) {
    return Context::make(o.p.value_or(3), o.n.value_or(2), o.m.value_or(3), o.umax, o.dmax);
}

json suite_to_json(const selftest::SuiteResult& s, bool timing) {
    json r = {{"name", s.name}, {"seed", s.seed}, {"cases", s.cases}, {"ok", s.ok()}, {"checks", s.checks}, {"failures", s.failures}};
    if (!s.notes.empty()) r["notes"] = s.notes;
    if (timing) r["seconds"] = s.seconds;
    json ces = json::array();
    for (const auto& ce : s.counterexamples) {
        json inputs = json::array();
        for (const auto& x : ce.inputs)
            inputs.push_back(std::holds_alternative<Form>(x) ? form_doc(std::get<Form>(x)) : matrix_doc(std::get<Matrix>(x)));
        ces.push_back({{"property", ce.property}, {"case_index", ce.case_index}, {"inputs", inputs}});
    }
    r["counterexamples"] = ces;
    return r;
}

int run(const std::string& cmd, const Options& o) {
    const auto t0 = std::chrono::steady_clock::now();

    if (cmd == "gen") {
        const Context ctx = gen_context(o);
        Rng rng(o.seed);
        const int r = o.rank.value_or(2);
        if (r < 1 || r > 8) throw Error(ErrorKind::precondition, "--rank must be in [1, 8]");
        json d = document(ctx);
        d["seed"] = o.seed;
        d["kind"] = o.kind;
        if (o.kind == "form") {
            d["form"] = io::form_to_json(random_truncated_form(ctx, rng));
        } else if (o.kind == "integrable") {
            d["matrix"] = io::matrix_to_json(random_integrable(ctx, r, rng));
        } else if (o.kind == "frobenius-structured") {
            auto inst = random_frobenius_structured(ctx, r, rng);
            d["instance"] = {{"N", io::matrix_to_json(inst.N)}, {"classical", io::matrix_to_json(inst.classical)}, {"gauge", io::matrix_to_json(inst.gauge)}};
        } else if (o.kind == "basechange") {
            Matrix N = random_integrable(ctx, r, rng);
            Matrix U = truncate(random_unipotent(ctx, r, rng) * random_frp_perturbation(ctx, r, rng, 1));
            d["instance"] = {{"N", io::matrix_to_json(N)}, {"U", io::matrix_to_json(U)}};
        } else if (o.kind == "idempotent") {
            auto inst = random_projector_instance(ctx, std::max(r, 2), rng);
            d["instance"] = {{"P", io::matrix_to_json(inst.P)}, {"A", io::matrix_to_json(inst.A)}};
        } else {
            throw Error(ErrorKind::precondition, "unknown gen kind '" + o.kind + "' (form, integrable, frobenius-structured, basechange, idempotent)");
        }
        std::cout << io::dump(d);
        return kOk;
    }

    if (cmd == "selftest") {
        long cases = 20;
        if (const char* env = std::getenv("DRW_SELFTEST_CASES")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end == env || *end != '\0' || v < 1) throw Error(ErrorKind::precondition, "DRW_SELFTEST_CASES must be a positive integer");
            cases = v;
        }
        if (o.cases) cases = *o.cases;
        if (cases < 1) throw Error(ErrorKind::precondition, "--cases must be positive");
        Report rep("selftest", nullptr);
        rep.j["seed"] = o.seed;
        rep.j["cases"] = cases;
        json suites = json::array();
        for (const auto& s : selftest::all_suites()) {
            auto res = s.run(o.seed, cases);
            suites.push_back(suite_to_json(res, o.timing));
            rep.property(s.name, res.ok());
        }
        rep.out("suites", suites);
        return emit(rep, o, t0);
    }

    if (cmd == "rng") {
        const std::string text = read_input(o);
        json doc = io::parse_text(text);
        if (!doc.is_object() || !doc.contains("rng")) throw Error(ErrorKind::parse, "rng: document needs an \"rng\" payload {mod, xs, ys}");
        const json& g = doc["rng"];
        if (!g.contains("mod") || !g["mod"].is_number_integer() || g["mod"].get<long>() < 2) throw Error(ErrorKind::parse, "rng.mod: integer >= 2");
        const long mod = g["mod"].get<long>();
        auto read = [&](const char* k) {
            if (!g.contains(k) || !g[k].is_array()) throw Error(ErrorKind::parse, std::string("rng.") + k + ": list of integers");
            std::vector<selftest::detail::ModRng> v;
            for (const auto& x : g[k]) {
                if (!x.is_number_integer()) throw Error(ErrorKind::parse, std::string("rng.") + k + ": list of integers");
                v.push_back({((x.get<long>() % mod) + mod) % mod, mod});
            }
            return v;
        };
        auto diff = rng_expansion_check(read("xs"), read("ys"));
        Report rep("rng", nullptr);
        rep.j["input_digest"] = digest(text);
        rep.out("difference", diff.v);
        rep.property("identity_holds", diff.v == 0);
        return emit(rep, o, t0);
    }

    Input in = load(o);
    const Context& ctx = in.ctx;
    Report rep(cmd, &in);

    if (cmd == "add" || cmd == "mul") {
        auto fs = in.forms();
        if (fs.size() != 2) throw Error(ErrorKind::precondition, cmd + ": needs exactly two forms");
        rep.out("form", io::form_to_json(cmd == "add" ? fs[0] + fs[1] : fs[0] * fs[1]));
    } else if (cmd == "d") {
        rep.out("form", io::form_to_json(d(in.form())));
    } else if (cmd == "F") {
        rep.out("form", io::form_to_json(F(in.form())));
    } else if (cmd == "V") {
        rep.out("form", io::form_to_json(V(in.form())));
    } else if (cmd == "integral") {
        rep.out("integral", is_integral(in.form()));
    } else if (cmd == "vp") {
        long v = vp_form(in.form());
        rep.out("vp", v == kInfinity ? json("inf") : json(v));
    } else if (cmd == "truncate") {
        rep.out("form", io::form_to_json(truncate(in.form())));
    } else if (cmd == "teich") {
        Poly f = io::poly_from_json(in.payload("poly"), ctx.n, "poly");
        rep.out("form", io::form_to_json(teichmuller(f, ctx)));
    } else if (cmd == "ghost") {
        Form a = in.form();
        json gs = json::array();
        for (int r = 0; r < ctx.m; ++r) gs.push_back(io::poly_to_json(ghost(a, r)));
        rep.out("ghosts", gs);
    } else if (cmd == "tf") {
        CharZeroForm w = io::cz_from_json(in.payload("cz"), ctx.n, "cz");
        FrobeniusLift L = io::lift_from_json(in.doc.value("lift", json()), ctx);
        rep.out("form", io::form_to_json(tF_form(w, L, ctx)));
    } else if (cmd == "decompose") {
        auto D = decompose(in.form());
        rep.out("int", io::form_to_json(D.int_part));
        rep.out("frp", io::form_to_json(D.frp));
        rep.out("dfrp", io::form_to_json(D.dfrp));
    } else if (cmd == "dinv") {
        Form a = in.form();
        rep.out("form", io::form_to_json(d_inverse(a)));
        rep.j["effective_precision"] = effective_precision(ctx, {a});
    } else if (cmd == "zeta") {
        mpq_class eps = parse_epsilon(o.epsilon.empty() ? "1/8" : o.epsilon);
        Form a = in.form();
        rep.out("epsilon", eps.get_str());
        rep.out("zeta", io::xrational_to_string(zeta(a, eps)));
        rep.out("zeta_check", io::xrational_to_string(zeta_check(a, eps)));
    } else if (cmd == "delta") {
        auto dlt = find_delta(in.forms());
        rep.out("delta", dlt ? json(dlt->get_str()) : json(nullptr));
    } else if (cmd == "curvature") {
        Matrix C = curvature(in.named("N"));
        rep.out("matrix", io::matrix_to_json(C));
        rep.out("integrable", C.is_zero());
    } else if (cmd == "basechange") {
        Matrix N = in.named("N");
        BaseChange B = invert(in.named("U"));
        Matrix N2 = base_change(N, B);
        rep.out("matrix", io::matrix_to_json(N2));
        rep.out("inverse", io::matrix_to_json(B.inverse));
        rep.property("curvature_covariance", curvature(N2) == truncate(B.inverse * curvature(N) * B.U));
    } else if (cmd == "evaluate") {
        rep.out("matrix", io::matrix_to_json(evaluate(in.named("N"), in.named("u"))));
    } else if (cmd == "lift") {
        Matrix A = in.named("A"), P = in.named("P");
        Matrix N = lift_connection(A, P);
        Matrix C = curvature(N);
        rep.out("matrix", io::matrix_to_json(N));
        rep.out("curvature", io::matrix_to_json(C));
        rep.property("curvature_is_dPPdP", C == truncate(d(P) * P * d(P)));
    } else if (cmd == "pullback") {
        rep.out("matrix", io::matrix_to_json(frobenius_pullback(in.named("N"))));
    } else if (cmd == "horizontal") {
        bool h = horizontal_check(in.named("E"), in.named("Fm"), in.named("G"));
        rep.out("horizontal", h);
        rep.property("horizontal", h);
    } else if (cmd == "step") {
        Matrix N = in.named("N");
        auto st = normalize_step(N);
        rep.out("U", io::matrix_to_json(st.U.U));
        rep.out("inverse", io::matrix_to_json(st.U.inverse));
        rep.out("matrix", io::matrix_to_json(st.N));
        rep.out("s_in", st.s_in == kInfinity ? json("inf") : json(st.s_in));
        rep.out("s_out", st.s_out == kInfinity ? json("inf") : json(st.s_out));
        if (st.s_in != kInfinity) rep.property("valuation_gain", st.s_out >= st.s_in + 1);
        rep.j["effective_precision"] = effective_precision(ctx, dfrp_part(truncate(N)).entries());
    } else if (cmd == "normalize") {
        Matrix N = in.named("N");
        if (o.max_iter < 0) throw Error(ErrorKind::precondition, "--max-iter must be >= 0");
        auto res = normalize(N, o.max_iter);
        rep.out("matrix", io::matrix_to_json(res.N));
        rep.out("U", io::matrix_to_json(res.U.U));
        rep.out("inverse", io::matrix_to_json(res.U.inverse));
        rep.j["iterations"] = res.iterations;
        Matrix fr = frac_part(res.N);
        rep.out("frac_zero", fr.is_zero());
        rep.property("frac_zero", fr.is_zero());
        rep.property("within_m_iterations", res.iterations <= ctx.m);
        rep.property("is_base_change", base_change(N, res.U) == res.N);
        rep.property("integrable", is_integrable(res.N));
        if (in.has_named("classical") && in.has_named("gauge"))
            rep.property("horizontal_to_classical", horizontal_check(res.N, in.named("classical"), truncate(in.named("gauge") * res.U.U)));
        int ep = ctx.m;
        for (const auto& Nl : res.trace) ep = std::min(ep, effective_precision(ctx, dfrp_part(Nl).entries()));
        rep.j["effective_precision"] = ep;
    } else if (cmd == "occheck") {
        Matrix N = in.named("N");
        mpq_class eps;
        if (o.epsilon.empty()) {
            auto dlt = find_delta(N.entries());
            if (!dlt) throw Error(ErrorKind::precondition, "occheck: no grid epsilon fits; pass --epsilon");
            eps = *dlt;
        } else {
            eps = parse_epsilon(o.epsilon);
        }
        rep.out("epsilon", eps.get_str());
        bool oc = overconvergence_condition(N, eps);
        rep.out("overconvergent", oc);
        rep.property("overconvergent", oc);
    } else {
        throw Error(ErrorKind::precondition, "unknown command " + cmd);
    }
    return emit(rep, o, t0);
}

const char* kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::context_mismatch: return "context_mismatch";
        case ErrorKind::non_integral: return "non_integral";
        case ErrorKind::precondition: return "precondition";
        case ErrorKind::overflow: return "overflow";
        case ErrorKind::parse: return "parse";
        case ErrorKind::internal: return "internal";
    }
    return "internal";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"drw: computations in the overconvergent de Rham-Witt model"};
    app.require_subcommand(1);
    Options o;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"add", "sum of two forms (\"forms\")"},
        {"mul", "product of two forms (\"forms\")"},
        {"d", "differential"},
        {"F", "Frobenius"},
        {"V", "Verschiebung"},
        {"integral", "integrality test"},
        {"vp", "p-adic valuation of an integral form"},
        {"truncate", "reduce modulo Fil^m"},
        {"teich", "Teichmuller lift of a polynomial (\"poly\")"},
        {"ghost", "ghost components r < m of a degree-0 form"},
        {"tf", "t_F of a classical form (\"cz\", optional \"lift\")"},
        {"decompose", "int + frp + d(frp) splitting"},
        {"dinv", "inverse of d on d(frp)"},
        {"zeta", "zeta and zeta_check at --epsilon"},
        {"delta", "largest grid epsilon for the samples"},
        {"curvature", "N^2 + dN"},
        {"basechange", "U^-1 N U + U^-1 dU (instance N, U)"},
        {"evaluate", "N u + du (instance N, u)"},
        {"lift", "connection lifted along a projector (instance A, P)"},
        {"pullback", "Frobenius pullback p F(N)"},
        {"horizontal", "horizontality of G (instance E, Fm, G)"},
        {"step", "one normalization step"},
        {"normalize", "normalize to integral weights"},
        {"occheck", "overconvergence condition"},
        {"rng", "rng expansion identity over Z/mod (\"rng\": {mod, xs, ys})"},
        {"gen", "seeded instance generator"},
        {"selftest", "run every invariant suite"},
    };
    std::string chosen;
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        if (name == "gen")
            sub->add_option("kind", o.kind, "form | integrable | frobenius-structured | basechange | idempotent")->required();
        else if (name != "selftest")
            sub->add_option("input", o.input, "input document (default: stdin)");
        sub->add_option("--p", o.p, "prime (gen)");
        sub->add_option("--n", o.n, "number of variables (gen)");
        sub->add_option("--m", o.m, "truncation level (gen)");
        sub->add_option("--umax", o.umax, "cap on weight denominators (gen)");
        sub->add_option("--dmax", o.dmax, "cap on total weight (gen)");
        sub->add_option("--epsilon", o.epsilon, "epsilon as a rational, e.g. 1/8");
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_option("--cases", o.cases, "cases per suite (selftest)");
        sub->add_option("--max-iter", o.max_iter, "iteration budget (normalize)");
        sub->add_option("--rank", o.rank, "matrix rank (gen)");
        sub->add_flag("--timing", o.timing, "include wall-clock times in the report");
        sub->callback([&chosen, name = name] { chosen = name; });
    }

    for (int i = 1; i < argc && chosen.empty(); ++i)
        for (const auto& c : commands)
            if (c.first == argv[i]) chosen = c.first;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        json err = {{"v", io::kFormatVersion}, {"command", chosen}, {"error", {{"kind", "parse"}, {"message", std::string("usage: ") + e.what()}}}};
        std::cout << io::dump(err);
        return kParse;
    }

    try {
        return run(chosen, o);
    } catch (const Error& e) {
        json err = {{"v", io::kFormatVersion}, {"command", chosen}, {"error", {{"kind", kind_name(e.kind())}, {"message", e.what()}}}};
        std::cout << io::dump(err);
        return e.kind() == ErrorKind::parse ? kParse : kPrecondition;
    } catch (const std::exception& e) {
        json err = {{"v", io::kFormatVersion}, {"command", chosen}, {"error", {{"kind", "internal"}, {"message", e.what()}}}};
        std::cout << io::dump(err);
        return kPrecondition;
    }
}
