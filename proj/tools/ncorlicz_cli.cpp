// ncorlicz: command-line front end.
//
//   ncorlicz norm      --phi power2 --element diag(3,4)
//   ncorlicz core-norm --phi cosh1 --core core.json
//   ncorlicz rearr     --element x.json --algebra a.json [--csv steps.csv]
//   ncorlicz conjugate --phi cosh1 [--s-min 1e-3 --s-max 1e3 --nodes 4]
//   ncorlicz cocycle   --functional phi.json --functional omega.json --t 0.5
//   ncorlicz gns       --functional omega.json
//   ncorlicz suite     --seed 0 [--samples 100]
//
// Exit codes: 0 pass, 1 property failure, 2 input error, 3 numeric failure.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncorlicz/ncorlicz.hpp"

using namespace ncorlicz;
using io::ordered_json;

namespace {

struct Options {
    std::string algebra, element, phi, core, iso, csv, filter;
    std::vector<std::string> functionals;
    double tol = 1e-12;
    std::uint64_t seed = 0;
    int samples = 100;
    double t = 0.0;
    double s_min = 1e-3, s_max = 1e3;
    int nodes = 4;
    bool timing = false;
};

// Inputs are file paths, inline JSON, or a shorthand understood by the caller.
struct Loaded {
    io::json value;
    std::string text;
};

Loaded load(const std::string& arg, const char* what) {
    if (!arg.empty() && arg.front() == '{') return {io::parse(arg, what), arg};
    const std::string text = io::read_file(arg);
    return {io::parse(text, arg), text};
}

class Runner {
public:
    explicit Runner(const Options& o) : o_(o) {}

    AlgebraRef algebra() {
        if (o_.algebra.empty()) return nullptr;
        const auto l = load(o_.algebra, "--algebra");
        digest_ += l.text;
        return io::algebra_from_json(l.value);
    }

    Element element(const AlgebraRef& alg) {
        require(o_.element, "--element");
        digest_ += o_.element;
        if (o_.element.rfind("diag(", 0) == 0) {
            auto blocks = io::blocks_from_diag(o_.element);
            const AlgebraRef a = alg ? alg : io::algebra_from_blocks(blocks);
            return Element(a, std::move(blocks));
        }
        const auto l = load(o_.element, "--element");
        digest_ += l.text;
        return io::element_from_json(l.value, alg);
    }

    std::vector<Functional> functionals(const AlgebraRef& alg) {
        std::vector<Functional> out;
        AlgebraRef a = alg;
        for (const auto& f : o_.functionals) {
            digest_ += f;
            if (f.rfind("diag(", 0) == 0) {
                auto blocks = io::blocks_from_diag(f);
                if (!a) a = io::algebra_from_blocks(blocks);
                out.emplace_back(a, std::move(blocks));
            } else {
                const auto l = load(f, "--functional");
                digest_ += l.text;
                out.push_back(io::functional_from_json(l.value, a));
                a = out.back().algebra();
            }
        }
        return out;
    }

    OrliczFunction phi() {
        require(o_.phi, "--phi");
        digest_ += o_.phi;
        if (o_.phi.front() != '{' && o_.phi.find(".json") == std::string::npos) return io::phi_from_name(o_.phi);
        const auto l = load(o_.phi, "--phi");
        digest_ += l.text;
        return io::phi_from_json(l.value);
    }

    CoreElement core(const AlgebraRef& alg) {
        require(o_.core, "--core");
        const auto l = load(o_.core, "--core");
        digest_ += l.text;
        return io::core_from_json(l.value, alg);
    }

    Isomorphism iso(const AlgebraRef& alg) {
        require(o_.iso, "--iso");
        const auto l = load(o_.iso, "--iso");
        digest_ += l.text;
        return io::isomorphism_from_json(l.value, alg);
    }

    std::string digest() const { return io::digest(digest_); }

    static void require(const std::string& v, const char* flag) {
        if (v.empty()) throw InputError(std::string("missing required option ") + flag);
    }

private:
    const Options& o_;
    std::string digest_;
};

ordered_json norm_fields(const NormResult& r) {
    return ordered_json{{"norm", r.norm}, {"iterations", r.iterations}, {"modularValueAtNorm", r.modular_at_norm}};
}

ordered_json steps_json(const RearrangementFunction& mu) {
    ordered_json steps = ordered_json::array();
    for (const auto& s : mu.steps()) steps.push_back({{"value", s.value}, {"length", s.length}});
    return steps;
}

void write_csv(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << content;
}

struct Outcome {
    ordered_json report;
    int code = 0;
};

Outcome cmd_norm(const Options& o) {
    Runner r(o);
    const auto alg = r.algebra();
    const Element x = r.element(alg);
    const OrliczFunction phi = r.phi();
    ordered_json rep = norm_fields(luxemburg_report(phi, x, o.tol));
    const auto m = membership(phi, x);
    rep["command"] = "norm";
    rep["phi"] = phi.name();
    rep["membership"] = {{"orliczClass", m.orlicz_class}, {"kunzeSpace", m.kunze_space}, {"mtkrSpace", m.mtkr_space}};
    rep["eSpace"] = e_space_gauge(phi, x, o.tol).note;
    rep["inputsDigest"] = r.digest();
    return {rep, 0};
}

Outcome cmd_core_norm(const Options& o) {
    Runner r(o);
    const auto alg = r.algebra();
    const OrliczFunction phi = r.phi();
    const CoreElement x = o.core.empty() ? embed(r.element(alg)) : r.core(alg);
    ordered_json rep = norm_fields(core_luxemburg_report(phi, x, o.tol));
    rep["command"] = "core-norm";
    rep["phi"] = phi.name();
    rep["pieces"] = x.pieces().size();
    rep["membership"] = core_membership(phi, x);
    rep["model"] = "restricted step class";
    rep["inputsDigest"] = r.digest();
    return {rep, 0};
}

Outcome cmd_rearr(const Options& o) {
    Runner r(o);
    const auto alg = r.algebra();
    RearrangementFunction mu;
    if (!o.core.empty()) mu = core_rearrangement(r.core(alg));
    else mu = rearrangement(r.element(alg));
    ordered_json rep;
    rep["command"] = "rearr";
    rep["steps"] = steps_json(mu);
    rep["totalMass"] = mu.total_mass();
    if (!o.csv.empty()) {
        write_csv(o.csv, rearrangement_csv(mu));
        rep["csv"] = o.csv;
    }
    rep["inputsDigest"] = r.digest();
    return {rep, 0};
}

Outcome cmd_conjugate(const Options& o) {
    Runner r(o);
    const OrliczFunction phi = r.phi();
    if (!(o.s_min > 0.0) || !(o.s_max > o.s_min) || o.nodes < 1)
        throw InputError("conjugate: need 0 < --s-min < --s-max and --nodes >= 1");
    const OrliczFunction conj = young_conjugate(phi);
    ordered_json table = ordered_json::array();
    std::string csv = "s,value,closed_form,error_bound\n";
    const double l0 = std::log10(o.s_min), l1 = std::log10(o.s_max);
    const int n = std::max(1, static_cast<int>(std::ceil((l1 - l0) * o.nodes)));
    for (int j = 0; j <= n; ++j) {
        const double s = std::pow(10.0, l0 + (l1 - l0) * j / n);
        const auto est = numerical_conjugate(phi, s);
        table.push_back({{"s", s}, {"value", est.value}, {"closedForm", conj(s)}, {"errorBound", est.error_bound}});
        auto num = [](double v) {
            std::string f = io::format_number(v);
            if (f.front() == '"') f = f.substr(1, f.size() - 2);
            return f;
        };
        csv += num(s) + "," + num(est.value) + "," + num(conj(s)) + "," + num(est.error_bound) + "\n";
    }
    ordered_json rep;
    rep["command"] = "conjugate";
    rep["phi"] = phi.name();
    rep["conjugate"] = conj.name();
    rep["table"] = table;
    if (!o.csv.empty()) {
        write_csv(o.csv, csv);
        rep["csv"] = o.csv;
    }
    rep["inputsDigest"] = r.digest();
    return {rep, 0};
}

Outcome cmd_cocycle(const Options& o) {
    Runner r(o);
    const auto fs = r.functionals(r.algebra());
    if (fs.size() != 2) throw InputError("cocycle: pass --functional twice (phi, then omega)");
    const Element u = connes_cocycle(fs[0], fs[1], o.t);
    const Element p = support_projection(fs[0]);
    ordered_json rep;
    rep["command"] = "cocycle";
    rep["t"] = o.t;
    rep["matrix"] = io::element_to_json(u);
    rep["partialIsometryDeviation"] = (u.adjoint() * u - p).frobenius();
    rep["inputsDigest"] = r.digest();
    return {rep, 0};
}

Outcome cmd_gns(const Options& o) {
    Runner r(o);
    const auto fs = r.functionals(r.algebra());
    if (fs.size() != 1) throw InputError("gns: pass exactly one --functional");
    const auto g = gns(fs[0]);
    std::size_t expect = 0;
    for (std::size_t i = 0; i < g.algebra->block_count(); ++i)
        expect += static_cast<std::size_t>(g.algebra->dim(i)) * support_projection(fs[0]).block(i).trace().real() + 0.5;
    const Vector omega = g.cyclic_vector();
    double residual = 0.0;
    for (const auto& x : Element::matrix_units(g.algebra))
        residual = std::max(residual, std::abs(omega.dot(g.represent(x) * omega) - fs[0](x)));
    ordered_json rep;
    rep["command"] = "gns";
    rep["dimension"] = g.dimension;
    rep["expectedDimension"] = expect;
    rep["stateResidual"] = residual;
    rep["inputsDigest"] = r.digest();
    return {rep, g.dimension == expect && residual <= 1e-10 ? 0 : 1};
}

ordered_json case_json(const CaseResult& c) {
    ordered_json j{{"id", c.id}, {"pass", c.pass}, {"samples", c.samples}, {"maxDeviation", c.max_deviation},
                   {"tolerance", c.tolerance}};
    if (!c.witness.empty()) j["witness"] = c.witness;
    return j;
}

// Extra cases bound to the inputs passed on the command line.
std::vector<CaseResult> fixture_cases(const Options& o, Runner& r) {
    std::vector<CaseResult> out;
    const auto alg = r.algebra();
    if (!o.element.empty()) {
        const Element x = r.element(alg);
        CaseResult c{"fixture.embedding_isometry", true, 0.0, 1e-10, 0, ""};
        for (const auto& phi : registry()) {
            const double d = relative_gap(core_luxemburg_norm(phi, embed(x), o.tol), luxemburg_norm(phi, x, o.tol));
            c.max_deviation = std::max(c.max_deviation, d);
            ++c.samples;
        }
        c.pass = c.max_deviation <= c.tolerance;
        out.push_back(c);
    }
    if (!o.functionals.empty()) {
        const auto fs = r.functionals(alg);
        CaseResult c{"fixture.cocycle_identity", true, 0.0, 1e-10, 0, ""};
        for (const auto& f : fs)
            for (const auto& w : fs) {
                if (!f.is_faithful() || !w.is_faithful()) continue;
                if (&f == &w) {
                    const Element u = connes_cocycle(f, w, 0.0);
                    c.max_deviation = std::max(c.max_deviation, (u - Element::identity(f.algebra())).frobenius());
                }
                const Element u = connes_cocycle(f, w, 0.7);
                c.max_deviation = std::max(c.max_deviation, (u.adjoint() * u - Element::identity(f.algebra())).frobenius());
                ++c.samples;
            }
        c.pass = c.max_deviation <= c.tolerance;
        out.push_back(c);
    }
    if (!o.iso.empty()) {
        const Isomorphism s = r.iso(alg);
        CaseResult c{"fixture.isometry", true, 0.0, kIsometryTol, 0, ""};
        if (!s.trace_preserving()) {
            c.pass = false;
            c.witness = "isomorphism does not preserve the trace";
        } else {
            SplitMix64 rng(detail::case_seed(o.seed, c.id));
            for (const auto& phi : registry()) {
                const auto rep = verify_isometry(s, phi, std::max(1, o.samples / 25), rng);
                c.max_deviation = std::max({c.max_deviation, rep.max_base_deviation, rep.max_core_deviation});
                if (!rep.rearrangements_equal && c.witness.empty()) c.witness = phi.name() + ": " + rep.witness;
                c.samples += rep.samples;
            }
            c.pass = c.max_deviation <= c.tolerance && c.witness.empty();
        }
        out.push_back(c);
    }
    return out;
}

Outcome cmd_suite(const Options& o) {
    if (o.samples < 1) throw InputError("suite: --samples must be positive");
    Runner r(o);
    SuiteReport s = run_suite(o.seed, o.samples, o.filter);
    for (auto& c : fixture_cases(o, r)) {
        s.pass = s.pass && c.pass;
        s.cases.push_back(std::move(c));
    }
    std::sort(s.cases.begin(), s.cases.end(), [](const CaseResult& a, const CaseResult& b) { return a.id < b.id; });
    ordered_json cases = ordered_json::array();
    int failed = 0;
    for (const auto& c : s.cases) {
        cases.push_back(case_json(c));
        if (!c.pass) ++failed;
    }
    ordered_json rep;
    rep["command"] = "suite";
    rep["seed"] = o.seed;
    rep["samples"] = o.samples;
    rep["pass"] = s.pass;
    rep["failed"] = failed;
    rep["cases"] = cases;
    rep["inputsDigest"] = r.digest();
    return {rep, s.pass ? 0 : 1};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Orlicz norms, modular data and the core model for finite block algebras"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--algebra", o.algebra, "algebra JSON file or inline JSON");
    app.add_option("--element", o.element, "element JSON file, inline JSON, or diag(a,b;c)");
    app.add_option("--functional", o.functionals, "functional density (repeatable)");
    app.add_option("--phi", o.phi, "Orlicz function: power2, power1.5, scaled-power2, linf, cosh1, exp1, or JSON");
    app.add_option("--core", o.core, "core step element JSON");
    app.add_option("--iso", o.iso, "isomorphism JSON");
    app.add_option("--tol", o.tol, "relative bisection tolerance")->capture_default_str();
    app.add_option("--seed", o.seed, "generator seed")->capture_default_str();
    app.add_option("--csv", o.csv, "also write CSV to this path");
    app.add_option("--samples", o.samples, "samples per suite case")->capture_default_str();
    app.add_option("--t", o.t, "cocycle time")->capture_default_str();
    app.add_flag("--timing", o.timing, "append wall time to the report");

    auto* norm = app.add_subcommand("norm", "Luxemburg norm of an element");
    auto* core_norm = app.add_subcommand("core-norm", "Luxemburg norm on the core model");
    auto* rearr = app.add_subcommand("rearr", "rearrangement steps");
    auto* conj = app.add_subcommand("conjugate", "tabulated Young conjugate");
    conj->add_option("--s-min", o.s_min, "smallest slope")->capture_default_str();
    conj->add_option("--s-max", o.s_max, "largest slope")->capture_default_str();
    conj->add_option("--nodes", o.nodes, "slopes per decade")->capture_default_str();
    auto* cocycle = app.add_subcommand("cocycle", "Connes cocycle [D phi : D omega]_t");
    auto* gnscmd = app.add_subcommand("gns", "GNS representation data");
    auto* suite = app.add_subcommand("suite", "invariant battery");
    suite->add_option("--filter", o.filter, "run only cases whose id starts with this prefix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        Outcome out;
        if (*norm) out = cmd_norm(o);
        else if (*core_norm) out = cmd_core_norm(o);
        else if (*rearr) out = cmd_rearr(o);
        else if (*conj) out = cmd_conjugate(o);
        else if (*cocycle) out = cmd_cocycle(o);
        else if (*gnscmd) out = cmd_gns(o);
        else if (*suite) out = cmd_suite(o);
        if (o.timing)
            out.report["wallTimeSeconds"] =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << io::dump(out.report) << '\n';
        return out.code;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
