#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "pdz/analysis.hpp"
#include "pdz/calculus.hpp"
#include "pdz/config.hpp"
#include "pdz/errors.hpp"
#include "pdz/io.hpp"
#include "pdz/quantize.hpp"
#include "pdz/solver.hpp"

using namespace pdz;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumeric = 3, kElliptic = 4 };

struct Options {
    std::string config;
    int box = 0;
    int dim = 0;
    std::string out;
    std::string report;
    std::string matrix;
    std::int64_t seed = -1;
    double tol = -1;
    bool hs = false, trace = false, schatten = false, decay = false, lp = false, mikhlin = false,
         compact = false, elliptic = false;
};

// Typed access to optional config fields.
struct Params {
    const JobConfig& cfg;

    bool has(const char* key) const { return cfg.params.contains(key); }

    double number(const char* key, double fallback) const
    {
        if (!has(key)) return fallback;
        const json& v = cfg.params[key];
        if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
        return v.get<double>();
    }

    int integer(const char* key, int fallback) const
    {
        if (!has(key)) return fallback;
        const json& v = cfg.params[key];
        if (!v.is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
        return v.get<int>();
    }

    std::string text(const char* key, const std::string& fallback) const
    {
        if (!has(key)) return fallback;
        const json& v = cfg.params[key];
        if (!v.is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const char* key, std::vector<double> fallback) const
    {
        if (!has(key)) return fallback;
        const json& v = cfg.params[key];
        if (v.is_number()) return {v.get<double>()};
        if (!v.is_array()) throw ConfigError(std::string("'") + key + "' must be a number or a list of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) throw ConfigError(std::string("'") + key + "' must contain numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    ExpansionOrder order(const char* key, int fallback) const
    {
        const int v = integer(key, fallback);
        if (v < 1 || v > ExpansionOrder::kMax)
            throw ConfigError(std::string("'") + key + "' must be in 1.." + std::to_string(ExpansionOrder::kMax));
        return ExpansionOrder(v);
    }

    std::vector<int> integers(const char* key, std::vector<int> fallback) const
    {
        std::vector<double> d(fallback.begin(), fallback.end());
        std::vector<int> out;
        for (double v : numbers(key, d)) {
            if (v != std::floor(v)) throw ConfigError(std::string("'") + key + "' must contain integers");
            out.push_back(int(v));
        }
        return out;
    }
};

struct Job {
    Options opt;
    JobConfig cfg;
    LatticeBox box;

    Params params() const { return Params{cfg}; }

    const SymbolDefinition& def(const char* key) const
    {
        if (cfg.params.contains(key)) {
            if (!cfg.params[key].is_string()) throw ConfigError(std::string("'") + key + "' must name a symbol");
            return cfg.symbol(cfg.params[key].get<std::string>());
        }
        if (std::string(key) == "symbol" && cfg.symbols.size() == 1) return cfg.symbols.begin()->second;
        throw ConfigError(std::string("config needs '") + key + "' naming a symbol");
    }

    SampledSymbol sampled(const char* key) const { return sample(def(key), box, TorusGrid(box)); }

    LatticeSequence input() const
    {
        const std::string path = params().text("input", "");
        if (path.empty()) throw ConfigError("config needs an 'input' sequence CSV");
        return io::read_sequence_csv(cfg.resolve(path), box);
    }

    std::uint64_t seed() const
    {
        if (opt.seed >= 0) return std::uint64_t(opt.seed);
        return std::uint64_t(params().integer("seed", 0));
    }

    double tol(double fallback) const { return opt.tol > 0 ? opt.tol : params().number("tol", fallback); }

    std::string path(const std::string& flag, const char* key) const
    {
        if (!flag.empty()) return flag;
        const std::string p = params().text(key, "");
        return p.empty() ? p : cfg.resolve(p);
    }

    // Data goes to the output path, or to stdout when none is given.
    void emit(const std::string& data) const
    {
        const std::string out = path(opt.out, "output");
        if (out.empty())
            std::cout << data;
        else
            io::write_file(out, data);
    }

    // Reports go to their own path, or to stderr when data already owns stdout.
    void emit_report(const Report& rep) const
    {
        const std::string p = path(opt.report, "report");
        if (!p.empty())
            io::write_file(p, rep.str());
        else
            std::cerr << rep.str();
    }

    void maybe_matrix(const SampledSymbol& s) const
    {
        const std::string p = path(opt.matrix, "matrix");
        if (p.empty()) return;
        std::ofstream f(p, std::ios::binary);
        if (!f) throw ConfigError("cannot write " + p);
        io::write_matrix(f, matrix(s));
    }
};

int cmd_apply(const Job& job)
{
    const SampledSymbol s = job.sampled("symbol");
    job.emit(io::sequence_csv(apply(s, job.input())));
    job.maybe_matrix(s);
    return kOk;
}

int cmd_kernel(const Job& job)
{
    const SampledSymbol s = job.sampled("symbol");
    job.emit(io::kernel_csv(kernel(s), job.params().number("drop", 1e-14)));
    return kOk;
}

int cmd_calculus(const Job& job, const std::string& which)
{
    const SampledSymbol s = job.sampled("symbol");
    const ExpansionOrder N = job.params().order("order", 2);
    SampledSymbol out;
    if (which == "compose")
        out = compose(s, job.sampled("right"), N);
    else if (which == "adjoint")
        out = adjoint(s, N);
    else
        out = transpose(s, N);
    job.emit(io::symbol_csv(out));
    job.maybe_matrix(out);
    return kOk;
}

ParametrixOptions parametrix_options(const Job& job)
{
    ParametrixOptions p;
    p.cutoff = job.params().number("cutoff", 1.0);
    return p;
}

int cmd_parametrix(const Job& job)
{
    const SymbolDefinition& def = job.def("symbol");
    const SampledSymbol s = sample(def, job.box, TorusGrid(job.box));
    const double mu = job.params().number("mu", def.params.mu);
    const ExpansionOrder N = job.params().order("order", 2);
    const SymbolExpansion B = parametrix(SymbolExpansion({s}, {mu}), mu, N, parametrix_options(job));
    const SampledSymbol total = partial_sum(B, B.size());
    job.emit(io::symbol_csv(total));
    job.maybe_matrix(total);
    Report rep;
    rep.set("parametrix", "terms", std::to_string(B.size()));
    for (std::size_t m = 0; m < B.size(); ++m) {
        rep.set("parametrix", "order_" + std::to_string(m), B.orders[m]);
        rep.set("parametrix", "max_abs_" + std::to_string(m), max_abs(B.terms[m].samples()));
    }
    job.emit_report(rep);
    return kOk;
}

int cmd_solve(const Job& job)
{
    const Params p = job.params();
    const SymbolDefinition& def = job.def("symbol");
    const SampledSymbol s = sample(def, job.box, TorusGrid(job.box));
    const LatticeSequence g = job.input();
    SolveOptions opt;
    opt.tol = job.tol(1e-10);
    opt.max_iter = p.integer("max_iter", 100);
    opt.weights = p.numbers("s", {0.0, 2.0});
    opt.parametrix = parametrix_options(job);
    std::string method = p.text("method", "auto");
    if (method == "auto") method = is_row_constant(s, 1e-12) ? "multiplier" : "parametrix";
    SolveReport r;
    if (method == "multiplier")
        r = invert_multiplier(s, g, opt);
    else if (method == "parametrix")
        r = solve_elliptic(s, p.number("mu", def.params.mu), g, p.order("n_par", 2), opt);
    else
        throw ConfigError("method must be auto, multiplier or parametrix");
    job.emit(io::sequence_csv(r.solution));
    job.emit_report(r.report());
    return kOk;
}

int cmd_diagnose(const Job& job)
{
    const Params p = job.params();
    const SymbolDefinition& def = job.def("symbol");
    const SampledSymbol s = sample(def, job.box, TorusGrid(job.box));
    Options sel = job.opt;
    if (p.has("diagnose")) {
        const json& d = job.cfg.params["diagnose"];
        if (!d.is_array()) throw ConfigError("'diagnose' must be a list of selectors");
        for (const auto& e : d) {
            const std::string name = e.is_string() ? e.get<std::string>() : "";
            if (name == "hs") sel.hs = true;
            else if (name == "trace") sel.trace = true;
            else if (name == "schatten") sel.schatten = true;
            else if (name == "decay") sel.decay = true;
            else if (name == "lp") sel.lp = true;
            else if (name == "mikhlin") sel.mikhlin = true;
            else if (name == "compact") sel.compact = true;
            else if (name == "elliptic") sel.elliptic = true;
            else throw ConfigError("unknown diagnose selector '" + name + "'");
        }
    }
    if (!(sel.hs || sel.trace || sel.schatten || sel.decay || sel.lp || sel.mikhlin || sel.compact || sel.elliptic))
        throw ConfigError("diagnose needs at least one selector");

    const double mu = p.number("mu", def.params.mu);
    Report rep;
    rep.set("box", "dim", std::to_string(job.box.n()));
    rep.set("box", "N", std::to_string(job.box.N()));
    if (sel.hs) rep.set("hs", "norm", hs_norm(s));
    if (sel.trace) {
        const cplx t = trace(s);
        rep.set("trace", "re", t.real());
        rep.set("trace", "im", t.imag());
    }
    const std::vector<double> ps = p.numbers("p", {1.0, 2.0});
    if (sel.schatten)
        for (double q : ps) rep.append(schatten_report(s, q));
    if (sel.decay)
        for (int nt : p.integers("decay", {1, 2, 3})) rep.append(kernel_decay_fit(s, nt, mu));
    if (sel.lp)
        for (double q : ps) rep.append(lp_bound_report(s, q, job.seed()));
    if (sel.mikhlin) rep.append(mikhlin_uniformity(def, job.box.n(), p.integers("sizes", {4, 8, 16})));
    if (sel.compact)
        for (int cut : p.integers("cut", {job.box.N() / 2})) {
            const std::string sec = "compactness cut=" + std::to_string(cut);
            rep.set(sec, "tail", compactness_tail(s, cut));
        }
    if (sel.elliptic) {
        const EllipticityResult e = ellipticity_check(s, mu, p.number("cutoff", 0.0));
        rep.set("ellipticity", "C", e.C);
        rep.flag("ellipticity", "elliptic", e.ok, e.witness());
    }
    job.emit(rep.str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Pseudo-difference operators on the lattice"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_option("--config", opt.config, "Job config (JSON)")->required();
    app.add_option("--box", opt.box, "Box half-width N (overrides config)");
    app.add_option("--dim", opt.dim, "Dimension n (overrides config)");
    app.add_option("--out", opt.out, "Data output path (default stdout)");
    app.add_option("--report", opt.report, "Report output path (default stderr)");
    app.add_option("--matrix", opt.matrix, "Binary dense-matrix dump path");
    app.add_option("--seed", opt.seed, "Seed for probe-based diagnostics");
    app.add_option("--tol", opt.tol, "Solver tolerance");
    app.set_help_all_flag("--help-all");

    const char* names[] = {"apply", "kernel", "compose", "adjoint", "transpose", "parametrix", "solve", "diagnose"};
    const char* about[] = {"Apply Op(sigma) to the input sequence",
                           "Export the kernel kappa(k, l)",
                           "Composition symbol of 'symbol' and 'right'",
                           "Adjoint symbol",
                           "Transpose symbol",
                           "Parametrix of an elliptic symbol",
                           "Solve Op(sigma) f = g",
                           "Norms, bounds and decay diagnostics"};
    std::map<std::string, CLI::App*> subs;
    for (int i = 0; i < 8; ++i) subs[names[i]] = app.add_subcommand(names[i], about[i]);
    CLI::App* diag = subs["diagnose"];
    diag->add_flag("--hs", opt.hs, "Hilbert-Schmidt norm");
    diag->add_flag("--trace", opt.trace, "Trace");
    diag->add_flag("--schatten", opt.schatten, "Schatten norms and bounds for each p");
    diag->add_flag("--decay", opt.decay, "Kernel decay constants");
    diag->add_flag("--lp", opt.lp, "l^p bound and empirical norm for each p");
    diag->add_flag("--mikhlin", opt.mikhlin, "l^2 norms across box sizes");
    diag->add_flag("--compact", opt.compact, "Compactness tail");
    diag->add_flag("--elliptic", opt.elliptic, "Ellipticity certificate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    }

    std::string which;
    for (const auto& [name, sub] : subs)
        if (sub->parsed()) which = name;

    try {
        Job job{opt, JobConfig::load(opt.config, opt.dim, opt.box), {}};
        job.box = LatticeBox(job.cfg.n, job.cfg.N);
        if (which == "apply") return cmd_apply(job);
        if (which == "kernel") return cmd_kernel(job);
        if (which == "compose" || which == "adjoint" || which == "transpose") return cmd_calculus(job, which);
        if (which == "parametrix") return cmd_parametrix(job);
        if (which == "solve") return cmd_solve(job);
        return cmd_diagnose(job);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const NotEllipticError& e) {
        std::cerr << "not elliptic: " << e.what() << "\nwitness: " << e.witness << "\n";
        return kElliptic;
    } catch (const SingularSymbolError& e) {
        std::cerr << "singular symbol: " << e.what() << "\nwitness: " << e.witness << "\n";
        return kElliptic;
    } catch (const DivergenceError& e) {
        std::cerr << "diverged: " << e.what() << "\nhistory:";
        for (double h : e.history) std::cerr << " " << format_double(h);
        std::cerr << "\n";
        return kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumeric;
    }
}
