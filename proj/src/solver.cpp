#include "pdz/solver.hpp"

#include <cmath>
#include <sstream>

#include "pdz/analysis.hpp"
#include "pdz/errors.hpp"
#include "pdz/fourier.hpp"
#include "pdz/quantize.hpp"

namespace pdz {

namespace {

// Residual against the original symbol through the FFT path.
void finish(SolveReport& r, const SampledSymbol& sigma, const LatticeSequence& g, const SolveOptions& opt)
{
    LatticeSequence res = apply(sigma, r.solution);
    for (std::size_t k = 0; k < res.values.size(); ++k) res.values[k] = g.values[k] - res.values[k];
    r.residual = l2_norm(res.values);
    const double gn = l2_norm(g.values);
    r.relative_residual = gn > 0 ? r.residual / gn : r.residual;
    r.weighted_residuals.clear();
    for (double s : opt.weights) r.weighted_residuals.emplace_back(s, weighted_norm(res, {s, 2.0}));
}

}  // namespace

Report SolveReport::report() const
{
    Report rep;
    rep.set("solve", "method", method);
    rep.set("solve", "iterations", std::to_string(iterations));
    rep.set("solve", "residual_l2", residual);
    rep.set("solve", "residual_relative", relative_residual);
    for (const auto& [s, v] : weighted_residuals) rep.set("solve", "residual_l2_s=" + format_double(s), v);
    if (method == "exact-multiplier") {
        rep.set("solve", "min_abs_symbol", min_abs_symbol);
        rep.flag("solve", "conditioning_warning", conditioning_warning,
                 "min_abs_symbol=" + format_double(min_abs_symbol));
    }
    if (!history.empty()) {
        std::ostringstream os;
        for (std::size_t i = 0; i < history.size(); ++i) os << (i ? " " : "") << format_double(history[i]);
        rep.set("solve", "history", os.str());
    }
    return rep;
}

SolveReport invert_multiplier(const SampledSymbol& sigma, const LatticeSequence& g, const SolveOptions& opt)
{
    if (sigma.box() != g.box) throw DomainError("invert_multiplier: box mismatch");
    if (!is_row_constant(sigma, 1e-12))
        throw DomainError("invert_multiplier: symbol depends on k; use solve_elliptic");
    const TorusGrid grid = sigma.grid();
    const cplx* row = sigma.row(0);
    SolveReport r;
    r.method = "exact-multiplier";
    r.min_abs_symbol = INFINITY;
    std::size_t worst = 0;
    for (std::size_t j = 0; j < grid.size(); ++j)
        if (std::abs(row[j]) < r.min_abs_symbol) {
            r.min_abs_symbol = std::abs(row[j]);
            worst = j;
        }
    if (!(r.min_abs_symbol > kZeroThreshold)) {
        std::ostringstream os;
        os << "node j=(";
        const Index node = grid.node(worst);
        for (std::size_t d = 0; d < node.size(); ++d) os << (d ? "," : "") << node[d];
        os << ") |sigma|=" << format_double(r.min_abs_symbol);
        throw SingularSymbolError("invert_multiplier: symbol vanishes on the grid", os.str());
    }
    r.conditioning_warning = r.min_abs_symbol < kConditioningThreshold;
    TorusFunction G = forward_fourier(g);
    for (std::size_t j = 0; j < grid.size(); ++j) G[j] /= row[j];
    r.solution = inverse_fourier(G, g.box);
    finish(r, sigma, g, opt);
    return r;
}

SolveReport solve_elliptic(const SampledSymbol& sigma, double mu, const LatticeSequence& g, ExpansionOrder N_par,
                           const SolveOptions& opt)
{
    if (sigma.box() != g.box) throw DomainError("solve_elliptic: box mismatch");
    const SymbolExpansion B_terms = parametrix(SymbolExpansion({sigma}, {mu}), mu, N_par, opt.parametrix);
    const SampledSymbol B = partial_sum(B_terms, B_terms.size());
    const double gn = l2_norm(g.values);
    const double scale = gn > 0 ? gn : 1.0;

    SolveReport r;
    r.method = "parametrix-iteration";
    LatticeSequence f = apply(B, g);
    int growth = 0;
    for (int it = 0;; ++it) {
        LatticeSequence res = apply(sigma, f);
        for (std::size_t k = 0; k < res.values.size(); ++k) res.values[k] = g.values[k] - res.values[k];
        const double rel = l2_norm(res.values) / scale;
        if (!r.history.empty() && rel > r.history.back())
            ++growth;
        else
            growth = 0;
        r.history.push_back(rel);
        if (rel <= opt.tol) break;
        if (growth >= 3) throw DivergenceError("solve_elliptic: residual grew 3 consecutive iterations", r.history);
        if (it >= opt.max_iter) break;
        const LatticeSequence corr = apply(B, res);
        for (std::size_t k = 0; k < f.values.size(); ++k) f.values[k] += corr.values[k];
        r.iterations = it + 1;
    }
    r.solution = f;
    finish(r, sigma, g, opt);
    return r;
}

}  // namespace pdz
