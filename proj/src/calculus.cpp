#include "pdz/calculus.hpp"

#include <cmath>

#include "pdz/errors.hpp"

namespace pdz {

ExpansionOrder::ExpansionOrder(int N) : N(N)
{
    if (N < 1 || N > kMax)
        throw DomainError("expansion order must be in 1.." + std::to_string(kMax) + ", got " + std::to_string(N));
}

SymbolExpansion::SymbolExpansion(std::vector<SampledSymbol> t, std::vector<double> o)
    : terms(std::move(t)), orders(std::move(o))
{
    if (terms.size() != orders.size()) throw DomainError("expansion: one order per term required");
    for (std::size_t i = 1; i < orders.size(); ++i)
        if (!(orders[i] < orders[i - 1])) throw DomainError("expansion orders must be strictly decreasing");
    for (std::size_t i = 1; i < terms.size(); ++i)
        if (terms[i].box() != terms[0].box()) throw DomainError("expansion terms live on different boxes");
}

namespace {

void accumulate(std::vector<cplx>& acc, const SampledSymbol& term, double w)
{
    const auto& t = term.samples();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * t[i];
}

}  // namespace

SampledSymbol compose(const SampledSymbol& sigma, const SampledSymbol& tau, ExpansionOrder N)
{
    if (sigma.box() != tau.box()) throw DomainError("compose: symbols live on different boxes");
    std::vector<cplx> acc(sigma.samples().size(), cplx(0));
    for (const Index& alpha : multi_indices(sigma.box().n(), N.N))
        accumulate(acc, multiply(falling_derivative(sigma, alpha), forward_difference(tau, alpha)),
                   1.0 / factorial(alpha));
    return SampledSymbol(sigma.box(), std::move(acc));
}

namespace {

SampledSymbol difference_derivative_sum(const SampledSymbol& base, int N)
{
    std::vector<cplx> acc(base.samples().size(), cplx(0));
    for (const Index& alpha : multi_indices(base.box().n(), N))
        accumulate(acc, forward_difference(falling_derivative(base, alpha), alpha), 1.0 / factorial(alpha));
    return SampledSymbol(base.box(), std::move(acc));
}

}  // namespace

SampledSymbol adjoint(const SampledSymbol& sigma, ExpansionOrder N)
{
    return difference_derivative_sum(conjugate(sigma), N.N);
}

SampledSymbol transpose(const SampledSymbol& sigma, ExpansionOrder N)
{
    return difference_derivative_sum(reflect_x(sigma), N.N);
}

SampledSymbol partial_sum(const SymbolExpansion& e, std::size_t J)
{
    if (J > e.size()) throw DomainError("partial_sum: J exceeds number of terms");
    if (e.size() == 0) throw DomainError("partial_sum: empty expansion");
    if (J == 0) return constant_symbol(e.terms[0].box(), 0.0);
    std::vector<cplx> acc = e.terms[0].samples();
    for (std::size_t j = 1; j < J; ++j) accumulate(acc, e.terms[j], 1.0);
    return SampledSymbol(e.terms[0].box(), std::move(acc));
}

SymbolExpansion parametrix(const SymbolExpansion& A, double mu, ExpansionOrder N, const ParametrixOptions& opt)
{
    if (A.size() == 0) throw DomainError("parametrix: empty expansion");
    const SampledSymbol& a0 = A.terms[0];
    const LatticeBox& box = a0.box();
    const EllipticityResult ell = ellipticity_check(a0, mu, opt.cutoff);
    if (!ell.ok) throw NotEllipticError("parametrix: leading symbol is not elliptic", ell.witness());

    const std::size_t K = a0.rows(), X = a0.cols();
    std::vector<bool> inner(K);
    for (std::size_t k = 0; k < K; ++k) inner[k] = box.norm(k) < opt.cutoff;

    std::vector<cplx> inv(K * X);
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t j = 0; j < X; ++j) {
            const cplx v = a0(k, j);
            inv[k * X + j] = std::abs(v) > kEllipticityThreshold ? 1.0 / v : cplx(0);
        }

    std::vector<SampledSymbol> B{SampledSymbol(box, inv)};
    std::vector<double> orders{-mu};
    const double step = A.size() > 1 ? A.orders[0] - A.orders[1] : 1.0;
    for (int m = 1; m < N.N; ++m) {
        std::vector<cplx> acc(K * X, cplx(0));
        for (int j = 0; j < m; ++j) {
            const int lmax = opt.literal_index_range ? m - 1 : m;
            for (int l = 0; l <= lmax && l < int(A.size()); ++l) {
                const int g = m - j - l;
                if (g < 0) continue;
                for (const Index& gamma : multi_indices_of_order(box.n(), g))
                    accumulate(acc, multiply(falling_derivative(B[j], gamma), forward_difference(A.terms[l], gamma)),
                               1.0 / factorial(gamma));
            }
        }
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t j = 0; j < X; ++j) acc[k * X + j] = inner[k] ? cplx(0) : -inv[k * X + j] * acc[k * X + j];
        B.emplace_back(box, std::move(acc));
        orders.push_back(-mu - m * step);
    }
    return SymbolExpansion(std::move(B), std::move(orders));
}

}  // namespace pdz
