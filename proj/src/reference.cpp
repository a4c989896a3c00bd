#include "pdz/reference.hpp"

#include <cmath>
#include <numbers>

#include "pdz/errors.hpp"

namespace pdz::reference {

namespace {

double dot(const LatticeBox& box, std::size_t k, const std::vector<double>& x)
{
    double s = 0;
    for (int d = 0; d < box.n(); ++d) s += box.coord(k, d) * x[d];
    return s;
}

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

TorusFunction forward_fourier(const LatticeSequence& f)
{
    const TorusGrid grid(f.box);
    TorusFunction F(grid);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const auto x = grid.point(j);
        cplx acc = 0;
        for (std::size_t k = 0; k < f.box.size(); ++k) acc += std::polar(1.0, -kTwoPi * dot(f.box, k, x)) * f[k];
        F[j] = acc;
    }
    return F;
}

LatticeSequence inverse_fourier(const TorusFunction& F, const LatticeBox& box)
{
    if (!F.grid.matches(box)) throw DomainError("reference::inverse_fourier: size mismatch");
    LatticeSequence f(box);
    for (std::size_t k = 0; k < box.size(); ++k) {
        cplx acc = 0;
        for (std::size_t j = 0; j < F.grid.size(); ++j)
            acc += std::polar(1.0, kTwoPi * dot(box, k, F.grid.point(j))) * F[j];
        f[k] = acc / double(F.grid.size());
    }
    return f;
}

cplx kappa(const SampledSymbol& s, std::size_t k, std::size_t l)
{
    const TorusGrid grid = s.grid();
    cplx acc = 0;
    for (std::size_t j = 0; j < grid.size(); ++j)
        acc += std::polar(1.0, kTwoPi * dot(s.box(), l, grid.point(j))) * s(k, j);
    return acc / double(grid.size());
}

LatticeSequence apply(const SampledSymbol& s, const LatticeSequence& f)
{
    if (s.box() != f.box) throw DomainError("reference::apply: box mismatch");
    const LatticeBox& box = f.box;
    const TorusGrid grid(box);
    std::vector<std::vector<double>> nodes(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) nodes[j] = grid.point(j);
    LatticeSequence out(box);
    for (std::size_t k = 0; k < box.size(); ++k) {
        cplx total = 0;
        for (std::size_t m = 0; m < box.size(); ++m) {
            cplx acc = 0;
            for (std::size_t j = 0; j < grid.size(); ++j)
                acc += std::polar(1.0, kTwoPi * (dot(box, k, nodes[j]) - dot(box, m, nodes[j]))) * s(k, j);
            total += acc / double(grid.size()) * f[m];
        }
        out[k] = total;
    }
    return out;
}

Eigen::MatrixXcd matrix(const SampledSymbol& s)
{
    const LatticeBox& box = s.box();
    const TorusGrid grid(box);
    Eigen::MatrixXcd A(box.size(), box.size());
    for (std::size_t k = 0; k < box.size(); ++k)
        for (std::size_t m = 0; m < box.size(); ++m) {
            cplx acc = 0;
            for (std::size_t j = 0; j < grid.size(); ++j) {
                const auto x = grid.point(j);
                acc += std::polar(1.0, kTwoPi * (dot(box, k, x) - dot(box, m, x))) * s(k, j);
            }
            A(k, m) = acc / double(grid.size());
        }
    return A;
}

SampledSymbol symbol_from_operator(const Eigen::MatrixXcd& A, const LatticeBox& box)
{
    const TorusGrid grid(box);
    const std::size_t S = box.size();
    std::vector<cplx> out(S * S);
    for (std::size_t k = 0; k < S; ++k)
        for (std::size_t j = 0; j < S; ++j) {
            const auto x = grid.point(j);
            cplx acc = 0;
            for (std::size_t m = 0; m < S; ++m) acc += A(k, m) * std::polar(1.0, kTwoPi * dot(box, m, x));
            out[k * S + j] = std::polar(1.0, -kTwoPi * dot(box, k, x)) * acc;
        }
    return SampledSymbol(box, std::move(out));
}

}  // namespace pdz::reference
