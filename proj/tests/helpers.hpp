#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "pdz/lattice.hpp"
#include "pdz/symbol.hpp"

namespace testing_util {

using pdz::cplx;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline pdz::LatticeSequence random_sequence(const pdz::LatticeBox& box, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    pdz::LatticeSequence f(box);
    for (auto& v : f.values) v = cplx(g(rng), g(rng));
    return f;
}

inline pdz::TorusFunction random_function(const pdz::TorusGrid& grid, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    pdz::TorusFunction F(grid);
    for (auto& v : F.values) v = cplx(g(rng), g(rng));
    return F;
}

inline pdz::SampledSymbol random_symbol(const pdz::LatticeBox& box, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    std::vector<cplx> s(box.size() * box.size());
    for (auto& v : s) v = cplx(g(rng), g(rng));
    return pdz::SampledSymbol(box, std::move(s));
}

// Trigonometric polynomial in x with frequencies in [lo, hi] per axis and
// coefficients that are polynomials in k of degree <= deg.
inline pdz::SampledSymbol random_trig_symbol(const pdz::LatticeBox& box, int lo, int hi, int deg,
                                             std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1, 1);
    const int n = box.n();
    const int width = hi - lo + 1;
    int terms = 1;
    for (int d = 0; d < n; ++d) terms *= width;
    // coefficient c[t][d][p] of k_d^p, summed over axes.
    std::vector<cplx> c(std::size_t(terms) * n * (deg + 1));
    for (auto& v : c) v = cplx(u(rng), u(rng));
    return pdz::sample(
        [=](const pdz::Index& k, const std::vector<double>& x) {
            cplx total = 0;
            for (int t = 0; t < terms; ++t) {
                int rem = t;
                double phase = 0;
                for (int d = 0; d < n; ++d) {
                    phase += (lo + rem % width) * x[d];
                    rem /= width;
                }
                cplx a = 0;
                for (int d = 0; d < n; ++d) {
                    double kp = 1;
                    for (int p = 0; p <= deg; ++p) {
                        a += c[(std::size_t(t) * n + d) * (deg + 1) + p] * kp;
                        kp *= k[d];
                    }
                }
                total += a * std::polar(1.0, kTwoPi * phase);
            }
            return total;
        },
        box);
}

inline double rel_err(double a, double b)
{
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace testing_util
