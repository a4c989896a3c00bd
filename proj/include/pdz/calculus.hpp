#pragma once

#include <vector>

#include "pdz/symbol.hpp"

namespace pdz {

// Cutoff N of the sums over |alpha| < N.
struct ExpansionOrder {
    static constexpr int kMax = 12;
    int N = 1;
    ExpansionOrder() = default;
    ExpansionOrder(int N);  // NOLINT: implicit from int is intended
};

struct SymbolExpansion {
    std::vector<SampledSymbol> terms;
    std::vector<double> orders;  // strictly decreasing
    SymbolExpansion() = default;
    SymbolExpansion(std::vector<SampledSymbol> terms, std::vector<double> orders);
    std::size_t size() const { return terms.size(); }
};

// sum_{|alpha|<N} (1/alpha!) D^(alpha) sigma * Delta^alpha tau
SampledSymbol compose(const SampledSymbol& sigma, const SampledSymbol& tau, ExpansionOrder N);
// sum_{|alpha|<N} (1/alpha!) Delta^alpha D^(alpha) conj(sigma)
SampledSymbol adjoint(const SampledSymbol& sigma, ExpansionOrder N);
// sum_{|alpha|<N} (1/alpha!) Delta^alpha D^(alpha) sigma(k, -x)
SampledSymbol transpose(const SampledSymbol& sigma, ExpansionOrder N);

SampledSymbol partial_sum(const SymbolExpansion& e, std::size_t J);

struct ParametrixOptions {
    // Rows with |k| < cutoff keep only B_0 (set to 0 where sigma_A0 vanishes).
    double cutoff = 1.0;
    // Restrict the recursion to l < m as in the printed formula; this drops
    // the B_0 A_m term and is only correct for single-term expansions.
    bool literal_index_range = false;
};

SymbolExpansion parametrix(const SymbolExpansion& A, double mu, ExpansionOrder N,
                           const ParametrixOptions& opt = {});

}  // namespace pdz
