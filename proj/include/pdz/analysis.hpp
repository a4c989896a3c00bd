#pragma once

#include <cstdint>
#include <vector>

#include "pdz/quantize.hpp"
#include "pdz/report.hpp"
#include "pdz/symbol.hpp"

namespace pdz {

using DiagnosticsReport = Report;

struct WeightedNormParams {
    double s = 0.0;
    double p = 2.0;
};

double hs_norm(const SampledSymbol& s);
cplx trace(const SampledSymbol& s);
std::vector<double> singular_values(const OperatorMatrix& A);

struct SchattenResult {
    double p = 2;
    double S_p = 0;
    double B_p = 0;
    bool holds = false;
};
SchattenResult schatten(const SampledSymbol& s, double p);
DiagnosticsReport schatten_report(const SampledSymbol& s, double p);

struct DecayResult {
    int N_t = 0;
    double C = 0;
    Index witness_k, witness_m;
};
DecayResult kernel_decay(const SampledSymbol& s, int N_t, double mu_decl = 0.0);
DiagnosticsReport kernel_decay_fit(const SampledSymbol& s, int N_t, double mu_decl = 0.0);
// Largest |k - m|_inf with |K(k,m)| above tol * max|K|, cyclic distance.
int kernel_bandwidth(const SampledSymbol& s, double tol = 1e-12);

struct LpResult {
    double p = 2;
    double bound = 0;       // ||omega||_1, omega(m) = sup_k |kappa(k, m)|
    double estimate = 0;    // empirical lower estimate of ||Op||_{p -> p}
    bool holds = false;
};
LpResult lp_bound(const SampledSymbol& s, double p, std::uint64_t seed = 0, int random_probes = 32);
DiagnosticsReport lp_bound_report(const SampledSymbol& s, double p, std::uint64_t seed = 0);

double compactness_tail(const SampledSymbol& s, int cut, double p = 2.0);
double weighted_norm(const LatticeSequence& f, const WeightedNormParams& params);

// ||A||_2 by power iteration on A^* A.
double operator_norm(const Eigen::MatrixXcd& A, double tol = 1e-8, std::uint64_t seed = 0);
// ||W_{s-mu} Op(sigma) W_{-s}||_2 with W_t = diag (1+|k|)^t.
double weighted_operator_norm(const SampledSymbol& s, double weight_s, double mu);

struct MikhlinResult {
    std::vector<int> sizes;
    std::vector<double> norms;
};
MikhlinResult mikhlin_norms(const SymbolDefinition& def, int n, const std::vector<int>& sizes);
DiagnosticsReport mikhlin_uniformity(const SymbolDefinition& def, int n, const std::vector<int>& sizes);

}  // namespace pdz
