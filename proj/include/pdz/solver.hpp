#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pdz/calculus.hpp"
#include "pdz/report.hpp"
#include "pdz/symbol.hpp"

namespace pdz {

struct SolveOptions {
    std::vector<double> weights{0.0, 2.0};   // s values for weighted residuals
    double tol = 1e-10;
    int max_iter = 100;
    ParametrixOptions parametrix;
};

struct SolveReport {
    LatticeSequence solution;
    std::string method;                 // exact-multiplier | parametrix-iteration
    double residual = 0;                // ||g - Op(sigma) f||_2
    double relative_residual = 0;       // residual / ||g||_2
    std::vector<std::pair<double, double>> weighted_residuals;  // (s, ||r||_{l^2_s})
    int iterations = 0;                 // correction steps after f_0
    std::vector<double> history;        // relative residuals, f_0 first
    double min_abs_symbol = 0;          // exact-multiplier only
    bool conditioning_warning = false;

    Report report() const;
};

constexpr double kZeroThreshold = 1e-10;
constexpr double kConditioningThreshold = 1e-6;

SolveReport invert_multiplier(const SampledSymbol& sigma, const LatticeSequence& g, const SolveOptions& opt = {});
SolveReport solve_elliptic(const SampledSymbol& sigma, double mu, const LatticeSequence& g, ExpansionOrder N_par,
                           const SolveOptions& opt = {});

}  // namespace pdz
