#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "pdz/lattice.hpp"

namespace pdz {

// Order mu and type (rho, delta) of S^mu_{rho,delta}.
struct SymbolClassParams {
    double mu = 0.0;
    double rho = 1.0;
    double delta = 0.0;
};

using SymbolFn = std::function<cplx(const Index& k, const std::vector<double>& x)>;
using AmplitudeFn = std::function<cplx(const Index& k, const Index& l, const std::vector<double>& x)>;

struct SymbolDefinition {
    std::string name;
    SymbolFn eval;
    SymbolClassParams params;
};

struct AmplitudeDefinition {
    AmplitudeFn eval;
    double mu1 = 0.0;
    double mu2 = 0.0;
    double rho = 1.0;
    double delta = 0.0;
};

// Multi-index helpers.
int order(const Index& alpha);
double factorial(const Index& alpha);
double factorial(int m);           // table up to 12, exact
std::vector<Index> multi_indices(int n, int max_order);      // |alpha| < max_order, lexicographic
std::vector<Index> multi_indices_of_order(int n, int m);     // |alpha| == m, lexicographic
double binomial(int a, int b);

// sigma(k, x) on box x grid, k outer. The x-Fourier rows kappa(k, .) are
// computed on first use and shared between copies.
class SampledSymbol {
public:
    SampledSymbol() = default;
    SampledSymbol(const LatticeBox& box, std::vector<cplx> samples);

    const LatticeBox& box() const { return box_; }
    TorusGrid grid() const { return TorusGrid(box_); }
    std::size_t rows() const { return box_.size(); }
    std::size_t cols() const { return box_.size(); }

    const std::vector<cplx>& samples() const { return *samples_; }
    cplx operator()(std::size_t k, std::size_t j) const { return (*samples_)[k * cols() + j]; }
    const cplx* row(std::size_t k) const { return samples_->data() + k * cols(); }

    // kappa(k, l) = M^{-n} sum_x e^{2 pi i l.x} sigma(k, x), l in box order.
    const std::vector<cplx>& kappa() const;
    cplx kappa(std::size_t k, std::size_t l) const { return kappa()[k * cols() + l]; }

private:
    struct Cache {
        std::once_flag once;
        std::vector<cplx> kappa;
    };
    LatticeBox box_;
    std::shared_ptr<const std::vector<cplx>> samples_;
    std::shared_ptr<Cache> cache_;
};

SampledSymbol sample(const SymbolDefinition& def, const LatticeBox& box, const TorusGrid& grid);
SampledSymbol sample(const SymbolFn& fn, const LatticeBox& box);
SampledSymbol constant_symbol(const LatticeBox& box, cplx c);

// Pointwise algebra.
SampledSymbol add(const SampledSymbol& a, const SampledSymbol& b);
SampledSymbol subtract(const SampledSymbol& a, const SampledSymbol& b);
SampledSymbol multiply(const SampledSymbol& a, const SampledSymbol& b);
SampledSymbol scale(const SampledSymbol& a, cplx c);
SampledSymbol conjugate(const SampledSymbol& a);
SampledSymbol reflect_x(const SampledSymbol& a);                 // sigma(k, -x)
SampledSymbol shift_k(const SampledSymbol& a, const Index& v);    // sigma(k + v, x), cyclic
double max_abs_diff(const SampledSymbol& a, const SampledSymbol& b);
bool is_row_constant(const SampledSymbol& a, double tol = 1e-12);

SampledSymbol forward_difference(const SampledSymbol& s, const Index& alpha);
SampledSymbol generalized_difference(const SampledSymbol& s, const TorusFunction& q);

// Spectral x-multiplier: row-wise sigma -> sum_xi m(xi) c_xi e^{2 pi i xi.x}
// with m a product of per-axis factors.
SampledSymbol x_multiplier(const SampledSymbol& s, const std::function<cplx(int axis, int xi)>& factor);
SampledSymbol x_derivative(const SampledSymbol& s, const Index& beta);       // D = (2 pi i)^{-1} d/dx
SampledSymbol x_partial(const SampledSymbol& s, const Index& beta);          // plain d/dx
SampledSymbol falling_derivative(const SampledSymbol& s, const Index& beta);

// Same x-operators on a single torus function.
TorusFunction x_derivative(const TorusFunction& h, const Index& beta);
TorusFunction falling_derivative(const TorusFunction& h, const Index& beta);

// max |D^(beta) Delta^alpha sigma| (1+|k|)^{-(mu - rho|alpha| + delta|beta|)} over
// the interior |k|_inf <= N - |alpha| (edges wrap cyclically).
double seminorm_estimate(const SampledSymbol& s, const Index& alpha, const Index& beta,
                         const SymbolClassParams& params);

// Amplitude constant for A^{mu1,mu2}_{rho,delta}, smallest over J in 0..|gamma|.
double amplitude_seminorm_estimate(const AmplitudeDefinition& a, const LatticeBox& box, const Index& alpha,
                                   const Index& beta, const Index& gamma);

struct OrderFitOptions {
    int margin = 0;          // drop rows with |k|_inf > N - margin
    double min_radius = 1;   // drop shells with 1+|k| below this
};
double order_fit(const SampledSymbol& s, const OrderFitOptions& opt = {});

struct EllipticityResult {
    bool ok = false;
    double C = 0.0;
    Index witness_k;
    std::vector<double> witness_x;
    std::string witness() const;
};
constexpr double kEllipticityThreshold = 1e-10;
EllipticityResult ellipticity_check(const SampledSymbol& s, double mu, double M_cut);

struct TaylorExpansion {
    int order = 0;
    std::map<Index, cplx> coefficients;           // D^(alpha) h(0), |alpha| < order
    std::map<Index, TorusFunction> remainders;    // h_alpha, |alpha| == order
};
TaylorExpansion periodic_taylor(const TorusFunction& h, int N_order);
TorusFunction taylor_reconstruct(const TaylorExpansion& t, const TorusGrid& grid);

}  // namespace pdz
