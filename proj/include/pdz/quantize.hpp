#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>

#include "pdz/lattice.hpp"
#include "pdz/symbol.hpp"

namespace pdz {

class Kernel {
public:
    Kernel() = default;
    explicit Kernel(const SampledSymbol& s);

    const LatticeBox& box() const { return box_; }
    cplx kappa(std::size_t k, std::size_t l) const { return (*kappa_)[k * box_.size() + l]; }
    // K(k, m) = kappa(k, k - m), cyclic.
    cplx K(std::size_t k, std::size_t m) const { return kappa(k, box_.wrap_diff(k, m)); }
    const std::vector<cplx>& kappa() const { return *kappa_; }

private:
    LatticeBox box_;
    std::shared_ptr<const std::vector<cplx>> kappa_;
};

struct OperatorMatrix {
    LatticeBox box;
    Eigen::MatrixXcd a;
};

struct PhaseFunction {
    std::function<double(const Index& k, const std::vector<double>& x)> eval;
};

// Op(sigma) f(k) = M^{-n} sum_x e^{2 pi i k.x} sigma(k, x) F(x).
LatticeSequence apply(const SampledSymbol& s, const LatticeSequence& f);
LatticeSequence apply_kernel(const Kernel& K, const LatticeSequence& f);
Kernel kernel(const SampledSymbol& s);
OperatorMatrix matrix(const SampledSymbol& s);
LatticeSequence matvec(const OperatorMatrix& A, const LatticeSequence& f);
OperatorMatrix identity_matrix(const LatticeBox& box);
SampledSymbol symbol_from_operator(const OperatorMatrix& A);

LatticeSequence apply_amplitude(const AmplitudeDefinition& a, const LatticeSequence& f);
OperatorMatrix amplitude_matrix(const AmplitudeDefinition& a, const LatticeBox& box);
SampledSymbol amplitude_to_symbol(const AmplitudeDefinition& a, const LatticeBox& box, int N_order);

// Max over k, nodes and axes of |e^{i phi(k,x)} - e^{i phi(k,x+e_j)}|.
double phase_periodicity_defect(const PhaseFunction& phi, const LatticeBox& box);
LatticeSequence apply_fso(const PhaseFunction& phi, const SampledSymbol& s, const LatticeSequence& f);

struct FsoConstants {
    double symbol_derivative_max = 0;   // max_{|alpha| <= 2n+1} |d^alpha_x sigma|
    double phase_derivative_max = 0;    // max_{|alpha| <= 2n+1, |beta| = 1} |d^alpha_x Delta^beta_k phi|
    double separation = 0;              // min |grad phi(k,x) - grad phi(l,x)| / |k - l|
    Index separation_k, separation_l;
    std::vector<double> separation_x;
};
FsoConstants fso_boundedness_check(const PhaseFunction& phi, const SampledSymbol& s);

// tau(x, k) sampled with x outer: samples[j * K + k].
struct ToroidalSymbol {
    LatticeBox box;
    std::vector<cplx> samples;
    cplx operator()(std::size_t j, std::size_t k) const { return samples[j * box.size() + k]; }
};
TorusFunction apply_toroidal(const ToroidalSymbol& t, const TorusFunction& v);
double link_defect(const SampledSymbol& s);

}  // namespace pdz
