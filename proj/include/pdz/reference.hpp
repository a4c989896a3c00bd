#pragma once

// Serial direct-summation versions of the parallel kernels. Slow, simple,
// and independent of the FFT path; used as oracles by the tests and as the
// baseline in the benchmark.

#include <Eigen/Dense>

#include "pdz/lattice.hpp"
#include "pdz/symbol.hpp"

namespace pdz::reference {

TorusFunction forward_fourier(const LatticeSequence& f);
LatticeSequence inverse_fourier(const TorusFunction& F, const LatticeBox& box);

// kappa(k, l) by direct quadrature.
cplx kappa(const SampledSymbol& s, std::size_t k, std::size_t l);

// Op(sigma) f(k) = sum_m [M^{-n} sum_x e^{2 pi i (k-m).x} sigma(k,x)] f(m).
LatticeSequence apply(const SampledSymbol& s, const LatticeSequence& f);
Eigen::MatrixXcd matrix(const SampledSymbol& s);
SampledSymbol symbol_from_operator(const Eigen::MatrixXcd& A, const LatticeBox& box);

}  // namespace pdz::reference
