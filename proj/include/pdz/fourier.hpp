#pragma once

#include "pdz/lattice.hpp"

namespace pdz {

// F(x) = sum_k e^{-2 pi i k.x} f(k) at the grid nodes.
TorusFunction forward_fourier(const LatticeSequence& f, const TorusGrid& grid);
TorusFunction forward_fourier(const LatticeSequence& f);

// f(k) = M^{-n} sum_x e^{2 pi i k.x} F(x).
LatticeSequence inverse_fourier(const TorusFunction& F, const LatticeBox& box);

double plancherel_defect(const LatticeSequence& f);

namespace fft {

// Unnormalized n-dimensional DFT of M^n points in place.
// sign = -1: e^{-2 pi i a.j/M}, sign = +1: e^{+2 pi i a.j/M}.
void transform(int n, int M, cplx* data, int sign);

// Box order -> FFT buffer order and back.
void to_buffer(const LatticeBox& box, const cplx* src, cplx* buf);
void from_buffer(const LatticeBox& box, const cplx* buf, cplx* dst);

}  // namespace fft

}  // namespace pdz
