#pragma once

#include <iosfwd>
#include <string>

#include "pdz/lattice.hpp"
#include "pdz/quantize.hpp"
#include "pdz/symbol.hpp"

namespace pdz::io {

// All numbers are written with %.17g; rows are lexicographic.
std::string sequence_csv(const LatticeSequence& f);
std::string torus_csv(const TorusFunction& F);
// Entries with |kappa| <= drop * max|kappa| are omitted.
std::string kernel_csv(const Kernel& K, double drop = 0.0);
std::string symbol_csv(const SampledSymbol& s);

// Rows missing from the file are zero; points outside the box or repeated
// points are rejected.
LatticeSequence read_sequence_csv(std::istream& in, const LatticeBox& box);
LatticeSequence read_sequence_csv(const std::string& path, const LatticeBox& box);

// 16-byte header: "PDZM", int32 n, int32 M, int32 reserved (0), all little
// endian, followed by (M^n)^2 row-major complex doubles (re, im).
void write_matrix(std::ostream& out, const OperatorMatrix& A);
OperatorMatrix read_matrix(std::istream& in);

void write_file(const std::string& path, const std::string& contents);

}  // namespace pdz::io
