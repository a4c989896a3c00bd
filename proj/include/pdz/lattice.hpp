#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace pdz {

using cplx = std::complex<double>;
// Lattice points and multi-indices share the same representation.
using Index = std::vector<int>;

struct Caps {
    std::size_t box = std::size_t(1) << 20;      // M^n
    std::size_t symbol = std::size_t(1) << 25;   // M^{2n} samples
    std::size_t dense = 4096;                    // M^n for dense matrices
};
Caps& caps();

// The box {-N..N}^n, stored row-major with axis offset a = k + N.
class LatticeBox {
public:
    LatticeBox() = default;
    LatticeBox(int n, int N);

    int n() const { return n_; }
    int N() const { return N_; }
    int M() const { return 2 * N_ + 1; }
    std::size_t size() const { return size_; }

    Index point(std::size_t idx) const;
    int coord(std::size_t idx, int axis) const { return (*coords_)[idx * n_ + axis]; }
    const int* coords(std::size_t idx) const { return coords_->data() + idx * n_; }
    std::size_t index(const Index& k) const;          // k must lie in the box
    std::size_t wrap(const Index& k) const;           // any k, reduced mod M
    std::size_t wrap_diff(std::size_t k, std::size_t m) const;  // index of k - m, cyclic
    std::size_t wrap_sum(std::size_t k, const Index& v) const;  // index of k + v, cyclic
    std::size_t negate(std::size_t k) const;          // index of -k
    bool contains(const Index& k) const;
    double norm(std::size_t idx) const { return (*norms_)[idx]; }  // Euclidean |k|
    int sup_norm(std::size_t idx) const;
    // Position of k in an FFT buffer (per-axis frequency k mod M).
    std::size_t dft_pos(std::size_t idx) const { return (*dft_)[idx]; }

    bool operator==(const LatticeBox& o) const { return n_ == o.n_ && N_ == o.N_; }
    bool operator!=(const LatticeBox& o) const { return !(*this == o); }
    std::string str() const;

private:
    int n_ = 0;
    int N_ = 0;
    std::size_t size_ = 0;
    std::shared_ptr<const std::vector<int>> coords_;
    std::shared_ptr<const std::vector<double>> norms_;
    std::shared_ptr<const std::vector<std::size_t>> dft_;
};

// Nodes x_j = j/M per axis, row-major in j.
class TorusGrid {
public:
    TorusGrid() = default;
    TorusGrid(int n, int M);
    explicit TorusGrid(const LatticeBox& box) : TorusGrid(box.n(), box.M()) {}

    int n() const { return n_; }
    int M() const { return M_; }
    std::size_t size() const { return size_; }
    Index node(std::size_t j) const;
    std::vector<double> point(std::size_t j) const;
    int node_coord(std::size_t j, int axis) const;
    std::size_t index(const Index& j) const;  // reduced mod M
    bool matches(const LatticeBox& box) const { return n_ == box.n() && M_ == box.M(); }

    bool operator==(const TorusGrid& o) const { return n_ == o.n_ && M_ == o.M_; }
    bool operator!=(const TorusGrid& o) const { return !(*this == o); }

private:
    int n_ = 0;
    int M_ = 0;
    std::size_t size_ = 0;
};

struct LatticeSequence {
    LatticeBox box;
    std::vector<cplx> values;

    LatticeSequence() = default;
    explicit LatticeSequence(const LatticeBox& b) : box(b), values(b.size()) {}
    LatticeSequence(const LatticeBox& b, std::vector<cplx> v);

    cplx& operator[](std::size_t i) { return values[i]; }
    const cplx& operator[](std::size_t i) const { return values[i]; }
    cplx& at(const Index& k) { return values[box.index(k)]; }
    const cplx& at(const Index& k) const { return values[box.index(k)]; }

    static LatticeSequence delta(const LatticeBox& b, const Index& k);
};

struct TorusFunction {
    TorusGrid grid;
    std::vector<cplx> values;

    TorusFunction() = default;
    explicit TorusFunction(const TorusGrid& g) : grid(g), values(g.size()) {}
    TorusFunction(const TorusGrid& g, std::vector<cplx> v);

    cplx& operator[](std::size_t i) { return values[i]; }
    const cplx& operator[](std::size_t i) const { return values[i]; }
};

void require_finite(const std::vector<cplx>& v, const char* what);

// Small vector helpers used across modules.
double max_abs(const std::vector<cplx>& v);
double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b);
double l2_norm(const std::vector<cplx>& v);

}  // namespace pdz
