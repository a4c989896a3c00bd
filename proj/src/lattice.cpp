#include "pdz/lattice.hpp"

#include <cmath>
#include <sstream>

#include "pdz/errors.hpp"

namespace pdz {

Caps& caps()
{
    static Caps c;
    return c;
}

LatticeBox::LatticeBox(int n, int N) : n_(n), N_(N)
{
    if (n < 1 || n > 4)
        throw DomainError("dimension must be in 1..4, got " + std::to_string(n));
    if (N < 1)
        throw DomainError("half-width N must be positive, got " + std::to_string(N));
    const int M = 2 * N + 1;
    double total = std::pow(double(M), n);
    if (total > double(caps().box))
        throw ResourceError("box " + str() + " has " + std::to_string(std::size_t(total)) +
                            " points, cap is " + std::to_string(caps().box));
    size_ = std::size_t(total);

    auto coords = std::make_shared<std::vector<int>>(size_ * n);
    auto norms = std::make_shared<std::vector<double>>(size_);
    auto dft = std::make_shared<std::vector<std::size_t>>(size_);
    for (std::size_t i = 0; i < size_; ++i) {
        std::size_t rem = i, pos = 0, stride = 1;
        double r2 = 0;
        for (int d = n - 1; d >= 0; --d) {
            int a = int(rem % M);
            rem /= M;
            int k = a - N;
            (*coords)[i * n + d] = k;
            r2 += double(k) * k;
            pos += std::size_t((k + M) % M) * stride;
            stride *= M;
        }
        (*norms)[i] = std::sqrt(r2);
        (*dft)[i] = pos;
    }
    coords_ = coords;
    norms_ = norms;
    dft_ = dft;
}

Index LatticeBox::point(std::size_t idx) const
{
    return Index(coords(idx), coords(idx) + n_);
}

std::size_t LatticeBox::index(const Index& k) const
{
    if (!contains(k))
        throw DomainError("lattice point outside box " + str());
    std::size_t idx = 0;
    for (int d = 0; d < n_; ++d) idx = idx * M() + std::size_t(k[d] + N_);
    return idx;
}

std::size_t LatticeBox::wrap(const Index& k) const
{
    const int M = this->M();
    std::size_t idx = 0;
    for (int d = 0; d < n_; ++d) {
        int a = ((k[d] + N_) % M + M) % M;
        idx = idx * M + std::size_t(a);
    }
    return idx;
}

std::size_t LatticeBox::wrap_diff(std::size_t k, std::size_t m) const
{
    const int M = this->M();
    const int* a = coords(k);
    const int* b = coords(m);
    std::size_t idx = 0;
    for (int d = 0; d < n_; ++d) {
        int c = ((a[d] - b[d] + N_) % M + M) % M;
        idx = idx * M + std::size_t(c);
    }
    return idx;
}

std::size_t LatticeBox::wrap_sum(std::size_t k, const Index& v) const
{
    const int M = this->M();
    const int* a = coords(k);
    std::size_t idx = 0;
    for (int d = 0; d < n_; ++d) {
        int c = ((a[d] + v[d] + N_) % M + M) % M;
        idx = idx * M + std::size_t(c);
    }
    return idx;
}

std::size_t LatticeBox::negate(std::size_t k) const
{
    return size_ - 1 - k;
}

bool LatticeBox::contains(const Index& k) const
{
    if (int(k.size()) != n_) return false;
    for (int v : k)
        if (v < -N_ || v > N_) return false;
    return true;
}

int LatticeBox::sup_norm(std::size_t idx) const
{
    int r = 0;
    for (int d = 0; d < n_; ++d) r = std::max(r, std::abs(coord(idx, d)));
    return r;
}

std::string LatticeBox::str() const
{
    std::ostringstream os;
    os << "{-" << N_ << ".." << N_ << "}^" << n_;
    return os.str();
}

TorusGrid::TorusGrid(int n, int M) : n_(n), M_(M)
{
    if (n < 1 || M < 1) throw DomainError("invalid torus grid");
    size_ = 1;
    for (int d = 0; d < n; ++d) size_ *= std::size_t(M);
}

Index TorusGrid::node(std::size_t j) const
{
    Index out(n_);
    for (int d = n_ - 1; d >= 0; --d) {
        out[d] = int(j % M_);
        j /= M_;
    }
    return out;
}

std::vector<double> TorusGrid::point(std::size_t j) const
{
    std::vector<double> x(n_);
    for (int d = n_ - 1; d >= 0; --d) {
        x[d] = double(j % M_) / M_;
        j /= M_;
    }
    return x;
}

int TorusGrid::node_coord(std::size_t j, int axis) const
{
    for (int d = n_ - 1; d > axis; --d) j /= M_;
    return int(j % M_);
}

std::size_t TorusGrid::index(const Index& j) const
{
    std::size_t idx = 0;
    for (int d = 0; d < n_; ++d) idx = idx * M_ + std::size_t((j[d] % M_ + M_) % M_);
    return idx;
}

LatticeSequence::LatticeSequence(const LatticeBox& b, std::vector<cplx> v) : box(b), values(std::move(v))
{
    if (values.size() != box.size()) throw DomainError("sequence length does not match box");
}

LatticeSequence LatticeSequence::delta(const LatticeBox& b, const Index& k)
{
    LatticeSequence f(b);
    f.at(k) = 1.0;
    return f;
}

TorusFunction::TorusFunction(const TorusGrid& g, std::vector<cplx> v) : grid(g), values(std::move(v))
{
    if (values.size() != grid.size()) throw DomainError("function length does not match grid");
}

void require_finite(const std::vector<cplx>& v, const char* what)
{
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag()))
            throw DomainError(std::string(what) + ": non-finite value at position " + std::to_string(i));
}

double max_abs(const std::vector<cplx>& v)
{
    double m = 0;
    for (const auto& z : v) m = std::max(m, std::abs(z));
    return m;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    if (a.size() != b.size()) throw DomainError("length mismatch");
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double l2_norm(const std::vector<cplx>& v)
{
    double s = 0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

}  // namespace pdz
