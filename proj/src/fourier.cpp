#include "pdz/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "pdz/errors.hpp"

namespace pdz {

namespace fft {

namespace {

// Plans are created once per (n, M, sign) and shared; fftw_execute_dft is
// thread safe, plan creation is not.
class PlanCache {
public:
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(int n, int M, int sign)
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_tuple(n, M, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<int> dims(n, M);
        std::size_t total = 1;
        for (int d = 0; d < n; ++d) total *= std::size_t(M);
        fftw_complex* scratch = fftw_alloc_complex(total);
        fftw_plan p = fftw_plan_dft(n, dims.data(), scratch, scratch, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(scratch);
        if (!p) throw Error("FFTW plan creation failed");
        plans_.emplace(key, p);
        return p;
    }

private:
    std::mutex mu_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache()
{
    static PlanCache c;
    return c;
}

}  // namespace

void transform(int n, int M, cplx* data, int sign)
{
    fftw_plan p = cache().get(n, M, sign);
    auto* d = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, d, d);
}

void to_buffer(const LatticeBox& box, const cplx* src, cplx* buf)
{
    for (std::size_t i = 0; i < box.size(); ++i) buf[box.dft_pos(i)] = src[i];
}

void from_buffer(const LatticeBox& box, const cplx* buf, cplx* dst)
{
    for (std::size_t i = 0; i < box.size(); ++i) dst[i] = buf[box.dft_pos(i)];
}

}  // namespace fft

TorusFunction forward_fourier(const LatticeSequence& f, const TorusGrid& grid)
{
    if (!grid.matches(f.box)) throw DomainError("forward_fourier: grid does not match box " + f.box.str());
    if (f.values.size() != f.box.size()) throw DomainError("forward_fourier: sequence length mismatch");
    TorusFunction F(grid);
    fft::to_buffer(f.box, f.values.data(), F.values.data());
    fft::transform(grid.n(), grid.M(), F.values.data(), -1);
    return F;
}

TorusFunction forward_fourier(const LatticeSequence& f)
{
    return forward_fourier(f, TorusGrid(f.box));
}

LatticeSequence inverse_fourier(const TorusFunction& F, const LatticeBox& box)
{
    if (!F.grid.matches(box)) throw DomainError("inverse_fourier: grid does not match box " + box.str());
    if (F.values.size() != F.grid.size()) throw DomainError("inverse_fourier: function length mismatch");
    std::vector<cplx> buf = F.values;
    fft::transform(box.n(), box.M(), buf.data(), +1);
    LatticeSequence f(box);
    fft::from_buffer(box, buf.data(), f.values.data());
    const double w = 1.0 / double(box.size());
    for (auto& v : f.values) v *= w;
    return f;
}

double plancherel_defect(const LatticeSequence& f)
{
    TorusFunction F = forward_fourier(f);
    double lhs = 0, rhs = 0;
    for (const auto& v : f.values) lhs += std::norm(v);
    for (const auto& v : F.values) rhs += std::norm(v);
    rhs /= double(f.box.size());
    return std::abs(lhs - rhs);
}

}  // namespace pdz
