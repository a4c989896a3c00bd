#include "pdz/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pdz/errors.hpp"
#include "pdz/fourier.hpp"

namespace pdz {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// e^{2 pi i r / M}, r = 0..M-1.
std::vector<cplx> roots(int M)
{
    std::vector<cplx> r(M);
    for (int i = 0; i < M; ++i) r[i] = std::polar(1.0, kTwoPi * i / M);
    return r;
}

// (k . j) mod M for lattice point k and grid node j.
struct PhaseIndex {
    explicit PhaseIndex(const LatticeBox& box) : box(box), grid(box), nodes(grid.size() * box.n())
    {
        for (std::size_t j = 0; j < grid.size(); ++j) {
            Index node = grid.node(j);
            for (int d = 0; d < box.n(); ++d) nodes[j * box.n() + d] = node[d];
        }
    }
    int operator()(std::size_t k, std::size_t j) const
    {
        const int n = box.n(), M = box.M();
        const int* kc = box.coords(k);
        long p = 0;
        for (int d = 0; d < n; ++d) p += long(kc[d]) * nodes[j * n + d];
        p %= M;
        return int(p < 0 ? p + M : p);
    }
    LatticeBox box;
    TorusGrid grid;
    std::vector<int> nodes;
};

void require_dense(const LatticeBox& box, const char* what)
{
    if (box.size() > caps().dense)
        throw ResourceError(std::string(what) + ": box " + box.str() + " exceeds dense cap of " +
                            std::to_string(caps().dense));
}

void require_match(const SampledSymbol& s, const LatticeSequence& f, const char* what)
{
    if (s.box() != f.box) throw DomainError(std::string(what) + ": symbol box " + s.box().str() +
                                            " does not match sequence box " + f.box.str());
    if (f.values.size() != f.box.size()) throw DomainError(std::string(what) + ": sequence length mismatch");
}

}  // namespace

Kernel::Kernel(const SampledSymbol& s) : box_(s.box())
{
    kappa_ = std::make_shared<const std::vector<cplx>>(s.kappa());
}

LatticeSequence apply(const SampledSymbol& s, const LatticeSequence& f)
{
    require_match(s, f, "apply");
    const LatticeBox& box = f.box;
    const TorusFunction F = forward_fourier(f);
    const std::vector<cplx> w = roots(box.M());
    const PhaseIndex phase(box);
    const std::size_t K = box.size(), X = F.values.size();
    LatticeSequence out(box);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < std::ptrdiff_t(K); ++k) {
        const cplx* row = s.row(k);
        cplx acc = 0;
        for (std::size_t j = 0; j < X; ++j) acc += w[phase(k, j)] * row[j] * F.values[j];
        out.values[k] = acc / double(X);
    }
    return out;
}

Kernel kernel(const SampledSymbol& s)
{
    return Kernel(s);
}

LatticeSequence apply_kernel(const Kernel& K, const LatticeSequence& f)
{
    if (K.box() != f.box) throw DomainError("apply_kernel: box mismatch");
    const std::size_t S = f.box.size();
    LatticeSequence out(f.box);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < std::ptrdiff_t(S); ++k) {
        cplx acc = 0;
        for (std::size_t m = 0; m < S; ++m) acc += K.K(k, m) * f.values[m];
        out.values[k] = acc;
    }
    return out;
}

OperatorMatrix matrix(const SampledSymbol& s)
{
    const LatticeBox& box = s.box();
    require_dense(box, "matrix");
    const std::size_t S = box.size();
    const std::vector<cplx>& kap = s.kappa();
    OperatorMatrix A{box, Eigen::MatrixXcd(S, S)};
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < std::ptrdiff_t(S); ++k)
        for (std::size_t m = 0; m < S; ++m) A.a(k, m) = kap[k * S + box.wrap_diff(k, m)];
    return A;
}

LatticeSequence matvec(const OperatorMatrix& A, const LatticeSequence& f)
{
    if (A.box != f.box) throw DomainError("matvec: box mismatch");
    Eigen::Map<const Eigen::VectorXcd> x(f.values.data(), Eigen::Index(f.values.size()));
    Eigen::VectorXcd y = A.a * x;
    return LatticeSequence(f.box, std::vector<cplx>(y.data(), y.data() + y.size()));
}

OperatorMatrix identity_matrix(const LatticeBox& box)
{
    require_dense(box, "identity_matrix");
    return {box, Eigen::MatrixXcd::Identity(box.size(), box.size())};
}

SampledSymbol symbol_from_operator(const OperatorMatrix& A)
{
    const LatticeBox& box = A.box;
    const std::size_t S = box.size();
    if (std::size_t(A.a.rows()) != S || std::size_t(A.a.cols()) != S)
        throw DomainError("symbol_from_operator: matrix shape does not match box");
    const std::vector<cplx> w = roots(box.M());
    const PhaseIndex phase(box);
    std::vector<cplx> out(S * S);
#pragma omp parallel
    {
        std::vector<cplx> row(S), buf(S);
#pragma omp for schedule(static)
        for (std::ptrdiff_t k = 0; k < std::ptrdiff_t(S); ++k) {
            for (std::size_t m = 0; m < S; ++m) row[m] = A.a(k, m);
            fft::to_buffer(box, row.data(), buf.data());
            fft::transform(box.n(), box.M(), buf.data(), +1);
            for (std::size_t j = 0; j < S; ++j) out[k * S + j] = std::conj(w[phase(k, j)]) * buf[j];
        }
    }
    return SampledSymbol(box, std::move(out));
}

OperatorMatrix amplitude_matrix(const AmplitudeDefinition& a, const LatticeBox& box)
{
    require_dense(box, "amplitude_matrix");
    const TorusGrid grid(box);
    const std::size_t S = box.size(), X = grid.size();
    const std::vector<cplx> w = roots(box.M());
    const PhaseIndex phase(box);
    std::vector<std::vector<double>> nodes(X);
    for (std::size_t j = 0; j < X; ++j) nodes[j] = grid.point(j);
    OperatorMatrix A{box, Eigen::MatrixXcd(S, S)};
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < std::ptrdiff_t(S); ++k) {
        const Index kk = box.point(k);
        for (std::size_t m = 0; m < S; ++m) {
            const Index mm = box.point(m);
            const std::size_t diff = box.wrap_diff(k, m);
            cplx acc = 0;
            for (std::size_t j = 0; j < X; ++j) acc += w[phase(diff, j)] * a.eval(kk, mm, nodes[j]);
            A.a(k, m) = acc / double(X);
        }
    }
    return A;
}

LatticeSequence apply_amplitude(const AmplitudeDefinition& a, const LatticeSequence& f)
{
    require_dense(f.box, "apply_amplitude");
    const LatticeBox& box = f.box;
    const TorusGrid grid(box);
    const std::size_t S = box.size(), X = grid.size();
    const std::vector<cplx> w = roots(box.M());
    const PhaseIndex phase(box);
    std::vector<std::vector<double>> nodes(X);
    for (std::size_t j = 0; j < X; ++j) nodes[j] = grid.point(j);
    LatticeSequence out(box);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < std::ptrdiff_t(S); ++k) {
        const Index kk = box.point(k);
        cplx total = 0;
        for (std::size_t m = 0; m < S; ++m) {
            if (f.values[m] == cplx(0)) continue;
            const Index mm = box.point(m);
            const std::size_t diff = box.wrap_diff(k, m);
            cplx acc = 0;
            for (std::size_t j = 0; j < X; ++j) acc += w[phase(diff, j)] * a.eval(kk, mm, nodes[j]);
            total += acc / double(X) * f.values[m];
        }
        out.values[k] = total;
    }
    return out;
}

SampledSymbol amplitude_to_symbol(const AmplitudeDefinition& a, const LatticeBox& box, int N_order)
{
    if (N_order < 1) throw DomainError("amplitude_to_symbol: order must be at least 1");
    const TorusGrid grid(box);
    const int n = box.n();
    const std::size_t S = box.size(), X = grid.size();
    std::vector<std::vector<double>> nodes(X);
    for (std::size_t j = 0; j < X; ++j) nodes[j] = grid.point(j);

    std::vector<cplx> total(S * S, cplx(0));
    for (const Index& alpha : multi_indices(n, N_order)) {
        // Delta^alpha_l a(k, l, x) at l = k as sum over beta <= alpha.
        std::vector<Index> betas;
        std::vector<double> coef;
        for (const Index& beta : multi_indices(n, order(alpha) + 1)) {
            bool le = true;
            double c = 1.0;
            for (int d = 0; d < n; ++d) {
                if (beta[d] > alpha[d]) le = false;
                c *= binomial(alpha[d], beta[d]) * (((alpha[d] - beta[d]) % 2) ? -1.0 : 1.0);
            }
            if (!le) continue;
            betas.push_back(beta);
            coef.push_back(c);
        }
        std::vector<cplx> rows(S * S, cplx(0));
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < std::ptrdiff_t(S); ++k) {
            const Index kk = box.point(k);
            for (std::size_t b = 0; b < betas.size(); ++b) {
                const Index ll = box.point(box.wrap_sum(k, betas[b]));
                for (std::size_t j = 0; j < X; ++j) rows[k * X + j] += coef[b] * a.eval(kk, ll, nodes[j]);
            }
        }
        SampledSymbol term = falling_derivative(SampledSymbol(box, std::move(rows)), alpha);
        const double inv = 1.0 / factorial(alpha);
        const auto& t = term.samples();
        for (std::size_t i = 0; i < total.size(); ++i) total[i] += inv * t[i];
    }
    return SampledSymbol(box, std::move(total));
}

double phase_periodicity_defect(const PhaseFunction& phi, const LatticeBox& box)
{
    const TorusGrid grid(box);
    double worst = 0;
    for (std::size_t k = 0; k < box.size(); ++k) {
        const Index kk = box.point(k);
        for (std::size_t j = 0; j < grid.size(); ++j) {
            std::vector<double> x = grid.point(j);
            const cplx base = std::polar(1.0, phi.eval(kk, x));
            for (int d = 0; d < box.n(); ++d) {
                std::vector<double> y = x;
                y[d] += 1.0;
                worst = std::max(worst, std::abs(base - std::polar(1.0, phi.eval(kk, y))));
            }
        }
    }
    return worst;
}

LatticeSequence apply_fso(const PhaseFunction& phi, const SampledSymbol& s, const LatticeSequence& f)
{
    require_match(s, f, "apply_fso");
    const double defect = phase_periodicity_defect(phi, f.box);
    if (defect > 1e-10)
        throw DomainError("apply_fso: e^{i phi(k,.)} is not 1-periodic (defect " + std::to_string(defect) + ")");
    const LatticeBox& box = f.box;
    const TorusGrid grid(box);
    const TorusFunction F = forward_fourier(f);
    const std::size_t S = box.size(), X = grid.size();
    std::vector<std::vector<double>> nodes(X);
    for (std::size_t j = 0; j < X; ++j) nodes[j] = grid.point(j);
    LatticeSequence out(box);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < std::ptrdiff_t(S); ++k) {
        const Index kk = box.point(k);
        const cplx* row = s.row(k);
        cplx acc = 0;
        for (std::size_t j = 0; j < X; ++j) acc += std::polar(1.0, phi.eval(kk, nodes[j])) * row[j] * F.values[j];
        out.values[k] = acc / double(X);
    }
    return out;
}

namespace {

// Central-difference mixed partial d^alpha g at x.
double mixed_partial(const std::function<double(const std::vector<double>&)>& g, const std::vector<double>& x,
                     const Index& alpha, double h)
{
    const int n = int(x.size());
    Index i(n, 0);
    double acc = 0;
    while (true) {
        std::vector<double> y = x;
        double c = 1.0;
        for (int d = 0; d < n; ++d) {
            y[d] += (0.5 * alpha[d] - i[d]) * h;
            c *= binomial(alpha[d], i[d]) * ((i[d] % 2) ? -1.0 : 1.0);
        }
        acc += c * g(y);
        int d = n - 1;
        while (d >= 0 && i[d] == alpha[d]) i[d--] = 0;
        if (d < 0) break;
        ++i[d];
    }
    return acc / std::pow(h, order(alpha));
}

}  // namespace

FsoConstants fso_boundedness_check(const PhaseFunction& phi, const SampledSymbol& s)
{
    const LatticeBox& box = s.box();
    const TorusGrid grid(box);
    const int n = box.n();
    const std::size_t S = box.size(), X = grid.size();
    const auto alphas = multi_indices(n, 2 * n + 2);
    FsoConstants out;

    for (const Index& alpha : alphas)
        out.symbol_derivative_max = std::max(out.symbol_derivative_max, max_abs(x_partial(s, alpha).samples()));

    const double h = 1.0 / 128;
    for (std::size_t k = 0; k < S; ++k) {
        const Index kk = box.point(k);
        for (int b = 0; b < n; ++b) {
            Index kb = kk;
            kb[b] += 1;
            auto g = [&](const std::vector<double>& x) { return phi.eval(kb, x) - phi.eval(kk, x); };
            for (std::size_t j = 0; j < X; ++j) {
                const std::vector<double> x = grid.point(j);
                for (const Index& alpha : alphas)
                    out.phase_derivative_max =
                        std::max(out.phase_derivative_max, std::abs(mixed_partial(g, x, alpha, h)));
            }
        }
    }

    const double hg = 1e-5;
    std::vector<double> grad(S * X * n);
    for (std::size_t k = 0; k < S; ++k) {
        const Index kk = box.point(k);
        for (std::size_t j = 0; j < X; ++j) {
            const std::vector<double> x = grid.point(j);
            for (int d = 0; d < n; ++d) {
                std::vector<double> xp = x, xm = x;
                xp[d] += hg;
                xm[d] -= hg;
                grad[(k * X + j) * n + d] = (phi.eval(kk, xp) - phi.eval(kk, xm)) / (2 * hg);
            }
        }
    }
    out.separation = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < S; ++k)
        for (std::size_t l = 0; l < S; ++l) {
            if (k == l) continue;
            double dk2 = 0;
            for (int d = 0; d < n; ++d) {
                const double t = box.coord(k, d) - box.coord(l, d);
                dk2 += t * t;
            }
            const double dk = std::sqrt(dk2);
            for (std::size_t j = 0; j < X; ++j) {
                double g2 = 0;
                for (int d = 0; d < n; ++d) {
                    const double t = grad[(k * X + j) * n + d] - grad[(l * X + j) * n + d];
                    g2 += t * t;
                }
                const double r = std::sqrt(g2) / dk;
                if (r < out.separation) {
                    out.separation = r;
                    out.separation_k = box.point(k);
                    out.separation_l = box.point(l);
                    out.separation_x = grid.point(j);
                }
            }
        }
    return out;
}

TorusFunction apply_toroidal(const ToroidalSymbol& t, const TorusFunction& v)
{
    const LatticeBox& box = t.box;
    if (!v.grid.matches(box)) throw DomainError("apply_toroidal: grid does not match symbol box");
    const std::size_t S = box.size(), X = v.grid.size();
    if (t.samples.size() != S * X) throw DomainError("apply_toroidal: symbol sample count mismatch");
    // F_T v(k) = M^{-n} sum_x e^{-2 pi i k.x} v(x), the inverse lattice transform at -k.
    const LatticeSequence inv = inverse_fourier(v, box);
    const std::vector<cplx> w = roots(box.M());
    const PhaseIndex phase(box);
    TorusFunction out(v.grid);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < std::ptrdiff_t(X); ++j) {
        cplx acc = 0;
        for (std::size_t k = 0; k < S; ++k) acc += w[phase(k, j)] * t(j, k) * inv.values[box.negate(k)];
        out.values[j] = acc;
    }
    return out;
}

double link_defect(const SampledSymbol& s)
{
    const LatticeBox& box = s.box();
    require_dense(box, "link_defect");
    const TorusGrid grid(box);
    const std::size_t S = box.size(), X = grid.size();

    ToroidalSymbol tau{box, std::vector<cplx>(X * S)};
    for (std::size_t j = 0; j < X; ++j)
        for (std::size_t k = 0; k < S; ++k) tau.samples[j * S + k] = std::conj(s(box.negate(k), j));

    Eigen::MatrixXcd T(X, X);
    for (std::size_t j = 0; j < X; ++j) {
        TorusFunction e(grid);
        e[j] = 1.0;
        TorusFunction col = apply_toroidal(tau, e);
        for (std::size_t i = 0; i < X; ++i) T(i, j) = col[i];
    }
    const std::vector<cplx> w = roots(box.M());
    const PhaseIndex phase(box);
    Eigen::MatrixXcd F(X, S);
    for (std::size_t j = 0; j < X; ++j)
        for (std::size_t k = 0; k < S; ++k) F(j, k) = std::conj(w[phase(k, j)]);
    const Eigen::MatrixXcd G = F.adjoint() / double(X);
    const Eigen::MatrixXcd L = G * T.adjoint() * F;
    return (L - matrix(s).a).cwiseAbs().maxCoeff();
}

}  // namespace pdz
