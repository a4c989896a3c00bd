#include "pdz/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "pdz/errors.hpp"
#include "pdz/fourier.hpp"

namespace pdz {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx ipow(cplx z, int e)
{
    cplx r = 1.0;
    for (int i = 0; i < e; ++i) r *= z;
    return r;
}

int signed_freq(int a, int M)
{
    return a <= M / 2 ? a : a - M;
}

std::string format_point(const Index& k)
{
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < k.size(); ++i) os << (i ? "," : "") << k[i];
    os << ")";
    return os.str();
}

std::string format_point(const std::vector<double>& x)
{
    std::ostringstream os;
    os.precision(17);
    os << "(";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
    os << ")";
    return os.str();
}

// Multiplier table over FFT buffer positions.
std::vector<cplx> multiplier_table(int n, int M, const std::function<cplx(int, int)>& factor)
{
    std::vector<std::vector<cplx>> axis(n, std::vector<cplx>(M));
    for (int d = 0; d < n; ++d)
        for (int a = 0; a < M; ++a) axis[d][a] = factor(d, signed_freq(a, M));
    TorusGrid g(n, M);
    std::vector<cplx> table(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) {
        cplx v = 1.0 / double(g.size());
        std::size_t rem = p;
        for (int d = n - 1; d >= 0; --d) {
            v *= axis[d][rem % M];
            rem /= M;
        }
        table[p] = v;
    }
    return table;
}

void apply_multiplier_row(int n, int M, const std::vector<cplx>& table, cplx* row)
{
    fft::transform(n, M, row, -1);
    for (std::size_t p = 0; p < table.size(); ++p) row[p] *= table[p];
    fft::transform(n, M, row, +1);
}

std::function<cplx(int, int)> power_factor(const Index& beta)
{
    return [beta](int d, int xi) { return ipow(double(xi), beta[d]); };
}

std::function<cplx(int, int)> falling_factor(const Index& beta)
{
    return [beta](int d, int xi) {
        double v = 1.0;
        for (int i = 0; i < beta[d]; ++i) v *= double(xi - i);
        return cplx(v);
    };
}

void require_same_box(const SampledSymbol& a, const SampledSymbol& b)
{
    if (a.box() != b.box()) throw DomainError("symbols live on different boxes");
}

}  // namespace

int order(const Index& alpha)
{
    int s = 0;
    for (int a : alpha) s += a;
    return s;
}

double factorial(int m)
{
    static const double table[] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880, 3628800, 39916800, 479001600};
    if (m < 0) throw DomainError("negative factorial");
    if (m <= 12) return table[m];
    return std::tgamma(m + 1.0);
}

double factorial(const Index& alpha)
{
    double f = 1.0;
    for (int a : alpha) f *= factorial(a);
    return f;
}

double binomial(int a, int b)
{
    if (b < 0 || b > a) return 0.0;
    return factorial(a) / (factorial(b) * factorial(a - b));
}

std::vector<Index> multi_indices_of_order(int n, int m)
{
    std::vector<Index> out;
    Index cur(n, 0);
    std::function<void(int, int)> rec = [&](int d, int left) {
        if (d == n - 1) {
            cur[d] = left;
            out.push_back(cur);
            return;
        }
        for (int v = left; v >= 0; --v) {
            cur[d] = v;
            rec(d + 1, left - v);
        }
    };
    rec(0, m);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Index> multi_indices(int n, int max_order)
{
    std::vector<Index> out;
    for (int m = 0; m < max_order; ++m) {
        auto part = multi_indices_of_order(n, m);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

SampledSymbol::SampledSymbol(const LatticeBox& box, std::vector<cplx> samples)
    : box_(box), cache_(std::make_shared<Cache>())
{
    double total = double(box.size()) * double(box.size());
    if (total > double(caps().symbol))
        throw ResourceError("symbol on " + box.str() + " exceeds the sample cap");
    if (samples.size() != box.size() * box.size()) throw DomainError("symbol sample count does not match box");
    require_finite(samples, "symbol samples");
    samples_ = std::make_shared<const std::vector<cplx>>(std::move(samples));
}

const std::vector<cplx>& SampledSymbol::kappa() const
{
    std::call_once(cache_->once, [this] {
        const std::size_t K = rows(), X = cols();
        std::vector<cplx> out(K * X);
        const int n = box_.n(), M = box_.M();
        const double w = 1.0 / double(X);
#pragma omp parallel
        {
            std::vector<cplx> buf(X);
#pragma omp for schedule(static)
            for (std::ptrdiff_t k = 0; k < std::ptrdiff_t(K); ++k) {
                std::copy(row(k), row(k) + X, buf.begin());
                fft::transform(n, M, buf.data(), +1);
                cplx* dst = out.data() + k * X;
                fft::from_buffer(box_, buf.data(), dst);
                for (std::size_t l = 0; l < X; ++l) dst[l] *= w;
            }
        }
        cache_->kappa = std::move(out);
    });
    return cache_->kappa;
}

SampledSymbol sample(const SymbolDefinition& def, const LatticeBox& box, const TorusGrid& grid)
{
    if (!grid.matches(box)) throw DomainError("sample: grid does not match box");
    const std::size_t K = box.size(), X = grid.size();
    if (double(K) * double(X) > double(caps().symbol))
        throw ResourceError("symbol on " + box.str() + " exceeds the sample cap");
    std::vector<cplx> s(K * X);
    std::vector<Index> points(K);
    std::vector<std::vector<double>> nodes(X);
    for (std::size_t k = 0; k < K; ++k) points[k] = box.point(k);
    for (std::size_t j = 0; j < X; ++j) nodes[j] = grid.point(j);
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t j = 0; j < X; ++j) {
            cplx v = def.eval(points[k], nodes[j]);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw DomainError("symbol '" + def.name + "' is not finite at k=" + format_point(points[k]) +
                                  " x=" + format_point(nodes[j]));
            s[k * X + j] = v;
        }
    return SampledSymbol(box, std::move(s));
}

SampledSymbol sample(const SymbolFn& fn, const LatticeBox& box)
{
    return sample(SymbolDefinition{"", fn, {}}, box, TorusGrid(box));
}

SampledSymbol constant_symbol(const LatticeBox& box, cplx c)
{
    return SampledSymbol(box, std::vector<cplx>(box.size() * box.size(), c));
}

SampledSymbol add(const SampledSymbol& a, const SampledSymbol& b)
{
    require_same_box(a, b);
    std::vector<cplx> s = a.samples();
    const auto& t = b.samples();
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += t[i];
    return SampledSymbol(a.box(), std::move(s));
}

SampledSymbol subtract(const SampledSymbol& a, const SampledSymbol& b)
{
    require_same_box(a, b);
    std::vector<cplx> s = a.samples();
    const auto& t = b.samples();
    for (std::size_t i = 0; i < s.size(); ++i) s[i] -= t[i];
    return SampledSymbol(a.box(), std::move(s));
}

SampledSymbol multiply(const SampledSymbol& a, const SampledSymbol& b)
{
    require_same_box(a, b);
    std::vector<cplx> s = a.samples();
    const auto& t = b.samples();
    for (std::size_t i = 0; i < s.size(); ++i) s[i] *= t[i];
    return SampledSymbol(a.box(), std::move(s));
}

SampledSymbol scale(const SampledSymbol& a, cplx c)
{
    std::vector<cplx> s = a.samples();
    for (auto& v : s) v *= c;
    return SampledSymbol(a.box(), std::move(s));
}

SampledSymbol conjugate(const SampledSymbol& a)
{
    std::vector<cplx> s = a.samples();
    for (auto& v : s) v = std::conj(v);
    return SampledSymbol(a.box(), std::move(s));
}

SampledSymbol reflect_x(const SampledSymbol& a)
{
    const TorusGrid grid = a.grid();
    const std::size_t K = a.rows(), X = a.cols();
    std::vector<std::size_t> perm(X);
    for (std::size_t j = 0; j < X; ++j) {
        Index node = grid.node(j);
        for (auto& c : node) c = -c;
        perm[j] = grid.index(node);
    }
    std::vector<cplx> s(K * X);
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t j = 0; j < X; ++j) s[k * X + j] = a(k, perm[j]);
    return SampledSymbol(a.box(), std::move(s));
}

SampledSymbol shift_k(const SampledSymbol& a, const Index& v)
{
    const LatticeBox& box = a.box();
    if (int(v.size()) != box.n()) throw DomainError("shift vector has wrong dimension");
    const std::size_t K = a.rows(), X = a.cols();
    std::vector<cplx> s(K * X);
    for (std::size_t k = 0; k < K; ++k) {
        const cplx* src = a.row(box.wrap_sum(k, v));
        std::copy(src, src + X, s.begin() + k * X);
    }
    return SampledSymbol(box, std::move(s));
}

double max_abs_diff(const SampledSymbol& a, const SampledSymbol& b)
{
    require_same_box(a, b);
    return max_abs_diff(a.samples(), b.samples());
}

bool is_row_constant(const SampledSymbol& a, double tol)
{
    const std::size_t K = a.rows(), X = a.cols();
    double scale = std::max(1.0, max_abs(a.samples()));
    for (std::size_t k = 1; k < K; ++k)
        for (std::size_t j = 0; j < X; ++j)
            if (std::abs(a(k, j) - a(0, j)) > tol * scale) return false;
    return true;
}

SampledSymbol forward_difference(const SampledSymbol& s, const Index& alpha)
{
    const int n = s.box().n();
    if (int(alpha.size()) != n) throw DomainError("multi-index has wrong dimension");
    SampledSymbol cur = s;
    for (int d = 0; d < n; ++d) {
        if (alpha[d] < 0) throw DomainError("negative multi-index entry");
        Index v(n, 0);
        v[d] = 1;
        for (int r = 0; r < alpha[d]; ++r) cur = subtract(shift_k(cur, v), cur);
    }
    return cur;
}

SampledSymbol generalized_difference(const SampledSymbol& s, const TorusFunction& q)
{
    const LatticeBox& box = s.box();
    if (!q.grid.matches(box)) throw DomainError("generalized_difference: q grid does not match box");
    const std::size_t K = s.rows(), X = s.cols();
    const int n = box.n(), M = box.M();
    std::vector<cplx> out(K * X);
#pragma omp parallel
    {
        std::vector<cplx> col(K), buf(K);
#pragma omp for schedule(static)
        for (std::ptrdiff_t j = 0; j < std::ptrdiff_t(X); ++j) {
            for (std::size_t k = 0; k < K; ++k) col[k] = s(k, j);
            fft::to_buffer(box, col.data(), buf.data());
            fft::transform(n, M, buf.data(), -1);
            for (std::size_t y = 0; y < K; ++y) buf[y] *= q[y];
            fft::transform(n, M, buf.data(), +1);
            fft::from_buffer(box, buf.data(), col.data());
            for (std::size_t k = 0; k < K; ++k) out[k * X + j] = col[k] / double(K);
        }
    }
    return SampledSymbol(box, std::move(out));
}

SampledSymbol x_multiplier(const SampledSymbol& s, const std::function<cplx(int, int)>& factor)
{
    const LatticeBox& box = s.box();
    const int n = box.n(), M = box.M();
    const std::size_t K = s.rows(), X = s.cols();
    const std::vector<cplx> table = multiplier_table(n, M, factor);
    std::vector<cplx> out = s.samples();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < std::ptrdiff_t(K); ++k) apply_multiplier_row(n, M, table, out.data() + k * X);
    return SampledSymbol(box, std::move(out));
}

SampledSymbol x_derivative(const SampledSymbol& s, const Index& beta)
{
    if (order(beta) == 0) return s;
    return x_multiplier(s, power_factor(beta));
}

SampledSymbol x_partial(const SampledSymbol& s, const Index& beta)
{
    if (order(beta) == 0) return s;
    return x_multiplier(s, [beta](int d, int xi) { return ipow(cplx(0.0, kTwoPi * xi), beta[d]); });
}

SampledSymbol falling_derivative(const SampledSymbol& s, const Index& beta)
{
    if (order(beta) == 0) return s;
    return x_multiplier(s, falling_factor(beta));
}

namespace {

TorusFunction multiply_torus(const TorusFunction& h, const std::function<cplx(int, int)>& factor)
{
    const int n = h.grid.n(), M = h.grid.M();
    TorusFunction out = h;
    apply_multiplier_row(n, M, multiplier_table(n, M, factor), out.values.data());
    return out;
}

}  // namespace

TorusFunction x_derivative(const TorusFunction& h, const Index& beta)
{
    return multiply_torus(h, power_factor(beta));
}

TorusFunction falling_derivative(const TorusFunction& h, const Index& beta)
{
    return multiply_torus(h, falling_factor(beta));
}

double seminorm_estimate(const SampledSymbol& s, const Index& alpha, const Index& beta,
                         const SymbolClassParams& params)
{
    SampledSymbol t = falling_derivative(forward_difference(s, alpha), beta);
    const double e = params.mu - params.rho * order(alpha) + params.delta * order(beta);
    const LatticeBox& box = s.box();
    const int limit = box.N() - order(alpha);
    double best = 0.0;
    for (std::size_t k = 0; k < t.rows(); ++k) {
        if (box.sup_norm(k) > limit) continue;
        const double w = std::pow(1.0 + box.norm(k), -e);
        const cplx* r = t.row(k);
        for (std::size_t j = 0; j < t.cols(); ++j) best = std::max(best, std::abs(r[j]) * w);
    }
    return best;
}

double amplitude_seminorm_estimate(const AmplitudeDefinition& a, const LatticeBox& box, const Index& alpha,
                                   const Index& beta, const Index& gamma)
{
    if (box.size() > caps().dense) throw ResourceError("amplitude seminorm: box exceeds dense cap");
    const TorusGrid grid(box);
    const int n = box.n(), M = box.M();
    const std::size_t K = box.size(), X = grid.size();
    const int ga = order(gamma);
    const auto sub_a = multi_indices(n, order(alpha) + 1);
    const auto sub_b = multi_indices(n, order(beta) + 1);
    auto le = [](const Index& x, const Index& y) {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] > y[i]) return false;
        return true;
    };
    auto coeff = [](const Index& sub, const Index& full) {
        double c = 1.0;
        for (std::size_t i = 0; i < sub.size(); ++i)
            c *= binomial(full[i], sub[i]) * (((full[i] - sub[i]) % 2) ? -1.0 : 1.0);
        return c;
    };
    const std::vector<cplx> table = multiplier_table(n, M, falling_factor(gamma));
    std::vector<std::vector<double>> nodes(X);
    for (std::size_t j = 0; j < X; ++j) nodes[j] = grid.point(j);

    std::vector<double> best(ga + 1, 0.0);
    std::vector<cplx> row(X);
    for (std::size_t k = 0; k < K; ++k) {
        if (box.sup_norm(k) > box.N() - order(alpha)) continue;
        for (std::size_t l = 0; l < K; ++l) {
            if (box.sup_norm(l) > box.N() - order(beta)) continue;
            std::fill(row.begin(), row.end(), cplx(0));
            for (const auto& a1 : sub_a) {
                if (!le(a1, alpha)) continue;
                Index kk = box.point(box.wrap_sum(k, a1));
                for (const auto& b1 : sub_b) {
                    if (!le(b1, beta)) continue;
                    Index ll = box.point(box.wrap_sum(l, b1));
                    const double c = coeff(a1, alpha) * coeff(b1, beta);
                    for (std::size_t j = 0; j < X; ++j) row[j] += c * a.eval(kk, ll, nodes[j]);
                }
            }
            if (ga > 0) apply_multiplier_row(n, M, table, row.data());
            double m = 0;
            for (const auto& v : row) m = std::max(m, std::abs(v));
            for (int J = 0; J <= ga; ++J) {
                double wk = std::pow(1.0 + box.norm(k), -(a.mu1 - a.rho * order(alpha) + a.delta * J));
                double wl = std::pow(1.0 + box.norm(l), -(a.mu2 - a.rho * order(beta) + a.delta * (ga - J)));
                best[J] = std::max(best[J], m * wk * wl);
            }
        }
    }
    return *std::min_element(best.begin(), best.end());
}

double order_fit(const SampledSymbol& s, const OrderFitOptions& opt)
{
    const LatticeBox& box = s.box();
    if (box.N() < 4) throw DomainError("order_fit needs N >= 4");
    std::map<int, std::pair<double, double>> sums;
    std::map<int, int> counts;
    for (std::size_t k = 0; k < s.rows(); ++k) {
        if (box.sup_norm(k) > box.N() - opt.margin) continue;
        const double r = 1.0 + box.norm(k);
        if (r < opt.min_radius) continue;
        double m = 0;
        const cplx* row = s.row(k);
        for (std::size_t j = 0; j < s.cols(); ++j) m = std::max(m, std::abs(row[j]));
        if (m == 0.0) continue;
        const int shell = int(std::floor(std::log2(r) + 1e-12));
        sums[shell].first += std::log(r);
        sums[shell].second += std::log(m);
        counts[shell] += 1;
    }
    if (sums.size() < 2) throw DomainError("order_fit: fewer than two non-empty shells");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double cnt = double(sums.size());
    for (const auto& [shell, p] : sums) {
        const double x = p.first / counts[shell], y = p.second / counts[shell];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = cnt * sxx - sx * sx;
    if (den <= 0) throw DomainError("order_fit: degenerate shells");
    return (cnt * sxy - sx * sy) / den;
}

std::string EllipticityResult::witness() const
{
    std::ostringstream os;
    os.precision(17);
    os << "k=" << format_point(witness_k) << " x=" << format_point(witness_x) << " C=" << C;
    return os.str();
}

EllipticityResult ellipticity_check(const SampledSymbol& s, double mu, double M_cut)
{
    const LatticeBox& box = s.box();
    if (!(M_cut < box.N())) throw DomainError("ellipticity_check: M_cut must be below N");
    const TorusGrid grid = s.grid();
    EllipticityResult res;
    res.C = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < s.rows(); ++k) {
        if (box.norm(k) < M_cut) continue;
        const double w = std::pow(1.0 + box.norm(k), -mu);
        for (std::size_t j = 0; j < s.cols(); ++j) {
            const double v = std::abs(s(k, j)) * w;
            if (v < res.C) {
                res.C = v;
                res.witness_k = box.point(k);
                res.witness_x = grid.point(j);
            }
        }
    }
    res.ok = res.C > kEllipticityThreshold;
    return res;
}

namespace {

// (g - g|_{y_axis=0}) / (e^{2 pi i y_axis} - 1), with D_{y_axis} g on y_axis = 0.
TorusFunction taylor_quotient(const TorusFunction& g, int axis)
{
    const TorusGrid& grid = g.grid;
    Index e(grid.n(), 0);
    e[axis] = 1;
    TorusFunction dg = x_derivative(g, e);
    TorusFunction out(grid);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        Index node = grid.node(j);
        const int t = node[axis];
        if (t == 0) {
            out[j] = dg[j];
            continue;
        }
        node[axis] = 0;
        const cplx z = std::polar(1.0, kTwoPi * t / grid.M());
        out[j] = (g[j] - g[grid.index(node)]) / (z - 1.0);
    }
    return out;
}

TorusFunction restrict_zero(const TorusFunction& g, int axis)
{
    TorusFunction out(g.grid);
    for (std::size_t j = 0; j < g.grid.size(); ++j) {
        Index node = g.grid.node(j);
        node[axis] = 0;
        out[j] = g[g.grid.index(node)];
    }
    return out;
}

void taylor_expand(const TorusFunction& g, int axis, int remaining, Index prefix, TaylorExpansion& out)
{
    const int n = g.grid.n();
    if (axis == n) {
        out.coefficients[prefix] = factorial(prefix) * g[0];
        return;
    }
    TorusFunction cur = g;
    for (int j = 0; j < remaining; ++j) {
        Index next = prefix;
        next.push_back(j);
        taylor_expand(restrict_zero(cur, axis), axis + 1, remaining - j, next, out);
        cur = taylor_quotient(cur, axis);
    }
    Index alpha = prefix;
    alpha.push_back(remaining);
    alpha.resize(n, 0);
    out.remainders[alpha] = cur;
}

}  // namespace

TaylorExpansion periodic_taylor(const TorusFunction& h, int N_order)
{
    if (N_order < 1) throw DomainError("periodic_taylor: order must be at least 1");
    TaylorExpansion out;
    out.order = N_order;
    taylor_expand(h, 0, N_order, {}, out);
    for (const auto& alpha : multi_indices_of_order(h.grid.n(), N_order))
        if (!out.remainders.count(alpha)) out.remainders.emplace(alpha, TorusFunction(h.grid));
    return out;
}

TorusFunction taylor_reconstruct(const TaylorExpansion& t, const TorusGrid& grid)
{
    TorusFunction out(grid);
    auto monomial = [&](const Index& alpha, std::size_t j) {
        cplx v = 1.0;
        Index node = grid.node(j);
        for (int d = 0; d < grid.n(); ++d)
            v *= ipow(std::polar(1.0, kTwoPi * node[d] / grid.M()) - 1.0, alpha[d]);
        return v;
    };
    for (std::size_t j = 0; j < grid.size(); ++j) {
        cplx v = 0;
        for (const auto& [alpha, c] : t.coefficients) v += c / factorial(alpha) * monomial(alpha, j);
        for (const auto& [alpha, r] : t.remainders) v += r[j] * monomial(alpha, j);
        out[j] = v;
    }
    return out;
}

}  // namespace pdz
