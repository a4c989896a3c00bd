#include "pdz/analysis.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "pdz/errors.hpp"

namespace pdz {

namespace {

std::string point_str(const Index& k)
{
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < k.size(); ++i) os << (i ? "," : "") << k[i];
    os << ")";
    return os.str();
}

double lp_norm(const Eigen::VectorXcd& v, double p)
{
    double s = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]), p);
    return std::pow(s, 1.0 / p);
}

// x -> |x|^{p-1} sign(x), the duality map of l^p (unnormalized).
Eigen::VectorXcd duality(const Eigen::VectorXcd& v, double p)
{
    Eigen::VectorXcd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        out[i] = a > 0 ? std::pow(a, p - 1) * (v[i] / a) : cplx(0);
    }
    return out;
}

}  // namespace

double hs_norm(const SampledSymbol& s)
{
    double acc = 0;
    for (const auto& v : s.samples()) acc += std::norm(v);
    return std::sqrt(acc / double(s.cols()));
}

cplx trace(const SampledSymbol& s)
{
    cplx acc = 0;
    for (std::size_t k = 0; k < s.rows(); ++k) {
        cplx r = 0;
        const cplx* row = s.row(k);
        for (std::size_t j = 0; j < s.cols(); ++j) r += row[j];
        acc += r / double(s.cols());
    }
    return acc;
}

std::vector<double> singular_values(const OperatorMatrix& A)
{
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(A.a);
    const auto& sv = svd.singularValues();
    return std::vector<double>(sv.data(), sv.data() + sv.size());
}

SchattenResult schatten(const SampledSymbol& s, double p)
{
    if (!(p > 0)) throw DomainError("schatten: p must be positive");
    SchattenResult r;
    r.p = p;
    double acc = 0;
    for (double v : singular_values(matrix(s))) acc += std::pow(v, p);
    r.S_p = std::pow(acc, 1.0 / p);

    const double X = double(s.cols());
    const double q = p <= 2 ? 2.0 : p / (p - 1);   // x-norm exponent
    const double e = p <= 2 ? p : q;                // outer exponent
    double outer = 0;
    for (std::size_t k = 0; k < s.rows(); ++k) {
        double in = 0;
        const cplx* row = s.row(k);
        for (std::size_t j = 0; j < s.cols(); ++j) in += std::pow(std::abs(row[j]), q);
        outer += std::pow(in / X, e / q);
    }
    r.B_p = std::pow(outer, 1.0 / e);
    r.holds = r.S_p <= r.B_p * (1 + 1e-10) + 1e-300;
    return r;
}

DiagnosticsReport schatten_report(const SampledSymbol& s, double p)
{
    const SchattenResult r = schatten(s, p);
    DiagnosticsReport rep;
    const std::string sec = "schatten p=" + format_double(p);
    rep.set(sec, "S_p", r.S_p);
    rep.set(sec, "B_p", r.B_p);
    rep.flag(sec, "S_p_le_B_p", r.holds, "S_p=" + format_double(r.S_p) + " B_p=" + format_double(r.B_p));
    if (p == 2) {
        const double gap = std::abs(r.S_p - r.B_p) / std::max(r.B_p, 1e-300);
        rep.flag(sec, "equality", gap <= 1e-10, "relative_gap=" + format_double(gap));
    }
    return rep;
}

DecayResult kernel_decay(const SampledSymbol& s, int N_t, double mu_decl)
{
    const LatticeBox& box = s.box();
    if (N_t < 0 || N_t > 3) throw DomainError("kernel_decay: N_t must be in 0..3");
    if (box.N() < 8) throw DomainError("kernel_decay: box N must be at least 8");
    const int n = box.n();
    DecayResult r;
    r.N_t = N_t;
    for (std::size_t k = 0; k < s.rows(); ++k) {
        const double wk = std::pow(1.0 + box.norm(k), -mu_decl);
        for (std::size_t m = 0; m < s.rows(); ++m) {
            double d2 = 0;
            for (int d = 0; d < n; ++d) {
                const double t = box.coord(k, d) - box.coord(m, d);
                d2 += t * t;
            }
            const double dist = std::sqrt(d2);
            if (dist > box.N()) continue;
            const double v = std::abs(s.kappa(k, box.wrap_diff(k, m))) * wk * std::pow(1.0 + dist, 2.0 * N_t);
            if (v > r.C) {
                r.C = v;
                r.witness_k = box.point(k);
                r.witness_m = box.point(m);
            }
        }
    }
    return r;
}

DiagnosticsReport kernel_decay_fit(const SampledSymbol& s, int N_t, double mu_decl)
{
    const DecayResult r = kernel_decay(s, N_t, mu_decl);
    DiagnosticsReport rep;
    const std::string sec = "kernel_decay N_t=" + std::to_string(N_t);
    rep.set(sec, "C", r.C);
    rep.set(sec, "witness", "k=" + point_str(r.witness_k) + " m=" + point_str(r.witness_m));
    return rep;
}

int kernel_bandwidth(const SampledSymbol& s, double tol)
{
    const LatticeBox& box = s.box();
    const auto& kap = s.kappa();
    const double top = max_abs(kap);
    int band = 0;
    for (std::size_t k = 0; k < s.rows(); ++k)
        for (std::size_t l = 0; l < s.cols(); ++l)
            if (std::abs(kap[k * s.cols() + l]) > tol * top) band = std::max(band, box.sup_norm(l));
    return band;
}

LpResult lp_bound(const SampledSymbol& s, double p, std::uint64_t seed, int random_probes)
{
    if (!(p >= 1)) throw DomainError("lp_bound: p must be at least 1");
    const std::size_t S = s.rows();
    LpResult r;
    r.p = p;
    std::vector<double> omega(S, 0.0);
    for (std::size_t k = 0; k < S; ++k)
        for (std::size_t l = 0; l < S; ++l) omega[l] = std::max(omega[l], std::abs(s.kappa(k, l)));
    for (double w : omega) r.bound += w;

    const Eigen::MatrixXcd A = matrix(s).a;
    auto ratio = [&](const Eigen::VectorXcd& x) {
        const double nx = lp_norm(x, p);
        return nx > 0 ? lp_norm(A * x, p) / nx : 0.0;
    };
    for (std::size_t m = 0; m < S; ++m) r.estimate = std::max(r.estimate, lp_norm(A.col(m), p));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    const double pd = p > 1 ? p / (p - 1) : 0.0;
    for (int t = 0; t < random_probes; ++t) {
        Eigen::VectorXcd x(S);
        for (std::size_t i = 0; i < S; ++i) x[i] = cplx(normal(rng), normal(rng));
        r.estimate = std::max(r.estimate, ratio(x));
        if (p > 1) {
            // Boyd's power iteration for the l^p operator norm.
            double last = 0;
            for (int it = 0; it < 200; ++it) {
                Eigen::VectorXcd y = A * x;
                if (lp_norm(y, p) == 0) break;
                Eigen::VectorXcd z = A.adjoint() * duality(y, p);
                if (lp_norm(z, pd) == 0) break;
                x = duality(z, pd);
                x /= lp_norm(x, p);
                const double q = ratio(x);
                r.estimate = std::max(r.estimate, q);
                if (std::abs(q - last) <= 1e-12 * q) break;
                last = q;
            }
        }
    }
    r.holds = r.estimate <= r.bound * (1 + 1e-12);
    return r;
}

DiagnosticsReport lp_bound_report(const SampledSymbol& s, double p, std::uint64_t seed)
{
    const LpResult r = lp_bound(s, p, seed);
    DiagnosticsReport rep;
    const std::string sec = "lp p=" + format_double(p);
    rep.set(sec, "omega_l1", r.bound);
    rep.set(sec, "empirical_norm", r.estimate);
    rep.flag(sec, "estimate_le_bound", r.holds,
             "estimate=" + format_double(r.estimate) + " bound=" + format_double(r.bound));
    return rep;
}

double compactness_tail(const SampledSymbol& s, int cut, double p)
{
    const LatticeBox& box = s.box();
    if (!(cut < box.N())) throw DomainError("compactness_tail: cut must be below N");
    if (!(p >= 1)) throw DomainError("compactness_tail: p must be at least 1");
    double tail = 0;
    for (std::size_t k = 0; k < s.rows(); ++k) {
        if (!(box.norm(k) > cut)) continue;
        double row = 0;
        for (std::size_t l = 0; l < s.cols(); ++l) row += std::abs(s.kappa(k, l));
        tail = std::max(tail, row);
    }
    return tail;
}

double weighted_norm(const LatticeSequence& f, const WeightedNormParams& params)
{
    if (!(params.p >= 1)) throw DomainError("weighted_norm: p must be at least 1");
    double acc = 0;
    for (std::size_t k = 0; k < f.values.size(); ++k)
        acc += std::pow(1.0 + f.box.norm(k), params.s * params.p) * std::pow(std::abs(f.values[k]), params.p);
    return std::pow(acc, 1.0 / params.p);
}

double operator_norm(const Eigen::MatrixXcd& A, double tol, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::VectorXcd v(A.cols());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = cplx(normal(rng), normal(rng));
    v.normalize();
    double prev = 0;
    for (int it = 0; it < 100000; ++it) {
        const Eigen::VectorXcd w = A * v;
        const double est = w.norm();
        if (est == 0) return 0.0;
        Eigen::VectorXcd u = A.adjoint() * w;
        const double un = u.norm();
        if (un == 0) return est;
        v = u / un;
        if (it > 0 && std::abs(est - prev) <= tol * est) return est;
        prev = est;
    }
    return prev;
}

double weighted_operator_norm(const SampledSymbol& s, double weight_s, double mu)
{
    const LatticeBox& box = s.box();
    Eigen::MatrixXcd A = matrix(s).a;
    for (Eigen::Index k = 0; k < A.rows(); ++k) A.row(k) *= std::pow(1.0 + box.norm(k), weight_s - mu);
    for (Eigen::Index m = 0; m < A.cols(); ++m) A.col(m) *= std::pow(1.0 + box.norm(m), -weight_s);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(A);
    return svd.singularValues()[0];
}

MikhlinResult mikhlin_norms(const SymbolDefinition& def, int n, const std::vector<int>& sizes)
{
    MikhlinResult r;
    for (int N : sizes) {
        LatticeBox box(n, N);
        r.sizes.push_back(N);
        r.norms.push_back(operator_norm(matrix(sample(def, box, TorusGrid(box))).a));
    }
    return r;
}

DiagnosticsReport mikhlin_uniformity(const SymbolDefinition& def, int n, const std::vector<int>& sizes)
{
    const MikhlinResult r = mikhlin_norms(def, n, sizes);
    DiagnosticsReport rep;
    double lo = INFINITY, hi = 0;
    for (std::size_t i = 0; i < r.sizes.size(); ++i) {
        rep.set("mikhlin", "norm N=" + std::to_string(r.sizes[i]), r.norms[i]);
        lo = std::min(lo, r.norms[i]);
        hi = std::max(hi, r.norms[i]);
    }
    rep.set("mikhlin", "max", hi);
    rep.set("mikhlin", "spread", lo > 0 ? hi / lo - 1.0 : INFINITY);
    return rep;
}

}  // namespace pdz
