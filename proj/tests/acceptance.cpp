// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <sys/wait.h>

#include <Eigen/Eigenvalues>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "helpers.hpp"
#include "pdz/analysis.hpp"
#include "pdz/calculus.hpp"
#include "pdz/errors.hpp"
#include "pdz/fourier.hpp"
#include "pdz/quantize.hpp"
#include "pdz/solver.hpp"

using namespace pdz;
using namespace testing_util;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Eigen::MatrixXcd M(const SampledSymbol& s) { return matrix(s).a; }
double dmax(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

SampledSymbol character(const LatticeBox& box, int d, int axis = 0)
{
    return sample([=](const Index&, const std::vector<double>& x) { return std::polar(1.0, kTwoPi * d * x[axis]); },
                  box);
}

SampledSymbol example3(const LatticeBox& box, double a)
{
    return sample([=](const Index&, const std::vector<double>& x) {
        cplx s = a;
        for (double xi : x) s += cplx(0, 2.0 * std::sin(kTwoPi * xi));
        return s;
    }, box);
}

Outcome fourier_layer()
{
    std::mt19937_64 rng(1001);
    double worst_rt = 0, worst_pl = 0;
    for (auto [n, N] : {std::pair{1, 8}, std::pair{2, 4}}) {
        LatticeBox box(n, N);
        for (int t = 0; t < 100; ++t) {
            auto f = random_sequence(box, rng);
            auto g = inverse_fourier(forward_fourier(f), box);
            worst_rt = std::max(worst_rt, max_abs_diff(g.values, f.values) / max_abs(f.values));
            double e = 0;
            for (auto v : f.values) e += std::norm(v);
            worst_pl = std::max(worst_pl, plancherel_defect(f) / e);
        }
    }
    return {worst_rt <= 1e-12 && worst_pl <= 1e-12,
            "round trip " + fmt("%.2e", worst_rt) + ", Plancherel " + fmt("%.2e", worst_pl)};
}

Outcome three_paths()
{
    std::mt19937_64 rng(1002);
    double worst = 0;
    for (auto [n, N] : {std::pair{1, 2}, std::pair{1, 4}, std::pair{1, 8}, std::pair{2, 2}, std::pair{2, 4}}) {
        LatticeBox box(n, N);
        for (int t = 0; t < 50; ++t) {
            auto s = random_symbol(box, rng);
            auto f = random_sequence(box, rng);
            auto a = apply(s, f);
            const double scale = max_abs(f.values);
            worst = std::max(worst, max_abs_diff(a.values, apply_kernel(kernel(s), f).values) / scale);
            worst = std::max(worst, max_abs_diff(a.values, matvec(matrix(s), f).values) / scale);
        }
    }
    return {worst <= 1e-11, "max defect / |f|_inf " + fmt("%.2e", worst)};
}

Outcome symbol_round_trip()
{
    std::mt19937_64 rng(1003);
    double worst = 0;
    for (auto [n, N] : {std::pair{1, 4}, std::pair{1, 8}, std::pair{2, 2}, std::pair{2, 4}})
        for (int t = 0; t < 10; ++t) {
            auto s = random_symbol(LatticeBox(n, N), rng);
            worst = std::max(worst, max_abs_diff(symbol_from_operator(matrix(s)), s));
        }
    return {worst <= 1e-11, "max defect " + fmt("%.2e", worst)};
}

Outcome example1()
{
    std::mt19937_64 rng(1004);
    LatticeBox box(2, 4);
    auto f = random_sequence(box, rng);
    double worst = 0;
    bool witnessed = true;
    std::string witness;
    for (int j = 0; j < 2; ++j) {
        auto a = subtract(character(box, 1, j), constant_symbol(box, 1.0));
        Index v(2, 0);
        v[j] = 1;
        auto out = apply(a, f);
        for (std::size_t k = 0; k < box.size(); ++k)
            worst = std::max(worst, std::abs(out[k] - (f[box.wrap_sum(k, v)] - f[k])));
        auto e = ellipticity_check(a, 0, 0);
        witnessed = witnessed && !e.ok && e.witness_x[j] == 0.0;
        witness = e.witness();
    }
    return {worst <= 1e-13 && witnessed, "action defect " + fmt("%.2e", worst) + ", witness " + witness};
}

Outcome example3_solver()
{
    std::mt19937_64 rng(1005);
    LatticeBox box(1, 16);
    auto s = example3(box, 1.0);
    double worst = 0;
    std::vector<LatticeSequence> gs{LatticeSequence::delta(box, {0})};
    for (int t = 0; t < 20; ++t) gs.push_back(random_sequence(box, rng));
    for (const auto& g : gs) {
        auto r = invert_multiplier(s, g);
        worst = std::max(worst, max_abs_diff(apply(s, r.solution).values, g.values));
    }
    // Transfer constant for g = (1+|k|)^{-s-1/2-1/2}, which lies in the weighted space.
    double spread = 0;
    std::string ratios;
    for (double sw : {0.0, 2.0}) {
        std::vector<double> c;
        for (int N : {8, 16, 32}) {
            LatticeBox b(1, N);
            LatticeSequence g(b);
            for (std::size_t k = 0; k < b.size(); ++k) g[k] = std::pow(1.0 + b.norm(k), -sw - 1.0);
            auto r = invert_multiplier(example3(b, 1.0), g);
            c.push_back(weighted_norm(r.solution, {sw, 2}) / weighted_norm(g, {sw, 2}));
            ratios += fmt(" %.3f", c.back());
        }
        spread = std::max(spread, *std::max_element(c.begin(), c.end()) / *std::min_element(c.begin(), c.end()) - 1);
    }
    return {worst <= 1e-10 && spread <= 0.1,
            "residual " + fmt("%.2e", worst) + ", transfer ratios" + ratios + " (spread " + fmt("%.3f", spread) + ")"};
}

Outcome composition()
{
    std::mt19937_64 rng(1006);
    double worst = 0;
    for (int n : {1, 2})
        for (int t = 0; t < 5; ++t) {
            LatticeBox b(n, n == 1 ? 5 : 2);
            const int hi = n == 1 ? 2 : 1;
            auto s = random_trig_symbol(b, 0, hi, 2, rng);
            auto u = random_symbol(b, rng);
            worst = std::max(worst, dmax(M(s) * M(u), M(compose(s, u, n * hi + 1))));
        }
    LatticeBox box(1, 6);
    auto e = character(box, 1);
    auto a = sample([](const Index& k, const std::vector<double>&) { return cplx(1.0 + 0.5 * k[0] - 0.1 * k[0] * k[0]); },
                    box);
    auto c2 = compose(e, a, 2);
    const double pair = std::max(max_abs_diff(c2, multiply(e, shift_k(a, {1}))), dmax(M(e) * M(a), M(c2)));
    return {worst <= 1e-10 && pair <= 1e-12,
            "finite-exact family " + fmt("%.2e", worst) + ", shift/multiplier pair " + fmt("%.2e", pair)};
}

Outcome adjoint_transpose()
{
    std::mt19937_64 rng(1007);
    double adj = 0, tr = 0, dual = 0;
    for (int n : {1, 2})
        for (int t = 0; t < 5; ++t) {
            LatticeBox b(n, n == 1 ? 5 : 2);
            const int hi = n == 1 ? 2 : 1;
            auto s = random_trig_symbol(b, -hi, 0, 2, rng);
            const int order = n * hi + 1;
            adj = std::max(adj, dmax(M(adjoint(s, order)), M(s).adjoint()));
            auto st = transpose(s, order);
            tr = std::max(tr, dmax(M(st), M(s).transpose()));
            auto f = random_sequence(b, rng), g = random_sequence(b, rng);
            auto Tf = apply(st, f), Tg = apply(s, g);
            cplx lhs = 0, rhs = 0;
            for (std::size_t k = 0; k < b.size(); ++k) {
                lhs += Tf[k] * g[k];
                rhs += f[k] * Tg[k];
            }
            dual = std::max(dual, std::abs(lhs - rhs) / std::abs(rhs));
        }
    return {adj <= 1e-10 && tr <= 1e-10 && dual <= 1e-11,
            "adjoint " + fmt("%.2e", adj) + ", transpose " + fmt("%.2e", tr) + ", duality " + fmt("%.2e", dual)};
}

Outcome parametrix_orders()
{
    LatticeBox box(1, 64);
    auto a = sample([](const Index& k, const std::vector<double>& x) {
        return cplx(1.0 + double(k[0]) * k[0]) + std::polar(1.0, kTwoPi * x[0]);
    }, box);
    auto B = parametrix(SymbolExpansion({a}, {2.0}), 2.0, 4);
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(box.size(), box.size());
    std::vector<double> slope;
    for (int m = 1; m <= 4; ++m) {
        auto r = symbol_from_operator(OperatorMatrix{box, I - M(partial_sum(B, m)) * M(a)});
        slope.push_back(order_fit(r, {4, 4}));
    }
    double min_dec = 1e300;
    std::string list;
    for (int i = 0; i < 4; ++i) list += fmt(" %.2f", slope[i]);
    for (int i = 1; i < 4; ++i) min_dec = std::min(min_dec, slope[i - 1] - slope[i]);

    LatticeBox small(1, 8);
    auto t = example3(small, 3.0);
    auto Bt = parametrix(SymbolExpansion({t}, {0.0}), 0.0, 3);
    const Eigen::MatrixXcd Is = Eigen::MatrixXcd::Identity(small.size(), small.size());
    const double exact = dmax(M(partial_sum(Bt, 3)) * M(t), Is);
    return {min_dec >= 0.7 && exact <= 1e-11,
            "residual slopes" + list + ", min decrement " + fmt("%.2f", min_dec) + ", k-independent inverse " +
                fmt("%.2e", exact)};
}

Outcome kernel_theorem()
{
    std::vector<std::function<SampledSymbol(int)>> fixtures{
        [](int N) {
            return sample([](const Index&, const std::vector<double>& x) {
                return cplx(1.0 / (2.0 + std::cos(kTwoPi * x[0])));
            }, LatticeBox(1, N));
        },
        [](int N) {
            return sample([](const Index& k, const std::vector<double>& x) {
                return (1.0 + 1.0 / (1.0 + std::abs(double(k[0])))) * std::exp(std::polar(0.8, kTwoPi * x[0]));
            }, LatticeBox(1, N));
        },
        [](int N) {
            return sample([](const Index& k, const std::vector<double>& x) {
                const double r = std::sqrt(double(k[0]) * k[0] + double(k[1]) * k[1]);
                return cplx(std::cos(r), 1.0) / (3.0 + std::cos(kTwoPi * x[0]) + std::sin(kTwoPi * x[1]));
            }, LatticeBox(2, N));
        },
    };
    double worst = 1;
    for (const auto& fx : fixtures) {
        auto s8 = fx(8), s16 = fx(16);
        for (int Nt : {1, 2, 3}) {
            const double r = kernel_decay(s16, Nt).C / kernel_decay(s8, Nt).C;
            worst = std::max({worst, r, 1.0 / r});
        }
    }
    std::mt19937_64 rng(1009);
    bool banded = true;
    for (int d : {1, 2, 3}) {
        auto s = random_trig_symbol(LatticeBox(1, 8), -d, d, 1, rng);
        banded = banded && kernel_bandwidth(s, 1e-12) == d;
    }
    return {worst <= 2.0 && banded,
            "worst C ratio N=16/N=8 " + fmt("%.3f", worst) + ", trig kernels banded " + (banded ? "yes" : "no")};
}

Outcome lattice_torus_link()
{
    std::mt19937_64 rng(1010);
    double worst = 0;
    for (auto [n, N] : {std::pair{1, 4}, std::pair{1, 8}, std::pair{2, 2}, std::pair{2, 3}})
        for (int t = 0; t < 20; ++t) worst = std::max(worst, link_defect(random_symbol(LatticeBox(n, N), rng)));
    return {worst <= 1e-10, "max link defect " + fmt("%.2e", worst)};
}

Outcome norms()
{
    std::mt19937_64 rng(1011);
    double hs = 0, tr_mat = 0, tr_eig = 0;
    bool schatten_ok = true;
    for (int t = 0; t < 50; ++t) {
        LatticeBox box(t % 2 ? 2 : 1, t % 2 ? 2 : 5);
        auto s = random_symbol(box, rng);
        const Eigen::MatrixXcd A = M(s);
        hs = std::max(hs, rel_err(hs_norm(s), A.norm()));
        const cplx tr = trace(s);
        tr_mat = std::max(tr_mat, std::abs(tr - A.trace()) / A.norm());
        const cplx eig = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(A).eigenvalues().sum();
        tr_eig = std::max(tr_eig, std::abs(tr - eig) / std::max(1.0, std::abs(tr)));
        if (t < 10) {
            for (double p : {1.0, 1.5, 2.0, 3.0, 4.0}) schatten_ok = schatten_ok && schatten(s, p).holds;
            schatten_ok = schatten_ok && schatten_report(s, 2).flag_value("schatten p=2", "equality");
        }
    }
    auto smooth = sample([](const Index& k, const std::vector<double>& x) {
        return cplx(1.0 / (2.0 + std::cos(kTwoPi * x[0])), 1.0 / (1.0 + std::abs(double(k[0]))));
    }, LatticeBox(1, 8));
    for (double p : {1.0, 1.5, 2.0, 3.0, 4.0}) schatten_ok = schatten_ok && schatten(smooth, p).holds;
    return {hs <= 1e-10 && tr_mat <= 1e-13 && tr_eig <= 1e-8 && schatten_ok,
            "HS " + fmt("%.2e", hs) + ", trace vs matrix " + fmt("%.2e", tr_mat) + ", vs eigenvalues " +
                fmt("%.2e", tr_eig) + ", Schatten " + (schatten_ok ? "ok" : "violated")};
}

Outcome mikhlin()
{
    SymbolDefinition parity{"parity", [](const Index& k, const std::vector<double>& x) {
        return std::polar(1.0, kTwoPi * x[0] * (std::abs(k[0]) % 2));
    }, {}};
    auto rp = mikhlin_norms(parity, 1, {4, 8, 16});
    const double hi = *std::max_element(rp.norms.begin(), rp.norms.end());
    const double lo = *std::min_element(rp.norms.begin(), rp.norms.end());
    SymbolDefinition grow{"grow", [](const Index& k, const std::vector<double>&) {
        return cplx(std::sqrt(1.0 + std::abs(double(k[0]))));
    }, {}};
    auto rg = mikhlin_norms(grow, 1, {4, 8, 16});
    double growth = 0;
    for (std::size_t i = 0; i < rg.norms.size(); ++i)
        growth = std::max(growth, std::abs(rg.norms[i] / std::sqrt(1.0 + rg.sizes[i]) - 1.0));
    return {hi / lo - 1 <= 0.05 && growth <= 0.2,
            "bounded fixture norms " + fmt("%.4f", rp.norms[0]) + fmt("/%.4f", rp.norms[1]) +
                fmt("/%.4f", rp.norms[2]) + ", control vs (1+N)^(1/2) " + fmt("%.2e", growth)};
}

Outcome lp_and_compactness()
{
    std::mt19937_64 rng(1013);
    std::vector<SampledSymbol> fixtures;
    LatticeBox box(1, 8);
    fixtures.push_back(subtract(character(box, 1), constant_symbol(box, 1.0)));
    fixtures.push_back(constant_symbol(box, 1.0));
    fixtures.push_back(sample([](const Index& k, const std::vector<double>& x) {
        return cplx(1.0 / (2.0 + std::cos(kTwoPi * x[0])), 0.5 / (1.0 + std::abs(double(k[0]))));
    }, box));
    fixtures.push_back(random_trig_symbol(LatticeBox(2, 3), -1, 1, 0, rng));
    bool lp_ok = true;
    double tightest = 0;
    for (const auto& s : fixtures)
        for (double p : {1.0, 2.0, 4.0}) {
            auto r = lp_bound(s, p, 7);
            lp_ok = lp_ok && r.holds;
            tightest = std::max(tightest, r.estimate / r.bound);
        }
    LatticeBox big(1, 64);
    auto decaying = sample([](const Index& k, const std::vector<double>& x) {
        return cplx((2.0 + std::cos(kTwoPi * x[0])) / (1.0 + std::abs(double(k[0]))));
    }, big);
    std::vector<double> xs, ys;
    for (int cut : {2, 4, 8, 16, 32}) {
        xs.push_back(std::log(1.0 + cut));
        ys.push_back(std::log(compactness_tail(decaying, cut)));
    }
    const double n = double(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double flat = compactness_tail(constant_symbol(big, 1.0), 32);
    return {lp_ok && std::abs(slope + 1.0) <= 0.2 && flat > 0.5,
            "max estimate/bound " + fmt("%.3f", tightest) + ", tail slope " + fmt("%.3f", slope) +
                ", identity tail " + fmt("%.3f", flat)};
}

int run_cli(const std::string& args, const fs::path& out)
{
    const std::string cmd = std::string(PDZ_CLI_PATH) + " " + args + " >" + out.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome cli()
{
    const std::string data = PDZ_TEST_DATA;
    const fs::path tmp = fs::temp_directory_path() / "pdz_acceptance_out.csv";
    const int solve = run_cli("--config " + data + "/example3.json solve", tmp);
    const bool golden = solve == 0 && slurp(tmp) == slurp(data + "/example3_solve_golden.csv");
    const int malformed = run_cli("--config " + data + "/malformed.json apply", tmp);
    const int singular = run_cli("--config " + data + "/singular.json solve", tmp);
    const int nonelliptic = run_cli("--config " + data + "/nonelliptic.json parametrix", tmp);
    fs::remove(tmp);
    return {golden && malformed == 2 && singular == 4 && nonelliptic == 4,
            std::string("golden ") + (golden ? "identical" : "differs") + ", exit codes malformed=" +
                std::to_string(malformed) + " singular=" + std::to_string(singular) +
                " non-elliptic=" + std::to_string(nonelliptic)};
}

}  // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"Fourier layer", fourier_layer},
        {"three-path operator equivalence", three_paths},
        {"symbol extraction round trip", symbol_round_trip},
        {"forward difference example", example1},
        {"multiplier inversion example", example3_solver},
        {"composition", composition},
        {"adjoint and transpose", adjoint_transpose},
        {"parametrix", parametrix_orders},
        {"kernel decay", kernel_theorem},
        {"lattice-toroidal link", lattice_torus_link},
        {"HS, trace and Schatten", norms},
        {"l2 uniformity", mikhlin},
        {"lp bound and compactness", lp_and_compactness},
        {"CLI", cli},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    }
    return failed ? 1 : 0;
}
