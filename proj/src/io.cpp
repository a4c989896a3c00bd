#include "pdz/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "pdz/errors.hpp"
#include "pdz/report.hpp"

namespace pdz::io {

namespace {

std::string header(const char* a, int n, const char* b = nullptr)
{
    std::string h;
    for (int d = 1; d <= n; ++d) h += std::string(a) + "_" + std::to_string(d) + ",";
    if (b)
        for (int d = 1; d <= n; ++d) h += std::string(b) + "_" + std::to_string(d) + ",";
    return h + "re,im\n";
}

void put_point(std::string& out, const int* c, int n)
{
    for (int d = 0; d < n; ++d) out += std::to_string(c[d]) + ",";
}

void put_value(std::string& out, cplx v)
{
    out += format_double(v.real()) + "," + format_double(v.imag()) + "\n";
}

void put_le32(std::ostream& out, std::int32_t v)
{
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = (std::uint32_t(v) >> (8 * i)) & 0xff;
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::int32_t get_le32(std::istream& in)
{
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) throw ConfigError("matrix file truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
    return std::int32_t(v);
}

void put_f64(std::ostream& out, double v)
{
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = (bits >> (8 * i)) & 0xff;
    out.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::istream& in)
{
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8)) throw ConfigError("matrix file truncated");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= std::uint64_t(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        out.push_back(cell);
    }
    return out;
}

}  // namespace

std::string sequence_csv(const LatticeSequence& f)
{
    const int n = f.box.n();
    std::string out = header("k", n);
    for (std::size_t k = 0; k < f.box.size(); ++k) {
        put_point(out, f.box.coords(k), n);
        put_value(out, f.values[k]);
    }
    return out;
}

std::string torus_csv(const TorusFunction& F)
{
    const int n = F.grid.n();
    std::string out = header("j", n);
    for (std::size_t j = 0; j < F.grid.size(); ++j) {
        const Index node = F.grid.node(j);
        put_point(out, node.data(), n);
        put_value(out, F.values[j]);
    }
    return out;
}

std::string kernel_csv(const Kernel& K, double drop)
{
    const LatticeBox& box = K.box();
    const int n = box.n();
    const double cut = drop * max_abs(K.kappa());
    std::string out = header("k", n, "l");
    for (std::size_t k = 0; k < box.size(); ++k)
        for (std::size_t l = 0; l < box.size(); ++l) {
            const cplx v = K.kappa(k, l);
            if (drop > 0 && std::abs(v) <= cut) continue;
            put_point(out, box.coords(k), n);
            put_point(out, box.coords(l), n);
            put_value(out, v);
        }
    return out;
}

std::string symbol_csv(const SampledSymbol& s)
{
    const LatticeBox& box = s.box();
    const TorusGrid grid = s.grid();
    const int n = box.n();
    std::string out = header("k", n, "j");
    for (std::size_t k = 0; k < s.rows(); ++k)
        for (std::size_t j = 0; j < s.cols(); ++j) {
            put_point(out, box.coords(k), n);
            const Index node = grid.node(j);
            put_point(out, node.data(), n);
            put_value(out, s(k, j));
        }
    return out;
}

LatticeSequence read_sequence_csv(std::istream& in, const LatticeBox& box)
{
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("sequence CSV is empty");
    const auto head = split(line);
    const int n = box.n();
    if (int(head.size()) != n + 2 || head[n] != "re" || head[n + 1] != "im")
        throw ConfigError("sequence CSV header must be k_1,...,k_" + std::to_string(n) + ",re,im");
    for (int d = 0; d < n; ++d)
        if (head[d] != "k_" + std::to_string(d + 1)) throw ConfigError("sequence CSV header: bad column " + head[d]);
    LatticeSequence f(box);
    std::vector<bool> seen(box.size(), false);
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line);
        if (int(cells.size()) != n + 2)
            throw ConfigError("sequence CSV line " + std::to_string(lineno) + ": expected " +
                              std::to_string(n + 2) + " columns");
        Index k(n);
        double re, im;
        try {
            for (int d = 0; d < n; ++d) {
                std::size_t used;
                k[d] = std::stoi(cells[d], &used);
                if (used != cells[d].size()) throw std::invalid_argument("int");
            }
            re = std::stod(cells[n]);
            im = std::stod(cells[n + 1]);
        } catch (const std::exception&) {
            throw ConfigError("sequence CSV line " + std::to_string(lineno) + ": malformed number");
        }
        if (!box.contains(k))
            throw ConfigError("sequence CSV line " + std::to_string(lineno) + ": point outside box " + box.str());
        const std::size_t idx = box.index(k);
        if (seen[idx]) throw ConfigError("sequence CSV line " + std::to_string(lineno) + ": repeated point");
        seen[idx] = true;
        f.values[idx] = cplx(re, im);
    }
    try {
        require_finite(f.values, "sequence CSV");
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return f;
}

LatticeSequence read_sequence_csv(const std::string& path, const LatticeBox& box)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    return read_sequence_csv(in, box);
}

void write_matrix(std::ostream& out, const OperatorMatrix& A)
{
    out.write("PDZM", 4);
    put_le32(out, A.box.n());
    put_le32(out, A.box.M());
    put_le32(out, 0);
    for (Eigen::Index k = 0; k < A.a.rows(); ++k)
        for (Eigen::Index m = 0; m < A.a.cols(); ++m) {
            put_f64(out, A.a(k, m).real());
            put_f64(out, A.a(k, m).imag());
        }
}

OperatorMatrix read_matrix(std::istream& in)
{
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "PDZM", 4) != 0) throw ConfigError("matrix file: bad magic");
    const int n = get_le32(in);
    const int M = get_le32(in);
    get_le32(in);
    if (M < 3 || M % 2 == 0) throw ConfigError("matrix file: M must be odd and at least 3");
    LatticeBox box(n, (M - 1) / 2);
    OperatorMatrix A{box, Eigen::MatrixXcd(box.size(), box.size())};
    for (std::size_t k = 0; k < box.size(); ++k)
        for (std::size_t m = 0; m < box.size(); ++m) {
            const double re = get_f64(in);
            const double im = get_f64(in);
            A.a(k, m) = cplx(re, im);
        }
    return A;
}

void write_file(const std::string& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << contents;
    if (!out) throw ConfigError("write failed for " + path);
}

}  // namespace pdz::io
