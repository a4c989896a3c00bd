#include "pdz/config.hpp"

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "pdz/errors.hpp"

namespace pdz {

struct Expression::Node {
    enum Kind { Number, K, X, AbsK, Neg, Add, Sub, Mul, Div, Pow, Call } kind;
    cplx value{};
    int axis = 0;
    std::string fn;
    std::shared_ptr<const Node> a, b;

    cplx eval(const Index& k, const std::vector<double>& x, double absk) const
    {
        switch (kind) {
        case Number: return value;
        case K: return double(k[axis]);
        case X: return x[axis];
        case AbsK: return absk;
        case Neg: return -a->eval(k, x, absk);
        case Add: return a->eval(k, x, absk) + b->eval(k, x, absk);
        case Sub: return a->eval(k, x, absk) - b->eval(k, x, absk);
        case Mul: return a->eval(k, x, absk) * b->eval(k, x, absk);
        case Div: return a->eval(k, x, absk) / b->eval(k, x, absk);
        case Pow: {
            const cplx base = a->eval(k, x, absk), e = b->eval(k, x, absk);
            // Integer exponents by repeated multiplication, so 0^0 = 1 and
            // real bases stay real.
            if (e.imag() == 0 && e.real() == std::round(e.real()) && std::abs(e.real()) <= 64) {
                const int p = int(e.real());
                cplx r = 1.0;
                for (int i = 0; i < std::abs(p); ++i) r *= base;
                return p < 0 ? 1.0 / r : r;
            }
            if (base.imag() == 0 && base.real() > 0 && e.imag() == 0) return std::pow(base.real(), e.real());
            return std::pow(base, e);
        }
        case Call: {
            const cplx v = a->eval(k, x, absk);
            if (fn == "sin") return std::sin(v);
            if (fn == "cos") return std::cos(v);
            if (fn == "exp") return std::exp(v);
            if (fn == "sqrt") return std::sqrt(v);
            return std::abs(v);
        }
        }
        return 0.0;
    }
};

namespace {

using NodeP = std::shared_ptr<const Expression::Node>;

class Parser {
public:
    Parser(const std::string& text, int n) : s_(text), n_(n) {}

    NodeP parse(bool& uses_k)
    {
        NodeP e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        uses_k = uses_k_;
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const
    {
        throw ConfigError("expression '" + s_ + "': " + msg + " at offset " + std::to_string(pos_));
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static NodeP make(Expression::Node::Kind kind, NodeP a = nullptr, NodeP b = nullptr)
    {
        auto n = std::make_shared<Expression::Node>();
        n->kind = kind;
        n->a = std::move(a);
        n->b = std::move(b);
        return n;
    }

    NodeP expr()
    {
        NodeP lhs = term();
        while (true) {
            if (eat('+'))
                lhs = make(Expression::Node::Add, lhs, term());
            else if (eat('-'))
                lhs = make(Expression::Node::Sub, lhs, term());
            else
                return lhs;
        }
    }

    NodeP term()
    {
        NodeP lhs = unary();
        while (true) {
            if (eat('*'))
                lhs = make(Expression::Node::Mul, lhs, unary());
            else if (eat('/'))
                lhs = make(Expression::Node::Div, lhs, unary());
            else
                return lhs;
        }
    }

    NodeP unary()
    {
        if (eat('-')) return make(Expression::Node::Neg, unary());
        if (eat('+')) return unary();
        return power();
    }

    NodeP power()
    {
        NodeP base = primary();
        if (eat('^')) return make(Expression::Node::Pow, base, unary());
        return base;
    }

    NodeP primary()
    {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodeP e = expr();
            if (!eat(')')) fail("missing ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += std::size_t(end - begin);
            auto n = std::make_shared<Expression::Node>();
            n->kind = Expression::Node::Number;
            n->value = v;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string id = s_.substr(start, pos_ - start);
            return identifier(id);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodeP identifier(const std::string& id)
    {
        auto n = std::make_shared<Expression::Node>();
        if (id == "i") {
            n->kind = Expression::Node::Number;
            n->value = cplx(0, 1);
            return n;
        }
        if (id == "pi") {
            n->kind = Expression::Node::Number;
            n->value = std::numbers::pi;
            return n;
        }
        if (id == "abs_k") {
            uses_k_ = true;
            n->kind = Expression::Node::AbsK;
            return n;
        }
        if ((id.rfind("k_", 0) == 0 || id.rfind("x_", 0) == 0) && id.size() > 2) {
            int axis = 0;
            try {
                std::size_t used;
                axis = std::stoi(id.substr(2), &used);
                if (used != id.size() - 2) throw std::invalid_argument("axis");
            } catch (const std::exception&) {
                fail("bad variable " + id);
            }
            if (axis < 1 || axis > n_) fail("variable " + id + " out of range for dimension " + std::to_string(n_));
            n->kind = id[0] == 'k' ? Expression::Node::K : Expression::Node::X;
            if (id[0] == 'k') uses_k_ = true;
            n->axis = axis - 1;
            return n;
        }
        if (id == "sin" || id == "cos" || id == "exp" || id == "sqrt" || id == "abs") {
            if (!eat('(')) fail("expected '(' after " + id);
            n->kind = Expression::Node::Call;
            n->fn = id;
            n->a = expr();
            if (!eat(')')) fail("missing ')'");
            return n;
        }
        fail("unknown identifier " + id);
    }

    std::string s_;
    int n_;
    std::size_t pos_ = 0;
    bool uses_k_ = false;
};

double norm_of(const Index& k)
{
    double s = 0;
    for (int v : k) s += double(v) * v;
    return std::sqrt(s);
}

cplx complex_param(const nlohmann::json& v, const std::string& what)
{
    if (v.is_number()) return v.get<double>();
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return cplx(v[0].get<double>(), v[1].get<double>());
    if (v.is_string()) {
        Expression e(v.get<std::string>(), 1);
        if (e.uses_k()) throw ConfigError(what + " must be a constant");
        return e({0}, {0.0});
    }
    throw ConfigError(what + " must be a number, [re, im] or a constant expression");
}

int axis_param(const nlohmann::json& v, int n, const std::string& what)
{
    if (!v.is_number_integer()) throw ConfigError(what + " must be an integer axis");
    const int j = v.get<int>();
    if (j < 1 || j > n) throw ConfigError(what + " axis out of range 1.." + std::to_string(n));
    return j - 1;
}

nlohmann::json scalar_or_text(std::string a)
{
    while (!a.empty() && a.back() == ' ') a.pop_back();
    while (!a.empty() && a.front() == ' ') a.erase(a.begin());
    try {
        std::size_t used;
        const double v = std::stod(a, &used);
        if (used == a.size()) {
            if (v == std::round(v) && std::abs(v) < 1e9) return int(v);
            return v;
        }
    } catch (const std::exception&) {
    }
    return a;
}

// "name(arg)" or "name(key=arg)" -> {"builtin": name, ...}
nlohmann::json parse_call(const std::string& text)
{
    const auto open = text.find('(');
    if (open == std::string::npos || text.back() != ')') return {{"builtin", text}};
    nlohmann::json out;
    out["builtin"] = text.substr(0, open);
    std::string arg = text.substr(open + 1, text.size() - open - 2);
    const auto eq = arg.find('=');
    if (eq != std::string::npos) {
        std::string key = arg.substr(0, eq);
        while (!key.empty() && key.back() == ' ') key.pop_back();
        bool ident = !key.empty();
        for (char ch : key) ident = ident && (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_');
        if (ident) {
            out[key] = scalar_or_text(arg.substr(eq + 1));
            return out;
        }
    }
    out["arg"] = scalar_or_text(arg);
    return out;
}

SymbolFn builtin(const nlohmann::json& params, int n)
{
    if (!params.contains("builtin") || !params["builtin"].is_string())
        throw ConfigError("builtin symbol needs a 'builtin' name");
    const std::string name = params["builtin"];
    const double two_pi = 2.0 * std::numbers::pi;
    auto arg = [&](const char* key) -> nlohmann::json {
        if (params.contains(key)) return params[key];
        if (params.contains("arg")) return params["arg"];
        throw ConfigError("builtin " + name + " needs parameter '" + key + "'");
    };
    if (name == "shift" || name == "forward_diff") {
        const int j = axis_param(arg("j"), n, name);
        const double off = name == "shift" ? 0.0 : 1.0;
        return [=](const Index&, const std::vector<double>& x) { return std::polar(1.0, two_pi * x[j]) - off; };
    }
    if (name == "weight") {
        const nlohmann::json sv = arg("s");
        if (!sv.is_number()) throw ConfigError("weight(s) needs a real s");
        const double s = sv.get<double>();
        return [=](const Index& k, const std::vector<double>&) { return cplx(std::pow(1.0 + norm_of(k), s)); };
    }
    if (name == "example3") {
        const cplx a = complex_param(arg("a"), "example3 a");
        return [=](const Index&, const std::vector<double>& x) {
            double s = 0;
            for (double v : x) s += std::sin(two_pi * v);
            return cplx(0, 2 * s) + a;
        };
    }
    if (name == "multiplier") {
        const nlohmann::json e = arg("expr");
        if (!e.is_string() && !e.is_number()) throw ConfigError("multiplier needs an expression");
        Expression ex(e.is_string() ? e.get<std::string>() : std::to_string(e.get<double>()), n);
        if (ex.uses_k()) throw ConfigError("multiplier expression must not depend on k");
        return [ex](const Index& k, const std::vector<double>& x) { return ex(k, x); };
    }
    throw ConfigError("unknown builtin '" + name + "'");
}

}  // namespace

Expression::Expression(const std::string& text, int n) : text_(text)
{
    Parser p(text, n);
    root_ = p.parse(uses_k_);
}

cplx Expression::operator()(const Index& k, const std::vector<double>& x) const
{
    return root_->eval(k, x, norm_of(k));
}

SymbolDefinition symbol_from_json(const nlohmann::json& entry, int n)
{
    if (!entry.is_object()) throw ConfigError("symbol entry must be an object");
    for (const auto& [key, v] : entry.items())
        if (key != "name" && key != "kind" && key != "params" && key != "order" && key != "rho" && key != "delta")
            throw ConfigError("symbol entry: unknown field '" + key + "'");
    if (!entry.contains("name") || !entry["name"].is_string()) throw ConfigError("symbol entry needs a string 'name'");
    if (!entry.contains("kind") || !entry["kind"].is_string()) throw ConfigError("symbol entry needs 'kind'");
    if (!entry.contains("params")) throw ConfigError("symbol entry needs 'params'");
    SymbolDefinition def;
    def.name = entry["name"];
    const std::string kind = entry["kind"];
    const nlohmann::json& params = entry["params"];
    if (kind == "builtin") {
        def.eval = builtin(params.is_string() ? parse_call(params.get<std::string>()) : params, n);
    } else if (kind == "expression") {
        std::string text;
        if (params.is_string())
            text = params.get<std::string>();
        else if (params.is_object() && params.contains("expr") && params["expr"].is_string())
            text = params["expr"];
        else
            throw ConfigError("expression symbol needs params.expr");
        Expression ex(text, n);
        def.eval = [ex](const Index& k, const std::vector<double>& x) { return ex(k, x); };
    } else {
        throw ConfigError("symbol kind must be 'builtin' or 'expression', got '" + kind + "'");
    }
    auto real = [&](const char* key, double fallback) {
        if (!entry.contains(key)) return fallback;
        if (!entry[key].is_number()) throw ConfigError(std::string("symbol field '") + key + "' must be a number");
        return entry[key].get<double>();
    };
    def.params.mu = real("order", 0.0);
    def.params.rho = real("rho", 1.0);
    def.params.delta = real("delta", 0.0);
    return def;
}

JobConfig JobConfig::parse(const nlohmann::json& j, const std::string& base_dir, int dim, int half_width)
{
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    JobConfig c;
    c.base_dir = base_dir;
    if (j.contains("box")) {
        const auto& b = j["box"];
        if (!b.is_object()) throw ConfigError("'box' must be an object {dim, N}");
        for (const auto& [key, v] : b.items())
            if (key != "dim" && key != "N") throw ConfigError("box: unknown field '" + key + "'");
        if (b.contains("dim")) {
            if (!b["dim"].is_number_integer()) throw ConfigError("box.dim must be an integer");
            c.n = b["dim"];
        }
        if (b.contains("N")) {
            if (!b["N"].is_number_integer()) throw ConfigError("box.N must be an integer");
            c.N = b["N"];
        }
    }
    if (dim > 0) c.n = dim;
    if (half_width > 0) c.N = half_width;
    if (c.n < 1 || c.n > 4) throw ConfigError("box dimension must be in 1..4");
    if (c.N < 1) throw ConfigError("box half-width N must be positive");

    static const char* known[] = {"box",     "symbols",  "symbol", "right",  "input",  "output",
                                  "report",  "matrix",   "order",  "mu",     "cutoff", "s",
                                  "p",       "decay",    "sizes",  "seed",   "tol",    "max_iter",
                                  "method",  "diagnose", "drop",   "cut",    "n_par"};
    for (const auto& [key, v] : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ConfigError("unknown config field '" + key + "'");
        if (key != "box" && key != "symbols") c.params[key] = v;
    }
    if (!j.contains("symbols") || !j["symbols"].is_array()) throw ConfigError("config needs a 'symbols' array");
    for (const auto& entry : j["symbols"]) {
        SymbolDefinition def = symbol_from_json(entry, c.n);
        if (c.symbols.count(def.name)) throw ConfigError("duplicate symbol name '" + def.name + "'");
        c.symbols.emplace(def.name, std::move(def));
    }
    return c;
}

JobConfig JobConfig::load(const std::string& path, int dim, int half_width)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config " + path + " is not valid JSON: " + e.what());
    }
    const auto dir = std::filesystem::path(path).parent_path();
    return parse(j, dir.string(), dim, half_width);
}

const SymbolDefinition& JobConfig::symbol(const std::string& name) const
{
    auto it = symbols.find(name);
    if (it == symbols.end()) throw ConfigError("unknown symbol '" + name + "'");
    return it->second;
}

std::string JobConfig::resolve(const std::string& path) const
{
    std::filesystem::path p(path);
    if (p.is_absolute() || base_dir.empty()) return p.string();
    return (std::filesystem::path(base_dir) / p).string();
}

}  // namespace pdz
