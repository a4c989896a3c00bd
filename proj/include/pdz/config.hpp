#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdz/symbol.hpp"

namespace pdz {

// Arithmetic over k_1..k_n, x_1..x_n, abs_k, i, pi with + - * / ^ and
// sin, cos, exp, sqrt, abs.
class Expression {
public:
    Expression() = default;
    Expression(const std::string& text, int n);

    cplx operator()(const Index& k, const std::vector<double>& x) const;
    bool uses_k() const { return uses_k_; }
    const std::string& text() const { return text_; }

    struct Node;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
    bool uses_k_ = false;
};

SymbolDefinition symbol_from_json(const nlohmann::json& entry, int n);

struct JobConfig {
    int n = 1;
    int N = 8;
    std::map<std::string, SymbolDefinition> symbols;
    nlohmann::json params;   // remaining top-level fields
    std::string base_dir;    // relative paths in the config resolve against this

    // dim/half_width > 0 override the "box" entry.
    static JobConfig parse(const nlohmann::json& j, const std::string& base_dir, int dim = 0, int half_width = 0);
    static JobConfig load(const std::string& path, int dim = 0, int half_width = 0);

    const SymbolDefinition& symbol(const std::string& name) const;
    std::string resolve(const std::string& path) const;
};

}  // namespace pdz
