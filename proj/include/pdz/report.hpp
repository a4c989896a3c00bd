#pragma once

#include <string>
#include <utility>
#include <vector>

namespace pdz {

// Ordered sections of key = value lines. Every flag carries a witness.
class Report {
public:
    void set(const std::string& section, const std::string& key, double value);
    void set(const std::string& section, const std::string& key, const std::string& value);
    void flag(const std::string& section, const std::string& key, bool value, const std::string& witness);
    void append(const Report& other);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    double number(const std::string& section, const std::string& key) const;
    bool flag_value(const std::string& section, const std::string& key) const;

    std::string str() const;

private:
    struct Section {
        std::string name;
        std::vector<std::pair<std::string, std::string>> entries;
    };
    Section& section(const std::string& name);
    const Section* find(const std::string& name) const;
    std::vector<Section> sections_;
};

std::string format_double(double v);

}  // namespace pdz
