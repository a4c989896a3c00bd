#include "pdz/report.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "pdz/errors.hpp"

namespace pdz {

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Report::Section& Report::section(const std::string& name)
{
    for (auto& s : sections_)
        if (s.name == name) return s;
    sections_.push_back({name, {}});
    return sections_.back();
}

const Report::Section* Report::find(const std::string& name) const
{
    for (const auto& s : sections_)
        if (s.name == name) return &s;
    return nullptr;
}

void Report::set(const std::string& sec, const std::string& key, double value)
{
    set(sec, key, format_double(value));
}

void Report::set(const std::string& sec, const std::string& key, const std::string& value)
{
    auto& s = section(sec);
    for (auto& [k, v] : s.entries)
        if (k == key) {
            v = value;
            return;
        }
    s.entries.emplace_back(key, value);
}

void Report::flag(const std::string& sec, const std::string& key, bool value, const std::string& witness)
{
    set(sec, key, value ? std::string("true") : std::string("false"));
    set(sec, key + ".witness", witness);
}

void Report::append(const Report& other)
{
    for (const auto& s : other.sections_)
        for (const auto& [k, v] : s.entries) set(s.name, k, v);
}

bool Report::has(const std::string& sec, const std::string& key) const
{
    const Section* s = find(sec);
    if (!s) return false;
    for (const auto& [k, v] : s->entries)
        if (k == key) return true;
    return false;
}

std::string Report::get(const std::string& sec, const std::string& key) const
{
    const Section* s = find(sec);
    if (s)
        for (const auto& [k, v] : s->entries)
            if (k == key) return v;
    throw Error("report has no entry " + sec + "." + key);
}

double Report::number(const std::string& sec, const std::string& key) const
{
    return std::stod(get(sec, key));
}

bool Report::flag_value(const std::string& sec, const std::string& key) const
{
    return get(sec, key) == "true";
}

std::string Report::str() const
{
    std::ostringstream os;
    for (std::size_t i = 0; i < sections_.size(); ++i) {
        if (i) os << "\n";
        os << "[" << sections_[i].name << "]\n";
        for (const auto& [k, v] : sections_[i].entries) os << k << " = " << v << "\n";
    }
    return os.str();
}

}  // namespace pdz
