#include "macroforge/cli/flat_config.hpp"

#include <fstream>
#include <sstream>

#include "macroforge/errors.hpp"

namespace macroforge::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

} // namespace

FlatConfig FlatConfig::parse(const std::string& text) {
    FlatConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("unterminated section header", line_no);
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ParseError("empty section name", line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", line_no);
        if (section.empty())
            throw ParseError("key '" + key + "' appears before any [section]", line_no);
        cfg.entries_[section + "." + key] = value;
    }
    return cfg;
}

FlatConfig FlatConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse(buffer.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), e.line());
    }
}

bool FlatConfig::has(const std::string& key) const { return entries_.count(key) > 0; }

void FlatConfig::set(const std::string& key, const std::string& value) {
    entries_[key] = value;
}

std::string FlatConfig::get(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

std::string FlatConfig::get_required(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing required config key '" + key + "'");
    return it->second;
}

int FlatConfig::get_int(const std::string& key, int fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const int v = std::stoi(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' is not an integer: '" + it->second + "'");
    }
}

std::int64_t FlatConfig::get_i64(const std::string& key, std::int64_t fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const std::int64_t v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' is not an integer: '" + it->second + "'");
    }
}

std::uint64_t FlatConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' is not an unsigned integer: '" +
                          it->second + "'");
    }
}

double FlatConfig::get_double(const std::string& key, double fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' is not a number: '" + it->second + "'");
    }
}

bool FlatConfig::get_bool(const std::string& key, bool fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
    if (it->second == "false" || it->second == "0" || it->second == "no") return false;
    throw ConfigError("config key '" + key + "' is not a boolean: '" + it->second + "'");
}

std::vector<std::string> FlatConfig::get_list(const std::string& key) const {
    const auto it = entries_.find(key);
    std::vector<std::string> out;
    if (it == entries_.end()) return out;
    std::istringstream in(it->second);
    std::string token;
    while (std::getline(in, token, ',')) {
        token = trim(token);
        if (!token.empty()) out.push_back(token);
    }
    return out;
}

std::vector<std::uint64_t> FlatConfig::get_u64_list(const std::string& key) const {
    std::vector<std::uint64_t> out;
    for (const std::string& token : get_list(key)) {
        try {
            out.push_back(std::stoull(token));
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "' has a non-integer element '" +
                              token + "'");
        }
    }
    return out;
}

std::vector<int> FlatConfig::get_int_list(const std::string& key) const {
    std::vector<int> out;
    for (const std::string& token : get_list(key)) {
        try {
            out.push_back(std::stoi(token));
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "' has a non-integer element '" +
                              token + "'");
        }
    }
    return out;
}

std::string FlatConfig::dump() const {
    std::ostringstream out;
    std::string section;
    for (const auto& [key, value] : entries_) {
        const auto dot = key.find('.');
        const std::string s = key.substr(0, dot);
        if (s != section) {
            if (!section.empty()) out << '\n';
            out << '[' << s << "]\n";
            section = s;
        }
        out << key.substr(dot + 1) << " = " << value << '\n';
    }
    return out.str();
}

} // namespace macroforge::cli
