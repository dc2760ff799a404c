// SPDX-License-Identifier: Apache-2.0
#include "serdsp/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace serdsp {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

Config Config::from_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) + " is not key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument("config: empty key on line " + std::to_string(lineno));
        if (cfg.raw_.count(key)) throw std::invalid_argument("config: duplicate key " + key);
        cfg.raw_[key] = value;
    }
    return cfg;
}

void Config::note(const std::string& key, const std::string& value) {
    consumed_.insert(key);
    effective_[key] = value;
}

std::string Config::get_string(const std::string& key, const std::string& def) {
    auto it = raw_.find(key);
    std::string v = it == raw_.end() ? def : it->second;
    note(key, v);
    return v;
}

std::string Config::require_string(const std::string& key) {
    auto it = raw_.find(key);
    if (it == raw_.end()) throw std::invalid_argument("config: missing required key " + key);
    note(key, it->second);
    return it->second;
}

double Config::get_double(const std::string& key, double def) {
    auto it = raw_.find(key);
    double v = def;
    if (it != raw_.end()) {
        try {
            size_t pos = 0;
            v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("");
        } catch (...) {
            throw std::invalid_argument("config: key " + key + " is not a number: " + it->second);
        }
    }
    note(key, fmt_double(v));
    return v;
}

long Config::get_long(const std::string& key, long def) {
    auto it = raw_.find(key);
    long v = def;
    if (it != raw_.end()) {
        try {
            size_t pos = 0;
            v = std::stol(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("");
        } catch (...) {
            throw std::invalid_argument("config: key " + key + " is not an integer: " + it->second);
        }
    }
    note(key, std::to_string(v));
    return v;
}

bool Config::get_bool(const std::string& key, bool def) {
    auto it = raw_.find(key);
    bool v = def;
    if (it != raw_.end()) {
        if (it->second == "true" || it->second == "1") v = true;
        else if (it->second == "false" || it->second == "0") v = false;
        else throw std::invalid_argument("config: key " + key + " is not a bool: " + it->second);
    }
    note(key, v ? "true" : "false");
    return v;
}

std::vector<double> Config::get_double_list(const std::string& key, const std::vector<double>& def) {
    auto it = raw_.find(key);
    std::vector<double> v;
    if (it == raw_.end()) {
        v = def;
    } else {
        std::istringstream in(it->second);
        std::string item;
        while (std::getline(in, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            try {
                v.push_back(std::stod(item));
            } catch (...) {
                throw std::invalid_argument("config: key " + key + " has a bad list item: " + item);
            }
        }
        if (v.empty()) throw std::invalid_argument("config: key " + key + " is an empty list");
    }
    std::string joined;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) joined += ",";
        joined += fmt_double(v[i]);
    }
    note(key, joined);
    return v;
}

void Config::check_all_consumed() const {
    std::string unknown;
    for (const auto& [k, v] : raw_) {
        if (!consumed_.count(k)) {
            if (!unknown.empty()) unknown += ", ";
            unknown += k;
        }
    }
    if (!unknown.empty()) throw std::invalid_argument("config: unknown keys: " + unknown);
}

std::string Config::echo() const {
    std::string out;
    for (const auto& [k, v] : effective_) {
        out += k;
        out += " = ";
        out += v;
        out += "\n";
    }
    return out;
}

}  // namespace serdsp
