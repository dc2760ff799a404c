// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace serdsp {

/// Flat key=value config files: one `key = value` pair per line, '#' starts
/// a comment. Keys are consumed by typed getters; anything left unread is an
/// error (unknown keys never pass silently). The effective (defaults
/// resolved) state can be echoed back out and re-parsed to reproduce a run.
class Config {
public:
    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    bool has(const std::string& key) const { return raw_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& def);
    std::string require_string(const std::string& key);
    double get_double(const std::string& key, double def);
    long get_long(const std::string& key, long def);
    bool get_bool(const std::string& key, bool def);
    std::vector<double> get_double_list(const std::string& key, const std::vector<double>& def);

    /// Throws listing any keys that were present but never consumed.
    void check_all_consumed() const;

    /// Effective config text: every consumed key with its resolved value,
    /// sorted. Doubles use 17 significant digits so a re-parse is bit-exact.
    std::string echo() const;

private:
    std::map<std::string, std::string> raw_;
    std::set<std::string> consumed_;
    std::map<std::string, std::string> effective_;

    void note(const std::string& key, const std::string& value);
};

}  // namespace serdsp
