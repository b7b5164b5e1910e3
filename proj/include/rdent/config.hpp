#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdent/audit.hpp"

namespace rdent {

/// Parse or validation error with 1-based position (0 when not tied to a line).
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& msg, int line = 0, int column = 0);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Flat `key = value` file; `#` starts a comment.
class Config {
public:
    static Config parse(std::istream& in);
    static Config parse_string(const std::string& text);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    void set(const std::string& key, const std::string& value);
    std::vector<std::string> keys() const;
    /// Throws ConfigError carrying the key's position.
    [[noreturn]] void fail(const std::string& key, const std::string& msg) const;

private:
    struct Entry {
        std::string value;
        int line = 0;
        int column = 0;
    };
    std::map<std::string, Entry> entries_;
};

struct MeshSettings {
    int nx = 40;
    int ny = 40;
    Diagonal diagonal = Diagonal::fixed;
    std::string file;
    std::vector<int> list;  ///< cells per side for convergence runs
};

/// Everything a run needs, resolved from a Config.
struct RunSettings {
    std::string problem_name;
    MeshSettings mesh;
    int degree = 1;
    Continuity continuity = Continuity::continuous;
    SchemeConfig scheme;
    MarchConfig march;
};

/// Validates keys and values; unknown keys are errors.
RunSettings resolve(const Config& config);
/// Effective configuration in the same key = value format.
void write_config(std::ostream& out, const RunSettings& s);

}  // namespace rdent
