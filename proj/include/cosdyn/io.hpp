#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <json.hpp>

#include "cosdyn/errors.hpp"

namespace cosdyn {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest round-trip form is not required; 17 significant digits are.
inline std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : path_(path), out_(path) {
        if (!out_) throw ConfigError("cannot open output file " + path.string());
        write_cells(header);
    }

    void row(const std::vector<std::string>& cells) { write_cells(cells); }

    void row(const std::vector<double>& values) {
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values) cells.push_back(fmt_num(v));
        write_cells(cells);
    }

    const std::filesystem::path& path() const { return path_; }

private:
    void write_cells(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    std::filesystem::path path_;
    std::ofstream out_;
};

inline std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 15];
    while (in) {
        in.read(buf, sizeof buf);
        if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string s;
    for (unsigned int i = 0; i < len; ++i) {
        s += hex[md[i] >> 4];
        s += hex[md[i] & 15];
    }
    return s;
}

/// Flat `key = value` configuration. `#` starts a comment, `[section]`
/// lines are ignored, values may be quoted or bracketed lists.
class ConfigFile {
public:
    ConfigFile() = default;

    static ConfigFile parse(const std::string& text, const std::string& origin = "<config>") {
        ConfigFile c;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty() || line.front() == '[') continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            std::string val = trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
            if (val.size() >= 2 && val.front() == '"' && val.back() == '"') val = val.substr(1, val.size() - 2);
            c.values_[key] = val;
        }
        return c;
    }

    static ConfigFile load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config " + path.string());
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str(), path.string());
    }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        used_.insert(key);
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        used_.insert(key);
        auto it = values_.find(key);
        return it == values_.end() ? fallback : to_double(key, it->second);
    }

    long get_long(const std::string& key, long fallback) const {
        used_.insert(key);
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        try {
            std::size_t pos = 0;
            const long v = std::stol(it->second, &pos);
            if (pos != it->second.size()) throw ConfigError("");
            return v;
        } catch (...) {
            throw ConfigError("config key '" + key + "' expects an integer, got '" + it->second + "'");
        }
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
        used_.insert(key);
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        try {
            std::size_t pos = 0;
            const auto v = std::stoull(it->second, &pos);
            if (pos != it->second.size() || it->second.front() == '-') throw ConfigError("");
            return v;
        } catch (...) {
            throw ConfigError("config key '" + key + "' expects a non-negative integer");
        }
    }

    bool get_bool(const std::string& key, bool fallback) const {
        used_.insert(key);
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        if (it->second == "true" || it->second == "1") return true;
        if (it->second == "false" || it->second == "0") return false;
        throw ConfigError("config key '" + key + "' expects true/false");
    }

    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const {
        used_.insert(key);
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        std::string s = it->second;
        if (!s.empty() && s.front() == '[') s.erase(0, 1);
        if (!s.empty() && s.back() == ']') s.pop_back();
        std::vector<double> out;
        std::istringstream in(s);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            tok = trim(tok);
            if (!tok.empty()) out.push_back(to_double(key, tok));
        }
        if (out.empty()) throw ConfigError("config key '" + key + "' has an empty list");
        return out;
    }

    /// Every key in the file must have been read by the command.
    void require_all_used() const {
        for (const auto& [k, v] : values_)
            if (!used_.count(k)) throw ConfigError("unknown config key '" + k + "'");
    }

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    static double to_double(const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos != v.size()) throw ConfigError("");
            return d;
        } catch (...) {
            throw ConfigError("config key '" + key + "' expects a number, got '" + v + "'");
        }
    }

    std::map<std::string, std::string> values_;
    mutable std::set<std::string> used_;
};

/// Records emitted files and writes manifest.json with their hashes.
class RunManifest {
public:
    RunManifest(std::string scenario, std::uint64_t seed, std::filesystem::path dir)
        : scenario_(std::move(scenario)), seed_(seed), dir_(std::move(dir)),
          start_(std::chrono::steady_clock::now()) {}

    void set_config(nlohmann::json cfg) { config_ = std::move(cfg); }
    void add_note(const std::string& key, nlohmann::json v) { notes_[key] = std::move(v); }
    void add_output(const std::filesystem::path& p) { files_.push_back(p.filename().string()); }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["scenario"] = scenario_;
        j["seed"] = seed_;
        j["version"] = kVersion;
        j["config"] = config_;
        j["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        j["outputs"] = nlohmann::json::array();
        for (const auto& f : files_) {
            const auto p = dir_ / f;
            j["outputs"].push_back(
                {{"file", f}, {"sha256", sha256_file(p)}, {"bytes", std::filesystem::file_size(p)}});
        }
        if (!notes_.empty()) j["notes"] = notes_;
        return j;
    }

    std::filesystem::path write() const {
        const auto p = dir_ / "manifest.json";
        std::ofstream out(p);
        out << to_json().dump(2) << '\n';
        return p;
    }

private:
    std::string scenario_;
    std::uint64_t seed_;
    std::filesystem::path dir_;
    std::chrono::steady_clock::time_point start_;
    nlohmann::json config_ = nlohmann::json::object();
    nlohmann::json notes_ = nlohmann::json::object();
    std::vector<std::string> files_;
};

/// Re-hashes every listed output. Returns the list of mismatching files.
inline std::vector<std::string> verify_manifest(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw ConfigError("missing manifest.json in " + dir.string());
    const auto j = nlohmann::json::parse(in);
    std::vector<std::string> bad;
    for (const auto& o : j.at("outputs")) {
        const auto f = o.at("file").get<std::string>();
        const auto p = dir / f;
        if (!std::filesystem::exists(p) || sha256_file(p) != o.at("sha256").get<std::string>()) bad.push_back(f);
    }
    return bad;
}

}  // namespace cosdyn
