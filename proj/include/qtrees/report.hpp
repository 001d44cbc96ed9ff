#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qtrees {

/**
 * Ordered key=value block. All commands and checkers emit their results
 * through this so output is byte-identical across runs.
 */
class Report {
public:
    void add(const std::string& key, const std::string& value) {
        rows_.emplace_back(key, value);
    }
    void add(const std::string& key, const char* value) {
        rows_.emplace_back(key, std::string(value));
    }
    void add(const std::string& key, long long value) {
        rows_.emplace_back(key, std::to_string(value));
    }
    void add(const std::string& key, int value) {
        rows_.emplace_back(key, std::to_string(value));
    }
    void add(const std::string& key, std::size_t value) {
        rows_.emplace_back(key, std::to_string(value));
    }
    void add(const std::string& key, bool value) {
        rows_.emplace_back(key, value ? "true" : "false");
    }

    const std::vector<std::pair<std::string, std::string>>& rows() const { return rows_; }

    std::string value_of(const std::string& key) const {
        for (const auto& [k, v] : rows_)
            if (k == key) return v;
        return "";
    }

    std::string text() const {
        std::string out;
        for (const auto& [k, v] : rows_) {
            out += k;
            out += '=';
            out += v;
            out += '\n';
        }
        return out;
    }

private:
    std::vector<std::pair<std::string, std::string>> rows_;
};

} // namespace qtrees
