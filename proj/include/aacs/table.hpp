#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace aacs {

enum class OutputFormat { csv, json };

/// Shortest-free fixed formatting: 17 significant digits, '.' decimal,
/// independent of the global locale.
std::string format_real(double x);

/// A result table with leading metadata. CSV emits metadata as '# key=value'
/// comment lines, then a header row; JSON emits {"meta": ..., "rows": [...]}.
class Table {
public:
    using Cell = std::variant<std::monostate, double, std::int64_t, std::string, bool>;

    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void meta(const std::string& key, Cell value);
    void row(std::vector<Cell> cells);
    /// Extra top-level JSON member (ignored by CSV).
    void json_extra(const std::string& key, nlohmann::ordered_json value);

    std::size_t size() const noexcept { return rows_.size(); }
    void write(std::ostream& out, OutputFormat format) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::pair<std::string, Cell>> meta_;
    std::vector<std::vector<Cell>> rows_;
    std::vector<std::pair<std::string, nlohmann::ordered_json>> extra_;
};

}  // namespace aacs
