#include "aacs/table.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace aacs {

namespace {

std::string csv_cell(const Table::Cell& cell) {
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(double x) const { return format_real(x); }
        std::string operator()(std::int64_t x) const { return std::to_string(x); }
        std::string operator()(bool x) const { return x ? "true" : "false"; }
        std::string operator()(const std::string& s) const {
            if (s.find_first_of(",\"\n") == std::string::npos) return s;
            std::string quoted = "\"";
            for (char c : s) {
                if (c == '"') quoted += '"';
                quoted += c;
            }
            return quoted + "\"";
        }
    };
    return std::visit(Visitor{}, cell);
}

nlohmann::ordered_json json_cell(const Table::Cell& cell) {
    struct Visitor {
        nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
        nlohmann::ordered_json operator()(double x) const {
            if (std::isfinite(x)) return x;
            if (std::isnan(x)) return nullptr;
            return x > 0 ? "inf" : "-inf";
        }
        nlohmann::ordered_json operator()(std::int64_t x) const { return x; }
        nlohmann::ordered_json operator()(bool x) const { return x; }
        nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    };
    return std::visit(Visitor{}, cell);
}

}  // namespace

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    if (res.ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buf, res.ptr);
}

void Table::meta(const std::string& key, Cell value) { meta_.emplace_back(key, std::move(value)); }

void Table::row(std::vector<Cell> cells) {
    if (cells.size() != columns_.size()) throw std::logic_error("row width does not match header");
    rows_.push_back(std::move(cells));
}

void Table::json_extra(const std::string& key, nlohmann::ordered_json value) {
    extra_.emplace_back(key, std::move(value));
}

void Table::write(std::ostream& out, OutputFormat format) const {
    if (format == OutputFormat::csv) {
        for (const auto& [key, value] : meta_) out << "# " << key << '=' << csv_cell(value) << '\n';
        for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
        out << '\n';
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_cell(r[i]);
            out << '\n';
        }
        return;
    }
    nlohmann::ordered_json doc;
    auto& meta = doc["meta"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : meta_) meta[key] = json_cell(value);
    auto& rows = doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows_) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < r.size(); ++i) obj[columns_[i]] = json_cell(r[i]);
        rows.push_back(std::move(obj));
    }
    for (const auto& [key, value] : extra_) doc[key] = value;
    out << doc.dump(2) << '\n';
}

}  // namespace aacs
