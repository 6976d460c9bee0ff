#pragma once

#include <cstdint>
#include <cstdio>
#include "json.hpp"
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "satotate/error.hpp"

namespace satotate::io {

/// A table of named columns, emitted as CSV or JSON with the same values.
/// Reals print with 17 significant digits.
class Table {
public:
    using Cell = std::variant<std::int64_t, std::uint64_t, double, std::string>;

    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    const std::vector<std::string>& columns() const noexcept { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns_.size())
            throw DomainError("row has " + std::to_string(row.size()) + " cells for " +
                              std::to_string(columns_.size()) + " columns");
        rows_.push_back(std::move(row));
    }

    static std::string format_real(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    static std::string format(const Cell& c) {
        return std::visit(
            [](const auto& v) -> std::string {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, double>) return format_real(v);
                else if constexpr (std::is_same_v<T, std::string>) return v;
                else return std::to_string(v);
            },
            c);
    }

    void write_csv(std::ostream& out) const {
        for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
        out << '\n';
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format(row[i]);
            out << '\n';
        }
    }

    /// {"columns": [...], "rows": [{col: value, ...}, ...]} plus optional meta.
    nlohmann::ordered_json to_json(const nlohmann::ordered_json& meta = nullptr) const {
        nlohmann::ordered_json j;
        if (!meta.is_null()) j["meta"] = meta;
        j["columns"] = columns_;
        j["rows"] = nlohmann::ordered_json::array();
        for (const auto& row : rows_) {
            nlohmann::ordered_json obj;
            for (std::size_t i = 0; i < row.size(); ++i)
                std::visit([&](const auto& v) { obj[columns_[i]] = v; }, row[i]);
            j["rows"].push_back(std::move(obj));
        }
        return j;
    }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

}  // namespace satotate::io
