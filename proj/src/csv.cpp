#include "oisac/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "oisac/error.hpp"

namespace oisac {

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

Csv::Csv(std::vector<std::string> header) : header_(std::move(header)) {}

Csv& Csv::add(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw ShapeError("csv: row width does not match header");
    rows_.push_back(std::move(row));
    return *this;
}

std::string Csv::str() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
}

void Csv::save(const std::filesystem::path& path) const {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("csv: cannot write " + path.string());
    out << str();
    if (!out) throw Error("csv: write failed for " + path.string());
}

}  // namespace oisac
