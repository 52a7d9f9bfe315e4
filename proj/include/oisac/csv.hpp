#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace oisac {

/// Shortest round-trip decimal form ('.' separator, locale independent).
std::string fmt(double v);
std::string fmt(std::uint64_t v);
std::string fmt(int v);

/// In-memory CSV table with a fixed header; rows are written in insertion order.
class Csv {
public:
    explicit Csv(std::vector<std::string> header);

    Csv& add(std::vector<std::string> row);
    std::size_t rows() const { return rows_.size(); }
    std::string str() const;
    void save(const std::filesystem::path& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace oisac
