// csv.hpp — deterministic CSV output: fixed column order, '#'-prefixed header
// block, shortest round-trip number formatting.

#pragma once

#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace qnd {

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);

    void comment(const std::string& line);
    void header(const std::vector<std::string>& columns);
    void row(std::span<const double> values);

private:
    std::ofstream out_;
    std::string path_;
};

}  // namespace qnd
