#include "qnd/csv.hpp"

#include "qnd/config.hpp"

namespace qnd {

CsvWriter::CsvWriter(const std::string& path) : out_(path), path_(path) {
    if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
}

void CsvWriter::comment(const std::string& line) { out_ << "# " << line << "\n"; }

void CsvWriter::header(const std::vector<std::string>& columns) {
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "");
    out_ << "\n";
}

void CsvWriter::row(std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << format_double(values[i]) << (i + 1 < values.size() ? "," : "");
    out_ << "\n";
    if (!out_) throw std::runtime_error("CsvWriter: write failed on " + path_);
}

}  // namespace qnd
