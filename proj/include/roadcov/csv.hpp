#pragma once

#include <string>
#include <vector>

namespace roadcov {

// RFC-4180 style table: CRLF line endings, quoted fields where needed,
// mandatory header row. Numbers are formatted with %.12g so identical
// inputs serialize byte-identically.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    static std::string number(double v);

    void add_row(std::vector<std::string> cells);
    std::string serialize() const;
    void write(const std::string& path) const;

    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Minimal reader for the same dialect (used to build charts from the file
// actually written, and by tests).
struct CsvContent {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
CsvContent read_csv(const std::string& path);

} // namespace roadcov
