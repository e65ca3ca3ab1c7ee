#include "roadcov/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace roadcov {

namespace {

bool needs_quotes(const std::string& s) {
    return s.find_first_of(",\"\r\n") != std::string::npos;
}

std::string escape(const std::string& s) {
    if (!needs_quotes(s)) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

void append_line(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += escape(cells[i]);
    }
    out += "\r\n";
}

} // namespace

std::string CsvTable::number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size())
        throw std::invalid_argument("CsvTable: row width does not match the header");
    rows_.push_back(std::move(cells));
}

std::string CsvTable::serialize() const {
    std::string out;
    append_line(out, header_);
    for (const auto& row : rows_) append_line(out, row);
    return out;
}

void CsvTable::write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    const std::string data = serialize();
    f.write(data.data(), static_cast<std::streamsize>(data.size()));
}

CsvContent read_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

    CsvContent content;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false;
    bool first_row = true;
    auto finish_cell = [&]() {
        row.push_back(cell);
        cell.clear();
    };
    auto finish_row = [&]() {
        finish_cell();
        if (first_row) {
            content.header = row;
            first_row = false;
        } else if (!(row.size() == 1 && row[0].empty())) {
            content.rows.push_back(row);
        }
        row.clear();
    };
    for (std::size_t i = 0; i < data.size(); ++i) {
        const char c = data[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < data.size() && data[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            finish_cell();
        } else if (c == '\r') {
            // consumed with the following newline
        } else if (c == '\n') {
            finish_row();
        } else {
            cell += c;
        }
    }
    if (!cell.empty() || !row.empty()) finish_row();
    return content;
}

} // namespace roadcov
