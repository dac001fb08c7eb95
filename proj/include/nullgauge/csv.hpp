#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nullgauge/error.hpp"

namespace nullgauge {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw InvalidArgument("table: no column '" + name + "'");
    }
    double number(std::size_t row, std::size_t col) const {
        const std::string& s = rows.at(row).at(col);
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (s.empty() || *end != '\0') throw InvalidArgument("table: '" + s + "' is not a number");
        return v;
    }
};

// Round-trip exact, locale independent.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace detail

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path, std::ios::binary), path_(path) {
        if (!out_) throw Error("cannot open " + path + " for writing");
        write_fields(header);
    }
    void row(const std::vector<double>& values) {
        std::vector<std::string> f;
        f.reserve(values.size());
        for (double v : values) f.push_back(format_number(v));
        write_fields(f);
    }
    void row_text(const std::vector<std::string>& fields) { write_fields(fields); }
    const std::string& path() const { return path_; }

private:
    void write_fields(const std::vector<std::string>& f) {
        for (std::size_t i = 0; i < f.size(); ++i) out_ << (i ? "," : "") << detail::csv_field(f[i]);
        out_ << "\r\n";
        out_.flush();
    }
    std::ofstream out_;
    std::string path_;
};

// RFC 4180 reader: quoted fields, doubled quotes, CRLF or LF line ends. The first record is the header.
inline Table read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> rec;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            rec.push_back(field);
            field.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (any || !field.empty()) {
                rec.push_back(field);
                records.push_back(rec);
            }
            rec.clear();
            field.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted) throw InvalidArgument(path + ": unterminated quoted field");
    if (any || !field.empty()) {
        rec.push_back(field);
        records.push_back(rec);
    }
    if (records.empty()) throw InvalidArgument(path + ": missing header row");
    Table t;
    t.header = records.front();
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != t.header.size())
            throw InvalidArgument(path + ": record " + std::to_string(r + 1) + " has " + std::to_string(records[r].size()) +
                                  " fields, header has " + std::to_string(t.header.size()));
        t.rows.push_back(records[r]);
    }
    return t;
}

}  // namespace nullgauge
