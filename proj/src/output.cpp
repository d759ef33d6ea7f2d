#include "locsym/output.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "locsym/errors.hpp"

namespace locsym::io {

std::string format_json_number(double v) {
    if (!std::isfinite(v)) return "null";
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string format_csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string escape_json(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

void JsonWriter::newline() {
    out_ += '\n';
    out_.append(2 * counts_.size(), ' ');
}

void JsonWriter::before_value() {
    if (after_key_) {
        after_key_ = false;
        return;
    }
    if (!counts_.empty()) {
        if (counts_.back()++ > 0) out_ += ',';
        newline();
    }
}

JsonWriter& JsonWriter::begin_object() {
    before_value();
    out_ += '{';
    counts_.push_back(0);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    const int n = counts_.back();
    counts_.pop_back();
    if (n > 0) newline();
    out_ += '}';
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    before_value();
    out_ += '[';
    counts_.push_back(0);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    const int n = counts_.back();
    counts_.pop_back();
    if (n > 0) newline();
    out_ += ']';
    return *this;
}

JsonWriter& JsonWriter::key(std::string_view k) {
    before_value();
    out_ += escape_json(k);
    out_ += ": ";
    after_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    before_value();
    out_ += format_json_number(v);
    return *this;
}

JsonWriter& JsonWriter::value(int v) {
    before_value();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(std::size_t v) {
    before_value();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    before_value();
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
    before_value();
    out_ += escape_json(v);
    return *this;
}

JsonWriter& JsonWriter::value(std::complex<double> v) {
    before_value();
    out_ += '[';
    out_ += format_json_number(v.real());
    out_ += ", ";
    out_ += format_json_number(v.imag());
    out_ += ']';
    return *this;
}

JsonWriter& JsonWriter::null() {
    before_value();
    out_ += "null";
    return *this;
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i > 0) out_ += ',';
        out_ += header[i];
    }
    out_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_) throw Error("CSV row has the wrong number of columns");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out_ += ',';
        out_ += format_csv_number(values[i]);
    }
    out_ += '\n';
}

void write_file(const std::string& path, const std::string& contents) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + path + " for writing");
    f << contents;
    if (!f) throw Error("failed writing " + path);
}

}  // namespace locsym::io
