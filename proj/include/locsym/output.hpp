#pragma once

// Deterministic JSON and CSV emission. JSON numbers use a fixed 17
// significant digits, CSV numbers the shortest round-trip form.

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace locsym::io {

std::string format_json_number(double v);
std::string format_csv_number(double v);

// Minimal streaming JSON writer with insertion-ordered keys and two-space indent.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(std::string_view k);

    JsonWriter& value(double v);
    JsonWriter& value(int v);
    JsonWriter& value(std::size_t v);
    JsonWriter& value(bool v);
    JsonWriter& value(std::string_view v);
    JsonWriter& value(const char* v) { return value(std::string_view(v)); }
    JsonWriter& value(std::complex<double> v);  // [re, im]
    JsonWriter& null();

    template <typename T>
    JsonWriter& field(std::string_view k, const T& v) {
        key(k);
        return value(v);
    }

    [[nodiscard]] std::string str() const { return out_ + "\n"; }

private:
    void before_value();
    void newline();

    std::string out_;
    // One entry per open container: number of elements written so far.
    std::vector<int> counts_;
    bool after_key_ = false;
};

std::string escape_json(std::string_view s);

class CsvWriter {
public:
    explicit CsvWriter(const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    [[nodiscard]] const std::string& str() const { return out_; }

private:
    std::size_t columns_;
    std::string out_;
};

// Writes text to a file, creating parent directories. Throws locsym::Error on failure.
void write_file(const std::string& path, const std::string& contents);

}  // namespace locsym::io
