#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "fuzzybox/errors.hpp"

namespace fuzzybox::csv {

// Round-trippable float formatting: 17 significant digits, C locale semantics.
// All CSV output flows through this so repeated runs are byte-identical.
inline std::string format_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

// CSV file with '#'-prefixed metadata lines, a header row with bracketed units,
// then data rows.  No timestamps or environment data are ever written: output
// is a pure function of the resolved configuration.
class Writer {
  public:
    explicit Writer(const std::string& path) : path_(path), out_(path) {
        if (!out_) throw io_error("cannot open output file: " + path);
    }

    void metadata(const std::string& key, const std::string& value) {
        out_ << "# " << key << " = " << value << "\n";
    }
    void metadata(const std::string& key, double value) { metadata(key, format_float(value)); }
    void comment(const std::string& text) { out_ << "# " << text << "\n"; }

    // Column names already carry units in brackets, e.g. "x [q0]".
    void header(const std::vector<std::string>& columns) {
        for (std::size_t i = 0; i < columns.size(); ++i)
            out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i)
            out_ << format_float(values[i]) << (i + 1 < values.size() ? "," : "\n");
    }

    // Mixed rows (labels + numbers) for check reports.
    void row_raw(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
    }

    void close() {
        out_.close();
        if (out_.fail()) throw io_error("failed writing output file: " + path_);
    }

  private:
    std::string path_;
    std::ofstream out_;
};

} // namespace fuzzybox::csv
