#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "chemoctrl/errors.hpp"

namespace chemoctrl {

// Minimal RFC 4180 writer: CRLF record separators, quoting only when a field
// contains a comma, quote, or line break. Numbers are written with 17
// significant digits so reading them back reproduces the exact double.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw InvalidInputError("csv: cannot open '" + path + "' for writing");
    }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << escape(fields[i]);
        }
        out_ << "\r\n";
    }

    static std::string number(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    static std::string number(std::int64_t v) { return std::to_string(v); }
    static std::string number(int v) { return std::to_string(v); }

    bool good() const { return static_cast<bool>(out_); }

  private:
    static std::string escape(const std::string& field) {
        bool needs_quotes = false;
        for (char c : field)
            if (c == ',' || c == '"' || c == '\r' || c == '\n') {
                needs_quotes = true;
                break;
            }
        if (!needs_quotes) return field;
        std::string quoted = "\"";
        for (char c : field) {
            if (c == '"') quoted += '"';
            quoted += c;
        }
        quoted += '"';
        return quoted;
    }

    std::ofstream out_;
};

}  // namespace chemoctrl
