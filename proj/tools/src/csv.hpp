#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace jcdm::cli {

// comma separated, header row, doubles with 17 significant digits
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open " + path.string());
        bool first = true;
        for (const auto& h : header) {
            if (!first) out_ << ',';
            out_ << h;
            first = false;
        }
        out_ << '\n';
        ncols_ = header.size();
    }

    CsvWriter& operator<<(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return put(buf);
    }
    CsvWriter& operator<<(int v) { return put(std::to_string(v)); }
    CsvWriter& operator<<(long v) { return put(std::to_string(v)); }
    CsvWriter& operator<<(const std::string& s) { return put(s); }
    CsvWriter& operator<<(const char* s) { return put(s); }

    void row() {
        if (col_ != ncols_) throw std::logic_error("csv row has wrong number of columns");
        out_ << '\n';
        col_ = 0;
    }

private:
    CsvWriter& put(const std::string& s) {
        if (col_++) out_ << ',';
        out_ << s;
        return *this;
    }

    std::ofstream out_;
    std::size_t ncols_ = 0;
    std::size_t col_ = 0;
};

}  // namespace jcdm::cli
