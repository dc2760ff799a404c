// SPDX-License-Identifier: Apache-2.0
#include "serdsp/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace serdsp {

std::string csv_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path), n_cols_(columns.size()) {
    if (!out_) throw std::runtime_error("csv: cannot open " + path);
    for (size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ << ',';
        out_ << columns[i];
    }
    out_ << '\n';
}

void CsvWriter::begin_row() {
    if (in_row_) throw std::logic_error("csv: row already open");
    in_row_ = true;
    cur_ = 0;
}

void CsvWriter::field(const std::string& v) {
    if (!in_row_ || cur_ >= n_cols_) throw std::logic_error("csv: field outside row");
    if (cur_) out_ << ',';
    out_ << v;
    ++cur_;
}

void CsvWriter::field(double v) { field(csv_num(v)); }
void CsvWriter::field(long v) { field(std::to_string(v)); }

void CsvWriter::end_row() {
    if (!in_row_ || cur_ != n_cols_) throw std::logic_error("csv: row has wrong arity");
    out_ << '\n';
    in_row_ = false;
}

}  // namespace serdsp
