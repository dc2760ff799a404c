// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace serdsp {

/// Numbers in CSV output carry 12 significant digits so re-runs diff cleanly
/// across platforms.
std::string csv_num(double v);

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    void begin_row();
    void field(const std::string& v);
    void field(double v);
    void field(long v);
    void end_row();

private:
    std::ofstream out_;
    size_t n_cols_;
    size_t cur_ = 0;
    bool in_row_ = false;
};

}  // namespace serdsp
