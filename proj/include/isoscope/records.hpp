#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "isoscope/stats.hpp"

namespace isoscope {

// One analysis row per treebank. log_size is always ln(train_size);
// uug and focused_dug are present only when they were computed (or read
// from optional CSV columns).
struct TreebankRecord {
    std::string name;
    long long train_size = 0;
    double log_size = 0.0;
    double mean_test_len = 0.0;
    double dug = 0.0;
    std::optional<double> uug;
    double las = 0.0;
    std::optional<double> focused_dug;
};

TreebankRecord make_record(std::string name, long long train_size, double mean_test_len,
                           double dug, double las, std::optional<double> uug = {},
                           std::optional<double> focused_dug = {});

// records CSV: header `name,train_size,mean_test_len,dug,las` with
// optional `uug` and `focused_dug` columns, UTF-8, '.' decimal
// separator. Columns are matched by header name.
std::vector<TreebankRecord> parse_records_csv(const std::string& text,
                                              const std::string& source = "");
std::vector<TreebankRecord> read_records_csv(const std::filesystem::path& path);
std::string write_records_csv(const std::vector<TreebankRecord>& records);

// Feature column as a Series. Known names: train_size, log_size,
// mean_test_len, dug, uug, las, focused_dug. Throws StatsError for an
// unknown name or an optional feature missing from any record.
Series feature_series(const std::vector<TreebankRecord>& records, const std::string& feature);

// Minimal CSV helpers shared by the report writers.
std::string csv_field(const std::string& value);
std::vector<std::string> split_csv_line(const std::string& line);

} // namespace isoscope
