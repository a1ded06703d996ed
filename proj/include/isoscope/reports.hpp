#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "isoscope/experiments.hpp"
#include "isoscope/records.hpp"

namespace isoscope {

// Report formatting: reals carry 6 significant digits everywhere so
// output files are stable for golden tests.
std::string format_sig6(double v);

// Rounds to the 6-significant-digit representation (for JSON output).
double round_sig6(double v);

// header x,y,controls,rho,p_value,n,df ; controls joined with '+'.
std::string correlation_rows_csv(const std::vector<CorrelationRow>& rows);

// header features,original,multiseed ; one row per feature set.
std::string cv_rows_csv(const std::vector<CvCell>& original,
                        const std::vector<CvCell>& multiseed);

// header name,length,n_train,n_test,dug,las ; empty cells on empty bins.
std::string bins_csv(const std::vector<BinRecord>& bins);

// Scatter-plot data: one row per record with every feature column.
std::string scatter_csv(const std::vector<TreebankRecord>& records);

// Background-subtraction plot data: per record, the raw and normalized
// LAS values next to the covariants.
std::string background_csv(const std::vector<TreebankRecord>& records,
                           const BackgroundResult& bg);

// Reads a whole file (binary); throws IoError when unreadable.
std::string read_file(const std::filesystem::path& path);

// Writes via a temp file in the same directory plus rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace isoscope
