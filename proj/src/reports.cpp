#include "isoscope/reports.hpp"
#include "isoscope/errors.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace isoscope {

std::string format_sig6(double v) {
    if (v == 0.0) return "0"; // quash negative zero
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
}

double round_sig6(double v) {
    return std::strtod(format_sig6(v).c_str(), nullptr);
}

std::string correlation_rows_csv(const std::vector<CorrelationRow>& rows) {
    std::string out = "x,y,controls,rho,p_value,n,df\n";
    for (const CorrelationRow& r : rows) {
        std::string controls;
        for (const std::string& c : r.controls) {
            if (!controls.empty()) controls += '+';
            controls += c;
        }
        out += csv_field(r.x);
        out += ',' + csv_field(r.y);
        out += ',' + csv_field(controls);
        out += ',' + format_sig6(r.result.rho);
        out += ',' + format_sig6(r.result.p_value);
        out += ',' + std::to_string(r.result.n);
        out += ',' + std::to_string(r.result.df);
        out += '\n';
    }
    return out;
}

std::string cv_rows_csv(const std::vector<CvCell>& original,
                        const std::vector<CvCell>& multiseed) {
    if (original.size() != multiseed.size())
        throw StatsError("cv_rows_csv: column length mismatch");
    std::string out = "features,original,multiseed\n";
    for (std::size_t i = 0; i < original.size(); ++i) {
        if (original[i].features != multiseed[i].features)
            throw StatsError("cv_rows_csv: feature-set mismatch between columns");
        out += csv_field(original[i].features);
        out += ',' + format_sig6(original[i].value);
        out += ',' + format_sig6(multiseed[i].value);
        out += '\n';
    }
    return out;
}

std::string bins_csv(const std::vector<BinRecord>& bins) {
    std::string out = "name,length,n_train,n_test,dug,las\n";
    for (const BinRecord& b : bins) {
        out += csv_field(b.name);
        out += ',' + std::to_string(b.length);
        out += ',' + std::to_string(b.n_train_l);
        out += ',' + std::to_string(b.n_test_l);
        out += ',';
        if (b.dug_l) out += format_sig6(*b.dug_l);
        out += ',';
        if (b.las_l) out += format_sig6(*b.las_l);
        out += '\n';
    }
    return out;
}

std::string scatter_csv(const std::vector<TreebankRecord>& records) {
    std::string out = "name,train_size,log_size,mean_test_len,dug,uug,focused_dug,las\n";
    for (const TreebankRecord& r : records) {
        out += csv_field(r.name);
        out += ',' + std::to_string(r.train_size);
        out += ',' + format_sig6(r.log_size);
        out += ',' + format_sig6(r.mean_test_len);
        out += ',' + format_sig6(r.dug);
        out += ',';
        if (r.uug) out += format_sig6(*r.uug);
        out += ',';
        if (r.focused_dug) out += format_sig6(*r.focused_dug);
        out += ',' + format_sig6(r.las);
        out += '\n';
    }
    return out;
}

std::string background_csv(const std::vector<TreebankRecord>& records,
                           const BackgroundResult& bg) {
    if (bg.normalized_las.size() != records.size())
        throw StatsError("background_csv: series/record length mismatch");
    std::string out = "name,dug,log_size,mean_test_len,las,las_norm_size,las_norm_size_ltest\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const TreebankRecord& r = records[i];
        out += csv_field(r.name);
        out += ',' + format_sig6(r.dug);
        out += ',' + format_sig6(r.log_size);
        out += ',' + format_sig6(r.mean_test_len);
        out += ',' + format_sig6(r.las);
        out += ',' + format_sig6(bg.normalized_las.values[i]);
        out += ',' + format_sig6(bg.doubly_normalized.values[i]);
        out += '\n';
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write file: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("short write: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string());
}

} // namespace isoscope
