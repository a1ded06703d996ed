#include "isoscope/records.hpp"
#include "isoscope/errors.hpp"
#include "isoscope/reports.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace isoscope {

namespace {

ParseError csv_error(const std::string& source, std::size_t line, const std::string& what) {
    std::ostringstream os;
    if (!source.empty()) os << source << ": ";
    os << "line " << line << ": " << what;
    return ParseError(os.str());
}

double parse_real(const std::string& field, const std::string& source, std::size_t line) {
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size() || field.empty() || errno == ERANGE)
        throw csv_error(source, line, "malformed number '" + field + "'");
    return v;
}

long long parse_count(const std::string& field, const std::string& source, std::size_t line) {
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(field.c_str(), &end, 10);
    if (end != field.c_str() + field.size() || field.empty() || errno == ERANGE)
        throw csv_error(source, line, "malformed integer '" + field + "'");
    return v;
}

void check_ratio(double v, const char* what, const std::string& source, std::size_t line) {
    if (v < 0.0 || v > 1.0)
        throw csv_error(source, line, std::string(what) + " must be in [0,1]");
}

} // namespace

TreebankRecord make_record(std::string name, long long train_size, double mean_test_len,
                           double dug, double las, std::optional<double> uug,
                           std::optional<double> focused_dug) {
    if (train_size < 1) throw StatsError("record '" + name + "': train_size must be >= 1");
    TreebankRecord r;
    r.name = std::move(name);
    r.train_size = train_size;
    r.log_size = std::log(static_cast<double>(train_size));
    r.mean_test_len = mean_test_len;
    r.dug = dug;
    r.uug = uug;
    r.las = las;
    r.focused_dug = focused_dug;
    return r;
}

std::vector<TreebankRecord> parse_records_csv(const std::string& text,
                                              const std::string& source) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw csv_error(source, 1, "empty records CSV");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_csv_line(line);
    std::unordered_map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    for (const char* required : {"name", "train_size", "mean_test_len", "dug", "las"})
        if (!col.count(required))
            throw csv_error(source, 1, std::string("missing column '") + required + "'");

    auto get = [&](const std::vector<std::string>& fields, const char* name) -> const std::string& {
        return fields.at(col.at(name));
    };

    std::vector<TreebankRecord> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw csv_error(source, line_no, "expected " + std::to_string(header.size()) +
                                                 " fields, got " + std::to_string(fields.size()));
        long long size = parse_count(get(fields, "train_size"), source, line_no);
        if (size < 1) throw csv_error(source, line_no, "train_size must be >= 1");
        double mlen = parse_real(get(fields, "mean_test_len"), source, line_no);
        if (mlen <= 0.0) throw csv_error(source, line_no, "mean_test_len must be > 0");
        double d = parse_real(get(fields, "dug"), source, line_no);
        check_ratio(d, "dug", source, line_no);
        double l = parse_real(get(fields, "las"), source, line_no);
        check_ratio(l, "las", source, line_no);

        std::optional<double> uug, focused;
        if (col.count("uug") && !fields.at(col.at("uug")).empty()) {
            uug = parse_real(fields.at(col.at("uug")), source, line_no);
            check_ratio(*uug, "uug", source, line_no);
        }
        if (col.count("focused_dug") && !fields.at(col.at("focused_dug")).empty()) {
            focused = parse_real(fields.at(col.at("focused_dug")), source, line_no);
            check_ratio(*focused, "focused_dug", source, line_no);
        }
        records.push_back(make_record(get(fields, "name"), size, mlen, d, l, uug, focused));
    }
    return records;
}

std::vector<TreebankRecord> read_records_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_records_csv(buf.str(), path.filename().string());
}

std::string write_records_csv(const std::vector<TreebankRecord>& records) {
    std::string out = "name,train_size,mean_test_len,dug,las,uug,focused_dug\n";
    for (const TreebankRecord& r : records) {
        out += csv_field(r.name);
        out += ',' + std::to_string(r.train_size);
        out += ',' + format_sig6(r.mean_test_len);
        out += ',' + format_sig6(r.dug);
        out += ',' + format_sig6(r.las);
        out += ',';
        if (r.uug) out += format_sig6(*r.uug);
        out += ',';
        if (r.focused_dug) out += format_sig6(*r.focused_dug);
        out += '\n';
    }
    return out;
}

Series feature_series(const std::vector<TreebankRecord>& records, const std::string& feature) {
    Series s;
    s.name = feature;
    s.values.reserve(records.size());
    for (const TreebankRecord& r : records) {
        if (feature == "train_size") {
            s.values.push_back(static_cast<double>(r.train_size));
        } else if (feature == "log_size") {
            s.values.push_back(r.log_size);
        } else if (feature == "mean_test_len") {
            s.values.push_back(r.mean_test_len);
        } else if (feature == "dug") {
            s.values.push_back(r.dug);
        } else if (feature == "las") {
            s.values.push_back(r.las);
        } else if (feature == "uug") {
            if (!r.uug) throw StatsError("record '" + r.name + "' has no uug value");
            s.values.push_back(*r.uug);
        } else if (feature == "focused_dug") {
            if (!r.focused_dug)
                throw StatsError("record '" + r.name + "' has no focused_dug value");
            s.values.push_back(*r.focused_dug);
        } else {
            throw StatsError("unknown feature '" + feature + "'");
        }
    }
    return s;
}

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n") == std::string::npos) return value;
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

} // namespace isoscope
