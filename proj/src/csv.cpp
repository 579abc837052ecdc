#include "tcsurv/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "tcsurv/errors.hpp"

namespace tcsurv {

std::string format_double(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v || (std::isnan(back) && std::isnan(v))) return buf;
    }
    return buf;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_cell(const std::string& raw, std::size_t line_no, const std::string& col) {
    const std::string s = trim(raw);
    if (s.empty()) throw ParseError(line_no, "missing value in column '" + col + "'");
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw ParseError(line_no, "cannot parse '" + s + "' in column '" + col + "'");
    return v;
}

struct Header {
    std::vector<std::string> names;
    int find(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return static_cast<int>(i);
        return -1;
    }
};

Header read_header(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("empty file: no header row");
    Header h;
    for (auto& c : split_line(line)) h.names.push_back(trim(c));
    return h;
}

// Resolve the covariate block: explicit names, or the contiguous w1..wp run.
std::vector<int> covariate_columns(const Header& h, const ColumnSpec& schema) {
    std::vector<int> cols;
    if (!schema.covariates.empty()) {
        for (const auto& name : schema.covariates) {
            int idx = h.find(name);
            if (idx < 0) throw SchemaError("missing covariate column '" + name + "'");
            cols.push_back(idx);
        }
        return cols;
    }
    for (int k = 1;; ++k) {
        int idx = h.find("w" + std::to_string(k));
        if (idx < 0) break;
        cols.push_back(idx);
    }
    if (cols.empty()) throw SchemaError("no covariate columns w1..wp found in header");
    return cols;
}

}  // namespace

Dataset read_csv(std::istream& in, const ColumnSpec& schema) {
    const Header h = read_header(in);
    const std::vector<int> wcols = covariate_columns(h, schema);
    const int ycol = h.find(schema.y);
    if (ycol < 0) throw SchemaError("missing follow-up column '" + schema.y + "'");
    const int dcol = h.find(schema.delta);
    if (dcol < 0) throw SchemaError("missing indicator column '" + schema.delta + "'");

    std::vector<ObservedRecord> records;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != h.names.size())
            throw ParseError(line_no, "expected " + std::to_string(h.names.size()) +
                                          " cells, got " + std::to_string(cells.size()));
        ObservedRecord r;
        r.w.reserve(wcols.size());
        for (std::size_t k = 0; k < wcols.size(); ++k) {
            double v = parse_cell(cells[wcols[k]], line_no, h.names[wcols[k]]);
            if (!std::isfinite(v)) throw ParseError(line_no, "non-finite covariate");
            r.w.push_back(v);
        }
        r.y = parse_cell(cells[ycol], line_no, schema.y);
        if (!std::isfinite(r.y) || r.y < 0.0)
            throw ParseError(line_no, "follow-up must be finite and >= 0");
        const double d = parse_cell(cells[dcol], line_no, schema.delta);
        if (d != 0.0 && d != 1.0) throw ParseError(line_no, "delta must be 0 or 1");
        r.delta = static_cast<int>(d);
        records.push_back(std::move(r));
    }
    if (records.empty()) throw SizeError("no data rows in file");
    return Dataset(std::move(records));
}

Dataset read_csv(const std::string& path, const ColumnSpec& schema) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    return read_csv(in, schema);
}

void write_csv(const Dataset& dataset, std::ostream& out) {
    for (int k = 1; k <= dataset.p(); ++k) out << "w" << k << ",";
    out << "y,delta\n";
    for (const auto& r : dataset.records()) {
        for (double v : r.w) out << format_double(v) << ",";
        out << format_double(r.y) << "," << r.delta << "\n";
    }
}

void write_csv(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_csv(dataset, out);
    if (!out.good()) throw Error("write failed for '" + path + "'");
}

std::vector<FullRecord> read_full_csv(std::istream& in) {
    const Header h = read_header(in);
    const std::vector<int> wcols = covariate_columns(h, ColumnSpec{});
    const int tcol = h.find("t");
    if (tcol < 0) throw SchemaError("missing latent column 't'");
    const int ccol = h.find("c");  // optional

    std::vector<FullRecord> records;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != h.names.size())
            throw ParseError(line_no, "expected " + std::to_string(h.names.size()) +
                                          " cells, got " + std::to_string(cells.size()));
        FullRecord r;
        for (std::size_t k = 0; k < wcols.size(); ++k) {
            double v = parse_cell(cells[wcols[k]], line_no, h.names[wcols[k]]);
            if (!std::isfinite(v)) throw ParseError(line_no, "non-finite covariate");
            r.w.push_back(v);
        }
        r.t = parse_cell(cells[tcol], line_no, "t");
        if (!std::isfinite(r.t) || r.t < 0.0)
            throw ParseError(line_no, "latent t must be finite and >= 0");
        if (ccol >= 0) {
            r.c = parse_cell(cells[ccol], line_no, "c");
            if (std::isnan(r.c) || r.c < 0.0) throw ParseError(line_no, "latent c must be >= 0");
        } else {
            r.c = std::numeric_limits<double>::infinity();
        }
        records.push_back(std::move(r));
    }
    if (records.empty()) throw SizeError("no data rows in file");
    return records;
}

std::vector<FullRecord> read_full_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    return read_full_csv(in);
}

void write_full_csv(const std::vector<FullRecord>& records, std::ostream& out) {
    const std::size_t p = records.empty() ? 0 : records[0].w.size();
    for (std::size_t k = 1; k <= p; ++k) out << "w" << k << ",";
    out << "t,c,y,delta\n";
    for (const auto& r : records) {
        for (double v : r.w) out << format_double(v) << ",";
        out << format_double(r.t) << "," << format_double(r.c) << ","
            << format_double(r.y()) << "," << r.delta() << "\n";
    }
}

void write_full_csv(const std::vector<FullRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_full_csv(records, out);
    if (!out.good()) throw Error("write failed for '" + path + "'");
}

std::vector<std::vector<double>> read_covariates_csv(std::istream& in) {
    const Header h = read_header(in);
    const std::vector<int> wcols = covariate_columns(h, ColumnSpec{});
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != h.names.size())
            throw ParseError(line_no, "expected " + std::to_string(h.names.size()) +
                                          " cells, got " + std::to_string(cells.size()));
        std::vector<double> w;
        w.reserve(wcols.size());
        for (std::size_t k = 0; k < wcols.size(); ++k) {
            double v = parse_cell(cells[wcols[k]], line_no, h.names[wcols[k]]);
            if (!std::isfinite(v)) throw ParseError(line_no, "non-finite covariate");
            w.push_back(v);
        }
        rows.push_back(std::move(w));
    }
    if (rows.empty()) throw SizeError("no data rows in file");
    return rows;
}

std::vector<std::vector<double>> read_covariates_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    return read_covariates_csv(in);
}

}  // namespace tcsurv
