#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tcsurv/dataset.hpp"

namespace tcsurv {

// Column layout for observed-data files. Covariates default to the
// contiguous block w1..wp discovered from the header.
struct ColumnSpec {
    std::string y = "y";
    std::string delta = "delta";
    std::vector<std::string> covariates;  // empty -> auto-detect w1..wp
};

// Reader rejects missing values, non-finite or negative y, and any delta
// outside {0,1}; all row errors carry the 1-based file line number.
Dataset read_csv(const std::string& path, const ColumnSpec& schema = {});
Dataset read_csv(std::istream& in, const ColumnSpec& schema = {});

void write_csv(const Dataset& dataset, const std::string& path);
void write_csv(const Dataset& dataset, std::ostream& out);

// Latent-data files (w1..wp, t, c) for the simulator and the evaluation
// oracle. `c` may be omitted, in which case records are uncensored.
std::vector<FullRecord> read_full_csv(const std::string& path);
std::vector<FullRecord> read_full_csv(std::istream& in);

void write_full_csv(const std::vector<FullRecord>& records, const std::string& path);
void write_full_csv(const std::vector<FullRecord>& records, std::ostream& out);

// Covariate rows only (header w1..wp; other columns ignored), for scoring
// new points.
std::vector<std::vector<double>> read_covariates_csv(const std::string& path);
std::vector<std::vector<double>> read_covariates_csv(std::istream& in);

// Shortest decimal form that round-trips a double exactly.
std::string format_double(double v);

}  // namespace tcsurv
