#pragma once

#include <string>
#include <vector>

#include "mpnum/array.hpp"

namespace mpnum::io {

// One benchmark observation.
struct BenchRecord {
    std::string op;
    long n = 0;
    std::string precision;
    std::string placement;
    int reps = 0;
    double median_seconds = 0.0;
    double rel_frob_err = 0.0;
};

enum class ResultsFormat { Csv, Json };

// Headerless rectangular CSV, row-major in the file; elements rounded to
// `precision` on load.
MPArray read_matrix_csv(const std::string& path, Precision precision);

// Row-major with enough digits for value round-trip per format
// (17 / 9 / 5 significant digits for double / single / half).
void write_matrix_csv(const std::string& path, const MPArray& a);

void write_results(const std::string& path,
                   const std::vector<BenchRecord>& records, ResultsFormat format);

}  // namespace mpnum::io
