#include "mpnum/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mpnum/errors.hpp"

namespace mpnum::io {

namespace {

const char* digits_format(Precision p) {
    switch (p) {
        case Precision::Half: return "%.5g";
        case Precision::Single: return "%.9g";
        default: return "%.17g";
    }
}

double parse_field(const std::string& field, long line, long col) {
    const char* begin = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw ParseError(line, col, "not a number: \"" + field + "\"");
    }
    return v;
}

}  // namespace

MPArray read_matrix_csv(const std::string& path, Precision precision) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path + " for reading");
    std::vector<double> values;  // row-major while parsing
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.peek() == EOF) break;  // trailing newline
        std::stringstream ss(line);
        std::string field;
        std::size_t field_count = 0;
        while (std::getline(ss, field, ',')) {
            // trim surrounding blanks
            const auto b = field.find_first_not_of(" \t");
            const auto e = field.find_last_not_of(" \t");
            if (b == std::string::npos) {
                throw ParseError(line_no, static_cast<long>(field_count + 1),
                                 "empty field");
            }
            values.push_back(parse_field(field.substr(b, e - b + 1), line_no,
                                         static_cast<long>(field_count + 1)));
            ++field_count;
        }
        if (rows == 0) {
            cols = field_count;
        } else if (field_count != cols) {
            throw RaggedRows(line_no);
        }
        ++rows;
    }
    if (rows == 0) return MPArray::zeros_matrix(0, 0, precision);
    // transpose row-major file order into column-major storage
    MPArray out = MPArray::zeros_matrix(rows, cols, precision);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            out.set(i, j, values[i * cols + j]);
    return out;
}

void write_matrix_csv(const std::string& path, const MPArray& a) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    const char* fmt = digits_format(a.precision());
    const std::size_t rows = a.is_matrix() ? a.rows() : a.size();
    const std::size_t cols = a.is_matrix() ? a.cols() : 1;
    char buf[40];
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const double v = a.is_matrix() ? a.get(i, j) : a.get(i);
            std::snprintf(buf, sizeof(buf), fmt, v);
            out << buf;
            if (j + 1 < cols) out << ',';
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path);
}

void write_results(const std::string& path,
                   const std::vector<BenchRecord>& records, ResultsFormat format) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    if (format == ResultsFormat::Csv) {
        out << "op,n,precision,placement,reps,median_seconds,rel_frob_err\n";
        char buf[40];
        for (const auto& r : records) {
            out << r.op << ',' << r.n << ',' << r.precision << ',' << r.placement
                << ',' << r.reps << ',';
            std::snprintf(buf, sizeof(buf), "%.17g", r.median_seconds);
            out << buf << ',';
            std::snprintf(buf, sizeof(buf), "%.17g", r.rel_frob_err);
            out << buf << '\n';
        }
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : records) {
            arr.push_back({{"op", r.op},
                           {"n", r.n},
                           {"precision", r.precision},
                           {"placement", r.placement},
                           {"reps", r.reps},
                           {"median_seconds", r.median_seconds},
                           {"rel_frob_err", r.rel_frob_err}});
        }
        out << arr.dump(2) << '\n';
    }
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace mpnum::io
