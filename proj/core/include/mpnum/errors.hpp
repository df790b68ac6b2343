#pragma once

#include <stdexcept>
#include <string>

namespace mpnum {

struct ShapeMismatch : std::runtime_error {
    explicit ShapeMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

struct IndexOutOfRange : std::out_of_range {
    explicit IndexOutOfRange(const std::string& msg) : std::out_of_range(msg) {}
};

struct NotAMatrix : std::runtime_error {
    explicit NotAMatrix(const std::string& msg) : std::runtime_error(msg) {}
};

struct EmptyArray : std::runtime_error {
    explicit EmptyArray(const std::string& msg) : std::runtime_error(msg) {}
};

// Reports the first pivot column that failed (0-based).
struct NotPositiveDefinite : std::runtime_error {
    int column;
    explicit NotPositiveDefinite(int col)
        : std::runtime_error("matrix is not positive definite at pivot column " +
                             std::to_string(col)),
          column(col) {}
};

struct SingularMatrix : std::runtime_error {
    explicit SingularMatrix(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoConvergence : std::runtime_error {
    explicit NoConvergence(const std::string& msg) : std::runtime_error(msg) {}
};

struct UnknownOperation : std::runtime_error {
    explicit UnknownOperation(const std::string& op)
        : std::runtime_error("unknown operation: " + op) {}
};

struct BackendUnavailable : std::runtime_error {
    explicit BackendUnavailable(const std::string& msg) : std::runtime_error(msg) {}
};

struct PrecisionMismatch : std::runtime_error {
    explicit PrecisionMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidParam : std::invalid_argument {
    explicit InvalidParam(const std::string& msg) : std::invalid_argument(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : std::runtime_error {
    long line;
    long column;
    ParseError(long ln, long col, const std::string& msg)
        : std::runtime_error("parse error at line " + std::to_string(ln) +
                             ", column " + std::to_string(col) + ": " + msg),
          line(ln),
          column(col) {}
};

struct RaggedRows : std::runtime_error {
    long line;
    explicit RaggedRows(long ln)
        : std::runtime_error("ragged row at line " + std::to_string(ln)), line(ln) {}
};

}  // namespace mpnum
