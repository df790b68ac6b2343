#include "mpnum/array.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <sstream>

#include "mpnum/errors.hpp"

namespace mpnum {

namespace {

std::size_t element_bytes(Precision p) {
    return static_cast<std::size_t>(precision_bits(p)) / 8;
}

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

std::string placement_name(Placement p) {
    return p == Placement::CPU ? "CPU" : "GPU";
}

Placement parse_placement(const std::string& name) {
    if (name == "CPU" || name == "cpu") return Placement::CPU;
    if (name == "GPU" || name == "gpu") return Placement::GPU;
    throw InvalidParam("unknown placement: \"" + name + "\" (expected CPU or GPU)");
}

void require_cpu(const MPArray& a, const char* what) {
    if (a.placement() == Placement::GPU) {
        throw BackendUnavailable(std::string(what) +
                                 ": GPU placement is accepted for object creation "
                                 "but no GPU backend is available; use CPU");
    }
}

MPArray::MPArray(std::size_t rows, std::size_t cols, bool is_matrix, Precision prec,
                 Placement place)
    : size_(rows * cols),
      rows_(rows),
      cols_(cols),
      is_matrix_(is_matrix),
      prec_(prec),
      place_(place),
      data_(size_ * element_bytes(prec), 0) {}

MPArray MPArray::zeros(std::size_t size, Precision prec, Placement place) {
    if (size < 1) throw InvalidParam("zeros: size must be >= 1");
    return MPArray(size, 1, false, prec, place);
}

MPArray MPArray::zeros_matrix(std::size_t rows, std::size_t cols, Precision prec,
                              Placement place) {
    return MPArray(rows, cols, true, prec, place);
}

MPArray MPArray::from_doubles(const std::vector<double>& values, std::size_t rows,
                              std::size_t cols, Precision prec, Placement place) {
    if (values.size() != rows * cols) {
        throw ShapeMismatch("from_doubles: " + std::to_string(values.size()) +
                            " values cannot fill a " + std::to_string(rows) + "x" +
                            std::to_string(cols) + " matrix");
    }
    MPArray out(rows, cols, true, prec, place);
    for (std::size_t i = 0; i < values.size(); ++i) out.set_linear(i, values[i]);
    return out;
}

MPArray MPArray::vector_from_doubles(const std::vector<double>& values,
                                     Precision prec, Placement place) {
    if (values.empty()) throw InvalidParam("vector_from_doubles: empty input");
    MPArray out(values.size(), 1, false, prec, place);
    for (std::size_t i = 0; i < values.size(); ++i) out.set_linear(i, values[i]);
    return out;
}

void MPArray::to_matrix(std::size_t rows, std::size_t cols) {
    if (rows * cols != size_) {
        throw ShapeMismatch("to_matrix: " + std::to_string(rows) + "x" +
                            std::to_string(cols) + " does not hold " +
                            std::to_string(size_) + " elements");
    }
    rows_ = rows;
    cols_ = cols;
    is_matrix_ = true;
}

double MPArray::at_linear(std::size_t i) const {
    switch (prec_) {
        case Precision::Half: {
            Half16Bits b;
            std::memcpy(&b, data_.data() + i * 2, 2);
            return decode_f16(b);
        }
        case Precision::Single: {
            float f;
            std::memcpy(&f, data_.data() + i * 4, 4);
            return static_cast<double>(f);
        }
        default: {
            double d;
            std::memcpy(&d, data_.data() + i * 8, 8);
            return d;
        }
    }
}

void MPArray::set_linear(std::size_t i, double v) {
    switch (prec_) {
        case Precision::Half: {
            const Half16Bits b = encode_f16(v);
            std::memcpy(data_.data() + i * 2, &b, 2);
            break;
        }
        case Precision::Single: {
            const float f = static_cast<float>(v);
            std::memcpy(data_.data() + i * 4, &f, 4);
            break;
        }
        default:
            std::memcpy(data_.data() + i * 8, &v, 8);
            break;
    }
}

double MPArray::get(std::size_t i) const {
    if (i >= size_) {
        throw IndexOutOfRange("index " + std::to_string(i) + " out of range [0, " +
                              std::to_string(size_) + ")");
    }
    return at_linear(i);
}

double MPArray::get(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) {
        throw IndexOutOfRange("index (" + std::to_string(i) + ", " +
                              std::to_string(j) + ") out of range for " +
                              std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    return at_linear(j * rows_ + i);
}

void MPArray::set(std::size_t i, double v) {
    if (i >= size_) {
        throw IndexOutOfRange("index " + std::to_string(i) + " out of range [0, " +
                              std::to_string(size_) + ")");
    }
    set_linear(i, v);
}

void MPArray::set(std::size_t i, std::size_t j, double v) {
    if (i >= rows_ || j >= cols_) {
        throw IndexOutOfRange("index (" + std::to_string(i) + ", " +
                              std::to_string(j) + ") out of range for " +
                              std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    set_linear(j * rows_ + i, v);
}

std::vector<double> MPArray::to_doubles() const {
    std::vector<double> out(size_);
    for (std::size_t i = 0; i < size_; ++i) out[i] = at_linear(i);
    return out;
}

Half16Bits MPArray::half_bits(std::size_t i) const {
    if (prec_ != Precision::Half) {
        throw InvalidParam("half_bits: array is not half precision");
    }
    if (i >= size_) {
        throw IndexOutOfRange("index " + std::to_string(i) + " out of range");
    }
    Half16Bits b;
    std::memcpy(&b, data_.data() + i * 2, 2);
    return b;
}

MPArray MPArray::converted(Precision prec) const {
    MPArray out(rows_, cols_, is_matrix_, prec, place_);
    for (std::size_t i = 0; i < size_; ++i) out.set_linear(i, at_linear(i));
    return out;
}

std::string MPArray::format() const {
    std::ostringstream os;
    os << "MPCR Object: " << precision_label(prec_) << " Precision on "
       << placement_name(place_) << "\n";
    if (!is_matrix_) {
        os << "Vector Size : " << size_ << "\n";
        os << "---------------------\n";
        const std::size_t per_line = 10;
        for (std::size_t start = 0; start < size_; start += per_line) {
            os << "[ " << (start + 1) << " ]";
            for (std::size_t i = start; i < std::min(size_, start + per_line); ++i) {
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%7s", format_value(at_linear(i)).c_str());
                os << buf;
            }
            os << "\n";
        }
    } else {
        os << "Number of Rows : " << rows_ << "\n";
        os << "Number of Columns : " << cols_ << "\n";
        os << "---------------------\n";
        for (std::size_t i = 0; i < rows_; ++i) {
            os << " [ ";
            for (std::size_t j = 0; j < cols_; ++j) {
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%7s ",
                              format_value(at_linear(j * rows_ + i)).c_str());
                os << buf;
            }
            os << "]\n";
        }
    }
    return os.str();
}

namespace {

void check_same_shape(const MPArray& a, const MPArray& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols() ||
        a.is_matrix() != b.is_matrix()) {
        throw ShapeMismatch(std::string(what) + ": shapes " +
                            std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                            " and " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()) + " do not match");
    }
}

template <typename T>
T apply_binary(BinaryOp op, T x, T y) {
    switch (op) {
        case BinaryOp::Add: return x + y;
        case BinaryOp::Sub: return x - y;
        case BinaryOp::Mul: return x * y;
        default: return x / y;  // IEEE semantics, no error on zero divisor
    }
}

}  // namespace

MPArray ew_binary(BinaryOp op, const MPArray& a, const MPArray& b) {
    require_cpu(a, "ew_binary");
    require_cpu(b, "ew_binary");
    check_same_shape(a, b, "ew_binary");
    const Precision out_prec = promote(a.precision(), b.precision());
    MPArray out = a.is_matrix()
                      ? MPArray::zeros_matrix(a.rows(), a.cols(), out_prec)
                      : MPArray::zeros(a.size(), out_prec);
    if (compute_precision(out_prec) == Precision::Single) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            const float x = static_cast<float>(a.at_linear(i));
            const float y = static_cast<float>(b.at_linear(i));
            out.set_linear(i, static_cast<double>(apply_binary(op, x, y)));
        }
    } else {
        for (std::size_t i = 0; i < a.size(); ++i) {
            out.set_linear(i, apply_binary(op, a.at_linear(i), b.at_linear(i)));
        }
    }
    return out;
}

MPArray ew_scalar(BinaryOp op, const MPArray& a, double s) {
    require_cpu(a, "ew_scalar");
    MPArray out = a.is_matrix()
                      ? MPArray::zeros_matrix(a.rows(), a.cols(), a.precision())
                      : MPArray::zeros(a.size(), a.precision());
    if (compute_precision(a.precision()) == Precision::Single) {
        const float y = static_cast<float>(round_to_precision(s, a.precision()));
        for (std::size_t i = 0; i < a.size(); ++i) {
            const float x = static_cast<float>(a.at_linear(i));
            out.set_linear(i, static_cast<double>(apply_binary(op, x, y)));
        }
    } else {
        for (std::size_t i = 0; i < a.size(); ++i) {
            out.set_linear(i, apply_binary(op, a.at_linear(i), s));
        }
    }
    return out;
}

MPArray ew_unary(UnaryOp op, const MPArray& a) {
    require_cpu(a, "ew_unary");
    MPArray out = a.is_matrix()
                      ? MPArray::zeros_matrix(a.rows(), a.cols(), a.precision())
                      : MPArray::zeros(a.size(), a.precision());
    const bool single = compute_precision(a.precision()) == Precision::Single;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = a.at_linear(i);
        double v;
        switch (op) {
            case UnaryOp::Log:
                v = single ? static_cast<double>(std::log(static_cast<float>(x)))
                           : std::log(x);
                break;
            case UnaryOp::Exp:
                v = single ? static_cast<double>(std::exp(static_cast<float>(x)))
                           : std::exp(x);
                break;
            case UnaryOp::Sqrt:
                v = single ? static_cast<double>(std::sqrt(static_cast<float>(x)))
                           : std::sqrt(x);
                break;
            default:
                v = std::fabs(x);
                break;
        }
        out.set_linear(i, v);
    }
    return out;
}

MPArray ew_round(const MPArray& a, int digits) {
    require_cpu(a, "ew_round");
    MPArray out = a.is_matrix()
                      ? MPArray::zeros_matrix(a.rows(), a.cols(), a.precision())
                      : MPArray::zeros(a.size(), a.precision());
    const double scale = std::pow(10.0, digits);
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.set_linear(i, std::round(a.at_linear(i) * scale) / scale);
    }
    return out;
}

double reduce(ReduceOp op, const MPArray& a) {
    require_cpu(a, "reduce");
    if (a.size() == 0) throw EmptyArray("reduce: empty array");
    switch (op) {
        case ReduceOp::Sum: {
            double acc = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) acc += a.at_linear(i);
            return acc;
        }
        case ReduceOp::SquareSum: {
            double acc = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double x = a.at_linear(i);
                acc += x * x;
            }
            return acc;
        }
        case ReduceOp::Min: {
            double m = a.at_linear(0);
            for (std::size_t i = 1; i < a.size(); ++i) m = std::min(m, a.at_linear(i));
            return m;
        }
        case ReduceOp::Max: {
            double m = a.at_linear(0);
            for (std::size_t i = 1; i < a.size(); ++i) m = std::max(m, a.at_linear(i));
            return m;
        }
        default: {
            double acc = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) acc += a.at_linear(i);
            return acc / static_cast<double>(a.size());
        }
    }
}

MPArray diag(const MPArray& a) {
    require_cpu(a, "diag");
    if (!a.is_matrix()) throw NotAMatrix("diag: input is not a matrix");
    const std::size_t n = std::min(a.rows(), a.cols());
    MPArray out = MPArray::zeros(n, a.precision());
    for (std::size_t i = 0; i < n; ++i) out.set_linear(i, a.get(i, i));
    return out;
}

MPArray diag_from(const MPArray& v, std::size_t n) {
    require_cpu(v, "diag_from");
    if (v.size() != n) {
        throw ShapeMismatch("diag_from: vector length " + std::to_string(v.size()) +
                            " does not match n = " + std::to_string(n));
    }
    MPArray out = MPArray::zeros_matrix(n, n, v.precision());
    for (std::size_t i = 0; i < n; ++i) out.set(i, i, v.at_linear(i));
    return out;
}

MPArray concat(ConcatAxis axis, const MPArray& a, const MPArray& b) {
    require_cpu(a, "concat");
    require_cpu(b, "concat");
    const Precision out_prec = promote(a.precision(), b.precision());
    if (axis == ConcatAxis::Rows) {
        if (a.cols() != b.cols()) {
            throw ShapeMismatch("rbind: column counts " + std::to_string(a.cols()) +
                                " and " + std::to_string(b.cols()) + " differ");
        }
        MPArray out =
            MPArray::zeros_matrix(a.rows() + b.rows(), a.cols(), out_prec);
        for (std::size_t j = 0; j < a.cols(); ++j) {
            for (std::size_t i = 0; i < a.rows(); ++i) out.set(i, j, a.get(i, j));
            for (std::size_t i = 0; i < b.rows(); ++i)
                out.set(a.rows() + i, j, b.get(i, j));
        }
        return out;
    }
    if (a.rows() != b.rows()) {
        throw ShapeMismatch("cbind: row counts " + std::to_string(a.rows()) +
                            " and " + std::to_string(b.rows()) + " differ");
    }
    MPArray out = MPArray::zeros_matrix(a.rows(), a.cols() + b.cols(), out_prec);
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) out.set(i, j, a.get(i, j));
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t i = 0; i < b.rows(); ++i)
            out.set(i, a.cols() + j, b.get(i, j));
    return out;
}

MPArray transpose(const MPArray& a) {
    require_cpu(a, "transpose");
    if (!a.is_matrix()) throw NotAMatrix("transpose: input is not a matrix");
    MPArray out = MPArray::zeros_matrix(a.cols(), a.rows(), a.precision());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) out.set(j, i, a.get(i, j));
    return out;
}

}  // namespace mpnum
