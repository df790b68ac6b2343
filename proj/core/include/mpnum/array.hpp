#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mpnum/precision.hpp"

namespace mpnum {

enum class Placement { CPU, GPU };

std::string placement_name(Placement p);
Placement parse_placement(const std::string& name);

// Multi-precision container: a vector or a column-major matrix whose
// elements are stored in half, single, or double precision.
class MPArray {
public:
    MPArray() = default;

    // Zero vector of `size` elements.
    static MPArray zeros(std::size_t size, Precision prec,
                         Placement place = Placement::CPU);

    // Zero matrix.
    static MPArray zeros_matrix(std::size_t rows, std::size_t cols, Precision prec,
                                Placement place = Placement::CPU);

    // Column-major matrix from doubles, each element rounded to `prec`.
    static MPArray from_doubles(const std::vector<double>& values, std::size_t rows,
                                std::size_t cols, Precision prec,
                                Placement place = Placement::CPU);

    // Vector from doubles.
    static MPArray vector_from_doubles(const std::vector<double>& values,
                                       Precision prec,
                                       Placement place = Placement::CPU);

    std::size_t size() const { return size_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_matrix() const { return is_matrix_; }
    Precision precision() const { return prec_; }
    Placement placement() const { return place_; }

    // Reshape in place to a rows x cols column-major matrix view.
    void to_matrix(std::size_t rows, std::size_t cols);

    // 0-based element access; get widens exactly, set rounds to the
    // storage precision.
    double get(std::size_t i) const;
    double get(std::size_t i, std::size_t j) const;
    void set(std::size_t i, double v);
    void set(std::size_t i, std::size_t j, double v);

    // Unchecked linear access for kernels.
    double at_linear(std::size_t i) const;
    void set_linear(std::size_t i, double v);

    std::vector<double> to_doubles() const;

    // Raw binary16 patterns (Half arrays only).
    Half16Bits half_bits(std::size_t i) const;

    // Same shape, different precision (elementwise re-round).
    MPArray converted(Precision prec) const;

    std::string format() const;

private:
    MPArray(std::size_t rows, std::size_t cols, bool is_matrix, Precision prec,
            Placement place);

    std::size_t size_ = 0;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    bool is_matrix_ = false;
    Precision prec_ = Precision::Double;
    Placement place_ = Placement::CPU;
    std::vector<unsigned char> data_;
};

enum class BinaryOp { Add, Sub, Mul, Div };
enum class UnaryOp { Log, Exp, Sqrt, Abs };
enum class ReduceOp { Sum, SquareSum, Min, Max, Mean };
enum class ConcatAxis { Rows, Cols };

// Elementwise binary op; output precision is the lattice join of the inputs.
MPArray ew_binary(BinaryOp op, const MPArray& a, const MPArray& b);
MPArray ew_scalar(BinaryOp op, const MPArray& a, double s);

MPArray ew_unary(UnaryOp op, const MPArray& a);

// Decimal rounding to `digits` fractional digits, elementwise.
MPArray ew_round(const MPArray& a, int digits);

// Accumulates in double in a fixed column-major order.
double reduce(ReduceOp op, const MPArray& a);

MPArray diag(const MPArray& a);
MPArray diag_from(const MPArray& v, std::size_t n);

MPArray concat(ConcatAxis axis, const MPArray& a, const MPArray& b);

MPArray transpose(const MPArray& a);

// Compute precision backing a storage precision: Half kernels run in Single.
inline Precision compute_precision(Precision p) {
    return p == Precision::Half ? Precision::Single : p;
}

// Throws BackendUnavailable when any argument is GPU-placed.
void require_cpu(const MPArray& a, const char* what);

}  // namespace mpnum
