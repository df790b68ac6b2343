#pragma once

#include <cstdint>
#include <string>

#include "mpnum/errors.hpp"

namespace mpnum {

// The three supported storage formats, totally ordered Half < Single < Double.
enum class Precision : int { Half = 0, Single = 1, Double = 2 };

// IEEE-754 parameters of a format. Base is fixed to 2.
struct PrecisionInfo {
    Precision kind;
    int bits;              // total storage width
    int exponent_bits;
    int significand_bits;  // stored fraction bits
    int e_max;             // e_min = 1 - e_max
    double unit_roundoff;
    double max_finite;
};

const PrecisionInfo& precision_info(Precision p);

inline int precision_bits(Precision p) { return precision_info(p).bits; }
inline double unit_roundoff(Precision p) { return precision_info(p).unit_roundoff; }
inline double max_finite(Precision p) { return precision_info(p).max_finite; }

// Lattice join: max(a, b) under Half < Single < Double.
inline Precision promote(Precision a, Precision b) {
    return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

// Serialized names: "half", "single", "double".
std::string precision_name(Precision p);
Precision parse_precision(const std::string& name);

// Display labels: "16-Bit", "32-Bit", "64-Bit".
std::string precision_label(Precision p);

// IEEE-754 binary16 bit pattern: 1 sign | 5 exponent | 10 fraction.
using Half16Bits = std::uint16_t;

// Nearest binary16 pattern under round-to-nearest, ties-to-even.
// Overflow maps to +/-inf, underflow to +/-0, NaN to one canonical quiet NaN.
Half16Bits encode_f16(double x);

// Exact double value of a binary16 pattern.
double decode_f16(Half16Bits bits);

// Nearest value representable in p (ties-to-even); identity on Double.
double round_to_precision(double x, Precision p);

}  // namespace mpnum
