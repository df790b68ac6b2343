#include "mpnum/precision.hpp"

#include <bit>
#include <cmath>
#include <limits>

namespace mpnum {

namespace {

constexpr PrecisionInfo kInfos[3] = {
    {Precision::Half, 16, 5, 10, 15, 0x1p-11, 65504.0},
    {Precision::Single, 32, 8, 23, 127, 0x1p-24, (2.0 - 0x1p-23) * 0x1p127},
    {Precision::Double, 64, 11, 52, 1023, 0x1p-53, std::numeric_limits<double>::max()},
};

constexpr std::uint16_t kHalfQuietNan = 0x7E00;

}  // namespace

const PrecisionInfo& precision_info(Precision p) {
    return kInfos[static_cast<int>(p)];
}

std::string precision_name(Precision p) {
    switch (p) {
        case Precision::Half: return "half";
        case Precision::Single: return "single";
        default: return "double";
    }
}

Precision parse_precision(const std::string& name) {
    if (name == "half") return Precision::Half;
    if (name == "single") return Precision::Single;
    if (name == "double") return Precision::Double;
    throw InvalidParam("unknown precision: \"" + name +
                       "\" (expected half, single, or double)");
}

std::string precision_label(Precision p) {
    switch (p) {
        case Precision::Half: return "16-Bit";
        case Precision::Single: return "32-Bit";
        default: return "64-Bit";
    }
}

Half16Bits encode_f16(double x) {
    const std::uint64_t d = std::bit_cast<std::uint64_t>(x);
    const std::uint16_t sign = static_cast<std::uint16_t>((d >> 63) << 15);
    const int dexp = static_cast<int>((d >> 52) & 0x7FF);
    const std::uint64_t dfrac = d & ((std::uint64_t{1} << 52) - 1);

    if (dexp == 0x7FF) {
        if (dfrac != 0) return kHalfQuietNan;
        return static_cast<Half16Bits>(sign | 0x7C00);  // +/- inf
    }
    if (dexp == 0 && dfrac == 0) return sign;  // signed zero

    // Double subnormals are far below the half subnormal range.
    if (dexp == 0) return sign;

    const int e = dexp - 1023;                       // unbiased exponent
    std::uint64_t m = (std::uint64_t{1} << 52) | dfrac;  // 53-bit significand

    // Right-shift so the kept bits land on the half significand grid,
    // rounding to nearest with ties to even via the discarded remainder.
    int shift;
    if (e >= -14) {
        shift = 42;  // keep 11 bits (implicit + 10 fraction)
    } else {
        shift = 42 + (-14 - e);  // subnormal target: value = f * 2^-24
        if (shift >= 64) return sign;
    }

    std::uint64_t keep = m >> shift;
    const std::uint64_t rem = m & ((std::uint64_t{1} << shift) - 1);
    const std::uint64_t half = std::uint64_t{1} << (shift - 1);
    if (rem > half || (rem == half && (keep & 1))) ++keep;

    if (e >= -14) {
        int he = e + 15;
        if (keep == 0x800) {  // rounding carried into the next binade
            keep = 0x400;
            ++he;
        }
        if (he >= 31) return static_cast<Half16Bits>(sign | 0x7C00);  // overflow
        return static_cast<Half16Bits>(sign | (he << 10) | (keep & 0x3FF));
    }
    // Subnormal; a carry to keep == 0x400 lands exactly on the smallest normal.
    return static_cast<Half16Bits>(sign | keep);
}

double decode_f16(Half16Bits bits) {
    const int sign = (bits >> 15) & 1;
    const int exp = (bits >> 10) & 0x1F;
    const int frac = bits & 0x3FF;
    double mag;
    if (exp == 0x1F) {
        if (frac != 0) return std::numeric_limits<double>::quiet_NaN();
        mag = std::numeric_limits<double>::infinity();
    } else if (exp == 0) {
        mag = std::ldexp(static_cast<double>(frac), -24);
    } else {
        mag = std::ldexp(static_cast<double>(0x400 | frac), exp - 25);
    }
    return sign ? -mag : mag;
}

double round_to_precision(double x, Precision p) {
    switch (p) {
        case Precision::Half:
            return decode_f16(encode_f16(x));
        case Precision::Single:
            return static_cast<double>(static_cast<float>(x));
        default:
            return x;
    }
}

}  // namespace mpnum
