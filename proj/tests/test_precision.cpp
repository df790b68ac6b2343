#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <doctest.h>

#include "mpnum/precision.hpp"
#include "mpnum/rng.hpp"

using namespace mpnum;

namespace {

bool is_nan_pattern(Half16Bits b) {
    return ((b >> 10) & 0x1F) == 0x1F && (b & 0x3FF) != 0;
}

// Independent nearest-even reference: enumerate every finite binary16
// magnitude, then pick the closest candidate (ties to the even pattern).
// Magnitudes at or beyond 65520 (the midpoint to the next power of two)
// overflow to infinity.
double nearest_half_reference(double x) {
    static const std::vector<std::pair<double, std::uint16_t>> table = [] {
        std::vector<std::pair<double, std::uint16_t>> t;
        for (std::uint16_t b = 0; b <= 0x7BFF; ++b) t.emplace_back(decode_f16(b), b);
        return t;
    }();
    if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
    const double mag = std::fabs(x);
    const double sgn = std::signbit(x) ? -1.0 : 1.0;
    if (mag >= 65520.0) return sgn * std::numeric_limits<double>::infinity();
    auto it = std::lower_bound(
        table.begin(), table.end(), mag,
        [](const auto& p, double v) { return p.first < v; });
    if (it == table.begin()) return sgn * it->first;
    const auto lo = std::prev(it);
    if (it == table.end()) return sgn * lo->first;
    const double dl = mag - lo->first;
    const double dh = it->first - mag;
    if (dl < dh) return sgn * lo->first;
    if (dh < dl) return sgn * it->first;
    return sgn * ((lo->second & 1) == 0 ? lo->first : it->first);  // tie: even
}

}  // namespace

TEST_CASE("format parameter tables") {
    const auto& h = precision_info(Precision::Half);
    const auto& s = precision_info(Precision::Single);
    const auto& d = precision_info(Precision::Double);

    CHECK(h.bits == 16);
    CHECK(h.exponent_bits == 5);
    CHECK(h.significand_bits == 10);
    CHECK(h.e_max == 15);
    CHECK(h.unit_roundoff == 0x1p-11);
    CHECK(h.max_finite == (2.0 - 0x1p-10) * 0x1p15);
    CHECK(h.max_finite == 65504.0);

    CHECK(s.bits == 32);
    CHECK(s.exponent_bits == 8);
    CHECK(s.significand_bits == 23);
    CHECK(s.e_max == 127);
    CHECK(s.unit_roundoff == 0x1p-24);
    CHECK(s.max_finite == (2.0 - 0x1p-23) * 0x1p127);
    CHECK(s.max_finite == double(std::numeric_limits<float>::max()));

    CHECK(d.bits == 64);
    CHECK(d.exponent_bits == 11);
    CHECK(d.significand_bits == 52);
    CHECK(d.e_max == 1023);
    CHECK(d.unit_roundoff == 0x1p-53);
    CHECK(d.max_finite == (2.0 - 0x1p-52) * 0x1p1023);
    CHECK(d.max_finite == DBL_MAX);

    for (const auto* info : {&h, &s, &d}) {
        CHECK(info->bits == 1 + info->exponent_bits + info->significand_bits);
    }
}

TEST_CASE("binary16 decode of known patterns") {
    CHECK(decode_f16(0x3C00) == 1.0);
    CHECK(decode_f16(0x0001) == 0x1p-24);  // smallest subnormal
    CHECK(decode_f16(0x8000) == 0.0);
    CHECK(std::signbit(decode_f16(0x8000)));
    CHECK(decode_f16(0x7BFF) == 65504.0);
    CHECK(decode_f16(0x7C00) == std::numeric_limits<double>::infinity());
    CHECK(decode_f16(0xFC00) == -std::numeric_limits<double>::infinity());
    CHECK(std::isnan(decode_f16(0x7E00)));
    CHECK(decode_f16(0x03FF) == 0x1p-24 * 1023.0);  // largest subnormal
    CHECK(decode_f16(0x0400) == 0x1p-14);           // smallest normal
}

TEST_CASE("binary16 encode of known values") {
    CHECK(encode_f16(0.0) == 0x0000);
    CHECK(encode_f16(-0.0) == 0x8000);
    CHECK(encode_f16(1.0) == 0x3C00);
    CHECK(encode_f16(65504.0) == 0x7BFF);
    CHECK(encode_f16(65520.0) == 0x7C00);  // rounds past max finite
    CHECK(encode_f16(-65520.0) == 0xFC00);
    CHECK(encode_f16(70000.0) == 0x7C00);
    CHECK(encode_f16(1.0 + 0x1p-11) == 0x3C00);         // tie to even
    CHECK(encode_f16(1.0 + 3.0 * 0x1p-12) == 0x3C01);   // rounds up
    CHECK(encode_f16(std::numeric_limits<double>::quiet_NaN()) == 0x7E00);
    CHECK(encode_f16(std::numeric_limits<double>::infinity()) == 0x7C00);
    CHECK(encode_f16(0x1p-25) == 0x0000);  // tie at half the smallest subnormal
    CHECK(encode_f16(0x1p-24) == 0x0001);
    CHECK(encode_f16(1e-300) == 0x0000);
}

TEST_CASE("binary16 round-trips all 65536 patterns") {
    for (std::uint32_t p = 0; p <= 0xFFFF; ++p) {
        const auto b = static_cast<Half16Bits>(p);
        if (is_nan_pattern(b)) {
            CHECK(std::isnan(decode_f16(b)));
            CHECK(encode_f16(decode_f16(b)) == 0x7E00);
            continue;
        }
        CHECK(encode_f16(decode_f16(b)) == b);
    }
}

TEST_CASE("binary16 encode matches the nearest-even reference") {
    Rng rng(20240817);
    for (int i = 0; i < 200000; ++i) {
        double x;
        switch (i % 4) {
            case 0: x = (rng.uniform() - 0.5) * 140000.0; break;   // full range
            case 1: x = (rng.uniform() - 0.5) * 4.0; break;        // near 1
            case 2: x = (rng.uniform() - 0.5) * 0x1p-12; break;    // subnormals
            default: x = rng.normal() * 100.0; break;
        }
        const double got = decode_f16(encode_f16(x));
        const double want = nearest_half_reference(x);
        if (std::isnan(want)) {
            CHECK(std::isnan(got));
        } else {
            CHECK(got == want);
            CHECK(std::signbit(got) == std::signbit(want));
        }
    }
    // Boundary values around the overflow threshold and binade edges.
    for (double x : {65503.999, 65504.0, 65519.999, 65520.0, 65520.001, 2047.5,
                     2048.5, 2049.0, 0x1p-14, 0x1p-14 - 0x1p-25, 0x1p-25,
                     0x1p-25 * 1.0000001, 0x1p-24 * 1.5}) {
        for (double s : {1.0, -1.0}) {
            const double got = decode_f16(encode_f16(s * x));
            const double want = nearest_half_reference(s * x);
            CHECK(got == want);
        }
    }
}

TEST_CASE("round_to_precision semantics") {
    const double pi = 3.14159265358979323846;
    CHECK(round_to_precision(pi, Precision::Double) == pi);

    const double third = 1.0 / 3.0;
    const double r32 = round_to_precision(third, Precision::Single);
    CHECK(std::fabs(r32 - third) <= 0x1p-24 * third);
    CHECK(r32 == double(float(third)));

    CHECK(round_to_precision(70000.0, Precision::Half) ==
          std::numeric_limits<double>::infinity());

    // Idempotence.
    Rng rng(99);
    for (int i = 0; i < 1000; ++i) {
        const double x = (rng.uniform() - 0.5) * 1000.0;
        for (Precision p : {Precision::Half, Precision::Single, Precision::Double}) {
            const double once = round_to_precision(x, p);
            CHECK(round_to_precision(once, p) == once);
        }
    }
}

TEST_CASE("rounding is monotone and within the unit-roundoff bound") {
    Rng rng(1234);
    std::vector<double> xs(2000);
    for (auto& x : xs) x = (rng.uniform() - 0.5) * 120000.0;
    std::sort(xs.begin(), xs.end());
    for (Precision p : {Precision::Half, Precision::Single, Precision::Double}) {
        double prev = -std::numeric_limits<double>::infinity();
        for (double x : xs) {
            const double r = round_to_precision(x, p);
            CHECK(r >= prev);
            prev = r;
            // Relative error bound inside the normal range.
            const double lo = std::ldexp(1.0, 1 - precision_info(p).e_max);
            if (std::fabs(x) >= lo && std::fabs(x) <= max_finite(p)) {
                CHECK(std::fabs(r - x) <= unit_roundoff(p) * std::fabs(x));
            }
        }
    }
}

TEST_CASE("promotion lattice") {
    CHECK(promote(Precision::Single, Precision::Double) == Precision::Double);
    CHECK(promote(Precision::Half, Precision::Half) == Precision::Half);
    CHECK(promote(Precision::Half, Precision::Single) == Precision::Single);

    const Precision all[] = {Precision::Half, Precision::Single, Precision::Double};
    for (Precision a : all) {
        CHECK(promote(a, a) == a);                       // idempotent
        CHECK(promote(a, Precision::Double) == Precision::Double);  // absorbing
        for (Precision b : all) {
            CHECK(promote(a, b) == promote(b, a));       // commutative
            CHECK(static_cast<int>(promote(a, b)) ==
                  std::max(static_cast<int>(a), static_cast<int>(b)));
            for (Precision c : all) {                    // associative
                CHECK(promote(promote(a, b), c) == promote(a, promote(b, c)));
            }
        }
    }
}

TEST_CASE("precision names and labels") {
    CHECK(precision_name(Precision::Half) == "half");
    CHECK(precision_name(Precision::Single) == "single");
    CHECK(precision_name(Precision::Double) == "double");
    CHECK(parse_precision("half") == Precision::Half);
    CHECK(parse_precision("single") == Precision::Single);
    CHECK(parse_precision("double") == Precision::Double);
    CHECK_THROWS_AS(parse_precision("fp8"), InvalidParam);
    CHECK(precision_label(Precision::Half) == "16-Bit");
    CHECK(precision_label(Precision::Single) == "32-Bit");
    CHECK(precision_label(Precision::Double) == "64-Bit");
}
