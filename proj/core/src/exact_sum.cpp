#include "vai/exact_sum.hpp"

#include "vai/error.hpp"

#include <bit>
#include <cmath>
#include <cstdint>

namespace vai {

namespace {

constexpr int kFracBits = 64;

// Round |x| * 2^64 to the nearest integer (ties away from zero), then restore
// the sign. Working on the magnitude makes fixed(-x) == -fixed(x).
int128 to_fixed(double x) {
    const auto bits = std::bit_cast<std::uint64_t>(x);
    const int biased = static_cast<int>((bits >> 52) & 0x7ff);
    if (biased >= 1023 + 40) {  // also catches inf and nan
        throw ContractError("ExactSum: addend out of range");
    }
    if (biased == 0) return 0;  // zero or subnormal, far below the grid
    const std::uint64_t mant = (bits & ((std::uint64_t{1} << 52) - 1)) | (std::uint64_t{1} << 52);
    const int shift = biased - 1075 + kFracBits;  // |x| * 2^64 = mant * 2^shift
    uint128 mag;
    if (shift >= 0) {
        mag = static_cast<uint128>(mant) << shift;
    } else if (shift > -64) {
        const int s = -shift;
        mag = (static_cast<uint128>(mant) + (static_cast<uint128>(1) << (s - 1))) >> s;
    } else {
        mag = 0;
    }
    const auto v = static_cast<int128>(mag);
    return (bits >> 63) != 0 ? -v : v;
}

double from_fixed(int128 v) {
    const bool neg = v < 0;
    const auto mag = static_cast<uint128>(neg ? -v : v);
    const auto hi = static_cast<std::uint64_t>(mag >> 64);
    const auto lo = static_cast<std::uint64_t>(mag);
    // hi + lo * 2^-64, with the low word contributing below the rounding of hi
    // only when hi is small; long double carries 64 bits of mantissa.
    const long double r = static_cast<long double>(hi) + std::ldexp(static_cast<long double>(lo), -64);
    const auto d = static_cast<double>(r);
    return neg ? -d : d;
}

}  // namespace

void ExactSum::add(double x) {
    acc_ += to_fixed(x);
    ++count_;
}

double ExactSum::value() const noexcept { return from_fixed(acc_); }

double exact_sum(std::span<const double> values) {
    ExactSum s;
    for (double v : values) s.add(v);
    return s.value();
}

double exact_mean(std::span<const double> values) {
    if (values.empty()) throw EmptyInputError("mean of empty sequence");
    return exact_sum(values) / static_cast<double>(values.size());
}

double population_variance(std::span<const double> values) {
    const double mean = exact_mean(values);
    ExactSum sq;
    for (double v : values) {
        const double d = v - mean;
        sq.add(d * d);
    }
    return sq.value() / static_cast<double>(values.size());
}

}  // namespace vai
