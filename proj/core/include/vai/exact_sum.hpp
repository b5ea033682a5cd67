#pragma once

#include <cstddef>
#include <span>

namespace vai {

__extension__ using int128 = __int128;
__extension__ using uint128 = unsigned __int128;

/// Order-independent accumulator. Each addend is rounded once onto a fixed
/// 2^-64 grid and summed in 128-bit integer arithmetic, so the total depends
/// only on the multiset of addends: permuting the inputs (flip, transpose,
/// reordered reductions) yields a bit-identical result. Addends must satisfy
/// |x| < 2^40; the resolution floor is 2^-65 per term.
class ExactSum {
public:
    void add(double x);
    double value() const noexcept;
    std::size_t count() const noexcept { return count_; }

private:
    int128 acc_ = 0;
    std::size_t count_ = 0;
};

double exact_sum(std::span<const double> values);
double exact_mean(std::span<const double> values);

/// Population variance (divide by N) built on ExactSum; permutation invariant
/// and symmetric under negation of every sample.
double population_variance(std::span<const double> values);

}  // namespace vai
