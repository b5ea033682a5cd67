#pragma once

#include "vai/raster.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace vai {

inline constexpr int kLbpNeighbours = 8;
inline constexpr int kLbpBins = 1 << kLbpNeighbours;

/// Radius-1, 8-neighbour LBP codes over the interior ((w-2) x (h-2)).
/// Bit k is set when neighbour k >= centre; neighbours run counter-clockwise
/// from East: E, NE, N, NW, W, SW, S, SE (bits 0..7).
struct LbpCodeMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> codes;

    std::uint8_t at(int x, int y) const noexcept { return codes[static_cast<std::size_t>(y) * width + x]; }
};

struct Histogram {
    std::vector<double> values;

    std::size_t bins() const noexcept { return values.size(); }
};

LbpCodeMap lbp_code_map(const GrayBuffer& img);

/// Code frequencies divided by the number of interior pixels.
Histogram normalized_histogram(const LbpCodeMap& codes, int bins = kLbpBins);

inline constexpr double kEntropyEpsilon = 1e-6;

/// -sum h(k) * log2(h(k) + epsilon), in bits. Applied literally, so a delta
/// histogram gives a tiny negative value (-log2(1 + epsilon)).
/// Throws ContractError when the histogram does not sum to 1 within 1e-6.
double entropy(const Histogram& h, double epsilon = kEntropyEpsilon);

}  // namespace vai
