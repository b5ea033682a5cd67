#include "vai/texture.hpp"

#include "vai/error.hpp"
#include "vai/exact_sum.hpp"

#include <cmath>
#include <string>

namespace vai {

namespace {

// (dx, dy) for E, NE, N, NW, W, SW, S, SE with y pointing down.
constexpr int kOffsets[kLbpNeighbours][2] = {
    {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1},
};

}  // namespace

LbpCodeMap lbp_code_map(const GrayBuffer& img) {
    if (img.width() < 3 || img.height() < 3) {
        throw DimensionError("lbp_code_map: image must be at least 3x3, got " + std::to_string(img.width()) + "x" +
                             std::to_string(img.height()));
    }
    LbpCodeMap out;
    out.width = img.width() - 2;
    out.height = img.height() - 2;
    out.codes.resize(static_cast<std::size_t>(out.width) * out.height);

    for (int y = 1; y < img.height() - 1; ++y) {
        for (int x = 1; x < img.width() - 1; ++x) {
            const double centre = img.at(x, y);
            unsigned code = 0;
            for (int k = 0; k < kLbpNeighbours; ++k) {
                if (img.at(x + kOffsets[k][0], y + kOffsets[k][1]) >= centre) code |= 1u << k;
            }
            out.codes[static_cast<std::size_t>(y - 1) * out.width + (x - 1)] = static_cast<std::uint8_t>(code);
        }
    }
    return out;
}

Histogram normalized_histogram(const LbpCodeMap& codes, int bins) {
    if (bins != kLbpBins) {
        throw ArgumentError("LBP histogram needs 2^8 = 256 bins, got " + std::to_string(bins));
    }
    if (codes.codes.empty()) {
        throw EmptyInputError("normalized_histogram: empty code map");
    }
    std::vector<std::size_t> counts(bins, 0);
    for (std::uint8_t c : codes.codes) ++counts[c];

    Histogram h;
    h.values.resize(bins);
    const double n = static_cast<double>(codes.codes.size());
    for (int b = 0; b < bins; ++b) h.values[b] = static_cast<double>(counts[b]) / n;
    return h;
}

double entropy(const Histogram& h, double epsilon) {
    if (h.values.empty()) {
        throw EmptyInputError("entropy: empty histogram");
    }
    ExactSum total;
    for (double v : h.values) {
        if (v < 0.0) throw ContractError("entropy: negative histogram value");
        total.add(v);
    }
    if (std::fabs(total.value() - 1.0) > 1e-6) {
        throw ContractError("entropy: histogram is not normalized (sum = " + std::to_string(total.value()) + ")");
    }
    // Bin order does not affect the exact accumulation, so permuted
    // histograms give bit-identical entropies.
    ExactSum acc;
    for (double v : h.values) {
        if (v > 0.0) acc.add(v * std::log2(v + epsilon));
    }
    return -acc.value();
}

}  // namespace vai
