#include <algorithm>
#include <cstdint>
#include "support.hpp"

#include <set>
#include <tuple>

namespace testing {

CountedFootprint counted_footprint(const Layer& l, const DimSizes& t) {
    using enum Dim;
    const bool dw = l.kind == LayerKind::DwConv;
    std::set<std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>> w, in, out;
    for (std::int64_t k = 0; k < t[K]; ++k)
        for (std::int64_t c = 0; c < t[C]; ++c)
            for (std::int64_t y = 0; y < t[Y]; ++y)
                for (std::int64_t x = 0; x < t[X]; ++x)
                    for (std::int64_t r = 0; r < t[R]; ++r)
                        for (std::int64_t s = 0; s < t[S]; ++s) {
                            const auto ch = dw ? k : c;
                            w.insert({k, dw ? 0 : c, r, s});
                            in.insert({ch, y * l.stride + r, x * l.stride + s, 0});
                            out.insert({k, y, x, 0});
                        }
    // Inputs load as one contiguous window per channel, stride gaps included.
    std::set<std::int64_t> channels;
    std::int64_t y_lo = INT64_MAX, y_hi = -1, x_lo = INT64_MAX, x_hi = -1;
    for (const auto& [ch, y, x, unused] : in) {
        channels.insert(ch);
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
    }
    const auto window = static_cast<std::int64_t>(channels.size()) * (y_hi - y_lo + 1) * (x_hi - x_lo + 1);
    return {static_cast<std::int64_t>(w.size()), window, static_cast<std::int64_t>(out.size())};
}

}  // namespace testing
