#include "trf/rng.hpp"

#include <cmath>

namespace trf {

namespace {

// 128-layer ziggurat for the standard normal (Marsaglia & Tsang layout).
// Tables are built once from the classic layer constants; the sampled
// sequence is fully determined by the stream's bit output.
struct ZigguratTables {
    std::uint32_t kn[128];
    double wn[128];
    double fn[128];
    double r;

    ZigguratTables() {
        const double m1 = 2147483648.0; // 2^31
        double dn = 3.442619855899;
        const double vn = 9.91256303526217e-3;
        double tn = dn;
        r = dn;

        const double q = vn / std::exp(-0.5 * dn * dn);
        kn[0] = static_cast<std::uint32_t>((dn / q) * m1);
        kn[1] = 0;
        wn[0] = q / m1;
        wn[127] = dn / m1;
        fn[0] = 1.0;
        fn[127] = std::exp(-0.5 * dn * dn);
        for (int i = 126; i >= 1; --i) {
            dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
            kn[i + 1] = static_cast<std::uint32_t>((dn / tn) * m1);
            tn = dn;
            fn[i] = std::exp(-0.5 * dn * dn);
            wn[i] = dn / m1;
        }
    }
};

const ZigguratTables zig;

} // namespace

double RngStream::normal() {
    while (true) {
        const std::int32_t hz = static_cast<std::int32_t>(next() >> 32);
        const std::uint32_t iz = static_cast<std::uint32_t>(hz) & 127u;
        const std::int64_t az = hz < 0 ? -static_cast<std::int64_t>(hz)
                                       : static_cast<std::int64_t>(hz);
        if (az < static_cast<std::int64_t>(zig.kn[iz])) {
            return hz * zig.wn[iz]; // inside a rectangle: accept immediately
        }
        if (iz == 0) {
            // Base layer: sample the tail beyond r by Marsaglia's method.
            double x, y;
            do {
                x = -std::log(uniform_pos()) / zig.r;
                y = -std::log(uniform_pos());
            } while (y + y < x * x);
            return hz > 0 ? zig.r + x : -(zig.r + x);
        }
        const double x = hz * zig.wn[iz];
        if (zig.fn[iz] + uniform() * (zig.fn[iz - 1] - zig.fn[iz]) <
            std::exp(-0.5 * x * x)) {
            return x;
        }
    }
}

} // namespace trf
