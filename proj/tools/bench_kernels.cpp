// Compares the serial reference sweeps against their OpenMP versions and
// checks that the reductions agree bit for bit.

#include <chrono>
#include <cstdio>

#include "morph/analysis.hpp"
#include "morph/scan.hpp"
#include "morph/so3.hpp"

using namespace morph;

namespace {

template <class F>
double time_ms(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    const std::uint64_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2000000;
    GainSet gains;
    gains.k_r = 0.0424;
    gains.k_omega = 0.0296;
    gains.c = 0.1;
    gains.g = {1.35, 1.5, 1.65};

    auto ratio = [&](std::uint64_t i) { return phi_ratio_sample(gains, 42, i); };
    scan::MinMax serial, parallel;
    const double t_serial = time_ms([&] { serial = scan::minmax_serial(n, ratio); });
    const double t_parallel = time_ms([&] { parallel = scan::minmax_parallel(n, ratio); });
    const bool match = serial.min == parallel.min && serial.max == parallel.max;
    std::printf("phi-ratio sweep   n=%llu  serial %8.1f ms  parallel %8.1f ms  speedup %.2fx  %s\n",
                static_cast<unsigned long long>(n), t_serial, t_parallel, t_serial / t_parallel,
                match ? "bit-identical" : "MISMATCH");

    auto cnorm = [&](std::uint64_t i) {
        const Mat3 R = sample_rotation(7, i);
        const Mat3 Rd = sample_rotation(8, i);
        return spectral_norm(c_matrix(Rd, R, gains));
    };
    scan::MinMax cs, cp;
    const double t_cs = time_ms([&] { cs = scan::minmax_serial(n / 4, cnorm); });
    const double t_cp = time_ms([&] { cp = scan::minmax_parallel(n / 4, cnorm); });
    const bool cmatch = cs.min == cp.min && cs.max == cp.max;
    std::printf("C-norm sweep      n=%llu  serial %8.1f ms  parallel %8.1f ms  speedup %.2fx  %s\n",
                static_cast<unsigned long long>(n / 4), t_cs, t_cp, t_cs / t_cp,
                cmatch ? "bit-identical" : "MISMATCH");

    return match && cmatch ? 0 : 1;
}
