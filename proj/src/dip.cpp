#include "idearel/rng.hpp"
#include "idearel/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace idearel::stats {
namespace {

// Dip of sorted data, in units of 2n (the caller divides). Arrays are
// 1-based to follow the classic formulation (Hartigan 1985, AS 217, with
// the later corrections to the LCM distance and the termination test).
double dip_sorted_times_2n(const std::vector<double>& sorted) {
    const int n = static_cast<int>(sorted.size());
    std::vector<double> x(static_cast<std::size_t>(n) + 1);
    std::copy(sorted.begin(), sorted.end(), x.begin() + 1);
    if (n < 2 || x[static_cast<std::size_t>(n)] == x[1]) return 1.0;

    auto X = [&](int i) { return x[static_cast<std::size_t>(i)]; };
    std::vector<int> mn(static_cast<std::size_t>(n) + 1), mj(static_cast<std::size_t>(n) + 1);
    std::vector<int> gcm(static_cast<std::size_t>(n) + 1), lcm(static_cast<std::size_t>(n) + 1);
    auto at = [](std::vector<int>& v, int i) -> int& { return v[static_cast<std::size_t>(i)]; };

    // Indices over which combination is needed for the convex minorant.
    at(mn, 1) = 1;
    for (int j = 2; j <= n; ++j) {
        at(mn, j) = j - 1;
        while (true) {
            const int mnj = at(mn, j);
            const int mnmnj = at(mn, mnj);
            if (mnj == 1 || (X(j) - X(mnj)) * (mnj - mnmnj) < (X(mnj) - X(mnmnj)) * (j - mnj)) break;
            at(mn, j) = mnmnj;
        }
    }
    // ... and for the concave majorant.
    at(mj, n) = n;
    for (int k = n - 1; k >= 1; --k) {
        at(mj, k) = k + 1;
        while (true) {
            const int mjk = at(mj, k);
            const int mjmjk = at(mj, mjk);
            if (mjk == n || (X(k) - X(mjk)) * (mjk - mjmjk) < (X(mjk) - X(mjmjk)) * (k - mjk)) break;
            at(mj, k) = mjmjk;
        }
    }

    double dip = 1.0;
    int low = 1;
    int high = n;
    while (true) {
        // GCM change points from high down to low.
        int ic = 1;
        at(gcm, 1) = high;
        while (at(gcm, ic) > low) {
            const int i = at(gcm, ic);
            ++ic;
            at(gcm, ic) = at(mn, i);
        }
        const int l_gcm = ic;
        int ig = l_gcm;
        int ix = ig - 1;

        // LCM change points from low up to high.
        ic = 1;
        at(lcm, 1) = low;
        while (at(lcm, ic) < high) {
            const int i = at(lcm, ic);
            ++ic;
            at(lcm, ic) = at(mj, i);
        }
        const int l_lcm = ic;
        int ih = l_lcm;
        int iv = 2;

        // Largest distance between GCM and LCM on [low, high].
        double d = 1.0;
        if (l_gcm != 2 || l_lcm != 2) {
            d = 0.0;
            do {
                const int gcmix = at(gcm, ix);
                const int lcmiv = at(lcm, iv);
                if (gcmix > lcmiv) {
                    const int gcmi1 = at(gcm, ix + 1);
                    const double dx = (lcmiv - gcmi1 + 1) -
                                      (X(lcmiv) - X(gcmi1)) * (gcmix - gcmi1) / (X(gcmix) - X(gcmi1));
                    ++iv;
                    if (dx >= d) {
                        d = dx;
                        ig = ix + 1;
                        ih = iv - 1;
                    }
                } else {
                    const int lcmiv1 = at(lcm, iv - 1);
                    const double dx = (X(gcmix) - X(lcmiv1)) * (lcmiv - lcmiv1) / (X(lcmiv) - X(lcmiv1)) -
                                      (gcmix - lcmiv1 - 1);
                    --ix;
                    if (dx >= d) {
                        d = dx;
                        ig = ix + 1;
                        ih = iv;
                    }
                }
                if (ix < 1) ix = 1;
                if (iv > l_lcm) iv = l_lcm;
            } while (at(gcm, ix) != at(lcm, iv));
        }

        if (d < dip) break;

        // Dip of the convex minorant left of the modal interval.
        double dip_l = 0.0;
        for (int j = ig; j < l_gcm; ++j) {
            double max_t = 1.0;
            const int jb = at(gcm, j + 1);
            const int je = at(gcm, j);
            if (je - jb > 1 && X(je) != X(jb)) {
                const double c = (je - jb) / (X(je) - X(jb));
                for (int jj = jb; jj <= je; ++jj) {
                    const double t = (jj - jb + 1) - (X(jj) - X(jb)) * c;
                    max_t = std::max(max_t, t);
                }
            }
            dip_l = std::max(dip_l, max_t);
        }
        // ... and of the concave majorant right of it.
        double dip_u = 0.0;
        for (int j = ih; j < l_lcm; ++j) {
            double max_t = 1.0;
            const int jb = at(lcm, j);
            const int je = at(lcm, j + 1);
            if (je - jb > 1 && X(je) != X(jb)) {
                const double c = (je - jb) / (X(je) - X(jb));
                for (int jj = jb; jj <= je; ++jj) {
                    const double t = (X(jj) - X(jb)) * c - (jj - jb - 1);
                    max_t = std::max(max_t, t);
                }
            }
            dip_u = std::max(dip_u, max_t);
        }

        dip = std::max(dip, std::max(dip_l, dip_u));

        // Stop when the modal interval no longer shrinks.
        if (low == at(gcm, ig) && high == at(lcm, ih)) break;
        low = at(gcm, ig);
        high = at(lcm, ih);
    }
    return dip;
}

double uniform_dip(std::size_t n, std::mt19937_64& rng, std::vector<double>& scratch) {
    scratch.resize(n);
    for (auto& v : scratch) v = uniform01(rng);
    std::sort(scratch.begin(), scratch.end());
    return dip_sorted_times_2n(scratch) / (2.0 * static_cast<double>(n));
}

}  // namespace

double dip_statistic(std::span<const double> samples) {
    if (samples.size() < 2) throw std::invalid_argument("dip_statistic: need at least 2 samples");
    std::vector<double> sorted(samples.begin(), samples.end());
    for (double v : sorted) {
        if (!std::isfinite(v)) throw std::invalid_argument("dip_statistic: samples must be finite");
    }
    std::sort(sorted.begin(), sorted.end());
    return dip_sorted_times_2n(sorted) / (2.0 * static_cast<double>(sorted.size()));
}

DipResult dip_test(std::span<const double> samples, std::size_t n_boot, std::uint64_t seed) {
    if (samples.size() < 4) throw std::invalid_argument("dip_test: need at least 4 samples");
    if (n_boot < 100) throw std::invalid_argument("dip_test: need at least 100 bootstrap replicates");

    DipResult result;
    result.dip = dip_statistic(samples);
    result.n_boot = n_boot;
    result.seed = seed;

    const std::size_t n = samples.size();
    const unsigned workers = std::max(1U, std::min<unsigned>(std::thread::hardware_concurrency(), 8U));
    std::vector<std::size_t> exceed(workers, 0);
    auto run = [&](unsigned w) {
        std::vector<double> scratch;
        for (std::size_t b = w; b < n_boot; b += workers) {
            auto rng = make_stream(seed, b);
            if (uniform_dip(n, rng, scratch) >= result.dip) ++exceed[w];
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    }
    std::size_t total = 0;
    for (auto e : exceed) total += e;
    result.p_value = static_cast<double>(total) / static_cast<double>(n_boot);
    return result;
}

}  // namespace idearel::stats
