#include "idearel/error.hpp"
#include "idearel/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace idearel::stats {
namespace {

// Continued fraction for I_x(a, b) (modified Lentz), valid for
// x < (a + 1) / (a + b + 2).
double incomplete_beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw Error("incomplete beta continued fraction did not converge");
}

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

}  // namespace

double log_incomplete_beta(double a, double b, double log_x, double log_1mx) {
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("log_incomplete_beta: a and b must be positive");
    if (log_x == -std::numeric_limits<double>::infinity()) return -std::numeric_limits<double>::infinity();
    if (log_1mx == -std::numeric_limits<double>::infinity()) return 0.0;
    const double x = std::exp(log_x);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        const double front = a * log_x + b * log_1mx - std::log(a) - log_beta(a, b);
        return front + std::log(incomplete_beta_cf(a, b, x));
    }
    // I_x(a, b) = 1 - I_{1-x}(b, a)
    const double other = log_incomplete_beta(b, a, log_1mx, log_x);
    return std::log1p(-std::exp(other));
}

double chi2_2df_sf(double x) {
    if (x <= 0.0) return 1.0;
    return std::exp(-0.5 * x);
}

PearsonResult pearson_log_p(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson_log_p: length mismatch");
    const std::size_t n = x.size();
    if (n < 3) throw std::invalid_argument("pearson_log_p: need at least 3 points");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    bool x_const = true, y_const = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
        x_const = x_const && x[i] == x[0];
        y_const = y_const && y[i] == y[0];
    }
    if (x_const || y_const) throw Error("pearson_log_p: input is constant");

    PearsonResult result;
    result.n = n;
    result.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    const double r = result.r;
    if (std::fabs(r) == 1.0) {
        result.log10_p = -std::numeric_limits<double>::infinity();
        return result;
    }
    // p = I_{1 - r^2}((n - 2) / 2, 1 / 2)
    const double df = static_cast<double>(n - 2);
    const double log_x = std::log1p(-r) + std::log1p(r);
    const double log_1mx = r == 0.0 ? -std::numeric_limits<double>::infinity() : 2.0 * std::log(std::fabs(r));
    const double log_p = std::min(0.0, log_incomplete_beta(0.5 * df, 0.5, log_x, log_1mx));
    result.log10_p = log_p / std::numbers::ln10;
    return result;
}

}  // namespace idearel::stats
