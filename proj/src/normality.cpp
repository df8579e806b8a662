#include "idearel/error.hpp"
#include "idearel/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace idearel::stats {

double Moments::skewness() const { return m3 / std::pow(m2, 1.5); }

double Moments::kurtosis() const { return m4 / (m2 * m2); }

Moments central_moments(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("central_moments: empty sample");
    const double n = static_cast<double>(samples.size());
    Moments m;
    for (double v : samples) m.mean += v;
    m.mean /= n;
    for (double v : samples) {
        const double d = v - m.mean;
        const double d2 = d * d;
        m.m2 += d2;
        m.m3 += d2 * d;
        m.m4 += d2 * d2;
    }
    m.m2 /= n;
    m.m3 /= n;
    m.m4 /= n;
    return m;
}

double skewness_z(double skewness, std::size_t count) {
    const double n = static_cast<double>(count);
    const double y = skewness * std::sqrt((n + 1.0) * (n + 3.0) / (6.0 * (n - 2.0)));
    const double beta2 = 3.0 * (n * n + 27.0 * n - 70.0) * (n + 1.0) * (n + 3.0) /
                         ((n - 2.0) * (n + 5.0) * (n + 7.0) * (n + 9.0));
    const double w2 = -1.0 + std::sqrt(2.0 * (beta2 - 1.0));
    const double delta = 1.0 / std::sqrt(0.5 * std::log(w2));
    const double alpha = std::sqrt(2.0 / (w2 - 1.0));
    return delta * std::asinh(y / alpha);
}

double kurtosis_z(double kurtosis, std::size_t count) {
    const double n = static_cast<double>(count);
    const double mean = 3.0 * (n - 1.0) / (n + 1.0);
    const double var = 24.0 * n * (n - 2.0) * (n - 3.0) / ((n + 1.0) * (n + 1.0) * (n + 3.0) * (n + 5.0));
    const double x = (kurtosis - mean) / std::sqrt(var);
    // Third standardized moment of b2.
    const double sqrt_beta1 = 6.0 * (n * n - 5.0 * n + 2.0) / ((n + 7.0) * (n + 9.0)) *
                              std::sqrt(6.0 * (n + 3.0) * (n + 5.0) / (n * (n - 2.0) * (n - 3.0)));
    const double a = 6.0 + 8.0 / sqrt_beta1 * (2.0 / sqrt_beta1 + std::sqrt(1.0 + 4.0 / (sqrt_beta1 * sqrt_beta1)));
    const double term1 = 1.0 - 2.0 / (9.0 * a);
    const double denom = 1.0 + x * std::sqrt(2.0 / (a - 4.0));
    const double term2 = std::cbrt((1.0 - 2.0 / a) / denom);
    return (term1 - term2) / std::sqrt(2.0 / (9.0 * a));
}

K2Result dagostino_k2(std::span<const double> samples) {
    if (samples.size() < 20) throw std::invalid_argument("dagostino_k2: need at least 20 samples");
    const auto m = central_moments(samples);
    if (!(m.m2 > 0.0)) throw Error("dagostino_k2: sample has zero variance");
    K2Result r;
    r.skew_z = skewness_z(m.skewness(), samples.size());
    r.kurt_z = kurtosis_z(m.kurtosis(), samples.size());
    r.k2 = r.skew_z * r.skew_z + r.kurt_z * r.kurt_z;
    r.p_value = chi2_2df_sf(r.k2);
    return r;
}

}  // namespace idearel::stats
