#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace idearel::stats {

// ---------------------------------------------------------------------------
// Unimodality
// ---------------------------------------------------------------------------

// Hartigan's dip: the sup-distance between the empirical CDF and the closest
// unimodal CDF, found by alternating greatest-convex-minorant and
// least-concave-majorant fits. Lies in [1/(2n), 1/4]. Needs n >= 2.
double dip_statistic(std::span<const double> samples);

struct DipResult {
    double dip = 0.0;
    double p_value = 1.0;
    std::size_t n_boot = 0;
    std::uint64_t seed = 0;
};

// p-value: fraction of n_boot Uniform(0,1) samples of the same size whose dip
// is at least the observed dip. Replicate i draws from its own RNG stream.
DipResult dip_test(std::span<const double> samples, std::size_t n_boot = 2000, std::uint64_t seed = 1);

// ---------------------------------------------------------------------------
// Normality
// ---------------------------------------------------------------------------

struct Moments {
    double mean = 0.0;
    double m2 = 0.0;  // central moments with divisor n
    double m3 = 0.0;
    double m4 = 0.0;

    double skewness() const;  // m3 / m2^1.5
    double kurtosis() const;  // m4 / m2^2 (not excess)
};

Moments central_moments(std::span<const double> samples);

struct K2Result {
    double skew_z = 0.0;
    double kurt_z = 0.0;
    double k2 = 0.0;
    double p_value = 1.0;
};

// Standardized skewness test (D'Agostino 1970).
double skewness_z(double skewness, std::size_t n);
// Standardized kurtosis test (Anscombe & Glynn 1983).
double kurtosis_z(double kurtosis, std::size_t n);

// D'Agostino-Pearson omnibus test: K2 = z_skew^2 + z_kurt^2 against
// chi-squared with 2 degrees of freedom. Needs n >= 20.
K2Result dagostino_k2(std::span<const double> samples);

// ---------------------------------------------------------------------------
// Correlation
// ---------------------------------------------------------------------------

// log10 p at or below this is reported as "< -300" when it is -infinity.
inline constexpr double kLog10PReportFloor = -300.0;

struct PearsonResult {
    double r = 0.0;
    double log10_p = 0.0;  // -infinity when |r| == 1
    std::size_t n = 0;
};

// Pearson r with its two-sided p-value (Student t, n - 2 df) evaluated in
// log space so it stays finite far below the double range.
PearsonResult pearson_log_p(std::span<const double> x, std::span<const double> y);

// log of the regularized incomplete beta I_x(a, b). `log_x` and `log_1mx`
// are log(x) and log(1 - x), passed separately to keep precision near 0 and 1.
double log_incomplete_beta(double a, double b, double log_x, double log_1mx);

// Survival function of chi-squared with 2 degrees of freedom.
double chi2_2df_sf(double x);

// ---------------------------------------------------------------------------
// Density and histograms
// ---------------------------------------------------------------------------

struct KdeGrid {
    std::vector<double> x_grid;
    std::vector<double> y_grid;
    std::vector<double> density;  // density[i * y_grid.size() + j] at (x_grid[i], y_grid[j])
    std::array<double, 2> bandwidth{};

    double at(std::size_t i, std::size_t j) const { return density[i * y_grid.size() + j]; }
};

// Gaussian product kernel with Scott's rule (h_d = sigma_d * n^(-1/6)),
// evaluated on a grid_size x grid_size grid spanning the data range +- 3h.
KdeGrid kde_2d(std::span<const double> x, std::span<const double> y, std::size_t grid_size);

// Trapezoidal integral of the density over its grid.
double integrate(const KdeGrid& grid);

struct Histogram {
    std::vector<double> edges;
    std::vector<std::size_t> counts;
};

// Equal-width bins over [min, max]; the last bin is closed.
Histogram marginal_histogram(std::span<const double> values, std::size_t bins);

}  // namespace idearel::stats
