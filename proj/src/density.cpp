#include "idearel/error.hpp"
#include "idearel/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace idearel::stats {
namespace {

double sample_sd(std::span<const double> v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> out(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * static_cast<double>(i);
    out.back() = hi;
    return out;
}

// kernel[p * grid + g] = phi((grid[g] - data[p]) / h) / h
std::vector<double> kernel_table(std::span<const double> data, const std::vector<double>& grid, double h) {
    const double norm = 1.0 / (h * std::sqrt(2.0 * std::numbers::pi));
    std::vector<double> table(data.size() * grid.size());
    for (std::size_t p = 0; p < data.size(); ++p) {
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const double u = (grid[g] - data[p]) / h;
            table[p * grid.size() + g] = norm * std::exp(-0.5 * u * u);
        }
    }
    return table;
}

}  // namespace

KdeGrid kde_2d(std::span<const double> x, std::span<const double> y, std::size_t grid_size) {
    if (x.size() != y.size()) throw std::invalid_argument("kde_2d: coordinate length mismatch");
    if (x.size() < 2) throw std::invalid_argument("kde_2d: need at least 2 points");
    if (grid_size < 2) throw std::invalid_argument("kde_2d: grid_size must be >= 2");

    const double n = static_cast<double>(x.size());
    const double sx = sample_sd(x);
    const double sy = sample_sd(y);
    if (!(sx > 0.0) || !(sy > 0.0)) throw Error("kde_2d: a coordinate has zero variance");

    KdeGrid grid;
    const double scott = std::pow(n, -1.0 / 6.0);
    grid.bandwidth = {sx * scott, sy * scott};
    auto [xlo, xhi] = std::minmax_element(x.begin(), x.end());
    auto [ylo, yhi] = std::minmax_element(y.begin(), y.end());
    grid.x_grid = linspace(*xlo - 3.0 * grid.bandwidth[0], *xhi + 3.0 * grid.bandwidth[0], grid_size);
    grid.y_grid = linspace(*ylo - 3.0 * grid.bandwidth[1], *yhi + 3.0 * grid.bandwidth[1], grid_size);

    const auto kx = kernel_table(x, grid.x_grid, grid.bandwidth[0]);
    const auto ky = kernel_table(y, grid.y_grid, grid.bandwidth[1]);
    grid.density.assign(grid_size * grid_size, 0.0);
    for (std::size_t p = 0; p < x.size(); ++p) {
        const double* rx = &kx[p * grid_size];
        const double* ry = &ky[p * grid_size];
        for (std::size_t i = 0; i < grid_size; ++i) {
            const double wx = rx[i];
            if (wx == 0.0) continue;
            double* row = &grid.density[i * grid_size];
            for (std::size_t j = 0; j < grid_size; ++j) row[j] += wx * ry[j];
        }
    }
    for (auto& v : grid.density) v /= n;
    return grid;
}

double integrate(const KdeGrid& grid) {
    const std::size_t nx = grid.x_grid.size();
    const std::size_t ny = grid.y_grid.size();
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < nx; ++i) {
        const double dx = grid.x_grid[i + 1] - grid.x_grid[i];
        for (std::size_t j = 0; j + 1 < ny; ++j) {
            const double dy = grid.y_grid[j + 1] - grid.y_grid[j];
            total += 0.25 * dx * dy * (grid.at(i, j) + grid.at(i + 1, j) + grid.at(i, j + 1) + grid.at(i + 1, j + 1));
        }
    }
    return total;
}

Histogram marginal_histogram(std::span<const double> values, std::size_t bins) {
    if (bins < 1) throw std::invalid_argument("marginal_histogram: bins must be >= 1");
    Histogram h;
    h.counts.assign(bins, 0);
    if (values.empty()) {
        h.edges = linspace(0.0, 1.0, bins + 1);
        return h;
    }
    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it;
    double hi = *hi_it;
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    }
    h.edges = linspace(lo, hi, bins + 1);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (double v : values) {
        auto bin = static_cast<std::size_t>((v - lo) / width);
        bin = std::min(bin, bins - 1);
        // Floating error can put a value just left of its bin's lower edge.
        while (bin > 0 && v < h.edges[bin]) --bin;
        while (bin + 1 < bins && v >= h.edges[bin + 1]) ++bin;
        ++h.counts[bin];
    }
    return h;
}

}  // namespace idearel::stats
