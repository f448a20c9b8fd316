#include "kuramoto/util.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "kuramoto/errors.hpp"

namespace kuramoto {

double wrap_angle(double a) {
    double w = std::remainder(a, 2.0 * pi);  // (-pi, pi], with -pi possible
    if (w <= -pi) w = pi;
    return w;
}

double circle_distance(double a, double b) { return std::abs(wrap_angle(a - b)); }

LineFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw DimensionMismatch("linear_fit: x/y size mismatch");
    if (xs.size() < 2) throw InsufficientData("linear_fit: need at least two points");
    const double mx = mean_of(xs);
    const double my = mean_of(ys);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx <= 0.0) throw DegenerateDenominator("linear_fit: x values are all equal");
    return {sxy / sxx, my - (sxy / sxx) * mx};
}

double mean_of(std::span<const double> xs) {
    if (xs.empty()) throw InsufficientData("mean_of: empty input");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double variance_of(std::span<const double> xs) {
    const double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    if (n == 0) return;
    std::size_t hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 2;
    const std::size_t workers = std::min(n, hw);
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{seed, index, std::uint64_t{0x9e3779b97f4a7c15ULL}};
    return std::mt19937_64(seq);
}

std::vector<double> sample_uniform(std::mt19937_64& rng, std::size_t n, double a, double b) {
    std::uniform_real_distribution<double> dist(a, b);
    std::vector<double> out(n);
    for (auto& x : out) x = dist(rng);
    return out;
}

std::vector<double> sample_normal(std::mt19937_64& rng, std::size_t n, double mu, double sigma) {
    std::normal_distribution<double> dist(mu, sigma);
    std::vector<double> out(n);
    for (auto& x : out) x = dist(rng);
    return out;
}

std::vector<double> sample_angles(std::mt19937_64& rng, std::size_t n) {
    return sample_uniform(rng, n, 0.0, 2.0 * pi);
}

}  // namespace kuramoto
