#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace kuramoto {

inline constexpr double pi = std::numbers::pi;

/// Wrap an angle into (-pi, pi].
double wrap_angle(double a);

/// Distance between two angles on the circle, in [0, pi].
double circle_distance(double a, double b);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Ordinary least squares y ~ slope*x + intercept. Requires >= 2 points.
LineFit linear_fit(std::span<const double> xs, std::span<const double> ys);

double mean_of(std::span<const double> xs);
double variance_of(std::span<const double> xs);

/// Run body(i) for i in [0, n) on up to hardware_concurrency threads.
/// Callers write results into preallocated slots, so output order is
/// independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Deterministic per-task RNG: one stream per (seed, index) pair.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t index = 0);

std::vector<double> sample_uniform(std::mt19937_64& rng, std::size_t n, double a, double b);
std::vector<double> sample_normal(std::mt19937_64& rng, std::size_t n, double mu, double sigma);

/// n angles uniform on [0, 2pi).
std::vector<double> sample_angles(std::mt19937_64& rng, std::size_t n);

}  // namespace kuramoto
