/// @file rng.hpp
/// @brief Seeded randomness: splitmix64 seed derivation plus a mt19937_64
/// wrapper producing platform-stable uniform/normal doubles.
///
/// All randomness in the library flows through explicitly passed Rng
/// instances; nothing reads ambient entropy. Sub-streams are derived
/// deterministically from a master seed so that parallel or repeated
/// sampling stays reproducible.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>

namespace odeflow {

/// splitmix64 finalizer; good avalanche, used only for seed derivation.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Deterministic sub-stream seed from a master seed and a stream index.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return mix_seed(master ^ mix_seed(stream + 0x6a09e667f3bcc909ull));
}

/// mt19937_64-backed generator. uniform() and normal() are implemented on
/// top of raw 64-bit draws (Box-Muller for normals) rather than
/// std::*_distribution, so sequences do not depend on the standard library
/// implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform double in [0, 1), 53 bits of mantissa.
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Integer in [0, m).
    std::uint64_t uniform_index(std::uint64_t m) {
        // Rejection-free modulo is fine here; m is tiny in this codebase.
        return eng_() % m;
    }

    /// Standard normal via Box-Muller (caches the spare deviate).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    Eigen::VectorXd normal_vector(int n) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = normal();
        return v;
    }

    Eigen::MatrixXd normal_matrix(int rows, int cols) {
        Eigen::MatrixXd m(rows, cols);
        for (int j = 0; j < cols; ++j)
            for (int i = 0; i < rows; ++i) m(i, j) = normal();
        return m;
    }

    Eigen::VectorXd uniform_vector(int n, double a, double b) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = uniform(a, b);
        return v;
    }

    /// Uniform direction on the unit sphere S^{n-1}.
    Eigen::VectorXd unit_vector(int n) {
        Eigen::VectorXd v = normal_vector(n);
        double norm = v.norm();
        while (norm < 1e-12) {
            v = normal_vector(n);
            norm = v.norm();
        }
        return v / norm;
    }

    /// Uniform point in the closed ball of given radius.
    Eigen::VectorXd ball_vector(int n, double radius) {
        const double r = radius * std::pow(uniform(), 1.0 / n);
        return r * unit_vector(n);
    }

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace odeflow
