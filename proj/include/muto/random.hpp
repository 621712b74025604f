#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

namespace muto {

// splitmix64 finalizer; used to derive independent streams from one seed.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b));
}

// FNV-1a; stable across platforms unlike std::hash.
constexpr std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Thin wrapper over mt19937_64. Uniform draws are built from raw engine bits
// so sampled sequences do not depend on the standard library's distribution
// implementations.
class Rng {
 public:
  using Engine = std::mt19937_64;

  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

  // Draws an index proportionally to nonnegative weights with the given sum.
  template <typename Derived>
  Eigen::Index categorical(const Eigen::DenseBase<Derived>& weights,
                           double total) {
    double u = uniform() * total;
    const Eigen::Index last = weights.size() - 1;
    for (Eigen::Index i = 0; i < last; ++i) {
      u -= weights(i);
      if (u < 0) return i;
    }
    return last;
  }

  template <typename Derived>
  Eigen::Index categorical(const Eigen::DenseBase<Derived>& weights) {
    return categorical(weights, static_cast<double>(weights.sum()));
  }

  // Symmetric Dirichlet with per-component concentration `concentration`.
  // Works in log space so very small concentrations do not underflow.
  Eigen::VectorXd dirichlet(Eigen::Index n, double concentration) {
    Eigen::VectorXd log_g(n);
    std::gamma_distribution<double> gamma(concentration + 1.0, 1.0);
    for (Eigen::Index i = 0; i < n; ++i) {
      double u = uniform();
      while (u <= 0.0) u = uniform();
      log_g(i) = std::log(gamma(engine_)) + std::log(u) / concentration;
    }
    if (n == 0) return log_g;
    const double peak = log_g.maxCoeff();
    Eigen::VectorXd p = (log_g.array() - peak).exp();
    return p / p.sum();
  }

  Engine& engine() { return engine_; }

  std::string save() const {
    std::ostringstream out;
    out << engine_;
    return out.str();
  }

  void restore(const std::string& text) {
    std::istringstream in(text);
    in >> engine_;
  }

 private:
  Engine engine_;
};

}  // namespace muto
