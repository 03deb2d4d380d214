#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace bae {

// Bad or inconsistent input data (missing files, malformed formats, shape mismatches).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite values encountered during numeric work.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Vector = std::vector<double>;

// Dense row-major matrix of doubles.
struct Matrix {
  uint32_t rows = 0;
  uint32_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(uint32_t r, uint32_t c, double fill = 0.0)
      : rows(r), cols(c), data(size_t(r) * c, fill) {}

  double& operator()(uint32_t r, uint32_t c) { return data[size_t(r) * cols + c]; }
  double operator()(uint32_t r, uint32_t c) const { return data[size_t(r) * cols + c]; }

  bool operator==(const Matrix&) const = default;
};

inline double dot(const Vector& a, const Vector& b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Uniform in [0,1) from the top 53 bits of a raw draw. Stable across platforms,
// unlike std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

inline uint64_t rand_below(std::mt19937_64& rng, uint64_t n) {
  assert(n > 0);
  return rng() % n;
}

// Fisher-Yates with an explicit bounded draw; std::shuffle's output is
// implementation-defined.
template <class T>
void shuffle_deterministic(std::vector<T>& v, std::mt19937_64& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    size_t j = size_t(rand_below(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

// FNV-1a, 64-bit.
inline uint64_t fnv1a(const void* p, size_t n, uint64_t h = 14695981039346656037ULL) {
  const auto* b = static_cast<const unsigned char*>(p);
  for (size_t i = 0; i < n; ++i) {
    h ^= b[i];
    h *= 1099511628211ULL;
  }
  return h;
}

inline uint64_t fnv1a_doubles(const std::vector<double>& v, uint64_t h) {
  return v.empty() ? h : fnv1a(v.data(), v.size() * sizeof(double), h);
}

}  // namespace bae
