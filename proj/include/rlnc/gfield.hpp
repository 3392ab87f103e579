#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace rlnc {

/// Canonical representative of a field element, in [0, q).
///
/// For binary extension fields the value packs the polynomial coefficients
/// little-endian (bit i is the coefficient of x^i), so serialized values are
/// portable between builds.
struct Element {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(Element, Element) = default;
};

/// A finite field GF(q): prime fields with q <= 2^16 and GF(2^d) with d <= 16.
///
/// Multiplication and inversion go through log/antilog tables; for GF(2^d)
/// the tables are generated from the Conway polynomial of degree d (see
/// `conway_polynomial`). Instances are cheap to copy and share their tables.
class Field {
 public:
  static constexpr std::uint32_t kMaxOrder = 1u << 16;

  /// Throws UnsupportedField when q is not a prime <= 2^16 or a power of two
  /// <= 2^16.
  static Field of_order(std::uint32_t q);

  /// True when `of_order(q)` would succeed.
  static bool supported(std::uint64_t q) noexcept;

  std::uint32_t order() const noexcept { return q_; }
  std::uint32_t characteristic() const noexcept { return p_; }
  std::uint32_t degree() const noexcept { return d_; }
  /// Defining polynomial for GF(2^d) with d > 1 (bit i = coefficient of x^i), 0 otherwise.
  std::uint32_t polynomial() const noexcept { return poly_; }

  Element zero() const noexcept { return {0}; }
  Element one() const noexcept { return {1}; }
  /// Throws ArithmeticError if v >= q.
  Element element(std::uint32_t v) const;

  Element add(Element x, Element y) const noexcept { return {add_raw(x.value, y.value)}; }
  Element sub(Element x, Element y) const noexcept { return {sub_raw(x.value, y.value)}; }
  Element neg(Element x) const noexcept { return {sub_raw(0, x.value)}; }
  Element mul(Element x, Element y) const noexcept { return {mul_raw(x.value, y.value)}; }
  /// Throws ArithmeticError for x = 0.
  Element inv(Element x) const;

  // Raw forms for inner loops; arguments must already be canonical.
  std::uint32_t add_raw(std::uint32_t x, std::uint32_t y) const noexcept {
    if (p_ == 2) return x ^ y;
    const std::uint32_t s = x + y;
    return s >= q_ ? s - q_ : s;
  }
  std::uint32_t sub_raw(std::uint32_t x, std::uint32_t y) const noexcept {
    if (p_ == 2) return x ^ y;
    return x >= y ? x - y : x + q_ - y;
  }
  std::uint32_t mul_raw(std::uint32_t x, std::uint32_t y) const noexcept {
    if (x == 0 || y == 0) return 0;
    return exp_[log_[x] + log_[y]];
  }
  /// Caller guarantees x != 0.
  std::uint32_t inv_raw(std::uint32_t x) const noexcept { return exp_[(q_ - 1) - log_[x]]; }

  friend bool operator==(const Field& a, const Field& b) noexcept { return a.q_ == b.q_; }

 private:
  Field() = default;

  std::uint32_t q_ = 0;
  std::uint32_t p_ = 0;
  std::uint32_t d_ = 0;
  std::uint32_t poly_ = 0;
  std::shared_ptr<const std::vector<std::uint32_t>> tables_;
  const std::uint32_t* exp_ = nullptr;  // length 2(q-1)
  const std::uint32_t* log_ = nullptr;  // length q, log_[0] unused
};

/// Conway polynomial for GF(2^d), 1 <= d <= 16, packed little-endian.
std::uint32_t conway_polynomial(unsigned d);

/// Dense row-major matrix over a field.
class MatrixGF {
 public:
  MatrixGF() = default;
  MatrixGF(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  /// Throws std::invalid_argument when entries.size() != rows * cols.
  MatrixGF(std::size_t rows, std::size_t cols, std::vector<Element> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Element& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Element at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const Element> entries() const noexcept { return data_; }

  friend bool operator==(const MatrixGF&, const MatrixGF&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Element> data_;
};

/// Rank by Gaussian elimination on a copy; `m` is left untouched.
std::size_t matrix_rank(const Field& field, const MatrixGF& m);

/// Rank of a row-major `rows` x `cols` buffer of canonical values, destroying it.
std::size_t rank_in_place(const Field& field, std::span<std::uint32_t> data, std::size_t rows,
                          std::size_t cols);

/// SplitMix64 generator. The single mutable object in the field layer; keep
/// one per worker.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// The SplitMix64 finalizer; also used to derive per-trial seeds.
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Uniform integer in [0, n), n >= 1, by rejection sampling on 64-bit draws
/// so the sequence is identical on every platform.
std::uint64_t uniform_below(SplitMix64& rng, std::uint64_t n) noexcept;

/// Uniform element of `field`: `uniform_below(rng, q)`.
inline Element uniform_sample(const Field& field, SplitMix64& rng) noexcept {
  return {static_cast<std::uint32_t>(uniform_below(rng, field.order()))};
}

}  // namespace rlnc
