#include "rlnc/gfield.hpp"

#include <array>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>

#include "rlnc/errors.hpp"

namespace rlnc {
namespace {

// Conway polynomials C_{2,d}, bit i = coefficient of x^i.
constexpr std::array<std::uint32_t, 17> kConway = {
    0,        // unused
    0x3,      // x + 1
    0x7,      // x^2 + x + 1
    0xB,      // x^3 + x + 1
    0x13,     // x^4 + x + 1
    0x25,     // x^5 + x^2 + 1
    0x5B,     // x^6 + x^4 + x^3 + x + 1
    0x83,     // x^7 + x + 1
    0x11D,    // x^8 + x^4 + x^3 + x^2 + 1
    0x211,    // x^9 + x^4 + 1
    0x46F,    // x^10 + x^6 + x^5 + x^3 + x^2 + x + 1
    0x805,    // x^11 + x^2 + 1
    0x10EB,   // x^12 + x^7 + x^6 + x^5 + x^3 + x + 1
    0x201B,   // x^13 + x^4 + x^3 + x + 1
    0x40A9,   // x^14 + x^7 + x^5 + x^3 + 1
    0x8035,   // x^15 + x^5 + x^4 + x^2 + 1
    0x1002D,  // x^16 + x^5 + x^3 + x^2 + 1
};

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t f = 2; f * f <= n; ++f)
    if (n % f == 0) return false;
  return true;
}

int power_of_two_exponent(std::uint64_t n) {
  if (n < 2 || (n & (n - 1)) != 0) return -1;
  int d = 0;
  while ((1ull << d) != n) ++d;
  return d;
}

std::uint32_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

std::uint32_t smallest_primitive_root(std::uint32_t p) {
  if (p == 2) return 1;
  std::vector<std::uint32_t> factors;
  std::uint32_t n = p - 1;
  for (std::uint32_t f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      factors.push_back(f);
      while (n % f == 0) n /= f;
    }
  }
  if (n > 1) factors.push_back(n);
  for (std::uint32_t g = 2; g < p; ++g) {
    bool ok = true;
    for (auto f : factors)
      if (pow_mod(g, (p - 1) / f, p) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  throw std::logic_error("no primitive root");
}

// Tables are laid out as [exp (2(q-1)) | log (q)].
std::shared_ptr<const std::vector<std::uint32_t>> build_tables(std::uint32_t q, std::uint32_t p,
                                                               std::uint32_t poly) {
  const std::uint32_t n = q - 1;
  auto t = std::make_shared<std::vector<std::uint32_t>>(2 * n + q, 0);
  std::uint32_t* exp = t->data();
  std::uint32_t* log = t->data() + 2 * n;
  std::vector<bool> seen(q, false);
  std::uint64_t x = 1;
  const std::uint32_t gen = p == 2 ? 2 % q : smallest_primitive_root(p);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (seen[x]) throw std::logic_error("field generator is not primitive for q=" + std::to_string(q));
    seen[x] = true;
    exp[i] = exp[i + n] = static_cast<std::uint32_t>(x);
    log[x] = i;
    if (p == 2) {
      x <<= 1;
      if (x & q) x ^= poly;
    } else {
      x = x * gen % q;
    }
  }
  return t;
}

}  // namespace

std::uint32_t conway_polynomial(unsigned d) {
  if (d < 1 || d > 16) throw UnsupportedField("GF(2^" + std::to_string(d) + ") not supported");
  return kConway[d];
}

bool Field::supported(std::uint64_t q) noexcept {
  if (q < 2 || q > kMaxOrder) return false;
  return is_prime(q) || power_of_two_exponent(q) > 0;
}

Field Field::of_order(std::uint32_t q) {
  if (!supported(q))
    throw UnsupportedField("unsupported field order " + std::to_string(q) +
                           " (need a prime or power of two <= 65536)");

  static std::mutex mu;
  static std::map<std::uint32_t, std::shared_ptr<const std::vector<std::uint32_t>>> cache;

  Field f;
  f.q_ = q;
  if (is_prime(q)) {
    f.p_ = q;
    f.d_ = 1;
  } else {
    f.p_ = 2;
    f.d_ = static_cast<std::uint32_t>(power_of_two_exponent(q));
    f.poly_ = kConway[f.d_];
  }
  {
    std::lock_guard lock(mu);
    auto& slot = cache[q];
    if (!slot) slot = build_tables(q, f.p_, f.poly_);
    f.tables_ = slot;
  }
  f.exp_ = f.tables_->data();
  f.log_ = f.tables_->data() + 2 * (q - 1);
  return f;
}

Element Field::element(std::uint32_t v) const {
  if (v >= q_)
    throw ArithmeticError("value " + std::to_string(v) + " is not an element of GF(" +
                          std::to_string(q_) + ")");
  return {v};
}

Element Field::inv(Element x) const {
  if (x.value == 0) throw ArithmeticError("inversion of zero");
  return {inv_raw(x.value)};
}

MatrixGF::MatrixGF(std::size_t rows, std::size_t cols, std::vector<Element> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) throw std::invalid_argument("matrix entry count mismatch");
}

std::size_t rank_in_place(const Field& field, std::span<std::uint32_t> a, std::size_t rows,
                          std::size_t cols) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot * cols + c] == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank)
      for (std::size_t k = c; k < cols; ++k) std::swap(a[pivot * cols + k], a[rank * cols + k]);
    const std::uint32_t inv = field.inv_raw(a[rank * cols + c]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const std::uint32_t lead = a[r * cols + c];
      if (lead == 0) continue;
      const std::uint32_t factor = field.mul_raw(lead, inv);
      for (std::size_t k = c; k < cols; ++k)
        a[r * cols + k] = field.sub_raw(a[r * cols + k], field.mul_raw(factor, a[rank * cols + k]));
    }
    ++rank;
  }
  return rank;
}

std::size_t matrix_rank(const Field& field, const MatrixGF& m) {
  std::vector<std::uint32_t> buf;
  buf.reserve(m.rows() * m.cols());
  for (auto e : m.entries()) buf.push_back(e.value);
  return rank_in_place(field, buf, m.rows(), m.cols());
}

std::uint64_t uniform_below(SplitMix64& rng, std::uint64_t n) noexcept {
  // Accept x in [0, 2^64 - (2^64 mod n)); `last` is the largest accepted draw.
  const std::uint64_t last = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
  for (;;) {
    const std::uint64_t x = rng();
    if (x <= last) return x % n;
  }
}

}  // namespace rlnc
