// Exact arithmetic in F_p and F_{p^k}.
//
// Every extension is built directly over F_p as F_p[x]/(m(x)) where m is the
// lexicographically smallest monic irreducible polynomial of degree k
// (coefficients compared low degree first).  Field descriptors are interned:
// an ExtField is a cheap handle and two handles for the same (p, k) compare
// equal.  Elements carry a pointer to their field and a fixed-capacity
// coefficient array, so they are plain values with no allocation.
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isodesc/int_math.hpp"

namespace isodesc {

inline constexpr int kMaxExtDegree = 24;
// Field sizes are kept below 2^kFieldSizeBits so that group orders, traces
// and exponents all fit in 128-bit integers with headroom.
inline constexpr unsigned kFieldSizeBits = 125;

namespace detail {
struct FieldData;
}

class Fe;

class ExtField {
 public:
  ExtField() = default;

  // Throws std::invalid_argument for non-prime p, p < 3, p >= 2^31, k outside
  // [1, kMaxExtDegree] or p^k >= 2^kFieldSizeBits.
  static ExtField make(std::uint64_t p, int k);

  bool valid() const { return d_ != nullptr; }
  std::uint64_t characteristic() const;
  int degree() const;
  u128 order() const;
  // Monic modulus, k + 1 coefficients, low degree first.
  std::span<const std::uint64_t> modulus() const;

  Fe zero() const;
  Fe one() const;
  Fe from_int(std::int64_t v) const;
  Fe from_coeffs(std::span<const std::uint64_t> coeffs) const;
  // Class of x in F_p[x]/(m).
  Fe generator() const;
  // Element at position idx in canonical order (lexicographic on the
  // coefficient sequence, constant term most significant).
  Fe from_index(u128 idx) const;

  const detail::FieldData* data() const { return d_; }
  bool operator==(const ExtField& o) const { return d_ == o.d_; }

 private:
  friend class Fe;
  explicit ExtField(const detail::FieldData* d) : d_(d) {}
  const detail::FieldData* d_ = nullptr;
};

class Fe {
 public:
  Fe() = default;

  ExtField field() const;
  bool valid() const { return f_ != nullptr; }
  int degree() const;  // extension degree of the parent field
  std::uint64_t coeff(int i) const { return c_[static_cast<std::size_t>(i)]; }

  bool is_zero() const;
  bool is_one() const;

  Fe operator+(const Fe& o) const;
  Fe operator-(const Fe& o) const;
  Fe operator-() const;
  Fe operator*(const Fe& o) const;
  Fe& operator+=(const Fe& o) { return *this = *this + o; }
  Fe& operator-=(const Fe& o) { return *this = *this - o; }
  Fe& operator*=(const Fe& o) { return *this = *this * o; }
  Fe operator/(const Fe& o) const { return *this * o.inv(); }
  Fe scale(std::int64_t s) const;

  // Throws std::domain_error on zero.
  Fe inv() const;
  Fe pow(u128 e) const;
  Fe square() const { return *this * *this; }

  // x^(p^j).
  Fe frobenius(int j = 1) const;

  // x^((q-1)/2) != -1.
  bool is_square() const;
  // Lexicographically smaller root, or nullopt for non-squares.
  std::optional<Fe> sqrt() const;

  // True when x lies in the subfield F_{p^j} (x^(p^j) == x).
  bool in_subfield(int j) const { return frobenius(j) == *this; }

  u128 index() const;
  std::string to_string() const;
  std::vector<std::uint64_t> coeffs() const;

  bool operator==(const Fe& o) const;
  // Canonical order; only meaningful within one field.
  std::strong_ordering operator<=>(const Fe& o) const;

 private:
  friend class ExtField;
  friend struct detail::FieldData;
  const detail::FieldData* f_ = nullptr;
  std::array<std::uint32_t, kMaxExtDegree> c_{};
};

ExtField make_ext_field(std::uint64_t p, int k);
Fe field_frobenius(const Fe& x, int j);
std::optional<Fe> sqrt_in_field(const Fe& x);

}  // namespace isodesc
