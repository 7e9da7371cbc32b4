// Short Weierstrass curves y^2 = x^3 + a x + b over F_{p^k}.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isodesc/finite_field.hpp"

namespace isodesc {

struct Point {
  bool inf = true;
  Fe x, y;

  static Point identity() { return {}; }
  static Point affine(const Fe& x, const Fe& y) { return {false, x, y}; }
  bool is_identity() const { return inf; }
  bool operator==(const Point& o) const;
  // Identity first, then (x, y) in canonical order.
  bool operator<(const Point& o) const;
  std::string to_string() const;
};

class Curve {
 public:
  Curve() = default;
  // Throws std::invalid_argument on a singular curve or mixed fields.
  Curve(Fe a, Fe b);
  static Curve make(std::uint64_t p, int k, std::int64_t a, std::int64_t b);

  ExtField field() const { return f_; }
  const Fe& a() const { return a_; }
  const Fe& b() const { return b_; }
  std::uint64_t characteristic() const { return f_.characteristic(); }
  u128 q() const { return f_.order(); }

  Fe rhs(const Fe& x) const { return (x * x + a_) * x + b_; }
  bool contains(const Point& P) const;
  // Same curve with coefficients lifted into an extension of its field.
  Curve base_change(ExtField L) const;
  // a and b are fixed by x -> x^(p^j).
  bool rational_over(int j) const;
  // Coefficients raised to p^j.
  Curve frobenius_twist(int j) const;
  // Minimal degree d such that a, b lie in F_{p^d}.
  int definition_degree() const;
  Fe j_invariant() const;

  bool operator==(const Curve& o) const { return f_ == o.f_ && a_ == o.a_ && b_ == o.b_; }
  std::string to_string() const;

 private:
  ExtField f_;
  Fe a_, b_;
};

Point point_neg(const Point& P);
Point point_add(const Curve& E, const Point& P, const Point& Q);
Point point_double(const Curve& E, const Point& P);
Point point_mul(const Curve& E, const Point& P, i128 s);
// (x^(p^j), y^(p^j)); an endomorphism when E is rational over F_{p^j}.
Point point_frobenius(const Point& P, int j);
Point lift_point(const Point& P, ExtField L);

// Exact order of P given a multiple of it (usually the group order).
u128 point_order(const Curve& E, const Point& P, u128 multiple);
// Same with a precomputed factorization of the multiple.
u128 point_order(const Curve& E, const Point& P, u128 multiple, const std::vector<std::pair<u128, int>>& fac);

inline constexpr u128 kExhaustiveCountLimit = 10'000'000;

// #E(F_q) by an exhaustive x-scan; throws std::out_of_range above the limit.
u128 count_points(const Curve& E);
i128 frobenius_trace(const Curve& E);
// t_m from t_0 = 2, t_1 = t, t_j = t t_{j-1} - q t_{j-2}.
i128 trace_over_extension(i128 t, u128 q, int m);
// #E(F_{q^m}) from the trace over F_q.
u128 count_over_extension(const Curve& E, int m);
// p divides the trace.
bool is_supersingular(const Curve& E);

struct GroupStructure {
  u128 a = 1, ab = 1;
  Point g1, g2;  // orders ab and a
};

GroupStructure group_structure(const Curve& E);

// Structure of the l-primary part of E(F_q), given #E(F_q).
struct PrimaryPart {
  u128 ell = 0;
  int e1 = 0, e2 = 0;  // Z/l^e2 x Z/l^e1 with e2 <= e1
  Point g1, g2;
};
PrimaryPart primary_part(const Curve& E, u128 ell, u128 order);

// Deterministic sample points: x in canonical order, smaller square root.
class PointSampler {
 public:
  explicit PointSampler(const Curve& E) : E_(E) {}
  std::optional<Point> next();

 private:
  Curve E_;
  u128 idx_ = 0;
};

// Smallest K such that E[n] is contained in E(F_{q^K}), searching
// K * k <= kMaxExtDegree; nullopt when no such K exists in range.
std::optional<int> torsion_field_degree(const Curve& E, int n);

struct TorsionBasis {
  int n = 0;
  Curve curve;  // base change to the torsion field
  Point P, Q;
  Fe zeta;  // e_n(P, Q), of exact order n
};

// Throws std::invalid_argument for n < 2 or p | n and std::out_of_range when
// the torsion field is beyond the supported degree.
TorsionBasis torsion_basis(const Curve& E, int n);
// Basis on the base change of E to L, which must contain E[n].
TorsionBasis torsion_basis_over(const Curve& E, int n, ExtField L);

struct Mat2 {
  std::int64_t n = 1;
  std::array<std::int64_t, 4> m{};  // row-major [[m0, m1], [m2, m3]]

  static Mat2 identity(std::int64_t n) { return {n, {1 % n, 0, 0, 1 % n}}; }
  static Mat2 scalar(std::int64_t n, std::int64_t s);
  Mat2 operator*(const Mat2& o) const;
  Mat2 operator+(const Mat2& o) const;
  Mat2 operator-() const;
  std::int64_t trace() const;
  std::int64_t det() const;
  bool operator==(const Mat2& o) const { return n == o.n && m == o.m; }
  std::string to_string() const;
};

// Coordinates (u, v) with R = uP + vQ, through pairing discrete logs.
std::pair<std::int64_t, std::int64_t> basis_coordinates(const TorsionBasis& B, const Point& R);
// Matrix whose columns are coordinates of images of P and Q.
Mat2 matrix_from_images(const TorsionBasis& B, const Point& imP, const Point& imQ);
// Matrix of the p^j-power Frobenius; E must be rational over F_{p^j}.
Mat2 frobenius_matrix(const TorsionBasis& B, int j);

}  // namespace isodesc
