// Embeddings F_{p^a} -> F_{p^b} for a | b.
//
// The image of the generator of F_{p^a} is the smallest root (canonical order)
// of its modulus inside F_{p^b}.  Embeddings are cached per pair of fields and
// commute with the p-power Frobenius.
#pragma once

#include <optional>
#include <vector>

#include "isodesc/finite_field.hpp"

namespace isodesc {

class FieldEmbedding {
 public:
  // Throws std::invalid_argument unless the characteristics agree and
  // degree(small) divides degree(large).
  static const FieldEmbedding& get(ExtField small, ExtField large);

  ExtField source() const { return src_; }
  ExtField target() const { return dst_; }
  Fe map(const Fe& x) const;
  // Inverse image, or nullopt when y is outside the image.
  std::optional<Fe> preimage(const Fe& y) const;

 private:
  FieldEmbedding(ExtField small, ExtField large);
  ExtField src_, dst_;
  // Images of 1, g, ..., g^(a-1).
  std::vector<Fe> basis_;
  // Rows of the target used to solve for preimage coordinates, with the
  // inverse of the corresponding a x a block.
  std::vector<int> pivots_;
  std::vector<std::vector<std::uint64_t>> inv_block_;
};

// Convenience wrappers; identity when the fields coincide.
Fe lift(const Fe& x, ExtField large);
std::optional<Fe> descend(const Fe& y, ExtField small);

// Smallest field F_{p^c} with c = lcm of the degrees.
ExtField common_field(ExtField a, ExtField b);

}  // namespace isodesc
