#pragma once

// Cech cochains with constant F_p coefficients on a nerve: one value per
// q-simplex, ordered by the lexicographic simplex order.

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nhcech/complex.hpp"
#include "nhcech/linalg.hpp"

namespace nhcech {

class CochainSpace {
 public:
  CochainSpace() : CochainSpace(SimplicialComplex{}, 0) {}
  CochainSpace(SimplicialComplex complex, int degree)
      : CochainSpace(std::make_shared<const SimplicialComplex>(std::move(complex)), degree) {}
  CochainSpace(std::shared_ptr<const SimplicialComplex> complex, int degree)
      : complex_(std::move(complex)), degree_(degree) {
    basis_ = complex_->simplices_of_dimension(degree);
    for (std::size_t i = 0; i < basis_.size(); ++i) index_.emplace(basis_[i], i);
  }

  const SimplicialComplex& complex() const noexcept { return *complex_; }
  const std::shared_ptr<const SimplicialComplex>& complex_ptr() const noexcept { return complex_; }
  int degree() const noexcept { return degree_; }
  std::size_t dimension() const noexcept { return basis_.size(); }
  const std::vector<Simplex>& basis() const noexcept { return basis_; }

  std::optional<std::size_t> index_of(const Simplex& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::shared_ptr<const SimplicialComplex> complex_;
  int degree_ = 0;
  std::vector<Simplex> basis_;
  std::map<Simplex, std::size_t> index_;
};

struct Cochain {
  CochainSpace space;
  FVector values;

  static Cochain zero(CochainSpace space) {
    FVector v(space.dimension(), 0);
    return {std::move(space), std::move(v)};
  }

  Scalar at(const Simplex& s) const {
    auto i = space.index_of(s);
    return i ? values[*i] : 0;
  }
};

/// A linear map between two cochain spaces, stored as target x source matrix.
struct ChainMapLevel {
  CochainSpace source;
  CochainSpace target;
  FMatrix matrix;

  Cochain apply(const Cochain& f) const {
    return {target, matrix.apply(f.values)};
  }
};

/// delta: C^q(K) -> C^{q+1}(K), (delta f)(a_0..a_{q+1}) = sum_i (-1)^i f(a_0..^a_i..a_{q+1}).
inline ChainMapLevel cech_differential(const SimplicialComplex& k, int q, PrimeField field) {
  auto shared = std::make_shared<const SimplicialComplex>(k);
  CochainSpace source(shared, q);
  CochainSpace target(shared, q + 1);
  FMatrix m(field, target.dimension(), source.dimension());
  for (std::size_t row = 0; row < target.dimension(); ++row) {
    const Simplex& sigma = target.basis()[row];
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      const auto col = source.index_of(sigma.face_without(i));
      m.add_to(row, *col, field.sign(i));
    }
  }
  return {std::move(source), std::move(target), std::move(m)};
}

/// H^q as a quotient Z/B with a chosen basis of class representatives.
struct Cohomology {
  int degree = 0;
  std::size_t dimension = 0;
  FMatrix cocycles;         // basis of Z^q, as columns
  FMatrix coboundaries;     // basis of B^q, as columns
  FMatrix representatives;  // cocycles completing B^q to a basis of Z^q

  /// Coordinates of the class of a cocycle in the representative basis.
  FVector coordinates(std::span<const Scalar> cocycle) const {
    const FMatrix basis = hstack(coboundaries, representatives);
    auto x = solve_linear(basis, cocycle);
    if (!x) throw Error(ErrorCode::NotASubspace, "vector is not a cocycle");
    return FVector(x->begin() + static_cast<std::ptrdiff_t>(coboundaries.cols()), x->end());
  }

  bool is_cocycle(std::span<const Scalar> v) const {
    return solve_linear(cocycles, v).has_value();
  }
};

/// Extends the column basis `sub` by columns of `whole` to a basis of span(whole).
/// `sub` must have independent columns lying in span(whole).
inline FMatrix complement_columns(const FMatrix& whole, const FMatrix& sub) {
  const RowEchelon ech = row_reduce(hstack(sub, whole));
  std::vector<FVector> chosen;
  for (auto c : ech.pivot_cols)
    if (c >= sub.cols()) chosen.push_back(whole.column(c - sub.cols()));
  return FMatrix::from_columns(whole.field(), whole.rows(), chosen);
}

inline Cohomology cohomology(const SimplicialComplex& k, int q, PrimeField field) {
  const ChainMapLevel d = cech_differential(k, q, field);
  Cohomology h;
  h.degree = q;
  h.cocycles = kernel_basis(d.matrix);
  if (q == 0) {
    h.coboundaries = FMatrix(field, d.source.dimension(), 0);
  } else {
    h.coboundaries = column_space_basis(cech_differential(k, q - 1, field).matrix);
  }
  h.representatives = complement_columns(h.cocycles, h.coboundaries);
  h.dimension = h.representatives.cols();
  return h;
}

inline void require_subcomplex(const SimplicialComplex& sub, const SimplicialComplex& whole) {
  if (!sub.is_subcomplex_of(whole)) {
    throw Error(ErrorCode::NotSubcomplex, "complex is not contained in the ambient complex");
  }
}

/// Restriction C^q(K) -> C^q(L) along an inclusion L <= K.
inline ChainMapLevel restriction_map(const SimplicialComplex& k, const SimplicialComplex& l, int q,
                                     PrimeField field) {
  require_subcomplex(l, k);
  CochainSpace source(k, q);
  CochainSpace target(l, q);
  FMatrix m(field, target.dimension(), source.dimension());
  for (std::size_t row = 0; row < target.dimension(); ++row) {
    m.set(row, *source.index_of(target.basis()[row]), 1);
  }
  return {std::move(source), std::move(target), std::move(m)};
}

/// Extension by zero C^q(L) -> C^q(K) along an inclusion L <= K.
inline ChainMapLevel extension_map(const SimplicialComplex& l, const SimplicialComplex& k, int q,
                                   PrimeField field) {
  ChainMapLevel r = restriction_map(k, l, q, field);
  return {std::move(r.target), std::move(r.source), r.matrix.transpose()};
}

inline Cochain restrict_cochain(const Cochain& f, const SimplicialComplex& l, PrimeField field) {
  return restriction_map(f.space.complex(), l, f.space.degree(), field).apply(f);
}

inline Cochain extend_by_zero(const Cochain& f, const SimplicialComplex& k, PrimeField field) {
  return extension_map(f.space.complex(), k, f.space.degree(), field).apply(f);
}

/// Pullback g^*: C^q(K) -> C^q(L) along a simplicial vertex map g: L -> K.
/// Simplices whose image repeats a vertex pull back to zero; otherwise the
/// value carries the sign of the permutation sorting the image.
inline ChainMapLevel pullback_map(const SimplicialComplex& l, const SimplicialComplex& k,
                                  const VertexMap& g, int q, PrimeField field) {
  std::string witness;
  if (!is_simplicial(l, k, g, &witness)) {
    throw Error(ErrorCode::NotSimplicial, "image of " + witness + " is not a simplex");
  }
  CochainSpace source(k, q);
  CochainSpace target(l, q);
  FMatrix m(field, target.dimension(), source.dimension());
  for (std::size_t row = 0; row < target.dimension(); ++row) {
    std::vector<Label> img = image_vertices(target.basis()[row], g);
    std::size_t inversions = 0;
    bool degenerate = false;
    for (std::size_t a = 0; a < img.size() && !degenerate; ++a) {
      for (std::size_t b = a + 1; b < img.size(); ++b) {
        if (img[a] == img[b]) {
          degenerate = true;
          break;
        }
        if (img[b] < img[a]) ++inversions;
      }
    }
    if (degenerate) continue;
    std::sort(img.begin(), img.end());
    m.set(row, *source.index_of(Simplex(std::move(img))), field.sign(inversions));
  }
  return {std::move(source), std::move(target), std::move(m)};
}

/// Matrix of the map a chain map induces on cohomology, in representative coordinates.
template <class TargetCohomology>
FMatrix induced_on_cohomology(const FMatrix& map, const FMatrix& source_representatives,
                              const TargetCohomology& target) {
  FMatrix out(map.field(), target.dimension, source_representatives.cols());
  for (std::size_t c = 0; c < source_representatives.cols(); ++c) {
    const FVector image = map.apply(source_representatives.column(c));
    const FVector coords = target.coordinates(image);
    for (std::size_t r = 0; r < coords.size(); ++r) out.set(r, c, coords[r]);
  }
  return out;
}

}  // namespace nhcech
