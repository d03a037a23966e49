#pragma once

// Mayer-Vietoris machinery on a glued diagram.
//
// Level p collects the cochain spaces of every N_T with |T| = p, ordered
// lexicographically by the sorted index list of T. Level 0 is C^q(N) of the
// union nerve. The sequence
//   0 -> C^q(N) -> level 1 -> level 2 -> ... -> level n -> 0
// uses Phi* (restriction to each piece) followed by the difference maps
// delta~, where removing the k-th index (k = 1..p+1) carries sign (-1)^(k+1).
// For n = 2 that makes delta~(f1, f2) = f2| - f1|; the binary long exact
// sequence uses alpha = iota* - f* = -delta~, i.e. (f1, f2) -> f1| - f2|.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nhcech/cech.hpp"
#include "nhcech/complex.hpp"
#include "nhcech/diagram.hpp"
#include "nhcech/linalg.hpp"

namespace nhcech {

/// Bit sets of size p drawn from {0..n-1}, in lexicographic order of their index lists.
inline std::vector<std::uint32_t> subsets_of_size(std::size_t n, std::size_t p) {
  std::vector<std::uint32_t> out;
  if (p == 0 || p > n) return out;
  std::vector<std::size_t> idx(p);
  for (std::size_t i = 0; i < p; ++i) idx[i] = i;
  while (true) {
    std::uint32_t mask = 0;
    for (auto i : idx) mask |= 1U << i;
    out.push_back(mask);
    std::size_t k = p;
    while (k > 0 && idx[k - 1] == n - p + (k - 1)) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t j = k; j < p; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

struct TupleCochainSpace {
  int level = 0;
  int degree = 0;
  std::vector<std::uint32_t> subsets;
  std::vector<CochainSpace> components;
  std::vector<std::size_t> offsets;  // components.size() + 1 entries

  std::size_t dimension() const noexcept { return offsets.empty() ? 0 : offsets.back(); }

  std::size_t position(std::uint32_t mask) const {
    for (std::size_t i = 0; i < subsets.size(); ++i)
      if (subsets[i] == mask) return i;
    throw Error(ErrorCode::BadIndexSet, "subset not present at this level");
  }
};

namespace detail {

inline void require_level(const GluedDiagram& d, int level) {
  if (level < 1 || static_cast<std::size_t>(level) > d.piece_count()) {
    throw Error(ErrorCode::BadIndexSet, "level " + std::to_string(level) + " outside 1.." +
                                            std::to_string(d.piece_count()));
  }
}

inline std::size_t checked_degree(int q) {
  if (q < 0) throw Error(ErrorCode::DimensionMismatch, "negative degree");
  return static_cast<std::size_t>(q);
}

}  // namespace detail

inline TupleCochainSpace tuple_cochain_space(const GluedDiagram& d, int level, int q) {
  detail::require_level(d, level);
  detail::checked_degree(q);
  TupleCochainSpace t;
  t.level = level;
  t.degree = q;
  t.subsets = subsets_of_size(d.piece_count(), static_cast<std::size_t>(level));
  t.offsets.push_back(0);
  for (auto mask : t.subsets) {
    t.components.emplace_back(d.intersection(mask), q);
    t.offsets.push_back(t.offsets.back() + t.components.back().dimension());
  }
  return t;
}

/// C^q(N) -> level 1: concatenated restrictions to every piece. Injective.
inline FMatrix phi_star(const GluedDiagram& d, int q) {
  detail::checked_degree(q);
  const TupleCochainSpace target = tuple_cochain_space(d, 1, q);
  const CochainSpace source(d.union_nerve(), q);
  FMatrix m(d.field(), target.dimension(), source.dimension());
  for (std::size_t i = 0; i < target.subsets.size(); ++i) {
    m.set_block(target.offsets[i], 0,
                restriction_map(d.union_nerve(), d.intersection(target.subsets[i]), q, d.field()).matrix);
  }
  return m;
}

/// Difference map level p -> level p+1, for 1 <= p < n.
inline FMatrix delta_tilde(const GluedDiagram& d, int p, int q) {
  if (p < 1 || static_cast<std::size_t>(p) >= d.piece_count()) {
    throw Error(ErrorCode::BadIndexSet, "difference map needs 1 <= p < n");
  }
  const TupleCochainSpace source = tuple_cochain_space(d, p, q);
  const TupleCochainSpace target = tuple_cochain_space(d, p + 1, q);
  const PrimeField f = d.field();
  FMatrix m(f, target.dimension(), source.dimension());
  for (std::size_t row = 0; row < target.subsets.size(); ++row) {
    const std::uint32_t t = target.subsets[row];
    const auto idx = mask_indices(t);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const std::uint32_t s = t & ~(1U << idx[k]);
      const FMatrix block = restriction_map(d.intersection(s), d.intersection(t), q, f).matrix.scaled(f.sign(k));
      m.set_block(target.offsets[row], source.offsets[source.position(s)], block);
    }
  }
  return m;
}

/// Block-diagonal Cech differential on level p, degree q -> q+1.
inline FMatrix tuple_differential(const GluedDiagram& d, int level, int q) {
  const TupleCochainSpace source = tuple_cochain_space(d, level, q);
  const TupleCochainSpace target = tuple_cochain_space(d, level, q + 1);
  FMatrix m(d.field(), target.dimension(), source.dimension());
  for (std::size_t i = 0; i < source.subsets.size(); ++i) {
    m.set_block(target.offsets[i], source.offsets[i],
                cech_differential(d.intersection(source.subsets[i]), q, d.field()).matrix);
  }
  return m;
}

/// The maps of the generalized sequence in degree q: Phi*, delta~_1, ..., delta~_{n-1}.
inline std::vector<FMatrix> mv_sequence_maps(const GluedDiagram& d, int q) {
  std::vector<FMatrix> maps{phi_star(d, q)};
  for (int p = 1; static_cast<std::size_t>(p) < d.piece_count(); ++p) maps.push_back(delta_tilde(d, p, q));
  return maps;
}

struct ExactnessVerdict {
  int degree = 0;
  std::vector<std::size_t> dimensions;  // C^q(N), then levels 1..n
  std::vector<std::size_t> ranks;       // Phi*, then delta~_1..delta~_{n-1}
  std::vector<std::size_t> failing_positions;

  bool exact() const noexcept { return failing_positions.empty(); }
};

/// Exactness of 0 -> C^q(N) -> level 1 -> ... -> level n -> 0 by rank bookkeeping,
/// plus vanishing of consecutive composites.
inline ExactnessVerdict verify_exact_sequence(const GluedDiagram& d, int q) {
  const std::vector<FMatrix> maps = mv_sequence_maps(d, q);
  ExactnessVerdict v;
  v.degree = q;
  v.dimensions.push_back(maps.front().cols());
  for (const auto& m : maps) {
    v.dimensions.push_back(m.rows());
    v.ranks.push_back(rank(m));
  }
  const std::size_t positions = v.dimensions.size();
  for (std::size_t k = 0; k < positions; ++k) {
    const std::size_t in = k == 0 ? 0 : v.ranks[k - 1];
    const std::size_t out = k < maps.size() ? v.ranks[k] : 0;
    bool ok = in + out == v.dimensions[k];
    if (k >= 1 && k < maps.size()) ok = ok && (maps[k] * maps[k - 1]).is_zero();
    if (!ok) v.failing_positions.push_back(k);
  }
  return v;
}

/// Cohomology of a level: the direct sum of H^q(N_T) over |T| = p.
struct TupleCohomology {
  int level = 0;
  int degree = 0;
  std::vector<Cohomology> parts;
  std::vector<std::size_t> cochain_offsets;
  std::vector<std::size_t> class_offsets;
  std::size_t dimension = 0;
  FMatrix representatives;

  FVector coordinates(std::span<const Scalar> cocycle) const {
    FVector out;
    out.reserve(dimension);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const auto piece = cocycle.subspan(cochain_offsets[i], cochain_offsets[i + 1] - cochain_offsets[i]);
      const FVector c = parts[i].coordinates(piece);
      out.insert(out.end(), c.begin(), c.end());
    }
    return out;
  }
};

inline TupleCohomology tuple_cohomology(const GluedDiagram& d, int level, int q) {
  const TupleCochainSpace space = tuple_cochain_space(d, level, q);
  TupleCohomology h;
  h.level = level;
  h.degree = q;
  h.cochain_offsets = space.offsets;
  h.class_offsets.push_back(0);
  for (auto mask : space.subsets) {
    h.parts.push_back(cohomology(d.intersection(mask), q, d.field()));
    h.class_offsets.push_back(h.class_offsets.back() + h.parts.back().dimension);
  }
  h.dimension = h.class_offsets.back();
  h.representatives = FMatrix(d.field(), space.dimension(), h.dimension);
  for (std::size_t i = 0; i < h.parts.size(); ++i) {
    h.representatives.set_block(h.cochain_offsets[i], h.class_offsets[i], h.parts[i].representatives);
  }
  return h;
}

/// delta~ descended to cohomology, level p -> level p+1.
inline FMatrix descended_delta_tilde(const GluedDiagram& d, int p, int q) {
  return induced_on_cohomology(delta_tilde(d, p, q), tuple_cohomology(d, p, q).representatives,
                               tuple_cohomology(d, p + 1, q));
}

namespace detail {

inline void require_binary(const GluedDiagram& d) {
  if (d.piece_count() != 2) {
    throw Error(ErrorCode::NotBinary, "operation needs exactly two pieces, got " +
                                          std::to_string(d.piece_count()));
  }
}

}  // namespace detail

/// alpha = iota*_12 - f*_12 on cochains of a binary diagram: (f1, f2) -> f1| - f2|.
inline FMatrix binary_difference(const GluedDiagram& d, int q) {
  detail::require_binary(d);
  return delta_tilde(d, 1, q).scaled(d.field().neg(1));
}

enum class Lift { ThroughFirst, ThroughSecond };

/// delta*: H^q(N_12) -> H^{q+1}(N) as a matrix in representative coordinates.
/// A class c is lifted to (ext c, 0) or (0, -ext c), pushed through the Cech
/// differential, and pulled back along Phi*.
inline FMatrix connecting_homomorphism(const GluedDiagram& d, int q, Lift lift = Lift::ThroughFirst) {
  detail::require_binary(d);
  const PrimeField f = d.field();
  const SimplicialComplex& n1 = d.piece_nerve(0);
  const SimplicialComplex& n2 = d.piece_nerve(1);
  const SimplicialComplex& n12 = d.intersection(0b11);
  const Cohomology source = cohomology(n12, q, f);
  const Cohomology target = cohomology(d.union_nerve(), q + 1, f);
  const FMatrix phi = phi_star(d, q + 1);
  const FMatrix ext1 = extension_map(n12, n1, q, f).matrix;
  const FMatrix ext2 = extension_map(n12, n2, q, f).matrix;
  const FMatrix d1 = cech_differential(n1, q, f).matrix;
  const FMatrix d2 = cech_differential(n2, q, f).matrix;

  FMatrix out(f, target.dimension, source.dimension);
  for (std::size_t c = 0; c < source.dimension; ++c) {
    const FVector rep = source.representatives.column(c);
    FVector a(ext1.rows(), 0);
    FVector b(ext2.rows(), 0);
    if (lift == Lift::ThroughFirst) {
      a = ext1.apply(rep);
    } else {
      b = ext2.scaled(f.neg(1)).apply(rep);
    }
    FVector pushed = d1.apply(a);
    const FVector db = d2.apply(b);
    pushed.insert(pushed.end(), db.begin(), db.end());
    const auto preimage = solve_linear(phi, pushed);
    if (!preimage) throw Error(ErrorCode::NotASubspace, "pushed lift is not in the image of Phi*");
    const FVector coords = target.coordinates(*preimage);
    for (std::size_t r = 0; r < coords.size(); ++r) out.set(r, c, coords[r]);
  }
  return out;
}

struct LesDegree {
  int degree = 0;
  std::size_t h_union = 0;      // H^q(N)
  std::size_t h_pieces = 0;     // H^q(N_1) + H^q(N_2)
  std::size_t h_first = 0;
  std::size_t h_second = 0;
  std::size_t h_overlap = 0;    // H^q(N_12)
  std::size_t rank_restrict = 0;  // H^q(N) -> pieces
  std::size_t rank_alpha = 0;     // pieces -> H^q(N_12)
  std::size_t rank_connecting = 0;  // H^q(N_12) -> H^{q+1}(N)
  std::size_t coker_alpha_prev = 0;
  std::size_t ker_alpha = 0;
  bool exact_at_union = false;
  bool exact_at_pieces = false;
  bool exact_at_overlap = false;
  bool identity_holds = false;
};

struct LesReport {
  std::vector<LesDegree> degrees;

  bool exact() const {
    for (const auto& g : degrees)
      if (!g.exact_at_union || !g.exact_at_pieces || !g.exact_at_overlap) return false;
    return true;
  }
  bool identity_holds() const {
    for (const auto& g : degrees)
      if (!g.identity_holds) return false;
    return true;
  }
};

/// The binary long exact sequence in degrees 0..q_max with all induced maps,
/// checked rank by rank, and dim H^q(N) = dim coker alpha_{q-1} + dim ker alpha_q.
inline LesReport assemble_les(const GluedDiagram& d, int q_max) {
  detail::require_binary(d);
  detail::checked_degree(q_max);
  const PrimeField f = d.field();
  LesReport report;
  std::optional<FMatrix> prev_connecting;
  std::size_t prev_coker = 0;
  for (int q = 0; q <= q_max; ++q) {
    const Cohomology hn = cohomology(d.union_nerve(), q, f);
    const TupleCohomology hp = tuple_cohomology(d, 1, q);
    const TupleCohomology ho = tuple_cohomology(d, 2, q);
    const FMatrix restrict = induced_on_cohomology(phi_star(d, q), hn.representatives, hp);
    const FMatrix alpha = induced_on_cohomology(binary_difference(d, q), hp.representatives, ho);
    const FMatrix connecting = connecting_homomorphism(d, q);

    LesDegree g;
    g.degree = q;
    g.h_union = hn.dimension;
    g.h_first = hp.parts[0].dimension;
    g.h_second = hp.parts[1].dimension;
    g.h_pieces = hp.dimension;
    g.h_overlap = ho.dimension;
    g.rank_restrict = rank(restrict);
    g.rank_alpha = rank(alpha);
    g.rank_connecting = rank(connecting);
    g.ker_alpha = g.h_pieces - g.rank_alpha;
    g.coker_alpha_prev = prev_coker;

    const std::size_t rank_in_union = prev_connecting ? rank(*prev_connecting) : 0;
    g.exact_at_union = rank_in_union + g.rank_restrict == g.h_union &&
                       (!prev_connecting || (restrict * *prev_connecting).is_zero());
    g.exact_at_pieces = g.rank_restrict + g.rank_alpha == g.h_pieces && (alpha * restrict).is_zero();
    g.exact_at_overlap = g.rank_alpha + g.rank_connecting == g.h_overlap && (connecting * alpha).is_zero();
    g.identity_holds = g.h_union == g.coker_alpha_prev + g.ker_alpha;

    report.degrees.push_back(g);
    prev_connecting = connecting;
    prev_coker = g.h_overlap - g.rank_alpha;
  }
  return report;
}

struct FibredProduct {
  int degree = 0;
  FMatrix basis;  // columns in level-1 coordinates
  std::size_t dimension = 0;
  std::size_t rank_phi = 0;
  bool equals_image = false;  // span(basis) == image of Phi*
};

/// Tuples (f^1..f^n) of q-cochains whose components agree on every N_ij.
inline FibredProduct fibred_product(const GluedDiagram& d, int q) {
  FibredProduct fp;
  fp.degree = q;
  const FMatrix phi = phi_star(d, q);
  if (d.piece_count() == 1) {
    fp.basis = FMatrix::identity(d.field(), phi.rows());
  } else {
    fp.basis = kernel_basis(delta_tilde(d, 1, q));
  }
  fp.dimension = fp.basis.cols();
  fp.rank_phi = rank(phi);
  fp.equals_image = fp.rank_phi == fp.dimension && rank(hstack(fp.basis, phi)) == fp.dimension;
  return fp;
}

/// Given maps rho_i: X -> C^q(N_i) (shared source dimension) that agree after
/// restriction to every N_ij, the unique map X -> fibred product whose
/// projections are the rho_i, in level-1 coordinates.
inline FMatrix mediating_map(const GluedDiagram& d, int q, const std::vector<FMatrix>& rho) {
  const std::size_t n = d.piece_count();
  if (rho.size() != n) throw Error(ErrorCode::IncompatibleFamily, "need one map per piece");
  const PrimeField f = d.field();
  const TupleCochainSpace level1 = tuple_cochain_space(d, 1, q);
  for (std::size_t i = 0; i < n; ++i) {
    if (rho[i].rows() != level1.components[i].dimension() || rho[i].cols() != rho[0].cols()) {
      throw Error(ErrorCode::DimensionMismatch, "map shape does not match C^q of piece " + d.piece_ids()[i]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::uint32_t ij = (1U << i) | (1U << j);
      const FMatrix ri = restriction_map(d.piece_nerve(i), d.intersection(ij), q, f).matrix * rho[i];
      const FMatrix rj = restriction_map(d.piece_nerve(j), d.intersection(ij), q, f).matrix * rho[j];
      if (!(ri == rj)) {
        throw Error(ErrorCode::IncompatibleFamily,
                    "maps into pieces " + d.piece_ids()[i] + " and " + d.piece_ids()[j] + " disagree on the overlap");
      }
    }
  }
  FMatrix out(f, level1.dimension(), rho.empty() ? 0 : rho[0].cols());
  for (std::size_t i = 0; i < n; ++i) out.set_block(level1.offsets[i], 0, rho[i]);
  return out;
}

/// Dimensions of the inductive products P_1 = C^q(N_1),
/// P_{m+1} = P_m x C^q(N_{m+1}) over the overlaps N_{i,m+1}, i <= m.
inline std::vector<std::size_t> inductive_fibred_product(const GluedDiagram& d, int q) {
  const PrimeField f = d.field();
  const std::size_t n = d.piece_count();
  std::vector<std::size_t> piece_dims;
  for (std::size_t i = 0; i < n; ++i) piece_dims.push_back(d.piece_nerve(i).count(q));
  FMatrix basis = FMatrix::identity(f, piece_dims[0]);  // rows: coordinates over pieces 0..m-1
  std::vector<std::size_t> dims{basis.cols()};
  std::size_t rows_so_far = piece_dims[0];
  for (std::size_t m = 1; m < n; ++m) {
    // unknowns: coefficients y on the current basis, then b in C^q(N_m)
    std::vector<FMatrix> constraints;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint32_t im = (1U << i) | (1U << m);
      const FMatrix ri = restriction_map(d.piece_nerve(i), d.intersection(im), q, f).matrix;
      const FMatrix rm = restriction_map(d.piece_nerve(m), d.intersection(im), q, f).matrix;
      FMatrix select(f, piece_dims[i], rows_so_far);
      select.set_block(0, offset, FMatrix::identity(f, piece_dims[i]));
      offset += piece_dims[i];
      constraints.push_back(hstack(ri * select * basis, rm.scaled(f.neg(1))));
    }
    FMatrix system(f, 0, basis.cols() + piece_dims[m]);
    for (const auto& c : constraints) system = vstack(system, c);
    const FMatrix sol = kernel_basis(system);
    FMatrix next(f, rows_so_far + piece_dims[m], sol.cols());
    for (std::size_t c = 0; c < sol.cols(); ++c) {
      const FVector col = sol.column(c);
      const FVector y(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(basis.cols()));
      const FVector a = basis.apply(y);
      for (std::size_t r = 0; r < a.size(); ++r) next.set(r, c, a[r]);
      for (std::size_t r = 0; r < piece_dims[m]; ++r) next.set(rows_so_far + r, c, col[basis.cols() + r]);
    }
    basis = std::move(next);
    rows_so_far += piece_dims[m];
    dims.push_back(basis.cols());
  }
  return dims;
}

struct TotalCohomology {
  std::vector<std::size_t> dims;
  bool squares_to_zero = true;
};

/// Cohomology of the total complex of the double complex whose (p, q) entry is
/// level p+1 in degree q, with total differential delta~ + (-1)^p delta.
inline TotalCohomology total_cohomology(const GluedDiagram& d, int q_max) {
  detail::checked_degree(q_max);
  const PrimeField f = d.field();
  const int levels = static_cast<int>(d.piece_count());

  auto block_dims = [&](int k) {
    std::vector<std::size_t> dims;
    for (int p = 0; p < levels && p <= k; ++p) dims.push_back(tuple_cochain_space(d, p + 1, k - p).dimension());
    return dims;
  };
  auto total_map = [&](int k) {
    const auto src = block_dims(k);
    const auto tgt = block_dims(k + 1);
    std::vector<std::size_t> so{0};
    std::vector<std::size_t> to{0};
    for (auto x : src) so.push_back(so.back() + x);
    for (auto x : tgt) to.push_back(to.back() + x);
    FMatrix m(f, to.back(), so.back());
    for (int p = 0; p < static_cast<int>(src.size()); ++p) {
      const int q = k - p;
      const auto pp = static_cast<std::size_t>(p);
      m.set_block(to[pp], so[pp], tuple_differential(d, p + 1, q).scaled(f.sign(pp)));
      if (p + 1 < levels) m.set_block(to[pp + 1], so[pp], delta_tilde(d, p + 1, q));
    }
    return m;
  };

  TotalCohomology out;
  std::optional<FMatrix> prev;
  for (int k = 0; k <= q_max; ++k) {
    const FMatrix dk = total_map(k);
    const std::size_t incoming = prev ? rank(*prev) : 0;
    if (prev && !(dk * *prev).is_zero()) out.squares_to_zero = false;
    out.dims.push_back(dk.cols() - rank(dk) - incoming);
    prev = dk;
  }
  return out;
}

struct H1FibredVerdict {
  bool hypothesis = false;  // every N_T connected
  std::vector<std::uint32_t> disconnected;
  std::size_t h1_union = 0;
  std::size_t fibred_dimension = 0;

  bool equal() const noexcept { return h1_union == fibred_dimension; }
  bool holds() const noexcept { return !hypothesis || equal(); }
};

inline std::vector<std::uint32_t> disconnected_intersections(const GluedDiagram& d) {
  std::vector<std::uint32_t> out;
  for (std::size_t p = 1; p <= d.piece_count(); ++p)
    for (auto mask : subsets_of_size(d.piece_count(), p))
      if (components(d.intersection(mask)).size() != 1) out.push_back(mask);
  return out;
}

/// H^1(N) against the classes ([f^1]..[f^n]) that agree on every overlap.
inline H1FibredVerdict h1_fibred_check(const GluedDiagram& d) {
  H1FibredVerdict v;
  v.disconnected = disconnected_intersections(d);
  v.hypothesis = v.disconnected.empty();
  v.h1_union = cohomology(d.union_nerve(), 1, d.field()).dimension;
  const std::size_t level1 = tuple_cohomology(d, 1, 1).dimension;
  v.fibred_dimension = d.piece_count() == 1 ? level1 : level1 - rank(descended_delta_tilde(d, 1, 1));
  return v;
}

struct CountLevel {
  int level = 0;
  std::size_t dimension_sum = 0;  // sum of dim H^1(N_T), |T| = level
  std::uint64_t order_sum = 0;    // sum of |H^1(N_T)|
};

struct CountReport {
  bool connected = false;
  bool surjective = false;
  std::vector<std::uint32_t> disconnected;
  std::vector<int> non_surjective_levels;
  std::vector<CountLevel> levels;
  std::int64_t exponent = 0;  // S
  std::optional<std::uint64_t> dimension_form;  // 2^S when 0 <= S < 64
  std::int64_t literal_form = 0;
  std::size_t h1_union = 0;
  std::uint64_t ground_truth = 0;

  bool hypotheses() const noexcept { return connected && surjective; }
  bool dimension_form_matches() const noexcept { return dimension_form && *dimension_form == ground_truth; }
  bool literal_form_matches() const noexcept {
    return literal_form >= 0 && static_cast<std::uint64_t>(literal_form) == ground_truth;
  }
  bool holds() const noexcept { return !hypotheses() || dimension_form_matches(); }
};

/// Line-bundle count over F_2 from the H^1 data of every N_T.
inline CountReport count_line_bundles(const GluedDiagram& d) {
  if (d.field().modulus() != 2) {
    throw Error(ErrorCode::WrongField, "line bundle counting needs F_2, got F_" +
                                           std::to_string(d.field().modulus()));
  }
  CountReport r;
  r.disconnected = disconnected_intersections(d);
  r.connected = r.disconnected.empty();
  r.surjective = true;
  const int n = static_cast<int>(d.piece_count());
  for (int p = 1; p < n; ++p) {
    const FMatrix m = descended_delta_tilde(d, p, 1);
    if (rank(m) != m.rows()) {
      r.surjective = false;
      r.non_surjective_levels.push_back(p);
    }
  }
  for (int p = 1; p <= n; ++p) {
    CountLevel level;
    level.level = p;
    for (auto mask : subsets_of_size(d.piece_count(), static_cast<std::size_t>(p))) {
      const std::size_t h = cohomology(d.intersection(mask), 1, d.field()).dimension;
      level.dimension_sum += h;
      level.order_sum += std::uint64_t{1} << h;
    }
    const std::int64_t sign = p % 2 == 1 ? 1 : -1;
    r.exponent += sign * static_cast<std::int64_t>(level.dimension_sum);
    r.literal_form += sign * static_cast<std::int64_t>(level.order_sum);
    r.levels.push_back(level);
  }
  if (r.exponent >= 0 && r.exponent < 64) r.dimension_form = std::uint64_t{1} << r.exponent;
  r.h1_union = cohomology(d.union_nerve(), 1, d.field()).dimension;
  r.ground_truth = std::uint64_t{1} << r.h1_union;
  return r;
}

}  // namespace nhcech
