#pragma once

// Refinement maps lambda: fine labels -> coarse labels between two diagrams
// over the same pieces, and the chain maps they induce.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nhcech/cech.hpp"
#include "nhcech/complex.hpp"
#include "nhcech/diagram.hpp"
#include "nhcech/linalg.hpp"
#include "nhcech/mayer_vietoris.hpp"

namespace nhcech {

struct RefinementMap {
  GluedDiagram fine;
  GluedDiagram coarse;
  VertexMap lambda;  // global fine label -> global coarse label
};

struct RefinementVerdict {
  std::vector<std::string> violations;
  bool valid() const noexcept { return violations.empty(); }
};

namespace detail {

inline std::string mask_name(const GluedDiagram& d, std::uint32_t mask) {
  std::vector<std::string> ids;
  for (auto i : mask_indices(mask)) ids.push_back(d.piece_ids()[i]);
  return "{" + join_ids(ids, ",") + "}";
}

inline std::uint32_t full_mask(std::size_t n) { return (1U << n) - 1U; }

}  // namespace detail

/// lambda is simplicial N_fine -> N_coarse and carries every fine N_T into the coarse N_T.
inline RefinementVerdict validate_refinement(const RefinementMap& r) {
  RefinementVerdict v;
  if (r.fine.piece_ids() != r.coarse.piece_ids()) {
    v.violations.push_back("fine and coarse diagrams have different pieces");
    return v;
  }
  for (const auto& l : r.fine.union_nerve().vertex_set()) {
    auto it = r.lambda.find(l);
    if (it == r.lambda.end()) {
      v.violations.push_back("fine label " + l.name() + " is unmapped");
    } else if (!r.coarse.union_nerve().has_vertex(it->second)) {
      v.violations.push_back("fine label " + l.name() + " maps to unknown coarse label " + it->second.name());
    }
  }
  if (!v.valid()) return v;
  std::string witness;
  if (!is_simplicial(r.fine.union_nerve(), r.coarse.union_nerve(), r.lambda, &witness)) {
    v.violations.push_back("union nerve: image of " + witness + " is not a simplex");
  }
  for (std::uint32_t mask = 1; mask <= detail::full_mask(r.fine.piece_count()); ++mask) {
    if (!is_simplicial(r.fine.intersection(mask), r.coarse.intersection(mask), r.lambda, &witness)) {
      v.violations.push_back("pieces " + detail::mask_name(r.fine, mask) + ": image of " + witness +
                             " leaves the coarse nerve");
    }
  }
  return v;
}

inline void require_valid(const RefinementMap& r) {
  const RefinementVerdict v = validate_refinement(r);
  if (!v.valid()) throw Error(ErrorCode::InvalidRefinement, v.violations.front());
}

struct RefinementPullback {
  int degree = 0;
  FMatrix union_map;                          // C^q(N coarse) -> C^q(N fine)
  std::map<std::uint32_t, FMatrix> by_subset;  // C^q(N_T coarse) -> C^q(N_T fine)
  bool commutes_with_differential = true;
};

inline RefinementPullback refine_pullback(const RefinementMap& r, int q) {
  require_valid(r);
  const PrimeField f = r.coarse.field();
  auto pull = [&](const SimplicialComplex& fine, const SimplicialComplex& coarse, int degree) {
    return pullback_map(fine, coarse, r.lambda, degree, f).matrix;
  };
  auto commutes = [&](const SimplicialComplex& fine, const SimplicialComplex& coarse) {
    const FMatrix lhs = pull(fine, coarse, q + 1) * cech_differential(coarse, q, f).matrix;
    const FMatrix rhs = cech_differential(fine, q, f).matrix * pull(fine, coarse, q);
    return lhs == rhs;
  };
  RefinementPullback out;
  out.degree = q;
  out.union_map = pull(r.fine.union_nerve(), r.coarse.union_nerve(), q);
  out.commutes_with_differential = commutes(r.fine.union_nerve(), r.coarse.union_nerve());
  for (std::uint32_t mask = 1; mask <= detail::full_mask(r.fine.piece_count()); ++mask) {
    out.by_subset.emplace(mask, pull(r.fine.intersection(mask), r.coarse.intersection(mask), q));
    if (!commutes(r.fine.intersection(mask), r.coarse.intersection(mask))) out.commutes_with_differential = false;
  }
  return out;
}

/// Block-diagonal pullback on level p.
inline FMatrix level_pullback(const RefinementMap& r, const RefinementPullback& pb, int level) {
  const TupleCochainSpace fine = tuple_cochain_space(r.fine, level, pb.degree);
  const TupleCochainSpace coarse = tuple_cochain_space(r.coarse, level, pb.degree);
  FMatrix m(r.coarse.field(), fine.dimension(), coarse.dimension());
  for (std::size_t i = 0; i < fine.subsets.size(); ++i) {
    m.set_block(fine.offsets[i], coarse.offsets[i], pb.by_subset.at(fine.subsets[i]));
  }
  return m;
}

/// The map lambda induces H^q(N coarse) -> H^q(N fine).
inline FMatrix cohomology_pullback(const RefinementMap& r, int q) {
  const PrimeField f = r.coarse.field();
  const FMatrix pb = pullback_map(r.fine.union_nerve(), r.coarse.union_nerve(), r.lambda, q, f).matrix;
  return induced_on_cohomology(pb, cohomology(r.coarse.union_nerve(), q, f).representatives,
                               cohomology(r.fine.union_nerve(), q, f));
}

struct NaturalityVerdict {
  std::vector<std::string> failures;
  std::size_t squares_checked = 0;
  bool holds() const noexcept { return failures.empty(); }
};

/// Commuting squares for lambda against delta, Phi*, every delta~ and, for two
/// pieces, the connecting homomorphism on cohomology classes.
inline NaturalityVerdict naturality_check(const RefinementMap& r, int q_max) {
  require_valid(r);
  const PrimeField f = r.coarse.field();
  NaturalityVerdict v;
  auto check = [&](bool ok, const std::string& what) {
    ++v.squares_checked;
    if (!ok) v.failures.push_back(what);
  };
  const int n = static_cast<int>(r.fine.piece_count());
  for (int q = 0; q <= q_max; ++q) {
    const std::string at = " (q=" + std::to_string(q) + ")";
    const RefinementPullback pb = refine_pullback(r, q);
    check(pb.commutes_with_differential, "lambda and delta" + at);
    const FMatrix level1 = level_pullback(r, pb, 1);
    check(level1 * phi_star(r.coarse, q) == phi_star(r.fine, q) * pb.union_map, "lambda and Phi*" + at);
    for (int p = 1; p < n; ++p) {
      const FMatrix lower = level_pullback(r, pb, p);
      const FMatrix upper = level_pullback(r, pb, p + 1);
      check(upper * delta_tilde(r.coarse, p, q) == delta_tilde(r.fine, p, q) * lower,
            "lambda and delta~ level " + std::to_string(p) + at);
    }
    if (n == 2) {
      const Cohomology overlap_coarse = cohomology(r.coarse.intersection(0b11), q, f);
      const Cohomology overlap_fine = cohomology(r.fine.intersection(0b11), q, f);
      const FMatrix on_overlap = induced_on_cohomology(pb.by_subset.at(0b11), overlap_coarse.representatives, overlap_fine);
      const FMatrix on_union = cohomology_pullback(r, q + 1);
      check(connecting_homomorphism(r.fine, q) * on_overlap == on_union * connecting_homomorphism(r.coarse, q),
            "lambda and delta*" + at);
    }
  }
  return v;
}

/// lambda and mu are contiguous: lambda(s) u mu(s) spans a coarse simplex of
/// N_T for every fine simplex s of every N_T and of the union nerve.
inline bool contiguous(const RefinementMap& r, const VertexMap& mu) {
  auto ok_on = [&](const SimplicialComplex& fine, const SimplicialComplex& coarse) {
    for (const auto& s : fine.simplices()) {
      std::set<Label> img;
      for (const auto& v : s.vertices()) {
        img.insert(r.lambda.at(v));
        img.insert(mu.at(v));
      }
      if (!coarse.contains(Simplex(std::vector<Label>(img.begin(), img.end())))) return false;
    }
    return true;
  };
  if (!ok_on(r.fine.union_nerve(), r.coarse.union_nerve())) return false;
  for (std::uint32_t mask = 1; mask <= detail::full_mask(r.fine.piece_count()); ++mask)
    if (!ok_on(r.fine.intersection(mask), r.coarse.intersection(mask))) return false;
  return true;
}

/// Every label map that is a valid refinement between the two diagrams.
/// Backtracking over fine labels; stops after `limit` maps.
inline std::vector<VertexMap> enumerate_refinement_maps(const GluedDiagram& fine, const GluedDiagram& coarse,
                                                        std::size_t limit = 100000) {
  const std::vector<Label> labels(fine.union_nerve().vertex_set().begin(), fine.union_nerve().vertex_set().end());
  const std::uint32_t full = detail::full_mask(fine.piece_count());
  std::map<Label, std::vector<Label>> candidates;
  for (const auto& l : labels) {
    for (const auto& c : coarse.union_nerve().vertex_set()) {
      bool ok = true;
      for (std::uint32_t mask = 1; mask <= full && ok; ++mask)
        if (fine.intersection(mask).has_vertex(l) && !coarse.intersection(mask).has_vertex(c)) ok = false;
      if (ok) candidates[l].push_back(c);
    }
  }
  std::vector<VertexMap> out;
  VertexMap current;
  auto edges_ok = [&](const Label& l) {
    // every fine edge between l and an already mapped label
    for (const auto& e : fine.union_nerve().simplices_of_dimension(1)) {
      if (e[0] != l && e[1] != l) continue;
      const Label& other = e[0] == l ? e[1] : e[0];
      if (!current.contains(other)) continue;
      const std::set<Label> img{current.at(e[0]), current.at(e[1])};
      const Simplex s(std::vector<Label>(img.begin(), img.end()));
      if (!coarse.union_nerve().contains(s)) return false;
      for (std::uint32_t mask = 1; mask <= full; ++mask)
        if (fine.intersection(mask).contains(e) && !coarse.intersection(mask).contains(s)) return false;
    }
    return true;
  };
  std::function<void(std::size_t)> step = [&](std::size_t i) {
    if (out.size() >= limit) return;
    if (i == labels.size()) {
      RefinementMap r{fine, coarse, current};
      if (validate_refinement(r).valid()) out.push_back(current);
      return;
    }
    for (const auto& c : candidates[labels[i]]) {
      current[labels[i]] = c;
      if (edges_ok(labels[i])) step(i + 1);
      current.erase(labels[i]);
    }
  };
  step(0);
  return out;
}

struct LambdaIndependence {
  std::size_t valid_maps = 0;
  std::size_t contiguous_maps = 0;
  bool agree = true;  // every contiguous map induces the same H^q maps, q <= q_max
};

inline LambdaIndependence lambda_independence(const RefinementMap& r, int q_max) {
  require_valid(r);
  LambdaIndependence out;
  std::vector<FMatrix> reference;
  for (int q = 0; q <= q_max; ++q) reference.push_back(cohomology_pullback(r, q));
  for (const auto& mu : enumerate_refinement_maps(r.fine, r.coarse)) {
    ++out.valid_maps;
    if (!contiguous(r, mu)) continue;
    ++out.contiguous_maps;
    const RefinementMap other{r.fine, r.coarse, mu};
    for (int q = 0; q <= q_max; ++q)
      if (!(cohomology_pullback(other, q) == reference[static_cast<std::size_t>(q)])) out.agree = false;
  }
  return out;
}

}  // namespace nhcech
