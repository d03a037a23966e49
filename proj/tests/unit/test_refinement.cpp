#include <catch_amalgamated.hpp>

#include "nhcech/nhcech.hpp"

using namespace nhcech;

namespace {

RefinementMap gallery_refinement(const DiagramDocument& doc) {
  return parse_refinement(*doc.refinement, canonicalize(doc.system));
}

RefinementMap identity_refinement(const GluedDiagram& d) {
  VertexMap id;
  for (const auto& l : d.global_labels()) id[l] = l;
  return {d, d, id};
}

GluedDiagram single(std::initializer_list<Simplex> simplices) {
  AdjunctionSystem s;
  s.pieces = {LocalPiece::from_nerve("1", build_complex(simplices))};
  return canonicalize(s);
}

}  // namespace

TEST_CASE("validating refinement maps", "[refinement]") {
  const RefinementMap split = gallery_refinement(gallery::two_origin_line());
  CHECK(validate_refinement(split).valid());
  CHECK(validate_refinement(identity_refinement(split.coarse)).valid());

  RefinementMap wrong = split;
  wrong.lambda.at("o1") = "o2";
  const RefinementVerdict v = validate_refinement(wrong);
  REQUIRE_FALSE(v.valid());
  bool piece_level = false;
  for (const auto& msg : v.violations) piece_level = piece_level || msg.find("pieces {1}") != std::string::npos;
  CHECK(piece_level);
  CHECK_THROWS_AS(refine_pullback(wrong, 0), Error);

  RefinementMap unmapped = split;
  unmapped.lambda.erase("la");
  CHECK_FALSE(validate_refinement(unmapped).valid());
}

TEST_CASE("pullbacks along refinements", "[refinement]") {
  const GluedDiagram d = canonicalize(gallery::two_origin_line().system);
  const RefinementMap id = identity_refinement(d);
  for (int q = 0; q <= 1; ++q) {
    const RefinementPullback pb = refine_pullback(id, q);
    CHECK(pb.union_map == FMatrix::identity(d.field(), d.union_nerve().count(q)));
    for (const auto& [mask, m] : pb.by_subset) CHECK(m == FMatrix::identity(d.field(), d.intersection(mask).count(q)));
    CHECK(cohomology_pullback(id, q) == FMatrix::identity(d.field(), cohomology(d.union_nerve(), q, d.field()).dimension));
  }

  const RefinementMap split = gallery_refinement(gallery::two_origin_line());
  const FMatrix h1 = cohomology_pullback(split, 1);
  CHECK(h1.rows() == 1);
  CHECK(h1.cols() == 1);
  CHECK(rank(h1) == 1);
  CHECK(rank(cohomology_pullback(split, 0)) == 1);

  const GluedDiagram coarse = single({Simplex{"a", "b", "c"}});
  const GluedDiagram fine = single({Simplex{"x", "y"}, Simplex{"y", "z"}});
  const RefinementMap constant{fine, coarse, {{"x", "a"}, {"y", "a"}, {"z", "a"}}};
  REQUIRE(validate_refinement(constant).valid());
  const FMatrix h0 = cohomology_pullback(constant, 0);
  CHECK(h0.rows() == 1);
  CHECK(h0.cols() == 1);
  CHECK(rank(h0) == 1);
}

TEST_CASE("naturality squares commute", "[refinement]") {
  const RefinementMap split = gallery_refinement(gallery::two_origin_line());
  const NaturalityVerdict v = naturality_check(split, 1);
  CHECK(v.holds());
  CHECK(v.squares_checked == 8);

  const RefinementMap arc = gallery_refinement(gallery::bug_eyed_circle());
  CHECK(naturality_check(arc, 1).holds());
  CHECK(rank(cohomology_pullback(arc, 1)) == 2);

  const GluedDiagram circles = canonicalize(gallery::three_circles().system);
  CHECK(naturality_check(identity_refinement(circles), 2).holds());
}

TEST_CASE("connecting square on the overlap generator", "[refinement]") {
  const RefinementMap split = gallery_refinement(gallery::two_origin_line());
  const PrimeField f = split.coarse.field();
  const Cohomology coarse_overlap = cohomology(split.coarse.intersection(0b11), 0, f);
  const Cohomology fine_overlap = cohomology(split.fine.intersection(0b11), 0, f);
  const FVector generator = coarse_overlap.coordinates(FVector{1, 0});  // 1 on l

  const FVector coarse_image = connecting_homomorphism(split.coarse, 0).apply(generator);
  const FVector via_union = cohomology_pullback(split, 1).apply(coarse_image);

  const RefinementPullback pb = refine_pullback(split, 0);
  const FMatrix on_overlap = induced_on_cohomology(pb.by_subset.at(0b11), coarse_overlap.representatives, fine_overlap);
  const FVector via_overlap = connecting_homomorphism(split.fine, 0).apply(on_overlap.apply(generator));
  CHECK(via_union == via_overlap);
  CHECK(via_union == FVector{1});
}

TEST_CASE("contiguous refinement maps induce the same map", "[refinement]") {
  const LambdaIndependence two = lambda_independence(gallery_refinement(gallery::two_origin_line()), 1);
  CHECK(two.valid_maps >= 1);
  CHECK(two.contiguous_maps >= 1);
  CHECK(two.agree);

  const LambdaIndependence arc = lambda_independence(gallery_refinement(gallery::bug_eyed_circle()), 1);
  CHECK(arc.contiguous_maps >= 2);
  CHECK(arc.agree);

  const RefinementMap split = gallery_refinement(gallery::two_origin_line());
  CHECK(contiguous(split, split.lambda));

  // Simplicial on every N_T yet not a refinement: collapsing to l kills H^1.
  RefinementMap collapsed = split;
  for (auto& [from, to] : collapsed.lambda) to = "l";
  REQUIRE(validate_refinement(collapsed).valid());
  CHECK_FALSE(contiguous(split, collapsed.lambda));
  CHECK(rank(cohomology_pullback(collapsed, 1)) == 0);
  CHECK(two.valid_maps > two.contiguous_maps);
}

TEST_CASE("naturality for every self-map of random diagrams", "[refinement][property]") {
  std::size_t maps_checked = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const GluedDiagram d = canonicalize(gallery::random_diagram(seed).system);
    CAPTURE(seed);
    for (const auto& mu : enumerate_refinement_maps(d, d, 6)) {
      const RefinementMap r{d, d, mu};
      REQUIRE(validate_refinement(r).valid());
      CHECK(naturality_check(r, 1).holds());
      ++maps_checked;
    }
    CHECK(naturality_check(identity_refinement(d), 1).holds());
  }
  CHECK(maps_checked > 40);
}
