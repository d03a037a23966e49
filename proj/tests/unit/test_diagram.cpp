#include <catch_amalgamated.hpp>

#include "nhcech/nhcech.hpp"

using namespace nhcech;

namespace {

LocalPiece make_piece(std::string id, std::initializer_list<Simplex> simplices) {
  return LocalPiece::from_nerve(std::move(id), build_complex(simplices));
}

AdjunctionSystem three_piece_chain() {
  AdjunctionSystem s;
  s.pieces = {make_piece("1", {Simplex{"x", "y"}}), make_piece("2", {Simplex{"x", "y"}}),
              make_piece("3", {Simplex{"x", "y"}})};
  s.gluings = {{"1", "2", {{"x", "x"}}}, {"2", "3", {{"x", "x"}}}, {"1", "3", {{"x", "y"}}}};
  return s;
}

}  // namespace

TEST_CASE("gallery systems validate", "[diagram]") {
  CHECK(validate_system(gallery::two_origin_line().system).valid());
  CHECK(validate_system(gallery::bug_eyed_circle().system).valid());
  CHECK(validate_system(gallery::three_circles().system).valid());
  for (std::size_t n = 2; n <= 5; ++n) CHECK(validate_system(gallery::branching_line(n).system).valid());
}

TEST_CASE("A2 violation names the offending label", "[diagram]") {
  AdjunctionSystem s = gallery::two_origin_line().system;
  s.gluings.push_back({"2", "1", {{"l", "r"}, {"r", "l"}}});
  const ValidationReport r = validate_system(s);
  REQUIRE(r.has("A2"));
  bool named = false;
  for (const auto& v : r.violations)
    if (v.condition == "A2")
      for (const auto& w : v.witness) named = named || w == "l" || w == "r";
  CHECK(named);
}

TEST_CASE("A3 violation on a three-piece system", "[diagram]") {
  const ValidationReport r = validate_system(three_piece_chain());
  REQUIRE(r.has("A3"));
  CHECK_FALSE(r.valid());
  CHECK_THROWS_AS(canonicalize(three_piece_chain()), Error);
}

TEST_CASE("A1 and structural checks", "[diagram]") {
  AdjunctionSystem s;
  s.pieces = {make_piece("1", {Simplex{"a", "b"}})};
  s.gluings = {{"1", "1", {{"a", "b"}, {"b", "a"}}}};
  CHECK(validate_system(s).has("A1"));

  AdjunctionSystem dup;
  dup.pieces = {make_piece("1", {Simplex{"a"}}), make_piece("1", {Simplex{"b"}})};
  CHECK(validate_system(dup).has("structure"));

  AdjunctionSystem not_simplicial;
  not_simplicial.pieces = {make_piece("1", {Simplex{"a", "b"}}), make_piece("2", {Simplex{"a"}, Simplex{"b"}})};
  not_simplicial.gluings = {{"1", "2", {{"a", "a"}, {"b", "b"}}}};
  CHECK(validate_system(not_simplicial).has("simplicial"));
}

TEST_CASE("canonicalization of the two-origin line", "[diagram]") {
  const GluedDiagram d = canonicalize(gallery::two_origin_line().system);
  CHECK(d.piece_count() == 2);
  CHECK(d.global_labels() == std::set<Label>{"l", "o1", "o2", "r"});
  const auto cycle = build_complex({Simplex{"l", "o1"}, Simplex{"o1", "r"}, Simplex{"o2", "r"}, Simplex{"l", "o2"}});
  CHECK(d.union_nerve() == cycle);
  CHECK(d.intersection(0b11) == build_complex({Simplex{"l"}, Simplex{"r"}}));
  CHECK(components(d.intersection(0b11)).size() == 2);
}

TEST_CASE("doubled circle has a theta-graph nerve", "[diagram]") {
  const GluedDiagram d = canonicalize(gallery::bug_eyed_circle().system);
  CHECK(d.global_labels() == std::set<Label>{"a", "b", "c1", "c2"});
  CHECK(d.union_nerve().count(1) == 5);
  CHECK(d.union_nerve().count(2) == 0);
}

TEST_CASE("unglued labels with equal names stay apart", "[diagram]") {
  AdjunctionSystem s;
  s.pieces = {make_piece("1", {Simplex{"x", "y"}}), make_piece("2", {Simplex{"x", "z"}})};
  const GluedDiagram d = canonicalize(s);
  CHECK(d.global_labels().size() == 4);
  CHECK(components(d.union_nerve()).size() == 2);
  CHECK(d.intersection(0b11).empty());
}

TEST_CASE("gluing along renamed labels", "[diagram]") {
  AdjunctionSystem s;
  s.pieces = {make_piece("1", {Simplex{"p", "q"}}), make_piece("2", {Simplex{"u", "v"}, Simplex{"v", "w"}})};
  s.gluings = {{"1", "2", {{"p", "u"}, {"q", "v"}}}};
  const GluedDiagram d = canonicalize(s);
  CHECK(d.global_labels().size() == 3);
  CHECK(d.intersection(0b11).count(1) == 1);
  CHECK(d.local_to_global(1).at("u") == d.local_to_global(0).at("p"));
}

TEST_CASE("single piece diagram", "[diagram]") {
  AdjunctionSystem s;
  s.pieces = {make_piece("only", {Simplex{"a", "b", "c"}})};
  const GluedDiagram d = canonicalize(s);
  CHECK(d.union_nerve() == s.pieces[0].nerve);
  CHECK(d.intersection(0b1) == d.union_nerve());
}

TEST_CASE("intersection nerves", "[diagram]") {
  const GluedDiagram circles = canonicalize(gallery::three_circles().system);
  CHECK(intersection_nerve(circles, {0, 1, 2}) == build_complex({Simplex{"a", "b"}}));
  CHECK(intersection_nerve(circles, {1}) == circles.piece_nerve(1));
  CHECK_THROWS_AS(intersection_nerve(circles, std::span<const std::size_t>{}), Error);
  CHECK_THROWS_AS(intersection_nerve(circles, {0, 5}), Error);
  CHECK_THROWS_AS(intersection_nerve(circles, {1, 1}), Error);
}

TEST_CASE("collapsing pieces keeps the union nerve", "[diagram]") {
  const GluedDiagram circles = canonicalize(gallery::three_circles().system);
  const GluedDiagram two = collapse(circles, {0, 1});
  CHECK(two.piece_count() == 2);
  CHECK(two.piece_ids() == std::vector<std::string>{"1+2", "3"});
  CHECK(two.union_nerve() == circles.union_nerve());
  CHECK(two.piece_nerve(0) == canonicalize(gallery::bug_eyed_circle().system).union_nerve());

  const GluedDiagram same = collapse(circles, {2});
  CHECK(same.piece_count() == 3);
  CHECK(same.union_nerve() == circles.union_nerve());
  for (std::size_t i = 0; i < 3; ++i) CHECK(same.piece_nerve(i) == circles.piece_nerve(i));

  CHECK_THROWS_AS(collapse(circles, {0, 1, 2}), Error);
  CHECK_THROWS_AS(collapse(circles, std::span<const std::size_t>{}), Error);
}

TEST_CASE("subsystem embeddings", "[diagram]") {
  const GluedDiagram circles = canonicalize(gallery::three_circles().system);
  const auto pair = subsystem_embedding(circles, {0, 1});
  CHECK(pair.diagram.union_nerve() == canonicalize(gallery::bug_eyed_circle().system).union_nerve());
  CHECK(is_simplicial(pair.diagram.union_nerve(), circles.union_nerve(), pair.kappa));

  const auto all = subsystem_embedding(circles, {0, 1, 2});
  for (const auto& [from, to] : all.kappa) CHECK(from == to);
  CHECK(all.kappa.size() == circles.global_labels().size());

  const auto first = subsystem_embedding(circles, {0});
  CHECK(first.diagram.union_nerve() == circles.piece_nerve(0));
  CHECK(is_simplicial(first.diagram.union_nerve(), circles.union_nerve(), first.kappa));
}

TEST_CASE("induced maps out of the glued nerve", "[diagram]") {
  const GluedDiagram d = canonicalize(gallery::two_origin_line().system);
  const auto triangle_free = build_complex({Simplex{"l", "o"}, Simplex{"o", "r"}, Simplex{"l", "r"}});

  SECTION("collapsing both origins gives the quotient map") {
    const std::vector<VertexMap> psi{{{"l", "l"}, {"o1", "o"}, {"r", "r"}}, {{"l", "l"}, {"o2", "o"}, {"r", "r"}}};
    const VertexMap alpha = induced_map(d, triangle_free, psi);
    CHECK(alpha == VertexMap{{"l", "l"}, {"o1", "o"}, {"o2", "o"}, {"r", "r"}});
    CHECK(is_simplicial(d.union_nerve(), triangle_free, alpha));
  }
  SECTION("constant maps give a constant map") {
    const auto point = build_complex({Simplex{"p"}});
    const std::vector<VertexMap> psi{{{"l", "p"}, {"o1", "p"}, {"r", "p"}}, {{"l", "p"}, {"o2", "p"}, {"r", "p"}}};
    for (const auto& [from, to] : induced_map(d, point, psi)) CHECK(to == Label("p"));
  }
  SECTION("the inclusions give the identity") {
    std::vector<VertexMap> psi(2);
    for (std::size_t i = 0; i < 2; ++i) psi[i] = d.local_to_global(i);
    for (const auto& [from, to] : induced_map(d, d.union_nerve(), psi)) CHECK(from == to);
  }
  SECTION("disagreement on an overlap is rejected") {
    const std::vector<VertexMap> psi{{{"l", "l"}, {"o1", "o"}, {"r", "r"}}, {{"l", "o"}, {"o2", "r"}, {"r", "r"}}};
    CHECK_THROWS_AS(induced_map(d, triangle_free, psi), Error);
  }
}

TEST_CASE("diagram invariants on random systems", "[diagram][property]") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const GluedDiagram d = canonicalize(gallery::random_diagram(seed).system);
    const std::size_t n = d.piece_count();
    CAPTURE(seed);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(d.piece_nerve(i).is_subcomplex_of(d.union_nerve()));
      for (std::size_t j = i + 1; j < n; ++j)
        CHECK(intersect(d.piece_nerve(i), d.piece_nerve(j)) == d.intersection((1U << i) | (1U << j)));
    }
    for (std::uint32_t mask = 1; mask < (1U << n); ++mask)
      for (auto i : mask_indices(mask)) CHECK(d.intersection(mask).is_subcomplex_of(d.piece_nerve(i)));

    if (n >= 2) {
      const auto sub = subsystem_embedding(d, {0, 1});
      CHECK(is_simplicial(sub.diagram.union_nerve(), d.union_nerve(), sub.kappa));
      std::set<Label> images;
      for (const auto& [from, to] : sub.kappa) images.insert(to);
      CHECK(images.size() == sub.kappa.size());
    }
    if (n >= 3) CHECK(collapse(d, {0, 2}).union_nerve() == d.union_nerve());
  }
}
