#pragma once

// Built-in example documents.

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "nhcech/document.hpp"

namespace nhcech::gallery {

namespace detail {

inline LocalPiece piece(std::string id, std::initializer_list<std::initializer_list<const char*>> simplices) {
  LocalPiece p;
  p.id = std::move(id);
  for (const auto& s : simplices) {
    std::vector<Label> v(s.begin(), s.end());
    p.nerve.add_closed(Simplex::from_unordered(std::move(v)));
  }
  p.labels = p.nerve.vertex_set();
  return p;
}

inline GluingBijection identity_gluing(std::string i, std::string j, std::initializer_list<const char*> labels) {
  GluingBijection g{std::move(i), std::move(j), {}};
  for (const char* l : labels) g.map.emplace(l, l);
  return g;
}

}  // namespace detail

/// Two copies of a path l - o_i - r glued away from the middle vertex; the
/// union nerve is a 4-cycle. Carries a sign bundle flipped at r and a fine
/// cover splitting l and r.
inline DiagramDocument two_origin_line() {
  using detail::piece;
  DiagramDocument doc;
  doc.system.pieces = {piece("1", {{"l", "o1"}, {"o1", "r"}}), piece("2", {{"l", "o2"}, {"o2", "r"}})};
  doc.system.gluings = {detail::identity_gluing("1", "2", {"l", "r"})};
  doc.bundle = json{{"rank", 1},
                    {"pieces", json::array()},
                    {"identifications",
                     json::array({{{"i", "1"}, {"j", "2"}, {"values", json::array({{{"label", "r"}, {"value", 1}}})}}})}};
  DiagramDocument fine;
  fine.system.pieces = {piece("1", {{"la", "lb"}, {"lb", "o1"}, {"o1", "ra"}, {"ra", "rb"}}),
                        piece("2", {{"la", "lb"}, {"lb", "o2"}, {"o2", "ra"}, {"ra", "rb"}})};
  fine.system.gluings = {detail::identity_gluing("1", "2", {"la", "lb", "ra", "rb"})};
  json fine_json = to_json(fine);
  fine_json.erase("field");
  doc.refinement = json{{"fine", std::move(fine_json)},
                        {"map", json::array({json::array({"la", "l"}), json::array({"lb", "l"}),
                                             json::array({"o1", "o1"}), json::array({"o2", "o2"}),
                                             json::array({"ra", "r"}), json::array({"rb", "r"})})}};
  return doc;
}

/// n edges a - b_i sharing the vertex a.
inline DiagramDocument branching_line(std::size_t n) {
  if (n < 2 || n > GluedDiagram::kMaxPieces) {
    throw Error(ErrorCode::UnknownGallery, "branching_line_n needs 2 <= n <= " +
                                               std::to_string(GluedDiagram::kMaxPieces));
  }
  DiagramDocument doc;
  for (std::size_t i = 1; i <= n; ++i) {
    LocalPiece p;
    p.id = std::to_string(i);
    p.nerve.add_closed(Simplex{"a", Label("b" + std::to_string(i))});
    p.labels = p.nerve.vertex_set();
    doc.system.pieces.push_back(std::move(p));
  }
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j)
      doc.system.gluings.push_back(detail::identity_gluing(std::to_string(i), std::to_string(j), {"a"}));
  return doc;
}

namespace detail {

inline DiagramDocument circles(std::size_t n) {
  DiagramDocument doc;
  for (std::size_t i = 1; i <= n; ++i) {
    const Label c("c" + std::to_string(i));
    LocalPiece p;
    p.id = std::to_string(i);
    p.nerve = build_complex({Simplex{"a", "b"}, Simplex::from_unordered({"b", c}), Simplex::from_unordered({"a", c})});
    p.labels = p.nerve.vertex_set();
    doc.system.pieces.push_back(std::move(p));
  }
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j)
      doc.system.gluings.push_back(identity_gluing(std::to_string(i), std::to_string(j), {"a", "b"}));
  return doc;
}

}  // namespace detail

/// Two circles a - b - c_i glued along the arc a - b; the union nerve is a theta graph.
inline DiagramDocument bug_eyed_circle() {
  using detail::piece;
  DiagramDocument doc = detail::circles(2);
  DiagramDocument fine;
  fine.system.pieces = {piece("1", {{"a1", "a2"}, {"a2", "b"}, {"b", "c1"}, {"a1", "c1"}}),
                        piece("2", {{"a1", "a2"}, {"a2", "b"}, {"b", "c2"}, {"a1", "c2"}})};
  fine.system.gluings = {detail::identity_gluing("1", "2", {"a1", "a2", "b"})};
  json fine_json = to_json(fine);
  fine_json.erase("field");
  doc.refinement = json{{"fine", std::move(fine_json)},
                        {"map", json::array({json::array({"a1", "a"}), json::array({"a2", "a"}),
                                             json::array({"b", "b"}), json::array({"c1", "c1"}),
                                             json::array({"c2", "c2"})})}};
  return doc;
}

/// Three circles a - b - c_i glued along the common arc a - b.
inline DiagramDocument three_circles() { return detail::circles(3); }

/// Pieces are induced subcomplexes of one random complex, glued by the
/// identity on shared labels, so every intersection nerve is admissible.
inline DiagramDocument random_diagram(std::uint64_t seed, std::size_t pieces = 0) {
  std::mt19937_64 rng(seed);
  auto below = [&](std::uint64_t k) { return rng() % k; };
  const std::size_t n = pieces ? pieces : 2 + static_cast<std::size_t>(below(3));
  if (n < 1 || n > GluedDiagram::kMaxPieces) throw Error(ErrorCode::UnknownGallery, "random: bad piece count");
  const std::size_t vertex_count = 4 + static_cast<std::size_t>(below(5));
  std::vector<Label> v;
  for (std::size_t i = 0; i < vertex_count; ++i) v.emplace_back("v" + std::to_string(i));

  SimplicialComplex global;
  for (const auto& x : v) global.add_closed(Simplex{x});
  for (std::size_t a = 0; a < vertex_count; ++a)
    for (std::size_t b = a + 1; b < vertex_count; ++b)
      if (below(100) < 45) global.add_closed(Simplex::from_unordered({v[a], v[b]}));
  for (std::size_t a = 0; a < vertex_count; ++a)
    for (std::size_t b = a + 1; b < vertex_count; ++b)
      for (std::size_t c = b + 1; c < vertex_count; ++c) {
        const Simplex t = Simplex::from_unordered({v[a], v[b], v[c]});
        if (global.contains(t.face_without(0)) && global.contains(t.face_without(1)) &&
            global.contains(t.face_without(2)) && below(100) < 40) {
          global.add_closed(t);
        }
      }

  std::vector<std::set<Label>> members(n);
  for (std::size_t i = 0; i < vertex_count; ++i) {
    bool placed = false;
    for (std::size_t p = 0; p < n; ++p) {
      if (below(100) < 60) {
        members[p].insert(v[i]);
        placed = true;
      }
    }
    if (!placed) members[static_cast<std::size_t>(below(n))].insert(v[i]);
  }
  for (std::size_t p = 0; p < n; ++p)
    if (members[p].empty()) members[p].insert(v[static_cast<std::size_t>(below(vertex_count))]);

  DiagramDocument doc;
  for (std::size_t p = 0; p < n; ++p) {
    LocalPiece piece;
    piece.id = std::to_string(p + 1);
    piece.nerve = global.induced(members[p]);
    piece.labels = piece.nerve.vertex_set();
    doc.system.pieces.push_back(std::move(piece));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      GluingBijection g{doc.system.pieces[i].id, doc.system.pieces[j].id, {}};
      for (const auto& l : members[i])
        if (members[j].contains(l)) g.map.emplace(l, l);
      if (!g.map.empty()) doc.system.gluings.push_back(std::move(g));
    }
  }
  return doc;
}

inline std::vector<std::string> names() {
  return {"two_origin_line", "branching_line_n", "bug_eyed_circle", "three_circles", "random"};
}

/// Looks a document up by name; `n` feeds branching_line_n and `seed` feeds random.
inline DiagramDocument by_name(const std::string& name, std::size_t n = 2, std::uint64_t seed = 1) {
  if (name == "two_origin_line") return two_origin_line();
  if (name == "branching_line_n") return branching_line(n);
  if (name == "bug_eyed_circle") return bug_eyed_circle();
  if (name == "three_circles") return three_circles();
  if (name == "random") return random_diagram(seed);
  throw Error(ErrorCode::UnknownGallery, "no gallery entry named '" + name + "'");
}

}  // namespace nhcech::gallery
