#pragma once

// JSON interchange form of an adjunction system, with optional bundle and
// refinement blocks.
//
//   {"field": 2,
//    "pieces":  [{"id": "1", "simplices": [["l","o1"], ["o1","r"]]}],
//    "gluings": [{"i": "1", "j": "2", "pairs": [["l","l"], ["r","r"]]}],
//    "bundle":  {"rank": 1,
//                "pieces": [{"id": "1", "edges": [{"simplex": ["l","o1"], "value": 1}]}],
//                "identifications": [{"i": "1", "j": "2",
//                                     "values": [{"label": "r", "value": 1}]}]},
//    "refinement": {"fine": {...document...}, "map": [["la","l"], ...]}}
//
// Piece simplices may be maximal only; closure happens on load. A piece may
// also list "labels" that carry no simplex. Bundle edge values and
// identifications use the piece's local labels; a value is given for the
// listed vertex order. Rank-1 data over F_2 is a sign (0 = +1, 1 = -1);
// otherwise values are k x k matrices as row lists. The refinement map uses
// global (canonical) labels of the fine and coarse diagrams.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nhcech/bundles.hpp"
#include "nhcech/complex.hpp"
#include "nhcech/diagram.hpp"
#include "nhcech/linalg.hpp"
#include "nhcech/refinement.hpp"

namespace nhcech {

using json = nlohmann::json;

struct DiagramDocument {
  AdjunctionSystem system;
  std::optional<json> bundle;
  std::optional<json> refinement;
};

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, (where.empty() ? std::string("/") : where) + ": " + what);
}

inline const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) parse_fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail(where, std::string("missing field '") + key + "'");
  return *it;
}

inline void only_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, unused] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) parse_fail(where, "unknown field '" + key + "'");
  }
}

inline std::string text(const json& v, const std::string& where) {
  if (!v.is_string()) parse_fail(where, "expected a string");
  const std::string s = v.get<std::string>();
  if (s.empty()) parse_fail(where, "empty string");
  return s;
}

inline const json& array(const json& v, const std::string& where) {
  if (!v.is_array()) parse_fail(where, "expected an array");
  return v;
}

inline std::int64_t integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) parse_fail(where, "expected an integer");
  return v.get<std::int64_t>();
}

}  // namespace detail

/// Structural parse; adjunction conditions are left to validate_system.
inline DiagramDocument parse_document(const json& doc, const std::string& where = "") {
  using namespace detail;
  if (!doc.is_object()) parse_fail(where, "document must be an object");
  only_keys(doc, {"field", "pieces", "gluings", "bundle", "refinement"}, where);
  DiagramDocument out;
  if (doc.contains("field")) {
    const std::int64_t p = integer(doc.at("field"), where + "/field");
    if (p < 0 || p > 0x7fffffff) parse_fail(where + "/field", "modulus out of range");
    out.system.field = PrimeField(static_cast<std::uint32_t>(p));
  }
  std::set<std::string> ids;
  const json& pieces = array(member(doc, "pieces", where), where + "/pieces");
  for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
    const std::string at = where + "/pieces/" + std::to_string(pi);
    const json& p = pieces[pi];
    if (!p.is_object()) parse_fail(at, "expected an object");
    only_keys(p, {"id", "simplices", "labels"}, at);
    LocalPiece piece;
    piece.id = text(member(p, "id", at), at + "/id");
    if (!ids.insert(piece.id).second) parse_fail(at + "/id", "duplicate piece id '" + piece.id + "'");
    const json& simplices = array(member(p, "simplices", at), at + "/simplices");
    for (std::size_t si = 0; si < simplices.size(); ++si) {
      const std::string sat = at + "/simplices/" + std::to_string(si);
      std::vector<Label> vertices;
      for (std::size_t vi = 0; vi < array(simplices[si], sat).size(); ++vi) {
        vertices.emplace_back(text(simplices[si][vi], sat + "/" + std::to_string(vi)));
      }
      if (vertices.empty()) parse_fail(sat, "empty simplex");
      std::sort(vertices.begin(), vertices.end());
      if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end()) {
        parse_fail(sat, "repeated vertex in simplex");
      }
      piece.nerve.add_closed(Simplex(std::move(vertices)));
    }
    piece.labels = piece.nerve.vertex_set();
    if (p.contains("labels")) {
      const json& labels = array(p.at("labels"), at + "/labels");
      for (std::size_t li = 0; li < labels.size(); ++li)
        piece.labels.insert(Label(text(labels[li], at + "/labels/" + std::to_string(li))));
    }
    out.system.pieces.push_back(std::move(piece));
  }
  if (doc.contains("gluings")) {
    const json& gluings = array(doc.at("gluings"), where + "/gluings");
    for (std::size_t gi = 0; gi < gluings.size(); ++gi) {
      const std::string at = where + "/gluings/" + std::to_string(gi);
      const json& g = gluings[gi];
      if (!g.is_object()) parse_fail(at, "expected an object");
      only_keys(g, {"i", "j", "pairs"}, at);
      GluingBijection gl;
      gl.source = text(member(g, "i", at), at + "/i");
      gl.target = text(member(g, "j", at), at + "/j");
      const json& pairs = array(member(g, "pairs", at), at + "/pairs");
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        const std::string pat = at + "/pairs/" + std::to_string(k);
        if (!pairs[k].is_array() || pairs[k].size() != 2) parse_fail(pat, "expected a pair of labels");
        Label x(text(pairs[k][0], pat + "/0"));
        Label y(text(pairs[k][1], pat + "/1"));
        if (!gl.map.emplace(x, y).second) parse_fail(pat, "label '" + x.name() + "' glued twice");
      }
      out.system.gluings.push_back(std::move(gl));
    }
  }
  if (doc.contains("bundle")) {
    if (!doc.at("bundle").is_object()) parse_fail(where + "/bundle", "expected an object");
    out.bundle = doc.at("bundle");
  }
  if (doc.contains("refinement")) {
    if (!doc.at("refinement").is_object()) parse_fail(where + "/refinement", "expected an object");
    out.refinement = doc.at("refinement");
  }
  return out;
}

inline json parse_json_text(const std::string& content, const std::string& source) {
  try {
    return json::parse(content);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, source + ": " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, path + ": cannot open file");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Parses and validates; adjunction-condition failures raise InvalidSystem.
inline DiagramDocument load_diagram_text(const std::string& content, const std::string& source) {
  DiagramDocument doc = parse_document(parse_json_text(content, source));
  const ValidationReport report = validate_system(doc.system);
  if (!report.valid()) {
    const Violation& v = report.violations.front();
    throw Error(ErrorCode::InvalidSystem,
                source + ": " + v.condition + ": " + v.message + " [" + detail::join_ids(v.witness, ", ") + "]");
  }
  return doc;
}

inline DiagramDocument load_diagram(const std::string& path) { return load_diagram_text(read_file(path), path); }

/// Maximal simplices of a complex, in simplex order.
inline std::vector<Simplex> maximal_simplices(const SimplicialComplex& k) {
  std::vector<Simplex> out;
  for (const auto& s : k.simplices()) {
    bool maximal = true;
    for (const auto& t : k.simplices()) {
      if (t.size() == s.size() + 1 &&
          std::includes(t.vertices().begin(), t.vertices().end(), s.vertices().begin(), s.vertices().end())) {
        maximal = false;
        break;
      }
    }
    if (maximal) out.push_back(s);
  }
  return out;
}

inline json to_json(const DiagramDocument& doc) {
  json out = json::object();
  out["field"] = doc.system.field.modulus();
  json pieces = json::array();
  for (const auto& p : doc.system.pieces) {
    json piece = json::object();
    piece["id"] = p.id;
    json simplices = json::array();
    for (const auto& s : maximal_simplices(p.nerve)) {
      json vs = json::array();
      for (const auto& v : s.vertices()) vs.push_back(v.name());
      simplices.push_back(std::move(vs));
    }
    piece["simplices"] = std::move(simplices);
    std::vector<std::string> extra;
    for (const auto& l : p.labels)
      if (!p.nerve.has_vertex(l)) extra.push_back(l.name());
    if (!extra.empty()) piece["labels"] = extra;
    pieces.push_back(std::move(piece));
  }
  out["pieces"] = std::move(pieces);
  json gluings = json::array();
  for (const auto& g : doc.system.gluings) {
    json pairs = json::array();
    for (const auto& [x, y] : g.map) pairs.push_back(json::array({x.name(), y.name()}));
    gluings.push_back({{"i", g.source}, {"j", g.target}, {"pairs", std::move(pairs)}});
  }
  out["gluings"] = std::move(gluings);
  if (doc.bundle) out["bundle"] = *doc.bundle;
  if (doc.refinement) out["refinement"] = *doc.refinement;
  return out;
}

/// True when the bundle block describes rank-1 data over F_2 (sign cocycles).
inline bool is_sign_bundle(const json& bundle, PrimeField field) {
  const std::int64_t k = bundle.contains("rank") ? detail::integer(bundle.at("rank"), "/bundle/rank") : 1;
  return k == 1 && field.modulus() == 2;
}

namespace detail {

inline SignGroup::Element parse_element(const SignGroup&, const json& v, const std::string& where) {
  const std::int64_t x = integer(v, where);
  if (x != 0 && x != 1) parse_fail(where, "sign values are 0 (+1) or 1 (-1)");
  return static_cast<Scalar>(x);
}

inline GeneralLinearGroup::Element parse_element(const GeneralLinearGroup& g, const json& v,
                                                 const std::string& where) {
  FMatrix m(g.field, g.rank, g.rank);
  if (g.rank == 1 && v.is_number_integer()) {
    m.set(0, 0, g.field.reduce(v.get<std::int64_t>()));
  } else {
    if (!v.is_array() || v.size() != g.rank) parse_fail(where, "expected a k x k matrix");
    for (std::size_t r = 0; r < g.rank; ++r) {
      if (!v[r].is_array() || v[r].size() != g.rank) parse_fail(where, "expected a k x k matrix");
      for (std::size_t c = 0; c < g.rank; ++c) {
        m.set(r, c, g.field.reduce(integer(v[r][c], where + "/" + std::to_string(r) + "/" + std::to_string(c))));
      }
    }
  }
  if (!g.valid(m)) parse_fail(where, "matrix is not invertible");
  return m;
}

inline json element_json(const SignGroup&, SignGroup::Element e) { return e; }

inline json element_json(const GeneralLinearGroup& g, const FMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < g.rank; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < g.rank; ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

inline GeneralLinearGroup bundle_gl_group(const json& bundle, PrimeField field) {
  const std::int64_t k = bundle.contains("rank") ? detail::integer(bundle.at("rank"), "/bundle/rank") : 1;
  if (k < 1 || k > 4) detail::parse_fail("/bundle/rank", "rank must be between 1 and 4");
  return GeneralLinearGroup{field, static_cast<std::size_t>(k)};
}

/// Bundle block -> per-piece cocycles on the global nerves of `d`.
template <class G>
PieceBundleData<G> parse_bundle(const json& bundle, const GluedDiagram& d, G group) {
  using namespace detail;
  const std::string where = "/bundle";
  only_keys(bundle, {"rank", "pieces", "identifications"}, where);
  PieceBundleData<G> data{group, {}, {}};
  for (std::size_t i = 0; i < d.piece_count(); ++i) data.pieces.push_back(trivial_cocycle(group, d.piece_nerve(i)));
  auto piece_index = [&](const json& v, const std::string& at) {
    const std::string id = text(v, at);
    for (std::size_t i = 0; i < d.piece_count(); ++i)
      if (d.piece_ids()[i] == id) return i;
    parse_fail(at, "unknown piece '" + id + "'");
  };
  auto global = [&](std::size_t i, const json& v, const std::string& at) {
    const Label local(text(v, at));
    auto it = d.local_to_global(i).find(local);
    if (it == d.local_to_global(i).end()) parse_fail(at, "label '" + local.name() + "' not in piece");
    return it->second;
  };
  if (bundle.contains("pieces")) {
    const json& pieces = array(bundle.at("pieces"), where + "/pieces");
    for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
      const std::string at = where + "/pieces/" + std::to_string(pi);
      only_keys(pieces[pi], {"id", "edges"}, at);
      const std::size_t i = piece_index(member(pieces[pi], "id", at), at + "/id");
      const json& edges = array(member(pieces[pi], "edges", at), at + "/edges");
      for (std::size_t e = 0; e < edges.size(); ++e) {
        const std::string eat = at + "/edges/" + std::to_string(e);
        only_keys(edges[e], {"simplex", "value"}, eat);
        const json& s = member(edges[e], "simplex", eat);
        if (!s.is_array() || s.size() != 2) parse_fail(eat + "/simplex", "expected an edge");
        const Label a = global(i, s[0], eat + "/simplex/0");
        const Label b = global(i, s[1], eat + "/simplex/1");
        if (a == b || !d.piece_nerve(i).contains(Simplex::from_unordered({a, b}))) {
          parse_fail(eat + "/simplex", "not an edge of the piece");
        }
        data.pieces[i].set(a, b, parse_element(group, member(edges[e], "value", eat), eat + "/value"));
      }
    }
  }
  if (bundle.contains("identifications")) {
    const json& ids = array(bundle.at("identifications"), where + "/identifications");
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const std::string at = where + "/identifications/" + std::to_string(k);
      only_keys(ids[k], {"i", "j", "values"}, at);
      const std::size_t i = piece_index(member(ids[k], "i", at), at + "/i");
      const std::size_t j = piece_index(member(ids[k], "j", at), at + "/j");
      auto& target = data.identifications[{i, j}];
      const json& values = array(member(ids[k], "values", at), at + "/values");
      for (std::size_t v = 0; v < values.size(); ++v) {
        const std::string vat = at + "/values/" + std::to_string(v);
        only_keys(values[v], {"label", "value"}, vat);
        const Label a = global(i, member(values[v], "label", vat), vat + "/label");
        target[a] = parse_element(group, member(values[v], "value", vat), vat + "/value");
      }
    }
  }
  return data;
}

template <class G>
json cocycle_json(const ConstantCocycle<G>& g) {
  json edges = json::array();
  for (const auto& [edge, e] : g.values) {
    edges.push_back({{"simplex", json::array({edge.first.name(), edge.second.name()})},
                     {"value", detail::element_json(g.group, e)}});
  }
  return edges;
}

/// Refinement block -> fine diagram and lambda against the coarse diagram `coarse`.
inline RefinementMap parse_refinement(const json& block, const GluedDiagram& coarse) {
  using namespace detail;
  const std::string where = "/refinement";
  only_keys(block, {"fine", "map"}, where);
  DiagramDocument fine_doc = parse_document(member(block, "fine", where), where + "/fine");
  fine_doc.system.field = coarse.field();
  GluedDiagram fine = canonicalize(fine_doc.system);
  VertexMap lambda;
  const json& pairs = array(member(block, "map", where), where + "/map");
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const std::string at = where + "/map/" + std::to_string(k);
    if (!pairs[k].is_array() || pairs[k].size() != 2) parse_fail(at, "expected a pair of labels");
    if (!lambda.emplace(Label(text(pairs[k][0], at + "/0")), Label(text(pairs[k][1], at + "/1"))).second) {
      parse_fail(at, "fine label mapped twice");
    }
  }
  return {std::move(fine), coarse, std::move(lambda)};
}

}  // namespace nhcech
