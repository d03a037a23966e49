#pragma once

// Constant transition cocycles on a nerve and their locally constant sections.
//
// Conventions used throughout:
//   parallel section       s_a = g_ab s_b
//   cocycle identity       g_ab g_bc g_ca = 1 on every triangle
//   gauge by k             h_ab = k_a^-1 g_ab k_b
//   piece compatibility    g^j_ab = k^ij_a g^i_ab (k^ij_b)^-1 on edges of N_ij
//   triple condition       k^ik = k^jk k^ij on vertices of N_ijk
//   section gluing         s^j_a = k^ij_a s^i_a
//
// Two structure groups are provided. SignGroup is O(1) = {+1, -1}, stored
// additively in F_2 (0 is +1, 1 is -1) and acting on integer-valued sections,
// which is what real line bundles need. GeneralLinearGroup is GL(k, F_p)
// acting on F_p^k.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nhcech/cech.hpp"
#include "nhcech/complex.hpp"
#include "nhcech/diagram.hpp"
#include "nhcech/linalg.hpp"

namespace nhcech {

/// x_u = e . x_v between two unknowns of a section system.
template <class Element>
struct Relation {
  std::size_t u;
  std::size_t v;
  Element e;
};

struct SignGroup {
  using Element = Scalar;
  using Vector = long;

  Element identity() const noexcept { return 0; }
  Element mul(Element a, Element b) const noexcept { return a ^ b; }
  Element inv(Element a) const noexcept { return a; }
  bool valid(Element a) const noexcept { return a <= 1; }
  bool equal(Element a, Element b) const noexcept { return a == b; }
  std::vector<Element> elements() const { return {0, 1}; }

  Vector act(Element a, Vector v) const noexcept { return a ? -v : v; }
  Vector zero() const noexcept { return 0; }
  bool equal_vectors(Vector a, Vector b) const noexcept { return a == b; }

  /// Solutions of the relations over the rationals: one +-1 vector per
  /// balanced connected component of the relation graph.
  std::vector<std::vector<Vector>> solution_basis(std::size_t n,
                                                  const std::vector<Relation<Element>>& rel) const {
    std::vector<std::vector<std::pair<std::size_t, Element>>> adj(n);
    for (const auto& r : rel) {
      adj[r.u].push_back({r.v, r.e});
      adj[r.v].push_back({r.u, r.e});
    }
    std::vector<int> sign(n, 0);
    std::vector<bool> seen(n, false);
    std::vector<std::vector<Vector>> basis;
    for (std::size_t root = 0; root < n; ++root) {
      if (seen[root]) continue;
      std::vector<std::size_t> members{root};
      std::deque<std::size_t> queue{root};
      seen[root] = true;
      sign[root] = 1;
      bool balanced = true;
      while (!queue.empty()) {
        const std::size_t x = queue.front();
        queue.pop_front();
        for (const auto& [y, e] : adj[x]) {
          const int expected = e ? -sign[x] : sign[x];
          if (!seen[y]) {
            seen[y] = true;
            sign[y] = expected;
            members.push_back(y);
            queue.push_back(y);
          } else if (sign[y] != expected) {
            balanced = false;
          }
        }
      }
      if (!balanced) continue;
      std::vector<Vector> v(n, 0);
      for (auto m : members) v[m] = sign[m];
      basis.push_back(std::move(v));
    }
    return basis;
  }
};

struct GeneralLinearGroup {
  using Element = FMatrix;
  using Vector = FVector;

  PrimeField field{2};
  std::size_t rank = 1;

  Element identity() const { return FMatrix::identity(field, rank); }
  Element mul(const Element& a, const Element& b) const { return a * b; }
  Element inv(const Element& a) const {
    const RowEchelon ech = row_reduce(hstack(a, identity()));
    FMatrix out(field, rank, rank);
    for (std::size_t r = 0; r < rank; ++r)
      for (std::size_t c = 0; c < rank; ++c) out.set(r, c, ech.reduced(r, rank + c));
    return out;
  }
  bool valid(const Element& a) const {
    return a.rows() == rank && a.cols() == rank && a.field() == field && nhcech::rank(a) == rank;
  }
  bool equal(const Element& a, const Element& b) const { return a == b; }

  /// Every invertible k x k matrix; p^(k^2) candidates, so desk scale only.
  std::vector<Element> elements() const {
    std::vector<Element> out;
    const std::size_t cells = rank * rank;
    const std::uint32_t p = field.modulus();
    std::vector<Scalar> digits(cells, 0);
    while (true) {
      FMatrix m(field, rank, rank);
      for (std::size_t i = 0; i < cells; ++i) m.set(i / rank, i % rank, digits[i]);
      if (nhcech::rank(m) == rank) out.push_back(std::move(m));
      std::size_t i = 0;
      while (i < cells && ++digits[i] == p) digits[i++] = 0;
      if (i == cells) break;
    }
    return out;
  }

  Vector act(const Element& a, const Vector& v) const { return a.apply(v); }
  Vector zero() const { return Vector(rank, 0); }
  bool equal_vectors(const Vector& a, const Vector& b) const { return a == b; }

  std::vector<std::vector<Vector>> solution_basis(std::size_t n,
                                                  const std::vector<Relation<Element>>& rel) const {
    FMatrix system(field, rel.size() * rank, n * rank);
    for (std::size_t i = 0; i < rel.size(); ++i) {
      const auto& r = rel[i];
      FMatrix block_u = identity();
      FMatrix block_v = r.e.scaled(field.neg(1));
      if (r.u == r.v) {
        system.set_block(i * rank, r.u * rank, block_u + block_v);
      } else {
        system.set_block(i * rank, r.u * rank, block_u);
        system.set_block(i * rank, r.v * rank, block_v);
      }
    }
    const FMatrix kernel = kernel_basis(system);
    std::vector<std::vector<Vector>> basis;
    for (std::size_t c = 0; c < kernel.cols(); ++c) {
      const FVector col = kernel.column(c);
      std::vector<Vector> v(n);
      for (std::size_t node = 0; node < n; ++node)
        v[node] = Vector(col.begin() + static_cast<std::ptrdiff_t>(node * rank),
                         col.begin() + static_cast<std::ptrdiff_t>((node + 1) * rank));
      basis.push_back(std::move(v));
    }
    return basis;
  }
};

using EdgeKey = std::pair<Label, Label>;  // first < second

template <class G>
struct ConstantCocycle {
  G group;
  SimplicialComplex base;
  std::map<EdgeKey, typename G::Element> values;  // missing edges carry the identity

  /// g_ab for any ordered pair of vertices spanning an edge (or a == b).
  typename G::Element value(const Label& a, const Label& b) const {
    if (a == b) return group.identity();
    if (a < b) {
      auto it = values.find({a, b});
      return it == values.end() ? group.identity() : it->second;
    }
    return group.inv(value(b, a));
  }

  void set(const Label& a, const Label& b, typename G::Element e) {
    if (a < b) {
      values[{a, b}] = std::move(e);
    } else {
      values[{b, a}] = group.inv(e);
    }
  }
};

template <class G>
ConstantCocycle<G> trivial_cocycle(G group, SimplicialComplex base) {
  return {std::move(group), std::move(base), {}};
}

struct CocycleVerdict {
  std::vector<std::string> violations;
  bool valid() const noexcept { return violations.empty(); }
};

template <class G>
CocycleVerdict validate_cocycle(const ConstantCocycle<G>& g) {
  CocycleVerdict v;
  for (const auto& [edge, e] : g.values) {
    const Simplex s{edge.first, edge.second};
    if (!(edge.first < edge.second) || !g.base.contains(s)) {
      v.violations.push_back("value on " + s.to_string() + " which is not an edge of the base");
    } else if (!g.group.valid(e)) {
      v.violations.push_back("value on " + s.to_string() + " is not invertible");
    }
  }
  if (!v.valid()) return v;
  for (const auto& t : g.base.simplices_of_dimension(2)) {
    const auto prod = g.group.mul(g.group.mul(g.value(t[0], t[1]), g.value(t[1], t[2])), g.value(t[2], t[0]));
    if (!g.group.equal(prod, g.group.identity())) {
      v.violations.push_back("cocycle identity fails on " + t.to_string());
    }
  }
  return v;
}

/// The gauge transform h_ab = k_a^-1 g_ab k_b; vertices absent from k use the identity.
template <class G>
ConstantCocycle<G> gauge_transform(const ConstantCocycle<G>& g,
                                   const std::map<Label, typename G::Element>& k) {
  auto at = [&](const Label& l) {
    auto it = k.find(l);
    return it == k.end() ? g.group.identity() : it->second;
  };
  ConstantCocycle<G> h{g.group, g.base, {}};
  for (const auto& e : g.base.simplices_of_dimension(1)) {
    h.values[{e[0], e[1]}] = g.group.mul(g.group.mul(g.group.inv(at(e[0])), g.value(e[0], e[1])), at(e[1]));
  }
  return h;
}

/// The class of a sign cocycle in H^1(base; F_2), in representative coordinates.
inline FVector cocycle_class(const ConstantCocycle<SignGroup>& g) {
  const PrimeField f2(2);
  const CochainSpace c1(g.base, 1);
  FVector cochain(c1.dimension(), 0);
  for (std::size_t i = 0; i < c1.dimension(); ++i) {
    cochain[i] = g.value(c1.basis()[i][0], c1.basis()[i][1]);
  }
  return cohomology(g.base, 1, f2).coordinates(cochain);
}

inline FVector cocycle_class(const ConstantCocycle<GeneralLinearGroup>& g) {
  if (g.group.rank > 1) throw Error(ErrorCode::NonAbelianRank, "classes are only computed for rank 1");
  throw Error(ErrorCode::WrongField, "rank-1 classes are computed for the sign group only");
}

/// One representative per element of H^1(N; F_2), indexed by the binary
/// expansion of the position over the representative basis.
inline std::vector<ConstantCocycle<SignGroup>> enumerate_line_bundles(const GluedDiagram& d) {
  if (d.field().modulus() != 2) throw Error(ErrorCode::WrongField, "line bundles are classified over F_2");
  const SimplicialComplex& n = d.union_nerve();
  const Cohomology h1 = cohomology(n, 1, d.field());
  if (h1.dimension >= 20) throw Error(ErrorCode::DimensionMismatch, "too many classes to enumerate");
  const CochainSpace c1(n, 1);
  std::vector<ConstantCocycle<SignGroup>> out;
  for (std::uint32_t code = 0; code < (1U << h1.dimension); ++code) {
    FVector coeffs(h1.dimension, 0);
    for (std::size_t b = 0; b < h1.dimension; ++b) coeffs[b] = (code >> b) & 1U;
    const FVector cochain = h1.representatives.apply(coeffs);
    ConstantCocycle<SignGroup> g{SignGroup{}, n, {}};
    for (std::size_t i = 0; i < cochain.size(); ++i)
      if (cochain[i]) g.values[{c1.basis()[i][0], c1.basis()[i][1]}] = 1;
    out.push_back(std::move(g));
  }
  return out;
}

/// A gauge k with h = k . g, if one exists, by propagation along a spanning
/// forest from every choice of value at each component root.
template <class G>
std::optional<std::map<Label, typename G::Element>> find_gauge(const ConstantCocycle<G>& g,
                                                               const ConstantCocycle<G>& h) {
  if (!(g.base == h.base)) return std::nullopt;
  const G& grp = g.group;
  const auto candidates = grp.elements();
  std::map<Label, std::vector<Label>> adj;
  for (const auto& e : g.base.simplices_of_dimension(1)) {
    adj[e[0]].push_back(e[1]);
    adj[e[1]].push_back(e[0]);
  }
  std::map<Label, typename G::Element> gauge;
  for (const auto& comp : components(g.base)) {
    bool found = false;
    for (const auto& start : candidates) {
      std::map<Label, typename G::Element> local{{comp.front(), start}};
      std::deque<Label> queue{comp.front()};
      bool ok = true;
      while (!queue.empty() && ok) {
        const Label a = queue.front();
        queue.pop_front();
        for (const auto& b : adj[a]) {
          // h_ab = k_a^-1 g_ab k_b  =>  k_b = g_ab^-1 k_a h_ab
          auto kb = grp.mul(grp.mul(grp.inv(g.value(a, b)), local.at(a)), h.value(a, b));
          auto it = local.find(b);
          if (it == local.end()) {
            local.emplace(b, std::move(kb));
            queue.push_back(b);
          } else if (!grp.equal(it->second, kb)) {
            ok = false;
            break;
          }
        }
      }
      if (ok) {
        gauge.insert(local.begin(), local.end());
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }
  return gauge;
}

template <class G>
bool equivalent(const ConstantCocycle<G>& g, const ConstantCocycle<G>& h) {
  return find_gauge(g, h).has_value();
}

/// Per-piece cocycles on the global nerves N_i plus identifications k^ij on
/// the vertices of N_ij. Missing identifications are the identity; (j, i)
/// defaults to the inverse of (i, j) when only one is given.
template <class G>
struct PieceBundleData {
  G group;
  std::vector<ConstantCocycle<G>> pieces;
  std::map<std::pair<std::size_t, std::size_t>, std::map<Label, typename G::Element>> identifications;

  typename G::Element identification(std::size_t i, std::size_t j, const Label& a) const {
    if (i == j) return group.identity();
    if (auto it = identifications.find({i, j}); it != identifications.end()) {
      auto v = it->second.find(a);
      return v == it->second.end() ? group.identity() : v->second;
    }
    if (auto it = identifications.find({j, i}); it != identifications.end()) {
      auto v = it->second.find(a);
      return v == it->second.end() ? group.identity() : group.inv(v->second);
    }
    return group.identity();
  }
};

/// Every broken invariant of the piece data, each naming its witness.
template <class G>
std::vector<std::string> bundle_data_violations(const GluedDiagram& d, const PieceBundleData<G>& data) {
  std::vector<std::string> out;
  const G& grp = data.group;
  const std::size_t n = d.piece_count();
  if (data.pieces.size() != n) {
    out.push_back("expected " + std::to_string(n) + " piece cocycles");
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(data.pieces[i].base == d.piece_nerve(i))) out.push_back("piece " + d.piece_ids()[i] + ": base differs from N_i");
    for (const auto& msg : validate_cocycle(data.pieces[i]).violations) out.push_back("piece " + d.piece_ids()[i] + ": " + msg);
  }
  for (const auto& [key, map] : data.identifications) {
    const auto [i, j] = key;
    if (i >= n || j >= n || i == j) {
      out.push_back("identification for an invalid piece pair");
      continue;
    }
    const SimplicialComplex& nij = d.intersection((1U << i) | (1U << j));
    for (const auto& [a, e] : map) {
      if (!nij.has_vertex(a)) out.push_back("identification at " + a.name() + " outside N_ij");
      else if (!grp.valid(e)) out.push_back("identification at " + a.name() + " is not invertible");
    }
    if (auto rev = data.identifications.find({j, i}); rev != data.identifications.end()) {
      for (const auto& a : nij.vertex_set()) {
        auto ij = data.identification(i, j, a);
        auto ji = rev->second.contains(a) ? rev->second.at(a) : grp.identity();
        if (!grp.equal(grp.mul(ji, ij), grp.identity())) {
          out.push_back("identifications " + d.piece_ids()[i] + "->" + d.piece_ids()[j] +
                        " and back are not inverse at vertex " + a.name());
        }
      }
    }
  }
  if (!out.empty()) return out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const SimplicialComplex& nij = d.intersection((1U << i) | (1U << j));
      for (const auto& e : nij.simplices_of_dimension(1)) {
        const auto& a = e[0];
        const auto& b = e[1];
        auto expected = grp.mul(grp.mul(data.identification(i, j, a), data.pieces[i].value(a, b)),
                                grp.inv(data.identification(i, j, b)));
        if (!grp.equal(expected, data.pieces[j].value(a, b))) {
          out.push_back("pieces " + d.piece_ids()[i] + " and " + d.piece_ids()[j] +
                        " are not compatible on edge " + e.to_string());
        }
      }
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const SimplicialComplex& nijk = d.intersection((1U << i) | (1U << j) | (1U << k));
        for (const auto& a : nijk.vertex_set()) {
          auto composite = grp.mul(data.identification(j, k, a), data.identification(i, j, a));
          if (!grp.equal(composite, data.identification(i, k, a))) {
            out.push_back("triple condition fails for pieces " + d.piece_ids()[i] + ", " + d.piece_ids()[j] +
                          ", " + d.piece_ids()[k] + " at vertex " + a.name());
          }
        }
      }
    }
  }
  return out;
}

template <class G>
struct ColimitBundle {
  std::optional<ConstantCocycle<G>> cocycle;
  std::string obstruction;  // set when no constant cocycle on this cover exists
  std::vector<std::map<Label, typename G::Element>> gauges;  // c^i per piece

  bool obstructed() const noexcept { return !cocycle.has_value(); }
};

/// Glues piece cocycles into one cocycle on N. Each vertex is normalized on
/// the first piece containing it (c = 1) and carried to the other pieces by
/// the identifications; the restriction of the result to N_i is g^i gauged by c^i.
template <class G>
ColimitBundle<G> colimit_bundle(const GluedDiagram& d, const PieceBundleData<G>& data) {
  const auto violations = bundle_data_violations(d, data);
  if (!violations.empty()) throw Error(ErrorCode::IncompatibleData, violations.front());
  const G& grp = data.group;
  const std::size_t n = d.piece_count();
  ColimitBundle<G> result;
  result.gauges.resize(n);
  for (const auto& a : d.union_nerve().vertex_set()) {
    std::optional<std::size_t> first;
    for (std::size_t i = 0; i < n; ++i) {
      if (!d.piece_nerve(i).has_vertex(a)) continue;
      if (!first) first = i;
      result.gauges[i].emplace(a, data.identification(*first, i, a));
    }
  }
  ConstantCocycle<G> g{grp, d.union_nerve(), {}};
  for (const auto& e : d.union_nerve().simplices_of_dimension(1)) {
    std::optional<typename G::Element> value;
    for (std::size_t i = 0; i < n; ++i) {
      if (!d.piece_nerve(i).contains(e)) continue;
      const auto& c = result.gauges[i];
      auto v = grp.mul(grp.mul(grp.inv(c.at(e[0])), data.pieces[i].value(e[0], e[1])), c.at(e[1]));
      if (!value) {
        value = std::move(v);
      } else if (!grp.equal(*value, v)) {
        result.obstruction = "gauged piece values disagree on edge " + e.to_string();
        return result;
      }
    }
    g.values[{e[0], e[1]}] = std::move(*value);
  }
  result.cocycle = std::move(g);
  return result;
}

/// Per-piece restrictions of a cocycle on N with identity identifications.
template <class G>
PieceBundleData<G> restrict_bundle(const ConstantCocycle<G>& g, const GluedDiagram& d) {
  PieceBundleData<G> data{g.group, {}, {}};
  for (std::size_t i = 0; i < d.piece_count(); ++i) {
    ConstantCocycle<G> piece{g.group, d.piece_nerve(i), {}};
    for (const auto& e : d.piece_nerve(i).simplices_of_dimension(1)) piece.values[{e[0], e[1]}] = g.value(e[0], e[1]);
    data.pieces.push_back(std::move(piece));
  }
  return data;
}

template <class G>
struct TwistedSection {
  std::map<Label, typename G::Vector> values;
};

template <class G>
bool is_parallel(const ConstantCocycle<G>& g, const TwistedSection<G>& s) {
  for (const auto& v : g.base.vertex_set())
    if (!s.values.contains(v)) return false;
  for (const auto& e : g.base.simplices_of_dimension(1)) {
    if (!g.group.equal_vectors(s.values.at(e[0]), g.group.act(g.value(e[0], e[1]), s.values.at(e[1])))) return false;
  }
  return true;
}

/// Basis of the parallel sections s_a = g_ab s_b.
template <class G>
std::vector<TwistedSection<G>> parallel_sections(const ConstantCocycle<G>& g) {
  const std::vector<Label> vertices(g.base.vertex_set().begin(), g.base.vertex_set().end());
  std::map<Label, std::size_t> index;
  for (std::size_t i = 0; i < vertices.size(); ++i) index[vertices[i]] = i;
  std::vector<Relation<typename G::Element>> rel;
  for (const auto& e : g.base.simplices_of_dimension(1)) rel.push_back({index[e[0]], index[e[1]], g.value(e[0], e[1])});
  std::vector<TwistedSection<G>> out;
  for (const auto& sol : g.group.solution_basis(vertices.size(), rel)) {
    TwistedSection<G> s;
    for (std::size_t i = 0; i < vertices.size(); ++i) s.values.emplace(vertices[i], sol[i]);
    out.push_back(std::move(s));
  }
  return out;
}

/// Dimension of the compatible tuples (s^1..s^n) of per-piece parallel
/// sections with s^j = k^ij s^i on every N_ij.
template <class G>
std::size_t section_fibred_dimension(const GluedDiagram& d, const PieceBundleData<G>& data) {
  std::map<std::pair<std::size_t, Label>, std::size_t> index;
  for (std::size_t i = 0; i < d.piece_count(); ++i)
    for (const auto& v : d.piece_nerve(i).vertex_set()) index.emplace(std::make_pair(i, v), index.size());
  std::vector<Relation<typename G::Element>> rel;
  for (std::size_t i = 0; i < d.piece_count(); ++i) {
    for (const auto& e : d.piece_nerve(i).simplices_of_dimension(1)) {
      rel.push_back({index.at({i, e[0]}), index.at({i, e[1]}), data.pieces[i].value(e[0], e[1])});
    }
    for (std::size_t j = i + 1; j < d.piece_count(); ++j) {
      for (const auto& a : d.intersection((1U << i) | (1U << j)).vertex_set()) {
        rel.push_back({index.at({j, a}), index.at({i, a}), data.identification(i, j, a)});
      }
    }
  }
  return data.group.solution_basis(index.size(), rel).size();
}

template <class G>
struct GlueResult {
  std::optional<TwistedSection<G>> section;
  std::string incompatible_at;  // first vertex where s^j != k^ij s^i
};

/// Glues compatible per-piece parallel sections to a section of the colimit cocycle.
template <class G>
GlueResult<G> glue_sections(const GluedDiagram& d, const PieceBundleData<G>& data,
                            const std::vector<TwistedSection<G>>& sections) {
  const G& grp = data.group;
  const std::size_t n = d.piece_count();
  if (sections.size() != n) throw Error(ErrorCode::IncompatibleData, "need one section per piece");
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_parallel(data.pieces[i], sections[i])) {
      throw Error(ErrorCode::IncompatibleData, "section on piece " + d.piece_ids()[i] + " is not parallel");
    }
  }
  GlueResult<G> result;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      for (const auto& a : d.intersection((1U << i) | (1U << j)).vertex_set()) {
        const auto expected = grp.act(data.identification(i, j, a), sections[i].values.at(a));
        if (!grp.equal_vectors(expected, sections[j].values.at(a))) {
          result.incompatible_at = a.name() + " (pieces " + d.piece_ids()[i] + ", " + d.piece_ids()[j] + ")";
          return result;
        }
      }
    }
  }
  const ColimitBundle<G> colimit = colimit_bundle(d, data);
  TwistedSection<G> glued;
  for (const auto& a : d.union_nerve().vertex_set()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!d.piece_nerve(i).has_vertex(a)) continue;
      glued.values.emplace(a, grp.act(grp.inv(colimit.gauges[i].at(a)), sections[i].values.at(a)));
      break;
    }
  }
  result.section = std::move(glued);
  return result;
}

}  // namespace nhcech
