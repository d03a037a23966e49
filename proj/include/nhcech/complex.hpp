#pragma once

// Finite abstract simplicial complexes over text-named vertex labels.
//
// Labels are totally ordered by their canonical text (byte-lexicographic),
// simplices store strictly increasing vertex sequences, and a complex is an
// explicit, face-closed set of simplices.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nhcech/errors.hpp"

namespace nhcech {

class Label {
 public:
  Label() = default;
  Label(std::string name) : name_(std::move(name)) {}  // NOLINT(google-explicit-constructor)
  Label(const char* name) : name_(name) {}             // NOLINT(google-explicit-constructor)

  const std::string& name() const noexcept { return name_; }

  friend auto operator<=>(const Label&, const Label&) = default;
  friend bool operator==(const Label&, const Label&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Label& l) { return os << l.name_; }

 private:
  std::string name_;
};

using VertexMap = std::map<Label, Label>;

class Simplex {
 public:
  Simplex() = default;

  /// Requires a nonempty, strictly increasing vertex sequence.
  explicit Simplex(std::vector<Label> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.empty()) throw Error(ErrorCode::MalformedSimplex, "empty vertex sequence");
    for (std::size_t i = 1; i < vertices_.size(); ++i) {
      if (!(vertices_[i - 1] < vertices_[i])) {
        throw Error(ErrorCode::MalformedSimplex,
                    "vertices not strictly increasing at '" + vertices_[i].name() + "'");
      }
    }
  }
  Simplex(std::initializer_list<Label> vertices) : Simplex(std::vector<Label>(vertices)) {}

  /// Sorts the labels first; duplicates are still rejected.
  static Simplex from_unordered(std::vector<Label> vertices) {
    std::sort(vertices.begin(), vertices.end());
    return Simplex(std::move(vertices));
  }

  int dimension() const noexcept { return static_cast<int>(vertices_.size()) - 1; }
  std::size_t size() const noexcept { return vertices_.size(); }
  const std::vector<Label>& vertices() const noexcept { return vertices_; }
  const Label& operator[](std::size_t i) const { return vertices_[i]; }

  /// The face with the i-th vertex removed; requires dimension >= 1.
  Simplex face_without(std::size_t i) const {
    std::vector<Label> v;
    v.reserve(vertices_.size() - 1);
    for (std::size_t k = 0; k < vertices_.size(); ++k)
      if (k != i) v.push_back(vertices_[k]);
    return Simplex(std::move(v));
  }

  /// All nonempty faces, the simplex itself included.
  std::vector<Simplex> all_faces() const {
    std::vector<Simplex> out;
    const std::size_t n = vertices_.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      std::vector<Label> v;
      for (std::size_t k = 0; k < n; ++k)
        if (mask & (std::size_t{1} << k)) v.push_back(vertices_[k]);
      out.emplace_back(std::move(v));
    }
    return out;
  }

  bool contains_vertex(const Label& l) const {
    return std::binary_search(vertices_.begin(), vertices_.end(), l);
  }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (i) s += ",";
      s += vertices_[i].name();
    }
    return s + "}";
  }

  /// Ordered by dimension first, then lexicographically by vertex sequence.
  friend std::strong_ordering operator<=>(const Simplex& a, const Simplex& b) {
    if (auto c = a.vertices_.size() <=> b.vertices_.size(); c != 0) return c;
    return std::lexicographical_compare_three_way(a.vertices_.begin(), a.vertices_.end(),
                                                  b.vertices_.begin(), b.vertices_.end());
  }
  friend bool operator==(const Simplex&, const Simplex&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Simplex& s) { return os << s.to_string(); }

 private:
  std::vector<Label> vertices_;
};

class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  /// Adds the simplex together with all of its faces.
  void add_closed(const Simplex& s) {
    if (simplices_.contains(s)) return;
    for (auto& f : s.all_faces()) simplices_.insert(std::move(f));
    for (const auto& v : s.vertices()) vertices_.insert(v);
  }

  bool contains(const Simplex& s) const { return simplices_.contains(s); }
  bool has_vertex(const Label& l) const { return vertices_.contains(l); }
  bool empty() const noexcept { return simplices_.empty(); }
  std::size_t size() const noexcept { return simplices_.size(); }

  const std::set<Simplex>& simplices() const noexcept { return simplices_; }
  const std::set<Label>& vertex_set() const noexcept { return vertices_; }

  /// Top dimension, or -1 for the empty complex.
  int dimension() const {
    return simplices_.empty() ? -1 : simplices_.rbegin()->dimension();
  }

  /// q-simplices in lexicographic order.
  std::vector<Simplex> simplices_of_dimension(int q) const {
    std::vector<Simplex> out;
    for (const auto& s : simplices_)
      if (s.dimension() == q) out.push_back(s);
    return out;
  }

  std::size_t count(int q) const {
    return static_cast<std::size_t>(std::count_if(
        simplices_.begin(), simplices_.end(), [q](const Simplex& s) { return s.dimension() == q; }));
  }

  bool is_subcomplex_of(const SimplicialComplex& other) const {
    return std::includes(other.simplices_.begin(), other.simplices_.end(), simplices_.begin(),
                         simplices_.end());
  }

  /// Simplices whose vertices all lie in `labels`.
  SimplicialComplex induced(const std::set<Label>& labels) const {
    SimplicialComplex out;
    for (const auto& s : simplices_) {
      if (std::all_of(s.vertices().begin(), s.vertices().end(),
                      [&](const Label& l) { return labels.contains(l); })) {
        out.insert_unchecked(s);
      }
    }
    return out;
  }

  friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) {
    return a.simplices_ == b.simplices_;
  }

 private:
  // Callers guarantee closure is preserved.
  void insert_unchecked(const Simplex& s) {
    simplices_.insert(s);
    for (const auto& v : s.vertices()) vertices_.insert(v);
  }

  std::set<Simplex> simplices_;
  std::set<Label> vertices_;

  friend SimplicialComplex intersect(const SimplicialComplex&, const SimplicialComplex&);
  friend SimplicialComplex union_complexes(std::span<const SimplicialComplex>);
};

/// Downward closure of the generators.
inline SimplicialComplex build_complex(std::span<const Simplex> generators) {
  SimplicialComplex k;
  for (const auto& s : generators) k.add_closed(s);
  return k;
}

inline SimplicialComplex build_complex(std::initializer_list<Simplex> generators) {
  return build_complex(std::span<const Simplex>(generators.begin(), generators.size()));
}

inline SimplicialComplex intersect(const SimplicialComplex& a, const SimplicialComplex& b) {
  SimplicialComplex out;
  std::set_intersection(a.simplices_.begin(), a.simplices_.end(), b.simplices_.begin(),
                        b.simplices_.end(), std::inserter(out.simplices_, out.simplices_.end()));
  for (const auto& s : out.simplices_)
    if (s.dimension() == 0) out.vertices_.insert(s[0]);
  return out;
}

inline SimplicialComplex union_complexes(std::span<const SimplicialComplex> ks) {
  SimplicialComplex out;
  for (const auto& k : ks) {
    out.simplices_.insert(k.simplices_.begin(), k.simplices_.end());
    out.vertices_.insert(k.vertices_.begin(), k.vertices_.end());
  }
  return out;
}

inline SimplicialComplex union_complexes(std::initializer_list<SimplicialComplex> ks) {
  return union_complexes(std::span<const SimplicialComplex>(ks.begin(), ks.size()));
}

/// Edge-connected components, each sorted, ordered by their smallest label.
inline std::vector<std::vector<Label>> components(const SimplicialComplex& k) {
  std::map<Label, Label> parent;
  for (const auto& v : k.vertex_set()) parent[v] = v;
  auto find = [&](Label x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& s : k.simplices()) {
    if (s.dimension() != 1) continue;
    Label a = find(s[0]);
    Label b = find(s[1]);
    if (a == b) continue;
    if (b < a) std::swap(a, b);
    parent[b] = a;
  }
  std::map<Label, std::vector<Label>> groups;
  for (const auto& v : k.vertex_set()) groups[find(v)].push_back(v);
  std::vector<std::vector<Label>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

/// Image of each vertex of `s` under `g`, in order, repeats kept.
/// Throws NotSimplicial when a vertex is unmapped.
inline std::vector<Label> image_vertices(const Simplex& s, const VertexMap& g) {
  std::vector<Label> img;
  img.reserve(s.size());
  for (const auto& v : s.vertices()) {
    auto it = g.find(v);
    if (it == g.end()) throw Error(ErrorCode::NotSimplicial, "vertex '" + v.name() + "' unmapped");
    img.push_back(it->second);
  }
  return img;
}

/// True when every simplex of `source` maps onto a simplex of `target`.
inline bool is_simplicial(const SimplicialComplex& source, const SimplicialComplex& target,
                          const VertexMap& g, std::string* witness = nullptr) {
  for (const auto& s : source.simplices()) {
    auto img = image_vertices(s, g);
    std::sort(img.begin(), img.end());
    img.erase(std::unique(img.begin(), img.end()), img.end());
    if (!target.contains(Simplex(std::move(img)))) {
      if (witness) *witness = s.to_string();
      return false;
    }
  }
  return true;
}

}  // namespace nhcech
