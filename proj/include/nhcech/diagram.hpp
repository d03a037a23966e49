#pragma once

// Adjunction systems of nerves and their glued (colimit) diagrams.
//
// A system consists of local pieces, each a nerve on its own label set, plus
// gluing bijections between label subsets. Gluing identifies labels, so the
// colimit is modelled by equivalence classes of (piece, label) pairs, and every
// nerve N_T for a set T of pieces is the intersection of the relabelled N_i.
//
// Modelling obligation for callers: per-piece covers should be good covers,
// and a cover element should either lie inside a gluing region (shared label)
// or not be shared at all. Boundary conditions on gluing regions have no
// nerve-level content and are not checked.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nhcech/complex.hpp"
#include "nhcech/linalg.hpp"

namespace nhcech {

struct LocalPiece {
  std::string id;
  std::set<Label> labels;
  SimplicialComplex nerve;

  static LocalPiece from_nerve(std::string id, SimplicialComplex nerve) {
    LocalPiece p{std::move(id), nerve.vertex_set(), std::move(nerve)};
    return p;
  }
};

/// Label map sigma_ij from a subset of piece i's labels into piece j's labels.
struct GluingBijection {
  std::string source;
  std::string target;
  VertexMap map;
};

struct AdjunctionSystem {
  std::vector<LocalPiece> pieces;
  std::vector<GluingBijection> gluings;
  PrimeField field{2};

  std::optional<std::size_t> index_of(const std::string& id) const {
    for (std::size_t i = 0; i < pieces.size(); ++i)
      if (pieces[i].id == id) return i;
    return std::nullopt;
  }
};

struct Violation {
  std::string condition;  // "structure", "A1", "A2", "A3" or "simplicial"
  std::string message;
  std::vector<std::string> witness;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool valid() const noexcept { return violations.empty(); }
  bool has(const std::string& condition) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.condition == condition; });
  }
};

using GluingTable = std::map<std::pair<std::size_t, std::size_t>, VertexMap>;

namespace detail {

inline std::string join_ids(const std::vector<std::string>& ids, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += sep;
    out += ids[i];
  }
  return out;
}

}  // namespace detail

/// Every sigma_ij including the implied ones: identities for i == j and
/// inverses where only one direction was supplied. Assumes well-formed input.
inline GluingTable effective_gluings(const AdjunctionSystem& s) {
  GluingTable table;
  for (const auto& g : s.gluings) {
    auto i = s.index_of(g.source);
    auto j = s.index_of(g.target);
    if (!i || !j) continue;
    table.emplace(std::make_pair(*i, *j), g.map);
  }
  for (const auto& g : s.gluings) {
    auto i = s.index_of(g.source);
    auto j = s.index_of(g.target);
    if (!i || !j) continue;
    if (!table.contains({*j, *i})) {
      VertexMap inverse;
      for (const auto& [x, y] : g.map) inverse.emplace(y, x);
      table.emplace(std::make_pair(*j, *i), std::move(inverse));
    }
  }
  for (std::size_t i = 0; i < s.pieces.size(); ++i) {
    if (table.contains({i, i})) continue;
    VertexMap id;
    for (const auto& l : s.pieces[i].labels) id.emplace(l, l);
    table.emplace(std::make_pair(i, i), std::move(id));
  }
  return table;
}

/// Checks the adjunction-system conditions: A1 (sigma_ii is the identity),
/// A2 (sigma_ji inverts sigma_ij), A3 (sigma_ik = sigma_jk o sigma_ij on shared
/// domains), and that every sigma_ij is a simplicial isomorphism between the
/// induced subcomplexes on its domain and image.
inline ValidationReport validate_system(const AdjunctionSystem& s) {
  ValidationReport report;
  auto add = [&](std::string cond, std::string msg, std::vector<std::string> witness) {
    report.violations.push_back({std::move(cond), std::move(msg), std::move(witness)});
  };

  std::set<std::string> ids;
  for (const auto& p : s.pieces) {
    if (p.id.empty()) add("structure", "piece with empty id", {});
    if (!ids.insert(p.id).second) add("structure", "duplicate piece id", {p.id});
    for (const auto& l : p.labels) {
      if (l.name().empty() || l.name().find('@') != std::string::npos) {
        add("structure", "label names must be nonempty and must not contain '@'", {p.id, l.name()});
      }
    }
    for (const auto& v : p.nerve.vertex_set()) {
      if (!p.labels.contains(v)) add("structure", "nerve vertex outside the piece's labels", {p.id, v.name()});
    }
  }
  if (!report.valid()) return report;

  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<bool> usable(s.gluings.size(), true);
  for (std::size_t g = 0; g < s.gluings.size(); ++g) {
    const auto& gl = s.gluings[g];
    auto i = s.index_of(gl.source);
    auto j = s.index_of(gl.target);
    if (!i || !j) {
      add("structure", "gluing names an unknown piece", {gl.source, gl.target});
      usable[g] = false;
      continue;
    }
    if (!seen.insert({*i, *j}).second) {
      add("structure", "duplicate gluing for an ordered piece pair", {gl.source, gl.target});
      usable[g] = false;
      continue;
    }
    std::set<Label> image;
    for (const auto& [x, y] : gl.map) {
      if (!s.pieces[*i].labels.contains(x)) {
        add("structure", "gluing domain label not in source piece", {gl.source, gl.target, x.name()});
        usable[g] = false;
      }
      if (!s.pieces[*j].labels.contains(y)) {
        add("structure", "gluing image label not in target piece", {gl.source, gl.target, y.name()});
        usable[g] = false;
      }
      if (!image.insert(y).second) {
        add("structure", "gluing map is not injective", {gl.source, gl.target, y.name()});
        usable[g] = false;
      }
    }
  }
  if (!report.valid()) return report;

  // A1
  for (const auto& gl : s.gluings) {
    if (gl.source != gl.target) continue;
    const auto& piece = s.pieces[*s.index_of(gl.source)];
    for (const auto& l : piece.labels) {
      auto it = gl.map.find(l);
      if (it == gl.map.end() || it->second != l) {
        add("A1", "sigma_ii is not the identity on all labels", {gl.source, l.name()});
        break;
      }
    }
  }

  // A2
  std::map<std::pair<std::string, std::string>, const GluingBijection*> by_pair;
  for (const auto& gl : s.gluings) by_pair[{gl.source, gl.target}] = &gl;
  for (const auto& gl : s.gluings) {
    if (gl.source >= gl.target) continue;
    auto rev = by_pair.find({gl.target, gl.source});
    if (rev == by_pair.end()) continue;
    const VertexMap& back = rev->second->map;
    for (const auto& [x, y] : gl.map) {
      auto it = back.find(y);
      if (it == back.end() || it->second != x) {
        add("A2", "sigma_ji is not the inverse of sigma_ij", {gl.source, gl.target, x.name()});
      }
    }
    for (const auto& [y, x] : back) {
      auto it = gl.map.find(x);
      if (it == gl.map.end() || it->second != y) {
        add("A2", "domain of sigma_ji differs from the image of sigma_ij", {gl.target, gl.source, y.name()});
      }
    }
  }
  if (!report.valid()) return report;

  const GluingTable table = effective_gluings(s);
  const std::size_t n = s.pieces.size();

  // A3
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        const auto ij = table.find({i, j});
        const auto ik = table.find({i, k});
        if (ij == table.end() || ik == table.end()) continue;
        const auto jk = table.find({j, k});
        for (const auto& [x, y] : ij->second) {
          auto xk = ik->second.find(x);
          if (xk == ik->second.end()) continue;
          bool ok = false;
          if (jk != table.end()) {
            auto yk = jk->second.find(y);
            ok = yk != jk->second.end() && yk->second == xk->second;
          }
          if (!ok) {
            add("A3", "sigma_ik differs from sigma_jk o sigma_ij",
                {s.pieces[i].id, s.pieces[j].id, s.pieces[k].id, x.name()});
          }
        }
      }
    }
  }

  // simplicial isomorphism of induced subcomplexes
  for (const auto& [key, map] : table) {
    const auto [i, j] = key;
    if (i == j) continue;
    std::set<Label> domain;
    for (const auto& [x, y] : map) domain.insert(x);
    const SimplicialComplex sub = s.pieces[i].nerve.induced(domain);
    for (const auto& simplex : sub.simplices()) {
      std::vector<Label> img;
      for (const auto& v : simplex.vertices()) img.push_back(map.at(v));
      const Simplex image = Simplex::from_unordered(std::move(img));
      if (!s.pieces[j].nerve.contains(image)) {
        add("simplicial", "gluing does not carry a simplex onto a simplex",
            {s.pieces[i].id, s.pieces[j].id, simplex.to_string()});
      }
    }
  }
  return report;
}

/// The colimit of a validated system at the level of nerves.
class GluedDiagram {
 public:
  static constexpr std::size_t kMaxPieces = 12;

  GluedDiagram(AdjunctionSystem system, std::vector<VertexMap> local_to_global,
               std::vector<SimplicialComplex> nerves)
      : system_(std::move(system)),
        local_to_global_(std::move(local_to_global)),
        nerves_(std::move(nerves)) {
    const std::size_t n = nerves_.size();
    if (n == 0 || n > kMaxPieces) {
      throw Error(ErrorCode::InvalidSystem,
                  "piece count must be between 1 and " + std::to_string(kMaxPieces));
    }
    for (const auto& p : system_.pieces) ids_.push_back(p.id);
    intersections_.resize(std::size_t{1} << n);
    for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
      const std::uint32_t low = mask & (~mask + 1);
      const std::uint32_t rest = mask ^ low;
      const std::size_t idx = static_cast<std::size_t>(__builtin_ctz(low));
      intersections_[mask] = rest == 0 ? nerves_[idx] : intersect(intersections_[rest], nerves_[idx]);
    }
    union_ = union_complexes(nerves_);
  }

  std::size_t piece_count() const noexcept { return nerves_.size(); }
  const std::vector<std::string>& piece_ids() const noexcept { return ids_; }
  const AdjunctionSystem& system() const noexcept { return system_; }
  PrimeField field() const noexcept { return system_.field; }

  const SimplicialComplex& piece_nerve(std::size_t i) const { return nerves_.at(i); }
  const std::vector<SimplicialComplex>& piece_nerves() const noexcept { return nerves_; }
  const SimplicialComplex& union_nerve() const noexcept { return union_; }
  const VertexMap& local_to_global(std::size_t i) const { return local_to_global_.at(i); }
  const std::set<Label>& global_labels() const noexcept { return union_.vertex_set(); }

  /// N_T for a nonempty bit set T of piece indices.
  const SimplicialComplex& intersection(std::uint32_t mask) const {
    if (mask == 0) throw Error(ErrorCode::EmptyIndexSet, "empty piece set");
    if (mask >= intersections_.size()) throw Error(ErrorCode::BadIndexSet, "piece index out of range");
    return intersections_[mask];
  }

  /// A copy with a different coefficient field.
  GluedDiagram with_field(PrimeField field) const {
    GluedDiagram out = *this;
    out.system_.field = field;
    return out;
  }

 private:
  AdjunctionSystem system_;
  std::vector<std::string> ids_;
  std::vector<VertexMap> local_to_global_;
  std::vector<SimplicialComplex> nerves_;
  std::vector<SimplicialComplex> intersections_;
  SimplicialComplex union_;
};

inline std::uint32_t index_mask(std::span<const std::size_t> indices, std::size_t n) {
  std::uint32_t mask = 0;
  for (auto i : indices) {
    if (i >= n) throw Error(ErrorCode::BadIndexSet, "piece index " + std::to_string(i) + " out of range");
    if (mask & (1U << i)) throw Error(ErrorCode::BadIndexSet, "repeated piece index");
    mask |= 1U << i;
  }
  return mask;
}

inline std::vector<std::size_t> mask_indices(std::uint32_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; mask >> i; ++i)
    if (mask & (1U << i)) out.push_back(i);
  return out;
}

/// Groups labels into classes [x,i] under the gluing maps, names each class by
/// the local label of its minimal (piece id, label) pair, and relabels every
/// piece nerve into the global names.
inline GluedDiagram canonicalize(const AdjunctionSystem& s) {
  const ValidationReport report = validate_system(s);
  if (!report.valid()) {
    const Violation& v = report.violations.front();
    throw Error(ErrorCode::InvalidSystem,
                v.condition + ": " + v.message + " [" + detail::join_ids(v.witness, ", ") + "]");
  }
  using Node = std::pair<std::size_t, Label>;
  std::map<Node, Node> parent;
  for (std::size_t i = 0; i < s.pieces.size(); ++i)
    for (const auto& l : s.pieces[i].labels) parent[{i, l}] = {i, l};
  auto find = [&](Node x) {
    while (parent.at(x) != x) {
      parent[x] = parent.at(parent.at(x));
      x = parent.at(x);
    }
    return x;
  };
  for (const auto& [key, map] : effective_gluings(s)) {
    for (const auto& [x, y] : map) {
      Node a = find({key.first, x});
      Node b = find({key.second, y});
      if (a != b) parent[b] = a;
    }
  }

  std::map<Node, std::vector<Node>> classes;
  for (const auto& [node, unused] : parent) classes[find(node)].push_back(node);

  // representative (piece id, label) per class
  std::map<Node, std::pair<std::string, Label>> rep;
  std::map<Label, int> uses;
  for (const auto& [root, members] : classes) {
    std::pair<std::string, Label> best{s.pieces[members.front().first].id, members.front().second};
    std::set<std::size_t> pieces_seen;
    for (const auto& [i, l] : members) {
      if (!pieces_seen.insert(i).second) {
        throw Error(ErrorCode::InvalidSystem,
                    "two labels of piece '" + s.pieces[i].id + "' are identified");
      }
      std::pair<std::string, Label> cand{s.pieces[i].id, l};
      if (cand < best) best = cand;
    }
    rep[root] = best;
    ++uses[best.second];
  }

  std::vector<VertexMap> local_to_global(s.pieces.size());
  for (const auto& [root, members] : classes) {
    const auto& [piece_id, label] = rep[root];
    const Label name = uses[label] == 1 ? label : Label(label.name() + "@" + piece_id);
    for (const auto& [i, l] : members) local_to_global[i][l] = name;
  }

  std::vector<SimplicialComplex> nerves;
  for (std::size_t i = 0; i < s.pieces.size(); ++i) {
    SimplicialComplex k;
    for (const auto& simplex : s.pieces[i].nerve.simplices()) {
      std::vector<Label> img;
      for (const auto& v : simplex.vertices()) img.push_back(local_to_global[i].at(v));
      k.add_closed(Simplex::from_unordered(std::move(img)));
    }
    nerves.push_back(std::move(k));
  }
  return GluedDiagram(s, std::move(local_to_global), std::move(nerves));
}

inline const SimplicialComplex& intersection_nerve(const GluedDiagram& d,
                                                   std::span<const std::size_t> pieces) {
  if (pieces.empty()) throw Error(ErrorCode::EmptyIndexSet, "intersection over no pieces");
  return d.intersection(index_mask(pieces, d.piece_count()));
}

inline const SimplicialComplex& intersection_nerve(const GluedDiagram& d,
                                                   std::initializer_list<std::size_t> pieces) {
  return intersection_nerve(d, std::span<const std::size_t>(pieces.begin(), pieces.size()));
}

namespace detail {

/// A diagram whose pieces already carry global labels, glued by identity on
/// shared labels.
inline GluedDiagram diagram_from_global_nerves(std::vector<std::string> ids,
                                               std::vector<SimplicialComplex> nerves,
                                               PrimeField field) {
  AdjunctionSystem s;
  s.field = field;
  for (std::size_t i = 0; i < nerves.size(); ++i) s.pieces.push_back(LocalPiece::from_nerve(ids[i], nerves[i]));
  std::vector<VertexMap> maps(nerves.size());
  for (std::size_t i = 0; i < nerves.size(); ++i)
    for (const auto& l : nerves[i].vertex_set()) maps[i][l] = l;
  for (std::size_t i = 0; i < nerves.size(); ++i) {
    for (std::size_t j = i + 1; j < nerves.size(); ++j) {
      GluingBijection g{ids[i], ids[j], {}};
      for (const auto& l : nerves[i].vertex_set())
        if (nerves[j].has_vertex(l)) g.map.emplace(l, l);
      if (!g.map.empty()) s.gluings.push_back(std::move(g));
    }
  }
  return GluedDiagram(std::move(s), std::move(maps), std::move(nerves));
}

}  // namespace detail

/// Merges the pieces in J into a single piece carrying the union of their
/// nerves (a two-step colimit); the union nerve is unchanged.
inline GluedDiagram collapse(const GluedDiagram& d, std::span<const std::size_t> merge) {
  if (merge.empty()) throw Error(ErrorCode::BadIndexSet, "nothing to collapse");
  const std::uint32_t mask = index_mask(merge, d.piece_count());
  if (merge.size() == d.piece_count()) throw Error(ErrorCode::BadIndexSet, "cannot collapse every piece");
  const std::size_t first = *std::min_element(merge.begin(), merge.end());
  std::vector<std::string> ids;
  std::vector<SimplicialComplex> nerves;
  for (std::size_t i = 0; i < d.piece_count(); ++i) {
    if (!(mask & (1U << i))) {
      ids.push_back(d.piece_ids()[i]);
      nerves.push_back(d.piece_nerve(i));
    } else if (i == first) {
      std::vector<std::string> merged_ids;
      std::vector<SimplicialComplex> merged;
      for (auto j : mask_indices(mask)) {
        merged_ids.push_back(d.piece_ids()[j]);
        merged.push_back(d.piece_nerve(j));
      }
      ids.push_back(detail::join_ids(merged_ids, "+"));
      nerves.push_back(union_complexes(merged));
    }
  }
  return detail::diagram_from_global_nerves(std::move(ids), std::move(nerves), d.field());
}

inline GluedDiagram collapse(const GluedDiagram& d, std::initializer_list<std::size_t> merge) {
  return collapse(d, std::span<const std::size_t>(merge.begin(), merge.end()));
}

struct SubsystemEmbedding {
  GluedDiagram diagram;
  VertexMap kappa;  // union nerve of the subsystem -> union nerve of the whole
};

/// The colimit of the subsystem on J and the embedding kappa([[x,i]]) = [x,i].
inline SubsystemEmbedding subsystem_embedding(const GluedDiagram& d, std::span<const std::size_t> keep) {
  if (keep.empty()) throw Error(ErrorCode::BadIndexSet, "empty subsystem");
  const std::uint32_t mask = index_mask(keep, d.piece_count());
  const auto order = mask_indices(mask);
  const AdjunctionSystem& whole = d.system();
  AdjunctionSystem sub;
  sub.field = whole.field;
  std::set<std::string> kept_ids;
  for (auto i : order) {
    sub.pieces.push_back(whole.pieces[i]);
    kept_ids.insert(whole.pieces[i].id);
  }
  for (const auto& g : whole.gluings)
    if (kept_ids.contains(g.source) && kept_ids.contains(g.target)) sub.gluings.push_back(g);
  GluedDiagram sd = canonicalize(sub);

  VertexMap kappa;
  for (std::size_t a = 0; a < order.size(); ++a) {
    for (const auto& [local, global_sub] : sd.local_to_global(a)) {
      const Label& target = d.local_to_global(order[a]).at(local);
      auto [it, inserted] = kappa.emplace(global_sub, target);
      if (!inserted && it->second != target) {
        throw Error(ErrorCode::InvalidSystem, "subsystem class maps to two classes");
      }
    }
  }
  return {std::move(sd), std::move(kappa)};
}

inline SubsystemEmbedding subsystem_embedding(const GluedDiagram& d, std::initializer_list<std::size_t> keep) {
  return subsystem_embedding(d, std::span<const std::size_t>(keep.begin(), keep.end()));
}

/// The unique simplicial map alpha on the union nerve with alpha o phi_i = psi_i,
/// given per-piece vertex maps psi_i on local labels that agree across gluings.
inline VertexMap induced_map(const GluedDiagram& d, const SimplicialComplex& target,
                             const std::vector<VertexMap>& psi) {
  const AdjunctionSystem& s = d.system();
  if (psi.size() != d.piece_count()) {
    throw Error(ErrorCode::IncompatibleFamily, "need one map per piece");
  }
  for (std::size_t i = 0; i < psi.size(); ++i) {
    std::string witness;
    if (!is_simplicial(s.pieces[i].nerve, target, psi[i], &witness)) {
      throw Error(ErrorCode::NotSimplicial,
                  "piece '" + s.pieces[i].id + "' sends " + witness + " outside the target");
    }
  }
  for (const auto& [key, map] : effective_gluings(s)) {
    const auto [i, j] = key;
    for (const auto& [x, y] : map) {
      auto xi = psi[i].find(x);
      auto yj = psi[j].find(y);
      if (xi == psi[i].end() || yj == psi[j].end()) continue;
      if (xi->second != yj->second) {
        throw Error(ErrorCode::IncompatibleFamily,
                    "maps of pieces '" + s.pieces[i].id + "' and '" + s.pieces[j].id +
                        "' disagree at label '" + x.name() + "'");
      }
    }
  }
  VertexMap alpha;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    for (const auto& v : s.pieces[i].nerve.vertex_set()) {
      alpha.emplace(d.local_to_global(i).at(v), psi[i].at(v));
    }
  }
  return alpha;
}

}  // namespace nhcech
