#pragma once

// Command pipelines behind the CLI. Each command produces a structured JSON
// report, a human-readable rendering and an exit code:
//   0  every verdict holds
//   1  some verdict failed
//   2  input error (unreadable or invalid document, bad option)
// Structured reports contain no wall time unless `timing` is set, so repeated
// runs are byte-identical.

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <set>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "nhcech/bundles.hpp"
#include "nhcech/cech.hpp"
#include "nhcech/diagram.hpp"
#include "nhcech/document.hpp"
#include "nhcech/gallery.hpp"
#include "nhcech/mayer_vietoris.hpp"
#include "nhcech/refinement.hpp"

namespace nhcech {

struct RunOptions {
  std::string command;
  std::string target;  // document path, or gallery name for `gallery`
  std::optional<std::uint32_t> field;
  std::optional<int> qmax;
  std::optional<int> q;
  std::size_t n = 2;
  std::uint64_t seed = 1;
  bool timing = false;
};

struct RunReport {
  json structured;
  std::string human;
  int exit_code = 0;
};

inline std::vector<std::string> command_names() {
  return {"validate", "cohomology", "mv", "fibred", "bundles", "count", "collapse-check", "refine-check", "gallery"};
}

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 digest failed");
  }
  EVP_MD_CTX_free(ctx);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return out.str();
}

namespace report_detail {

/// Left-aligned text table with a header rule.
class Table {
 public:
  explicit Table(std::vector<std::string> header) : rows_{std::move(header)} {}

  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string render() const {
    std::vector<std::size_t> width;
    for (const auto& row : rows_) {
      if (width.size() < row.size()) width.resize(row.size(), 0);
      for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::string out;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      std::string line = "  ";
      for (std::size_t c = 0; c < rows_[r].size(); ++c) {
        line += rows_[r][c];
        if (c + 1 < rows_[r].size()) line += std::string(width[c] - rows_[r][c].size() + 2, ' ');
      }
      out += line + "\n";
      if (r == 0) {
        std::size_t total = 0;
        for (auto w : width) total += w + 2;
        out += "  " + std::string(total > 2 ? total - 2 : 0, '-') + "\n";
      }
    }
    return out;
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

class Verdicts {
 public:
  void add(const std::string& name, bool holds, json detail = nullptr) {
    json v{{"name", name}, {"holds", holds}};
    if (!detail.is_null()) v["detail"] = std::move(detail);
    list_.push_back(std::move(v));
    if (!holds) ++failed_;
  }
  const json& list() const noexcept { return list_; }
  std::size_t failed() const noexcept { return failed_; }

  std::string render() const {
    std::string out;
    for (const auto& v : list_) out += std::string(v["holds"].get<bool>() ? "  [ok]   " : "  [FAIL] ") + v["name"].get<std::string>() + "\n";
    return out;
  }

 private:
  json list_ = json::array();
  std::size_t failed_ = 0;
};

struct Context {
  std::string source;
  std::string digest;
  DiagramDocument doc;
  const RunOptions* options = nullptr;
};

inline std::string str(std::size_t v) { return std::to_string(v); }

inline std::string join(const std::vector<std::string>& parts, const std::string& sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

template <class T>
std::string join_numbers(const std::vector<T>& v) {
  std::vector<std::string> s;
  for (const auto& x : v) s.push_back(std::to_string(x));
  return "(" + join(s) + ")";
}

inline std::string mask_label(const GluedDiagram& d, std::uint32_t mask) {
  std::vector<std::string> ids;
  for (auto i : mask_indices(mask)) ids.push_back(d.piece_ids()[i]);
  return "{" + join(ids, ",") + "}";
}

inline json nerve_summary(const SimplicialComplex& k) {
  json counts = json::array();
  for (int q = 0; q <= k.dimension(); ++q) counts.push_back(k.count(q));
  return {{"dimension", k.dimension()}, {"simplex_counts", counts}};
}

inline int default_qmax(const GluedDiagram& d, const RunOptions& o) {
  if (o.qmax) {
    if (*o.qmax < 0) throw Error(ErrorCode::DimensionMismatch, "--qmax must be non-negative");
    return *o.qmax;
  }
  return std::max(d.union_nerve().dimension(), 0);
}

inline std::vector<std::size_t> union_dims(const GluedDiagram& d, int q_max) {
  std::vector<std::size_t> out;
  for (int q = 0; q <= q_max; ++q) out.push_back(cohomology(d.union_nerve(), q, d.field()).dimension);
  return out;
}

struct Output {
  json result = json::object();
  std::string human;
  Verdicts verdicts;
};

inline GluedDiagram glued(const Context& ctx) { return canonicalize(ctx.doc.system); }

// ---- commands -------------------------------------------------------------

inline void cmd_validate(const Context& ctx, Output& out) {
  const ValidationReport report = validate_system(ctx.doc.system);
  json violations = json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"condition", v.condition}, {"message", v.message}, {"witness", v.witness}});
    out.human += "  " + v.condition + ": " + v.message + " [" + join(v.witness) + "]\n";
  }
  out.result["violations"] = violations;
  out.verdicts.add("adjunction system conditions", report.valid());
  if (!report.valid()) return;

  const GluedDiagram d = canonicalize(ctx.doc.system);
  json labels = json::array();
  for (const auto& l : d.global_labels()) labels.push_back(l.name());
  out.result["global_labels"] = labels;
  out.result["union_nerve"] = nerve_summary(d.union_nerve());
  Table t({"piece", "labels", "simplices"});
  for (std::size_t i = 0; i < d.piece_count(); ++i) t.add({d.piece_ids()[i], str(d.piece_nerve(i).vertex_set().size()), str(d.piece_nerve(i).size())});
  t.add({"union", str(d.global_labels().size()), str(d.union_nerve().size())});
  out.human += t.render();

  if (ctx.doc.bundle) {
    std::vector<std::string> problems;
    if (is_sign_bundle(*ctx.doc.bundle, d.field())) {
      problems = bundle_data_violations(d, parse_bundle(*ctx.doc.bundle, d, SignGroup{}));
    } else {
      problems = bundle_data_violations(d, parse_bundle(*ctx.doc.bundle, d, bundle_gl_group(*ctx.doc.bundle, d.field())));
    }
    out.result["bundle_violations"] = problems;
    for (const auto& p : problems) out.human += "  bundle: " + p + "\n";
    out.verdicts.add("bundle data invariants", problems.empty());
  }
  if (ctx.doc.refinement) {
    const RefinementVerdict rv = validate_refinement(parse_refinement(*ctx.doc.refinement, d));
    out.result["refinement_violations"] = rv.violations;
    for (const auto& p : rv.violations) out.human += "  refinement: " + p + "\n";
    out.verdicts.add("refinement map", rv.valid());
  }
}

inline void cmd_cohomology(const Context& ctx, Output& out) {
  const GluedDiagram d = glued(ctx);
  const int q_max = default_qmax(d, *ctx.options);
  const auto dims = union_dims(d, q_max);
  std::vector<std::string> header{"q", "N"};
  for (const auto& id : d.piece_ids()) header.push_back("N_" + id);
  Table t(header);
  json pieces = json::object();
  std::vector<std::vector<std::size_t>> per_piece(d.piece_count());
  for (std::size_t i = 0; i < d.piece_count(); ++i) {
    for (int q = 0; q <= q_max; ++q) per_piece[i].push_back(cohomology(d.piece_nerve(i), q, d.field()).dimension);
    pieces[d.piece_ids()[i]] = per_piece[i];
  }
  for (int q = 0; q <= q_max; ++q) {
    std::vector<std::string> row{std::to_string(q), str(dims[static_cast<std::size_t>(q)])};
    for (const auto& p : per_piece) row.push_back(str(p[static_cast<std::size_t>(q)]));
    t.add(row);
  }
  const TotalCohomology total = total_cohomology(d, q_max);
  out.result["qmax"] = q_max;
  out.result["union"] = dims;
  out.result["pieces"] = pieces;
  out.result["total_complex"] = total.dims;
  out.result["union_nerve"] = nerve_summary(d.union_nerve());
  out.human += t.render();
  out.human += "  total complex: " + join_numbers(total.dims) + "\n";
  out.verdicts.add("total differential squares to zero", total.squares_to_zero);
  out.verdicts.add("total complex cohomology equals union nerve cohomology", total.dims == dims);
}

inline void cmd_mv(const Context& ctx, Output& out) {
  const GluedDiagram d = glued(ctx);
  const int q_max = default_qmax(d, *ctx.options);
  const std::size_t n = d.piece_count();

  json exactness = json::array();
  Table t({"q", "dims C(N), levels 1..n", "ranks", "exact"});
  bool all_exact = true;
  bool composites = true;
  for (int q = 0; q <= q_max; ++q) {
    const ExactnessVerdict v = verify_exact_sequence(d, q);
    exactness.push_back({{"q", q}, {"dimensions", v.dimensions}, {"ranks", v.ranks}, {"failing_positions", v.failing_positions}});
    t.add({std::to_string(q), join_numbers(v.dimensions), join_numbers(v.ranks), v.exact() ? "yes" : "no"});
    all_exact = all_exact && v.exact();
    const auto maps = mv_sequence_maps(d, q);
    for (std::size_t k = 1; k < maps.size(); ++k) composites = composites && (maps[k] * maps[k - 1]).is_zero();
  }
  out.result["exactness"] = exactness;
  out.human += "short exact sequences of cochains\n" + t.render();
  out.verdicts.add("cochain sequence exact at every position", all_exact);
  out.verdicts.add("delta~ o delta~ = 0 and delta~ o Phi* = 0", composites);

  const auto dims = union_dims(d, q_max);
  const TotalCohomology total = total_cohomology(d, q_max);
  out.result["union"] = dims;
  out.result["total_complex"] = total.dims;
  out.human += "  union nerve " + join_numbers(dims) + ", total complex " + join_numbers(total.dims) + "\n";
  out.verdicts.add("total differential squares to zero", total.squares_to_zero);
  out.verdicts.add("total complex cohomology equals union nerve cohomology", total.dims == dims);

  if (n == 2) {
    const LesReport les = assemble_les(d, q_max);
    json degrees = json::array();
    Table lt({"q", "H(N)", "H(N1)+H(N2)", "H(N12)", "rk i", "rk alpha", "rk delta*", "coker a(q-1)", "ker a(q)"});
    bool lift_free = true;
    for (const auto& g : les.degrees) {
      degrees.push_back({{"q", g.degree}, {"h_union", g.h_union}, {"h_pieces", g.h_pieces}, {"h_overlap", g.h_overlap},
                         {"rank_restrict", g.rank_restrict}, {"rank_alpha", g.rank_alpha},
                         {"rank_connecting", g.rank_connecting}, {"coker_alpha_prev", g.coker_alpha_prev},
                         {"ker_alpha", g.ker_alpha}});
      lt.add({std::to_string(g.degree), str(g.h_union), str(g.h_pieces), str(g.h_overlap), str(g.rank_restrict),
              str(g.rank_alpha), str(g.rank_connecting), str(g.coker_alpha_prev), str(g.ker_alpha)});
      lift_free = lift_free && connecting_homomorphism(d, g.degree, Lift::ThroughFirst) ==
                                   connecting_homomorphism(d, g.degree, Lift::ThroughSecond);
    }
    out.result["long_exact_sequence"] = degrees;
    out.human += "long exact sequence\n" + lt.render();
    out.verdicts.add("long exact sequence exact", les.exact());
    out.verdicts.add("dim H(N) = coker alpha(q-1) + ker alpha(q)", les.identity_holds());
    out.verdicts.add("connecting map independent of the lift", lift_free);
  }

  const H1FibredVerdict h1 = h1_fibred_check(d);
  json disconnected = json::array();
  for (auto m : h1.disconnected) disconnected.push_back(mask_label(d, m));
  out.result["h1_fibred"] = {{"hypothesis", h1.hypothesis}, {"disconnected", disconnected},
                             {"h1_union", h1.h1_union}, {"fibred_dimension", h1.fibred_dimension},
                             {"equal", h1.equal()}};
  out.human += "  H^1(N) = " + str(h1.h1_union) + ", fibred product of H^1 = " + str(h1.fibred_dimension) +
               (h1.hypothesis ? "" : " (connectivity fails on " + join(disconnected.get<std::vector<std::string>>()) + ")") + "\n";
  out.verdicts.add("H^1 fibred product (when every N_T is connected)", h1.holds());
}

inline void cmd_fibred(const Context& ctx, Output& out) {
  const GluedDiagram d = glued(ctx);
  std::vector<int> degrees;
  if (ctx.options->q) {
    if (*ctx.options->q < 0) throw Error(ErrorCode::DimensionMismatch, "--q must be non-negative");
    degrees.push_back(*ctx.options->q);
  } else {
    for (int q = 0; q <= 2; ++q) degrees.push_back(q);
  }
  json rows = json::array();
  Table t({"q", "fibred", "C(N)", "rank Phi*", "inductive"});
  bool flat_ok = true;
  bool mediating_ok = true;
  bool inductive_ok = true;
  bool collapse_ok = true;
  for (int q : degrees) {
    const FibredProduct fp = fibred_product(d, q);
    const std::size_t cn = d.union_nerve().count(q);
    std::vector<FMatrix> rho;
    for (std::size_t i = 0; i < d.piece_count(); ++i)
      rho.push_back(restriction_map(d.union_nerve(), d.piece_nerve(i), q, d.field()).matrix);
    const bool mediating = mediating_map(d, q, rho) == phi_star(d, q);
    const auto steps = inductive_fibred_product(d, q);
    json row{{"q", q}, {"fibred_dimension", fp.dimension}, {"cochain_dimension", cn}, {"rank_phi", fp.rank_phi},
             {"equals_image", fp.equals_image}, {"inductive_dimensions", steps}};
    if (d.piece_count() >= 3) {
      const std::size_t two_step = fibred_product(collapse(d, {0, 1}), q).dimension;
      row["two_step_dimension"] = two_step;
      collapse_ok = collapse_ok && two_step == fp.dimension;
    }
    rows.push_back(row);
    t.add({std::to_string(q), str(fp.dimension), str(cn), str(fp.rank_phi), join_numbers(steps)});
    flat_ok = flat_ok && fp.equals_image && fp.dimension == cn && fp.rank_phi == cn;
    mediating_ok = mediating_ok && mediating;
    inductive_ok = inductive_ok && steps.back() == fp.dimension;
  }
  out.result["degrees"] = rows;
  out.human += t.render();
  out.verdicts.add("fibred product = C(N) = image of Phi*", flat_ok);
  out.verdicts.add("mediating map of the restrictions is Phi*", mediating_ok);
  out.verdicts.add("inductive product dimension = flat dimension", inductive_ok);
  if (d.piece_count() >= 3) out.verdicts.add("two-step collapse product dimension = flat dimension", collapse_ok);
}

template <class G>
json bundle_block_report(const GluedDiagram& d, const PieceBundleData<G>& data, Output& out) {
  json r = json::object();
  const auto problems = bundle_data_violations(d, data);
  if (!problems.empty()) throw Error(ErrorCode::IncompatibleData, problems.front());
  const ColimitBundle<G> colimit = colimit_bundle(d, data);
  r["obstructed"] = colimit.obstructed();
  if (colimit.obstructed()) {
    r["obstruction"] = colimit.obstruction;
    out.human += "  document bundle: no constant cocycle on this cover (" + colimit.obstruction + ")\n";
    return r;
  }
  const ConstantCocycle<G>& g = *colimit.cocycle;
  r["cocycle"] = cocycle_json(g);
  const std::size_t parallel = parallel_sections(g).size();
  const std::size_t glued_dim = section_fibred_dimension(d, data);
  r["parallel_sections"] = parallel;
  r["glued_sections"] = glued_dim;
  const bool round_trip = equivalent(colimit_bundle(d, restrict_bundle(g, d)).cocycle.value(), g);
  r["round_trip"] = round_trip;
  if constexpr (std::is_same_v<G, SignGroup>) r["class"] = cocycle_class(g);
  bool restrictions = true;
  for (std::size_t i = 0; i < d.piece_count(); ++i) {
    const auto restricted = restrict_bundle(g, d).pieces[i];
    restrictions = restrictions && gauge_transform(data.pieces[i], colimit.gauges[i]).values ==
                                       gauge_transform(restricted, {}).values;
  }
  out.verdicts.add("document bundle: colimit restricts to the gauged pieces", restrictions);
  out.verdicts.add("document bundle: round trip preserves the class", round_trip);
  out.verdicts.add("document bundle: glued sections = parallel sections", glued_dim == parallel);
  out.human += "  document bundle: parallel sections " + str(parallel) + ", compatible piece sections " + str(glued_dim) + "\n";
  return r;
}

inline void cmd_bundles(const Context& ctx, Output& out) {
  const GluedDiagram d = glued(ctx);
  if (d.field().modulus() != 2) {
    out.result["enumeration"] = "skipped: line bundle classes are enumerated over F_2";
    out.human += "  enumeration skipped (field is not F_2)\n";
  } else {
    const auto classes = enumerate_line_bundles(d);
    const std::size_t h1 = cohomology(d.union_nerve(), 1, d.field()).dimension;
    json list = json::array();
    Table t({"class", "coordinates", "parallel", "glued", "round trip"});
    std::set<FVector> seen;
    bool round_trips = true;
    bool glue_dims = true;
    for (std::size_t c = 0; c < classes.size(); ++c) {
      const auto& g = classes[c];
      const FVector coords = cocycle_class(g);
      seen.insert(coords);
      const PieceBundleData<SignGroup> data = restrict_bundle(g, d);
      const ColimitBundle<SignGroup> back = colimit_bundle(d, data);
      const bool rt = !back.obstructed() && cocycle_class(*back.cocycle) == coords;
      const std::size_t parallel = back.obstructed() ? 0 : parallel_sections(*back.cocycle).size();
      const std::size_t glued_dim = section_fibred_dimension(d, data);
      round_trips = round_trips && rt;
      glue_dims = glue_dims && !back.obstructed() && glued_dim == parallel;
      list.push_back({{"index", c}, {"class", coords}, {"cocycle", cocycle_json(g)}, {"parallel_sections", parallel},
                      {"glued_sections", glued_dim}, {"round_trip", rt}});
      t.add({str(c), join_numbers(coords), str(parallel), str(glued_dim), rt ? "yes" : "no"});
    }
    out.result["h1_dimension"] = h1;
    out.result["classes"] = list;
    out.human += t.render();
    out.verdicts.add("class count = 2^dim H^1", classes.size() == (std::size_t{1} << h1));
    out.verdicts.add("class representatives pairwise inequivalent", seen.size() == classes.size());
    out.verdicts.add("restrict then glue preserves every class", round_trips);
    out.verdicts.add("glued sections = parallel sections for every class", glue_dims);
  }
  if (ctx.doc.bundle) {
    if (is_sign_bundle(*ctx.doc.bundle, d.field())) {
      out.result["document_bundle"] = bundle_block_report(d, parse_bundle(*ctx.doc.bundle, d, SignGroup{}), out);
    } else {
      out.result["document_bundle"] =
          bundle_block_report(d, parse_bundle(*ctx.doc.bundle, d, bundle_gl_group(*ctx.doc.bundle, d.field())), out);
    }
  }
}

inline void cmd_count(const Context& ctx, Output& out) {
  const GluedDiagram d = glued(ctx);
  const CountReport r = count_line_bundles(d);
  json levels = json::array();
  Table t({"level", "sum dim H^1(N_T)", "sum |H^1(N_T)|"});
  for (const auto& l : r.levels) {
    levels.push_back({{"level", l.level}, {"dimension_sum", l.dimension_sum}, {"order_sum", l.order_sum}});
    t.add({std::to_string(l.level), str(l.dimension_sum), std::to_string(l.order_sum)});
  }
  json disconnected = json::array();
  for (auto m : r.disconnected) disconnected.push_back(mask_label(d, m));
  json flags = json::array();
  if (!r.literal_form_matches()) flags.push_back("literal order-sum form differs from the ground truth");
  if (!r.dimension_form_matches()) flags.push_back("dimension form differs from the ground truth");
  out.result = {{"levels", levels},
                {"connected", r.connected},
                {"disconnected", disconnected},
                {"surjective", r.surjective},
                {"non_surjective_levels", r.non_surjective_levels},
                {"exponent", r.exponent},
                {"dimension_form", r.dimension_form ? json(*r.dimension_form) : json(nullptr)},
                {"literal_form", r.literal_form},
                {"ground_truth", r.ground_truth},
                {"h1_union", r.h1_union},
                {"dimension_form_matches", r.dimension_form_matches()},
                {"literal_form_matches", r.literal_form_matches()},
                {"flags", flags}};
  out.human += t.render();
  out.human += "  hypotheses: connected " + std::string(r.connected ? "yes" : "no") + ", surjective " +
               (r.surjective ? "yes" : "no") + "\n";
  out.human += "  dimension form 2^" + std::to_string(r.exponent) + " = " +
               (r.dimension_form ? std::to_string(*r.dimension_form) : std::string("n/a")) +
               ", literal form " + std::to_string(r.literal_form) + ", ground truth " + std::to_string(r.ground_truth) + "\n";
  for (const auto& f : flags) out.human += "  flag: " + f.get<std::string>() + "\n";
  out.verdicts.add("dimension form equals ground truth (under the hypotheses)", r.holds());
}

inline void cmd_collapse_check(const Context& ctx, Output& out) {
  const GluedDiagram d = glued(ctx);
  const int q_max = default_qmax(d, *ctx.options);
  const auto flat = union_dims(d, q_max);
  const auto total = total_cohomology(d, q_max).dims;
  out.result["union"] = flat;
  out.result["total_complex"] = total;
  json runs = json::array();
  Table t({"sequence", "pieces", "LES dims", "exact"});
  bool union_same = true;
  bool dims_same = total == flat;
  bool exact = true;
  auto binary_check = [&](const GluedDiagram& two, const std::string& name) {
    const LesReport les = assemble_les(two, q_max);
    std::vector<std::size_t> dims;
    for (const auto& g : les.degrees) dims.push_back(g.h_union);
    const bool same_union = two.union_nerve() == d.union_nerve();
    union_same = union_same && same_union;
    dims_same = dims_same && dims == flat;
    exact = exact && les.exact() && les.identity_holds();
    runs.push_back({{"sequence", name}, {"pieces", two.piece_ids()}, {"les_dims", dims},
                    {"union_unchanged", same_union}, {"exact", les.exact()}});
    t.add({name, join(two.piece_ids(), " | "), join_numbers(dims), les.exact() ? "yes" : "no"});
  };
  if (d.piece_count() >= 2) {
    GluedDiagram current = d;
    while (current.piece_count() > 2) {
      current = collapse(current, {0, 1});
      union_same = union_same && current.union_nerve() == d.union_nerve();
    }
    binary_check(current, "inductive");
    if (d.piece_count() >= 3) {
      for (std::size_t i = 0; i < d.piece_count(); ++i) {
        std::vector<std::size_t> rest;
        for (std::size_t j = 0; j < d.piece_count(); ++j)
          if (j != i) rest.push_back(j);
        binary_check(collapse(d, rest), "split off " + d.piece_ids()[i]);
      }
    }
  }
  out.result["runs"] = runs;
  out.human += t.render();
  out.human += "  flat " + join_numbers(flat) + ", total complex " + join_numbers(total) + "\n";
  out.verdicts.add("collapse keeps the union nerve", union_same);
  out.verdicts.add("collapsed LES dims = flat dims = total complex dims", dims_same);
  out.verdicts.add("collapsed long exact sequences exact", exact);
}

inline void cmd_refine_check(const Context& ctx, Output& out) {
  if (!ctx.doc.refinement) throw Error(ErrorCode::InvalidRefinement, "document has no refinement block");
  const GluedDiagram d = glued(ctx);
  const RefinementMap r = parse_refinement(*ctx.doc.refinement, d);
  const RefinementVerdict rv = validate_refinement(r);
  out.result["violations"] = rv.violations;
  out.verdicts.add("refinement map valid", rv.valid());
  if (!rv.valid()) {
    for (const auto& v : rv.violations) out.human += "  " + v + "\n";
    return;
  }
  const int q_max = std::max(default_qmax(d, *ctx.options), 1);
  const NaturalityVerdict nat = naturality_check(r, q_max);
  out.result["squares_checked"] = nat.squares_checked;
  out.result["square_failures"] = nat.failures;
  out.verdicts.add("naturality squares commute", nat.holds());
  json maps = json::array();
  Table t({"q", "H(coarse)", "H(fine)", "rank", "isomorphism"});
  for (int q = 0; q <= q_max; ++q) {
    const FMatrix m = cohomology_pullback(r, q);
    const std::size_t rk = rank(m);
    const bool iso = m.rows() == m.cols() && rk == m.rows();
    maps.push_back({{"q", q}, {"coarse", m.cols()}, {"fine", m.rows()}, {"rank", rk}, {"isomorphism", iso}});
    t.add({std::to_string(q), str(m.cols()), str(m.rows()), str(rk), iso ? "yes" : "no"});
  }
  out.result["cohomology_maps"] = maps;
  out.human += t.render();
  const LambdaIndependence li = lambda_independence(r, 1);
  out.result["lambda_choices"] = {{"valid", li.valid_maps}, {"contiguous", li.contiguous_maps}, {"agree", li.agree}};
  out.human += "  refinement maps: " + str(li.valid_maps) + " valid, " + str(li.contiguous_maps) + " contiguous to the given one\n";
  out.verdicts.add("contiguous refinement maps induce the same H^0 and H^1 maps", li.agree);
}

inline RunReport finish(const std::string& command, const Context* ctx, Output& out,
                        std::chrono::steady_clock::time_point start, bool timing) {
  RunReport rep;
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  rep.structured = json::object();
  rep.structured["command"] = command;
  std::string head = "command: " + command + "\n";
  if (ctx) {
    rep.structured["input"] = {{"source", ctx->source}, {"sha256", ctx->digest}};
    rep.structured["field"] = ctx->doc.system.field.modulus();
    json ids = json::array();
    for (const auto& p : ctx->doc.system.pieces) ids.push_back(p.id);
    rep.structured["pieces"] = ids;
    head += "input: " + ctx->source + " (sha256 " + ctx->digest.substr(0, 16) + ")\n";
    head += "field: F_" + std::to_string(ctx->doc.system.field.modulus()) + ", pieces: " + join(ids.get<std::vector<std::string>>()) + "\n";
  }
  rep.structured["result"] = out.result;
  rep.structured["verdicts"] = out.verdicts.list();
  rep.structured["all_hold"] = out.verdicts.failed() == 0;
  if (timing) rep.structured["wall_time_ms"] = ms;
  rep.exit_code = out.verdicts.failed() == 0 ? 0 : 1;
  std::ostringstream tail;
  tail << std::fixed << std::setprecision(1) << ms;
  rep.human = head + out.human + "verdicts:\n" + out.verdicts.render() +
              (rep.exit_code == 0 ? "result: all verdicts hold" : "result: " + str(out.verdicts.failed()) + " verdict(s) failed") +
              "\nwall time: " + tail.str() + " ms\n";
  return rep;
}

inline RunReport error_report(const std::string& command, const std::string& source, const Error& e) {
  RunReport rep;
  rep.structured = {{"command", command},
                    {"input", {{"source", source}}},
                    {"error", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}}}};
  rep.human = "command: " + command + "\nerror: " + e.what() + "\n";
  rep.exit_code = 2;
  return rep;
}

}  // namespace report_detail

/// Runs one analysis command on document text. Never throws for input errors.
inline RunReport run_on_document(const std::string& source, const std::string& content, const RunOptions& options) {
  using namespace report_detail;
  const auto start = std::chrono::steady_clock::now();
  const std::string& command = options.command;
  try {
    Context ctx;
    ctx.source = source;
    ctx.digest = sha256_hex(content);
    ctx.options = &options;
    ctx.doc = command == "validate" ? parse_document(parse_json_text(content, source))
                                    : load_diagram_text(content, source);
    if (options.field) ctx.doc.system.field = PrimeField(*options.field);
    Output out;
    if (command == "validate") cmd_validate(ctx, out);
    else if (command == "cohomology") cmd_cohomology(ctx, out);
    else if (command == "mv") cmd_mv(ctx, out);
    else if (command == "fibred") cmd_fibred(ctx, out);
    else if (command == "bundles") cmd_bundles(ctx, out);
    else if (command == "count") cmd_count(ctx, out);
    else if (command == "collapse-check") cmd_collapse_check(ctx, out);
    else if (command == "refine-check") cmd_refine_check(ctx, out);
    else throw Error(ErrorCode::UnknownCommand, "unknown command '" + command + "'");
    return finish(command, &ctx, out, start, options.timing);
  } catch (const Error& e) {
    return error_report(command, source, e);
  } catch (const json::exception& e) {
    return error_report(command, source, Error(ErrorCode::ParseError, e.what()));
  }
}

/// The documents `--all-gallery` runs over, in order.
inline std::vector<std::pair<std::string, DiagramDocument>> gallery_cases(std::uint64_t seed) {
  return {{"two_origin_line", gallery::two_origin_line()},
          {"branching_line_n (n=2)", gallery::branching_line(2)},
          {"branching_line_n (n=3)", gallery::branching_line(3)},
          {"bug_eyed_circle", gallery::bug_eyed_circle()},
          {"three_circles", gallery::three_circles()},
          {"random (seed=" + std::to_string(seed) + ")", gallery::random_diagram(seed)}};
}

inline std::string document_text(const DiagramDocument& doc) { return to_json(doc).dump(2) + "\n"; }

inline RunReport run_gallery(const RunOptions& options) {
  using namespace report_detail;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (options.target == "list" || options.target.empty()) {
      Output out;
      out.result["entries"] = gallery::names();
      out.result["parameters"] = {{"branching_line_n", "--n N (N >= 2)"}, {"random", "--seed S"}};
      for (const auto& name : gallery::names()) out.human += "  " + name + "\n";
      return finish("gallery", nullptr, out, start, options.timing);
    }
    DiagramDocument doc = gallery::by_name(options.target, options.n, options.seed);
    if (options.field) doc.system.field = PrimeField(*options.field);
    RunReport rep;
    const std::string text = document_text(doc);
    rep.structured = {{"command", "gallery"}, {"name", options.target}, {"sha256", sha256_hex(text)}, {"document", to_json(doc)}};
    if (options.target == "random") rep.structured["seed"] = options.seed;
    if (options.target == "branching_line_n") rep.structured["n"] = options.n;
    rep.human = text;
    return rep;
  } catch (const Error& e) {
    return error_report("gallery", options.target, e);
  }
}

inline RunReport run_command(const RunOptions& options) {
  if (options.command == "gallery") return run_gallery(options);
  std::string content;
  try {
    content = read_file(options.target);
  } catch (const Error& e) {
    return report_detail::error_report(options.command, options.target, e);
  }
  return run_on_document(options.target, content, options);
}

/// One command over every gallery case; the merged report keeps case order.
inline RunReport run_all_gallery(const RunOptions& options) {
  RunReport merged;
  merged.structured = {{"command", options.command}, {"runs", json::array()}};
  for (const auto& [name, doc] : gallery_cases(options.seed)) {
    const RunReport r = run_on_document("gallery:" + name, document_text(doc), options);
    merged.structured["runs"].push_back(r.structured);
    merged.human += "== " + name + " ==\n" + r.human + "\n";
    merged.exit_code = std::max(merged.exit_code, r.exit_code);
  }
  return merged;
}

}  // namespace nhcech
