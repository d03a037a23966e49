#include <catch_amalgamated.hpp>

#include "nhcech/nhcech.hpp"

using namespace nhcech;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::ParseError;
}

json minimal() {
  return json::parse(R"({"field": 2, "pieces": [{"id": "1", "simplices": [["a", "b"]]},
                                               {"id": "2", "simplices": [["b", "c"]]}],
                          "gluings": [{"i": "1", "j": "2", "pairs": [["b", "b"]]}]})");
}

RunReport run(const std::string& command, const DiagramDocument& doc) {
  RunOptions o;
  o.command = command;
  return run_on_document("test", document_text(doc), o);
}

}  // namespace

TEST_CASE("documents round trip through JSON", "[document]") {
  for (const auto& doc : {gallery::two_origin_line(), gallery::bug_eyed_circle(), gallery::three_circles(),
                          gallery::branching_line(4), gallery::random_diagram(17)}) {
    const json j = to_json(doc);
    const DiagramDocument back = parse_document(j);
    CHECK(to_json(back) == j);
    const GluedDiagram a = canonicalize(doc.system);
    const GluedDiagram b = canonicalize(back.system);
    CHECK(a.union_nerve() == b.union_nerve());
    CHECK(a.piece_ids() == b.piece_ids());
  }
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const DiagramDocument doc = gallery::random_diagram(seed);
    CHECK(to_json(parse_document(to_json(doc))) == to_json(doc));
  }
}

TEST_CASE("loading the two-origin gallery file", "[document]") {
  const std::string text = document_text(gallery::two_origin_line());
  const DiagramDocument doc = load_diagram_text(text, "two_origin_line.json");
  CHECK(doc.system.pieces.size() == 2);
  const GluedDiagram d = canonicalize(doc.system);
  CHECK(d.global_labels().size() == 4);
  CHECK(doc.bundle.has_value());
  CHECK(doc.refinement.has_value());
}

TEST_CASE("malformed documents", "[document]") {
  json dup = minimal();
  dup["pieces"][1]["id"] = "1";
  CHECK(code_of([&] { parse_document(dup); }) == ErrorCode::ParseError);

  json p4 = minimal();
  p4["field"] = 4;
  CHECK(code_of([&] { parse_document(p4); }) == ErrorCode::NonPrimeModulus);

  json extra = minimal();
  extra["colour"] = "blue";
  CHECK(code_of([&] { parse_document(extra); }) == ErrorCode::ParseError);

  json empty_simplex = minimal();
  empty_simplex["pieces"][0]["simplices"].push_back(json::array());
  CHECK(code_of([&] { parse_document(empty_simplex); }) == ErrorCode::ParseError);

  json repeated = minimal();
  repeated["pieces"][0]["simplices"].push_back(json::array({"a", "a"}));
  CHECK(code_of([&] { parse_document(repeated); }) == ErrorCode::ParseError);

  json missing = minimal();
  missing.erase("pieces");
  CHECK(code_of([&] { parse_document(missing); }) == ErrorCode::ParseError);

  CHECK(code_of([&] { parse_json_text("{not json", "x"); }) == ErrorCode::ParseError);

  json a3 = json::parse(R"({"pieces": [{"id": "1", "simplices": [["x", "y"]]}, {"id": "2", "simplices": [["x", "y"]]},
                                       {"id": "3", "simplices": [["x", "y"]]}],
                            "gluings": [{"i": "1", "j": "2", "pairs": [["x", "x"]]},
                                        {"i": "2", "j": "3", "pairs": [["x", "x"]]},
                                        {"i": "1", "j": "3", "pairs": [["x", "y"]]}]})");
  CHECK_NOTHROW(parse_document(a3));
  CHECK(code_of([&] { load_diagram_text(a3.dump(), "a3"); }) == ErrorCode::InvalidSystem);
}

TEST_CASE("bundle blocks", "[document]") {
  const DiagramDocument doc = gallery::two_origin_line();
  const GluedDiagram d = canonicalize(doc.system);
  REQUIRE(is_sign_bundle(*doc.bundle, d.field()));
  const auto data = parse_bundle(*doc.bundle, d, SignGroup{});
  CHECK(data.identification(0, 1, "r") == 1);
  CHECK(data.identification(0, 1, "l") == 0);
  const auto glued = colimit_bundle(d, data);
  REQUIRE(glued.cocycle);
  const FVector cls = cocycle_class(*glued.cocycle);
  CHECK(std::any_of(cls.begin(), cls.end(), [](Scalar x) { return x != 0; }));

  json bad = *doc.bundle;
  bad["identifications"][0]["i"] = "9";
  CHECK(code_of([&] { parse_bundle(bad, d, SignGroup{}); }) == ErrorCode::ParseError);
}

TEST_CASE("structured reports of the commands", "[document]") {
  const RunReport h = run("cohomology", gallery::two_origin_line());
  CHECK(h.exit_code == 0);
  CHECK(h.structured["result"]["union"] == json::array({1, 1}));

  const RunReport c = run("count", gallery::three_circles());
  CHECK(c.exit_code == 0);
  CHECK(c.structured["result"]["dimension_form"] == 8);
  CHECK(c.structured["result"]["literal_form"] == 4);
  CHECK(c.structured["result"]["ground_truth"] == 8);
  CHECK(c.structured["result"]["literal_form_matches"] == false);
  CHECK(c.structured["result"]["flags"].size() == 1);

  for (const auto& command : command_names()) {
    if (command == "gallery") continue;
    CAPTURE(command);
    const RunReport r = run(command, gallery::two_origin_line());
    CHECK(r.exit_code == 0);
    CHECK_FALSE(r.structured.contains("wall_time_ms"));
    CHECK(r.structured.dump() == run(command, gallery::two_origin_line()).structured.dump());
  }

  RunOptions wrong_field;
  wrong_field.command = "count";
  wrong_field.field = 3;
  CHECK(run_on_document("t", document_text(gallery::three_circles()), wrong_field).exit_code == 2);

  const RunReport no_block = run("refine-check", gallery::three_circles());
  CHECK(no_block.exit_code == 2);
  CHECK(no_block.structured["error"]["code"] == "InvalidRefinement");
}

TEST_CASE("gallery entries", "[document]") {
  RunOptions o;
  o.command = "gallery";
  o.target = "list";
  const RunReport list = run_gallery(o);
  CHECK(list.structured["result"]["entries"].size() == 5);

  o.target = "two_origin_line";
  const json doc = run_gallery(o).structured["document"];
  REQUIRE(doc["pieces"].size() == 2);
  const DiagramDocument parsed = parse_document(doc);
  CHECK(parsed.system.pieces[0].labels == std::set<Label>{"l", "o1", "r"});
  CHECK(parsed.system.pieces[1].labels == std::set<Label>{"l", "o2", "r"});

  o.target = "branching_line_n";
  o.n = 3;
  const DiagramDocument branching = parse_document(run_gallery(o).structured["document"]);
  CHECK(branching.system.pieces.size() == 3);
  CHECK(canonicalize(branching.system).intersection(0b111).vertex_set() == std::set<Label>{"a"});

  o.target = "nope";
  CHECK(run_gallery(o).exit_code == 2);
}
