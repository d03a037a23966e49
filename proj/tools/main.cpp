#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "nhcech/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Cech cohomology and line bundles on glued nerve diagrams"};
  app.require_subcommand(1);

  nhcech::RunOptions options;
  std::uint32_t field = 0;
  std::string report_path;
  bool all_gallery = false;
  app.add_option("--field", field, "prime modulus of the coefficient field (default: the document's, else 2)");
  app.add_option("--report", report_path, "write the structured JSON report to this path");
  app.add_flag("--timing", options.timing, "include wall time in the structured report");

  int qmax = -1;
  int q = -1;
  for (const auto& name : nhcech::command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    if (name == "gallery") {
      sub->add_option("name", options.target, "entry name, or 'list'")->required();
      sub->add_option("--n", options.n, "piece count for branching_line_n");
      sub->add_option("--seed", options.seed, "seed for random");
      continue;
    }
    sub->add_option("file", options.target, "diagram document (JSON)");
    sub->add_flag("--all-gallery", all_gallery, "run over every gallery entry instead of a file");
    sub->add_option("--seed", options.seed, "seed for the random gallery entry");
    if (name == "cohomology" || name == "mv" || name == "collapse-check" || name == "refine-check") {
      sub->add_option("--qmax", qmax, "highest degree (default: union nerve dimension)");
    }
    if (name == "fibred") sub->add_option("--q", q, "single degree (default: 0..2)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  options.command = app.get_subcommands().front()->get_name();
  if (field != 0) options.field = field;
  if (qmax >= 0) options.qmax = qmax;
  if (q >= 0) options.q = q;

  nhcech::RunReport report;
  if (all_gallery) {
    report = nhcech::run_all_gallery(options);
  } else if (options.target.empty()) {
    std::cerr << "error: a document path or --all-gallery is required\n";
    return 2;
  } else {
    report = nhcech::run_command(options);
  }
  if (options.command == "gallery" && options.target == "random" && report.exit_code == 0) {
    std::cerr << "seed: " << options.seed << "\n";
  }

  (report.exit_code == 2 ? std::cerr : std::cout) << report.human;
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << report_path << "\n";
      return 2;
    }
    out << report.structured.dump(2) << "\n";
  }
  return report.exit_code;
}
