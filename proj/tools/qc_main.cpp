// SPDX-License-Identifier: MIT
#include "qc/grid.hpp"
#include "qc/io.hpp"
#include "qc/patch.hpp"
#include "qc/rational.hpp"
#include "qc/shuffle.hpp"
#include "qc/tensor.hpp"
#include "qc/verify.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using namespace qc;

[[nodiscard]] std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << text;
}

[[nodiscard]] MassGrid load_grid(const std::string& path) {
  return grid_from_json(parse_json_text(read_file(path), path));
}

[[nodiscard]] std::vector<Rat> parse_rat_list(const std::string& text,
                                              const std::string& context) {
  std::vector<Rat> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string tok =
        comma == std::string::npos ? text.substr(pos) : text.substr(pos, comma - pos);
    try {
      out.push_back(rat_from_string(tok));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(context + ": " + e.what());
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

[[nodiscard]] std::vector<int> parse_int_list(const std::string& text,
                                              const std::string& context) {
  std::vector<int> out;
  for (const Rat& r : parse_rat_list(text, context)) {
    if (denominator(r) != 1 || numerator(r) < 1 || numerator(r) > 1000000) {
      throw std::invalid_argument(context + ": entries must be integers in [1, 1000000]");
    }
    out.push_back(numerator(r).convert_to<int>());
  }
  return out;
}

struct CheckArgs {
  std::string grid_path;
  std::string kind = "quasicopula";
  std::string out_path;
};

int run_check(const CheckArgs& a) {
  const MassGrid g = load_grid(a.grid_path);
  VerifyReport report;
  if (a.kind == "copula") {
    report = check_copula(g);
  } else if (a.kind == "geometric") {
    report = check_geometric_condition(g);
  } else {
    report = check_quasicopula(g);
  }
  write_output(a.out_path, json_to_text(report_to_json(report)));
  return report.passed ? 0 : 1;
}

struct PatchArgs {
  std::string pattern_path;
  std::string strategy = "half";
  std::string weights_h, weights_v;
  bool mirror_h = false;
  bool mirror_v = false;
  std::string trace_path, normalize_path, report_path, out_path;
};

int run_patch_extend(const PatchArgs& a) {
  const PatchPattern pattern = pattern_from_csv(read_file(a.pattern_path));
  ExtendOptions opt;
  if (a.strategy == "half") {
    opt.strategy = ForkStrategy::half;
  } else if (a.strategy == "west-north") {
    opt.strategy = ForkStrategy::west_north;
  } else if (a.strategy == "east-south") {
    opt.strategy = ForkStrategy::east_south;
  } else {
    opt.strategy = ForkStrategy::custom;
    if (a.weights_h.empty() || a.weights_v.empty()) {
      throw std::invalid_argument(
          "patch-extend: --strategy custom needs --weights-h and --weights-v");
    }
    opt.weights.w_h = parse_rat_list(a.weights_h, "--weights-h");
    opt.weights.w_v = parse_rat_list(a.weights_v, "--weights-v");
  }
  opt.mirror_h = a.mirror_h;
  opt.mirror_v = a.mirror_v;
  opt.with_trace = !a.trace_path.empty();

  const ExtensionResult r = extend(pattern, opt);
  std::cerr << "mu=" << rat_to_string(r.mu) << "\n";
  std::cerr << "N=" << r.N << "\n";
  write_output(a.out_path, table_to_csv(r));
  if (!a.trace_path.empty()) {
    write_output(a.trace_path, json_to_text(r.trace));
  }
  if (!a.normalize_path.empty()) {
    const MassGrid g = normalize(r);
    write_output(a.normalize_path, json_to_text(grid_to_json(g)));
    if (!a.report_path.empty()) {
      write_output(a.report_path, json_to_text(report_to_json(check_quasicopula(g))));
    }
  }
  return 0;
}

struct TwoGridArgs {
  std::string a_path, b_path, out_path;
  int m = 0;
};

int run_tensor(const TwoGridArgs& a) {
  const MassGrid ga = load_grid(a.a_path);
  const MassGrid gb = load_grid(a.b_path);
  write_output(a.out_path, json_to_text(grid_to_json(tensor_product(ga, gb, a.m))));
  return 0;
}

int run_dist(const TwoGridArgs& a) {
  const MassGrid ga = load_grid(a.a_path);
  const MassGrid gb = load_grid(a.b_path);
  const SupDistance d = sup_norm_distance_witness(ga, gb);
  std::string text = "distance = " + rat_to_string(d.value) + "\nwitness = (";
  for (std::size_t k = 0; k < d.witness.size(); ++k) {
    if (k > 0) text += ", ";
    text += rat_to_string(d.witness[k]);
  }
  text += ")\n";
  write_output(a.out_path, text);
  return 0;
}

struct ShuffleArgs {
  std::string grid_path, spec_path, out_path;
};

int run_shuffle(const ShuffleArgs& a) {
  const MassGrid g = load_grid(a.grid_path);
  const ShuffleSpec spec = shuffle_spec_from_json(parse_json_text(read_file(a.spec_path),
                                                                  a.spec_path));
  write_output(a.out_path, json_to_text(grid_to_json(apply_shuffle(g, spec))));
  return 0;
}

struct SomArgs {
  std::string copula_path, points_path, out_path;
};

int run_som_interpolate(const SomArgs& a) {
  const MassGrid g = load_grid(a.copula_path);
  const std::vector<Point> pts =
      points_from_json(parse_json_text(read_file(a.points_path), a.points_path));
  write_output(a.out_path, json_to_text(som_to_json(som_interpolate(g, pts))));
  return 0;
}

struct ApproxArgs {
  std::string q1_path, q2_path, m_list, out_path;
  int digits = 0;
};

int run_approx(const ApproxArgs& a) {
  const MassGrid q1 = load_grid(a.q1_path);
  const MassGrid q2 = load_grid(a.q2_path);
  const std::vector<int> ms = parse_int_list(a.m_list, "--m-list");
  if (ms.empty()) throw std::invalid_argument("--m-list: needs at least one entry");
  std::string csv = "m,dist_q1_a1,dist_q2_a2,bound_2d_over_m";
  if (a.digits > 0) csv += ",dist_q1_a1_dec,dist_q2_a2_dec,bound_2d_over_m_dec";
  csv += "\n";
  for (int m : ms) {
    const ApproxPair pair = approx_pair(q1, q2, m);
    csv += std::to_string(m);
    csv += "," + rat_to_string(pair.certified.dist_q1_a1);
    csv += "," + rat_to_string(pair.certified.dist_q2_a2);
    csv += "," + rat_to_string(pair.certified.bound);
    if (a.digits > 0) {
      csv += "," + rat_to_decimal_string(pair.certified.dist_q1_a1, a.digits);
      csv += "," + rat_to_decimal_string(pair.certified.dist_q2_a2, a.digits);
      csv += "," + rat_to_decimal_string(pair.certified.bound, a.digits);
    }
    csv += "\n";
  }
  write_output(a.out_path, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-rational quasi-copula grid toolbox"};
  app.require_subcommand(1);

  CheckArgs check_args;
  CLI::App* check_cmd = app.add_subcommand("check", "Verify copula/quasi-copula axioms");
  check_cmd->add_option("--grid", check_args.grid_path, "Grid JSON file")->required();
  check_cmd->add_option("--kind", check_args.kind, "Checker to run")
      ->check(CLI::IsMember({"copula", "quasicopula", "geometric"}));
  check_cmd->add_option("--out", check_args.out_path, "Report file (default stdout)");

  PatchArgs patch_args;
  CLI::App* patch_cmd =
      app.add_subcommand("patch-extend", "Embed a signed pattern in a quasi-copula table");
  patch_cmd->add_option("--pattern", patch_args.pattern_path, "Pattern CSV, rows north to south")
      ->required();
  patch_cmd->add_option("--strategy", patch_args.strategy, "Forking strategy")
      ->check(CLI::IsMember({"half", "west-north", "east-south", "custom"}));
  patch_cmd->add_option("--weights-h", patch_args.weights_h,
                        "Custom west fractions, one per row (south first)");
  patch_cmd->add_option("--weights-v", patch_args.weights_v,
                        "Custom south fractions, one per column (west first)");
  patch_cmd->add_flag("--mirror-h", patch_args.mirror_h, "Mirror free corner choices east-west");
  patch_cmd->add_flag("--mirror-v", patch_args.mirror_v,
                      "Mirror free corner choices north-south");
  patch_cmd->add_option("--trace", patch_args.trace_path, "Write the step trace JSON here");
  patch_cmd->add_option("--normalize", patch_args.normalize_path,
                        "Write the normalized grid JSON here");
  CLI::Option* report_opt = patch_cmd->add_option(
      "--report", patch_args.report_path, "Write the quasi-copula report of the normalized grid");
  report_opt->needs(patch_cmd->get_option("--normalize"));
  patch_cmd->add_option("--out", patch_args.out_path, "Table CSV file (default stdout)");

  TwoGridArgs tensor_args;
  CLI::App* tensor_cmd = app.add_subcommand("tensor", "Tensor product of two grids");
  tensor_cmd->add_option("--a", tensor_args.a_path, "First grid JSON")->required();
  tensor_cmd->add_option("--b", tensor_args.b_path, "Second grid JSON")->required();
  tensor_cmd->add_option("--m", tensor_args.m, "Uniform mesh size")->required();
  tensor_cmd->add_option("--out", tensor_args.out_path, "Product grid file (default stdout)");

  ShuffleArgs shuffle_args;
  CLI::App* shuffle_cmd = app.add_subcommand("shuffle", "Apply an interval shuffle to a grid");
  shuffle_cmd->add_option("--grid", shuffle_args.grid_path, "Grid JSON file")->required();
  shuffle_cmd->add_option("--spec", shuffle_args.spec_path, "Shuffle spec JSON file")->required();
  shuffle_cmd->add_option("--out", shuffle_args.out_path, "Shuffled grid file (default stdout)");

  SomArgs som_args;
  CLI::App* som_cmd =
      app.add_subcommand("som-interpolate", "Shuffle of min through a copula's values");
  som_cmd->add_option("--copula", som_args.copula_path, "Copula grid JSON file")->required();
  som_cmd->add_option("--points", som_args.points_path, "Interpolation points JSON file")
      ->required();
  som_cmd->add_option("--out", som_args.out_path, "Shuffle-of-min file (default stdout)");

  ApproxArgs approx_args;
  CLI::App* approx_cmd =
      app.add_subcommand("approx", "Shuffle approximation experiment over a mesh list");
  approx_cmd->add_option("--q1", approx_args.q1_path, "First quasi-copula grid JSON")->required();
  approx_cmd->add_option("--q2", approx_args.q2_path, "Second quasi-copula grid JSON")
      ->required();
  approx_cmd->add_option("--m-list", approx_args.m_list, "Comma-separated mesh sizes")
      ->required();
  approx_cmd->add_option("--digits", approx_args.digits, "Add decimal columns with N digits")
      ->check(CLI::PositiveNumber);
  approx_cmd->add_option("--out", approx_args.out_path, "CSV file (default stdout)");

  TwoGridArgs dist_args;
  CLI::App* dist_cmd = app.add_subcommand("dist", "Exact sup-norm distance between two grids");
  dist_cmd->add_option("--a", dist_args.a_path, "First grid JSON")->required();
  dist_cmd->add_option("--b", dist_args.b_path, "Second grid JSON")->required();
  dist_cmd->add_option("--out", dist_args.out_path, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (check_cmd->parsed()) return run_check(check_args);
    if (patch_cmd->parsed()) return run_patch_extend(patch_args);
    if (tensor_cmd->parsed()) return run_tensor(tensor_args);
    if (shuffle_cmd->parsed()) return run_shuffle(shuffle_args);
    if (som_cmd->parsed()) return run_som_interpolate(som_args);
    if (approx_cmd->parsed()) return run_approx(approx_args);
    if (dist_cmd->parsed()) return run_dist(dist_args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
