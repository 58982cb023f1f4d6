#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "extenlab/certificates.hpp"
#include "extenlab/error.hpp"
#include "extenlab/examples.hpp"
#include "extenlab/io.hpp"

using namespace extenlab;
using io::json;

namespace {

constexpr int kOk = 0, kRefuted = 2, kBadInput = 3, kInternal = 4;

int exit_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::invalid_argument:
    case ErrorKind::unknown_name:
    case ErrorKind::not_dyadic:
    case ErrorKind::beyond_truncation:
    case ErrorKind::parse_error:
    case ErrorKind::domain_mismatch:
    case ErrorKind::invalid_certificate:
      return kBadInput;
    default:
      return kInternal;
  }
}

int exit_for(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::verified: return kOk;
    case VerdictStatus::refuted: return kRefuted;
    case VerdictStatus::invalid_certificate: return kBadInput;
    case VerdictStatus::inconsistent_input: return kInternal;
  }
  return kInternal;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    io::write_text_file(out, text);
  }
}

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::invalid_argument, "parameter '" + item + "' is not key=value");
    try {
      std::size_t used = 0;
      const double v = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(item);
      out[item.substr(0, eq)] = v;
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::invalid_argument, "parameter '" + item + "' has a non-numeric value");
    }
  }
  return out;
}

/// A catalog name, or a space / pair file.
SpacePtr load_space(const std::string& arg, Dyadic eps, const std::map<std::string, double>& params) {
  const auto path = io::resolve_data_path(arg);
  if (arg.ends_with(".json") || std::filesystem::exists(path)) {
    const json j = io::read_json_file(arg);
    if (j.is_object() && j.contains("z_indices")) return io::pair_from_json(j).y;
    return io::space_from_json(j);
  }
  return make_space(arg, eps, params);
}

std::string family_of(const std::string& example) {
  static const std::map<std::string, std::string> m = {{"sine-not-eclosed", "sine-eclosed"},
                                                       {"sine-not-eopen", "sine-eopen"},
                                                       {"comb", "comb"},
                                                       {"hawaii", "hawaii"}};
  const auto it = m.find(example);
  if (it == m.end())
    throw Error(ErrorKind::invalid_argument, "no planar sketch for '" + example + "'; svg covers sine, comb and hawaii");
  return it->second;
}

void print_space_info(const AnnotatedSpace& s, const std::string& format) {
  if (format == "json") {
    json j;
    j["name"] = s.name;
    if (s.catalog) j["resolution"] = s.catalog->resolution.str();
    j["epsilon"] = s.resolution();
    j["dimension"] = s.net.dimension();
    j["net_size"] = s.size();
    j["path_components"] = s.component_count();
    j["component_names"] = s.component_names;
    j["clopen_atoms"] = s.clopen.atom_count;
    j["clopen_tails"] = s.clopen.tails.size();
    j["retractions"] = json::array();
    for (const auto& r : s.retractions) j["retractions"].push_back(r.name);
    j["basepoints"] = json::object();
    for (const auto& [k, v] : s.basepoints) j["basepoints"][k] = v;
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::cout << "space            " << s.name << "\n";
  if (s.catalog) std::cout << "resolution       " << s.catalog->resolution.str() << "\n";
  std::cout << "epsilon          " << s.resolution() << "\n";
  std::cout << "dimension        " << s.net.dimension() << "\n";
  std::cout << "net size         " << s.size() << "\n";
  std::cout << "path components  " << s.component_count();
  if (!s.component_names.empty()) {
    std::cout << " (";
    for (std::size_t i = 0; i < s.component_names.size() && i < 8; ++i)
      std::cout << (i ? ", " : "") << s.component_names[i];
    if (s.component_names.size() > 8) std::cout << ", ...";
    std::cout << ")";
  }
  std::cout << "\n";
  std::cout << "clopen atoms     " << s.clopen.atom_count << "\n";
  std::cout << "clopen tails     " << s.clopen.tails.size() << "\n";
  std::cout << "retractions      ";
  if (s.retractions.empty()) std::cout << "-";
  for (std::size_t i = 0; i < s.retractions.size(); ++i) std::cout << (i ? ", " : "") << s.retractions[i].name;
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"extenlab: verification lab for continuous-extension problems on compact metric spaces"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  // example list | run
  auto* example = app.add_subcommand("example", "Run or list the shipped examples");
  example->require_subcommand(1);
  auto* ex_list = example->add_subcommand("list", "List example names and anchors");
  std::string list_format = "text";
  ex_list->add_option("--format", list_format)->check(CLI::IsMember({"text", "json"}));

  auto* ex_run = example->add_subcommand("run", "Run an example and print its report");
  std::string run_name, run_eps, run_format = "text", run_out;
  std::optional<std::size_t> run_n;
  bool run_timings = false;
  ex_run->add_option("name", run_name, "Example name")->required();
  ex_run->add_option("--epsilon", run_eps, "Resolution 2^-k");
  ex_run->add_option("--n-max", run_n, "Largest n");
  ex_run->add_option("--format", run_format)->check(CLI::IsMember({"text", "json", "csv", "svg"}));
  ex_run->add_option("--out", run_out, "Write the report here instead of stdout");
  ex_run->add_flag("--timings", run_timings, "Include wall time (output is then not reproducible)");

  // certify
  auto* certify = app.add_subcommand("certify", "Check a certificate file against a problem file");
  std::string problem_path, cert_path, certify_format = "text";
  certify->add_option("problem", problem_path)->required();
  certify->add_option("certificate", cert_path)->required();
  certify->add_option("--format", certify_format)->check(CLI::IsMember({"text", "json"}));

  // export
  auto* exporter = app.add_subcommand("export", "Write a family instance as problem and certificate files");
  std::string exp_family, exp_eps = "2^-8", exp_variant, exp_problem, exp_cert;
  std::optional<std::size_t> exp_n;
  exporter->add_option("family", exp_family)->required();
  exporter->add_option("--n", exp_n, "Member index; the limit when omitted");
  exporter->add_option("--epsilon", exp_eps);
  exporter->add_option("--variant", exp_variant, "Obstruction variant: crossing or path-component");
  exporter->add_option("--problem", exp_problem)->required();
  exporter->add_option("--certificate", exp_cert)->required();

  // space info
  auto* space = app.add_subcommand("space", "Inspect spaces");
  space->require_subcommand(1);
  auto* info = space->add_subcommand("info", "Net size, path components and clopen atoms of a space");
  std::string info_name, info_eps = "2^-6", info_file, info_format = "text";
  std::vector<std::string> info_params;
  info->add_option("name", info_name, "Catalog name");
  info->add_option("--epsilon", info_eps);
  info->add_option("--param", info_params, "Catalog parameter key=value");
  info->add_option("--file", info_file, "Space or pair file");
  info->add_option("--format", info_format)->check(CLI::IsMember({"text", "json"}));

  // construct
  auto* construct = app.add_subcommand("construct", "Build cones, products, opc unions and catalog pairs");
  std::string cons_op, cons_eps = "2^-6", cons_out;
  std::vector<std::string> cons_args, cons_params;
  std::size_t cons_blocks = 4;
  construct->add_option("op", cons_op)->required()->check(CLI::IsMember({"cone", "product", "opc", "pair", "opc-pair"}));
  construct->add_option("args", cons_args, "Spaces (catalog names or files) or a pair name");
  construct->add_option("--epsilon", cons_eps);
  construct->add_option("--param", cons_params, "Catalog parameter key=value for every named space");
  construct->add_option("--blocks", cons_blocks, "Block count for opc-pair");
  construct->add_option("--out", cons_out, "Output file; stdout when omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kBadInput;
  }

  try {
    if (ex_list->parsed()) {
      const auto entries = list_examples();
      if (list_format == "json") {
        json j = json::array();
        for (const auto& e : entries)
          j.push_back({{"name", e.name},
                       {"anchor", e.anchor},
                       {"summary", e.summary},
                       {"default_resolution", e.default_resolution.str()},
                       {"default_n_max", e.default_n_max}});
        std::cout << j.dump(2) << "\n";
      } else {
        for (const auto& e : entries) std::printf("%-18s %s\n", e.name.c_str(), e.anchor.c_str());
      }
      return kOk;
    }

    if (ex_run->parsed()) {
      ExampleParams params;
      if (!run_eps.empty()) params.resolution = Dyadic::parse(run_eps);
      params.n_max = run_n;
      const Report report = run_example(run_name, params);
      if (run_format == "json") {
        emit(io::to_json(report, run_timings).dump(2) + "\n", run_out);
      } else if (run_format == "csv") {
        emit(io::report_csv(report), run_out);
      } else if (run_format == "svg") {
        const MapFamily fam = example_family(family_of(report.example), report.resolution);
        const MapSample member = fam.member(std::min(report.n_max, fam.n_max));
        emit(io::svg_sketch(*fam.codomain, {{&member, "#1f5fbf"}, {&fam.limit, "#c0392b"}},
                            report.example + " " + report.resolution.str() + ": phi_" +
                                std::to_string(std::min(report.n_max, fam.n_max)) + " (blue), limit (red)"),
             run_out);
      } else {
        emit(io::report_text(report, run_timings), run_out);
      }
      return report.exit_code();
    }

    if (certify->parsed()) {
      io::Problem problem;
      Certificate cert;
      try {
        problem = io::problem_from_json(io::read_json_file(problem_path));
        cert = io::certificate_from_json(io::read_json_file(cert_path), problem);
      } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kBadInput;
      }
      const Verdict v = check_certificate(problem.pair, problem.phi, cert);
      if (certify_format == "json") {
        std::cout << io::to_json(v).dump(2) << "\n";
      } else {
        std::cout << "certificate  " << v.kind << "\n";
        std::cout << "epsilon      " << v.epsilon << "\n";
        for (const auto& t : v.trace) std::cout << (t.passed ? "[ok]   " : "[FAIL] ") << t.check << ": " << t.detail << "\n";
        std::cout << "verdict      " << to_string(v.status) << " (margin " << v.margin << ")\n";
      }
      return exit_for(v.status);
    }

    if (exporter->parsed()) {
      const MapFamily fam = example_family(exp_family, Dyadic::parse(exp_eps));
      const MapSample phi = exp_n ? fam.member(*exp_n) : fam.limit;
      Certificate cert;
      try {
        cert = build_negative_certificate(fam, exp_n, exp_variant);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::refused) throw;
        cert = build_positive_certificate(fam, exp_n);
      }
      io::write_text_file(exp_problem, io::to_json(io::Problem{fam.pair, phi}).dump(1) + "\n");
      io::write_text_file(exp_cert, io::to_json(cert).dump(1) + "\n");
      return kOk;
    }

    if (info->parsed()) {
      if (info_name.empty() == info_file.empty())
        throw Error(ErrorKind::invalid_argument, "give exactly one of a catalog name or --file");
      const SpacePtr s = info_file.empty() ? make_space(info_name, Dyadic::parse(info_eps), parse_params(info_params))
                                           : load_space(info_file, Dyadic::parse(info_eps), {});
      print_space_info(*s, info_format);
      return kOk;
    }

    if (construct->parsed()) {
      const Dyadic eps = Dyadic::parse(cons_eps);
      const auto params = parse_params(cons_params);
      json out;
      if (cons_op == "cone") {
        if (cons_args.size() != 1) throw Error(ErrorKind::invalid_argument, "cone takes one space");
        out = io::to_json(*cone(load_space(cons_args[0], eps, params)));
      } else if (cons_op == "product") {
        if (cons_args.size() != 2) throw Error(ErrorKind::invalid_argument, "product takes two spaces");
        out = io::to_json(*product(load_space(cons_args[0], eps, params), load_space(cons_args[1], eps, params)));
      } else if (cons_op == "opc") {
        if (cons_args.empty()) throw Error(ErrorKind::invalid_argument, "opc takes at least one space");
        std::vector<SpacePtr> blocks;
        for (const auto& a : cons_args) blocks.push_back(load_space(a, eps, params));
        out = io::to_json(*opc_disjoint_union(blocks).space);
      } else if (cons_op == "pair") {
        if (cons_args.size() != 1) throw Error(ErrorKind::invalid_argument, "pair takes one catalog pair name");
        out = io::to_json(extenlab::make_pair(cons_args[0], eps));
      } else {
        if (cons_args.size() != 1) throw Error(ErrorKind::invalid_argument, "opc-pair takes one catalog pair name");
        if (cons_blocks < 1) throw Error(ErrorKind::invalid_argument, "--blocks must be >= 1");
        const std::vector<SpacePair> parts(cons_blocks, extenlab::make_pair(cons_args[0], eps));
        out = io::to_json(opc_pair(parts).pair);
      }
      emit(out.dump(1) + "\n", cons_out);
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kBadInput;
}
