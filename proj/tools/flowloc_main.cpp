#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "flowloc/pipeline.hpp"
#include "flowloc/report.hpp"

namespace {

enum Exit { kOk = 0, kInputError = 1, kUsage = 2, kNotFailing = 3 };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw flowloc::Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

flowloc::Inputs parse_inline(const std::vector<std::string>& items) {
  flowloc::Inputs out;
  for (const std::string& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--in", "expected name=value, got '" + item + "'");
    std::string name = item.substr(0, eq);
    std::string value = item.substr(eq + 1);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) throw CLI::ValidationError("--in", "'" + value + "' is not an integer");
    if (!out.emplace(name, v).second) throw CLI::ValidationError("--in", "duplicate value for '" + name + "'");
  }
  return out;
}

flowloc::Inputs parse_ce_file(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw CLI::ValidationError("--ce", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw CLI::ValidationError("--ce", "expected a JSON object of name: integer");
  flowloc::Inputs out;
  for (const auto& [name, value] : doc.items()) {
    if (!value.is_number_integer()) throw CLI::ValidationError("--ce", "value of '" + name + "' is not an integer");
    out[name] = value.get<int64_t>();
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counterexample-driven fault localization for small annotated programs"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "localize the fault exposed by a counterexample");
  std::string program_path;
  std::vector<std::string> inline_inputs;
  std::string ce_path;
  flowloc::ExplorerConfig config;
  std::string format = "text";
  std::string dot_path;
  bool no_incremental = false;

  run->add_option("program", program_path, "source file")->required();
  run->add_option("--in", inline_inputs, "counterexample value, name=value (repeatable)");
  run->add_option("--ce", ce_path, "counterexample as a JSON object file");
  run->add_option("--bcond", config.b_cond, "maximum deviated conditions per path")->check(CLI::NonNegativeNumber);
  run->add_option("--bmcs", config.mcs.b_mcs, "maximum MCSs per path")->check(CLI::PositiveNumber);
  run->add_option("--kmax", config.mcs.k_max, "maximum MCS cardinality")->check(CLI::PositiveNumber);
  run->add_option("--lo", config.dom.lo, "lower domain bound");
  run->add_option("--hi", config.dom.hi, "upper domain bound");
  run->add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));
  run->add_option("--dot", dot_path, "write the DSA control-flow graph in DOT format");
  run->add_flag("--no-incremental", no_incremental, "fresh solver for every path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  flowloc::Counterexample ce;
  try {
    if (!ce_path.empty() && !inline_inputs.empty()) {
      throw CLI::ValidationError("--ce", "use either --ce or --in, not both");
    }
    ce.inputs = ce_path.empty() ? parse_inline(inline_inputs) : parse_ce_file(ce_path);
    config.incremental = !no_incremental;
    config.validate();
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const flowloc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return std::string(e.what()).find("cannot open") != std::string::npos ? kInputError : kUsage;
  }

  flowloc::Program program;
  try {
    program = flowloc::load_program(read_file(program_path));
  } catch (const flowloc::TypecheckError& e) {
    for (const auto& d : e.diagnostics()) {
      std::cerr << program_path << ":" << d.loc.line << ":" << d.loc.column << ": " << d.message << "\n";
    }
    return kInputError;
  } catch (const flowloc::ParseError& e) {
    std::cerr << program_path << ":" << e.what() << "\n";
    return kInputError;
  } catch (const flowloc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }

  if (!dot_path.empty()) {
    std::ofstream dot(dot_path);
    if (!dot) {
      std::cerr << "error: cannot write '" << dot_path << "'\n";
      return kInputError;
    }
    dot << flowloc::to_dot(program.cfg);
  }

  try {
    flowloc::Report report = flowloc::localize(program, ce, config);
    std::cout << (format == "json" ? flowloc::render_json(report) : flowloc::render_text(report));
  } catch (const flowloc::NothingToLocalize& e) {
    std::cerr << e.what() << "\n";
    return kNotFailing;
  } catch (const flowloc::CounterexampleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const flowloc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}
