// tbt: generate block TBT specs, verify their identities and run recovery.
//
// Exit codes: 0 pass, 1 verdict fail, 2 invalid input (usage or schema),
// 3 I/O error, 4 numerical error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tbt/errors.hpp"
#include "tbt/pipeline.hpp"
#include "tbt/recovery.hpp"
#include "tbt/report.hpp"
#include "tbt/spec_io.hpp"

namespace {

enum ExitCode : int { kPass = 0, kFail = 1, kInvalid = 2, kIo = 3, kNumeric = 4 };

tbt::DimTriple parse_dims(const std::string& text) {
  std::vector<int> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw std::invalid_argument("--dims: '" + item + "' is not an integer");
    parts.push_back(v);
  }
  if (parts.size() != 3) throw std::invalid_argument("--dims expects m1,m2,m3");
  return tbt::DimTriple::make(parts[0], parts[1], parts[2]);
}

tbt::OutputFormat parse_format(const std::string& text) {
  if (text == "text") return tbt::OutputFormat::text;
  if (text == "json") return tbt::OutputFormat::json;
  throw std::invalid_argument("--format must be text or json");
}

struct Options {
  std::string dims = "2,2,2";
  std::string cls = "general";
  std::uint64_t seed = 0;
  std::optional<double> shift;
  std::string out;
  std::string spec_path;
  std::vector<std::string> tols;
  int samples = 5;
  std::uint64_t sample_seed = 1;
  std::string format = "text";
};

tbt::RunConfig make_config(const Options& o) {
  tbt::RunConfig config;
  for (const auto& t : o.tols) {
    auto [name, value] = tbt::parse_tol_override(t);
    tbt::default_tolerance(name);
    config.tol_overrides[name] = value;
  }
  config.samples = o.samples;
  config.sample_seed = o.sample_seed;
  config.format = parse_format(o.format);
  config.validate();
  return config;
}

int emit(const tbt::VerificationReport& report, tbt::OutputFormat format) {
  std::cout << (format == tbt::OutputFormat::json ? tbt::report_to_json(report)
                                                   : tbt::report_to_text(report));
  return report.pass() ? kPass : kFail;
}

int cmd_gen(const Options& o) {
  const tbt::DimTriple dims = parse_dims(o.dims);
  const tbt::StructureClass cls = tbt::parse_structure_class(o.cls);
  const tbt::SpecFile file{tbt::random_spec(dims, o.seed, cls, o.shift), o.seed};
  if (o.out.empty())
    std::cout << tbt::dump_spec(file);
  else
    tbt::save_spec(o.out, file);
  return kPass;
}

int cmd_info(const Options& o) {
  const tbt::DimTriple dims = parse_dims(o.dims);
  const tbt::StructureClass cls = tbt::parse_structure_class(o.cls);
  const tbt::InfoCount c = tbt::info_count(dims, cls);
  if (parse_format(o.format) == tbt::OutputFormat::json) {
    nlohmann::ordered_json doc;
    doc["dims"] = {dims.m1, dims.m2, dims.m3};
    doc["class"] = std::string(tbt::to_string(cls));
    doc["full_T_entries"] = c.full_T_entries;
    auto naive = nlohmann::ordered_json::array();
    for (const auto& n : c.naive_recovery_entries)
      if (n) naive.push_back(*n);
    doc["naive_recovery_entries"] = naive;
    doc["minimal_entries"] = c.minimal_entries;
    std::cout << doc.dump(2) << "\n";
    return kPass;
  }
  std::cout << "dims " << dims.m1 << "," << dims.m2 << "," << dims.m3 << "  class "
            << tbt::to_string(cls) << "\n"
            << "full T entries:        " << c.full_T_entries << "\n";
  for (std::size_t p = 0; p < c.naive_recovery_entries.size(); ++p)
    if (const auto& n = c.naive_recovery_entries[p])
      std::cout << "naive recovery (p=" << p + 1 << "): " << *n << "\n";
  std::cout << "minimal entries:       " << c.minimal_entries << "\n";
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block Toeplitz-block-Toeplitz identities and inverse recovery"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "Write a seeded random spec");
  gen->add_option("--dims", o.dims, "m1,m2,m3 (each at least 2)");
  gen->add_option("--class", o.cls, "general, self_adjoint, dstu or toeplitz3d");
  gen->add_option("--seed", o.seed, "Generator seed");
  gen->add_option("--shift", o.shift, "Diagonal shift added to t_0^(0)");
  gen->add_option("--out", o.out, "Output path (stdout if omitted)");

  auto* verify = app.add_subcommand("verify", "Check the displacement identities of a spec");
  auto* recover = app.add_subcommand("recover", "Compare recovery from minimal data to direct values");
  for (auto* sub : {verify, recover}) {
    sub->add_option("spec", o.spec_path, "Spec file")->required();
    sub->add_option("--tol", o.tols, "Tolerance override name=value (repeatable)");
    sub->add_option("--format", o.format, "text or json");
  }
  recover->add_option("--samples", o.samples, "Number of sample pairs");
  recover->add_option("--sample-seed", o.sample_seed, "Sample point seed");

  auto* info = app.add_subcommand("info", "Print information counts");
  info->add_option("--dims", o.dims, "m1,m2,m3");
  info->add_option("--class", o.cls, "Structure class");
  info->add_option("--format", o.format, "text or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (gen->parsed()) return cmd_gen(o);
    if (info->parsed()) return cmd_info(o);
    const tbt::RunConfig config = make_config(o);
    const tbt::SpecFile file = tbt::load_spec(o.spec_path);
    if (verify->parsed()) return emit(tbt::run_verify(file, config), config.format);
    return emit(tbt::run_recover(file, config), config.format);
  } catch (const tbt::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kInvalid;
  } catch (const tbt::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const tbt::InvalidDims& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const tbt::SpecIncomplete& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kInvalid;
  } catch (const tbt::Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
}
