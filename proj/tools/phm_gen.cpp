// phm_gen: writes synthetic rule files and packet-header traces.

#include <CLI11.hpp>

#include <iostream>

#include "phm/header_codec.hpp"
#include "phm/trace_io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic rule and trace generator"};
  app.require_subcommand(1);

  std::size_t count = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::string form = "tuple";

  auto* rules = app.add_subcommand("rules", "Write `count` distinct random rules");
  rules->add_option("--count", count)->required();
  rules->add_option("--seed", seed);
  rules->add_option("--form", form, "tuple | raw")->check(CLI::IsMember({"tuple", "raw"}));
  rules->add_option("--out", out)->required();

  std::string rules_path;
  double match = 0.1;
  std::string format = "binary";
  auto* trace = app.add_subcommand("trace", "Write a trace drawn against a rule file");
  trace->add_option("--rules", rules_path);
  trace->add_option("--count", count)->required();
  trace->add_option("--seed", seed);
  trace->add_option("--match", match, "Fraction of headers copied from rules")
      ->check(CLI::Range(0.0, 1.0));
  trace->add_option("--format", format, "binary | csv")->check(CLI::IsMember({"binary", "csv"}));
  trace->add_option("--out", out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (*rules) {
      phm::save_rules(phm::generate_rules(count, seed), out,
                      form == "raw" ? phm::RuleForm::kRaw : phm::RuleForm::kTuple);
    } else {
      std::vector<phm::Rule> loaded;
      if (!rules_path.empty()) loaded = phm::load_rules(rules_path);
      phm::TraceGenSpec spec{count, seed, match, loaded};
      phm::write_trace(phm::generate_trace(spec).headers, out,
                       format == "csv" ? phm::TraceFormat::kCsv : phm::TraceFormat::kBinary);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
