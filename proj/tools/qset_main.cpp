#include <unistd.h>

#include <cstdlib>
#include <cstring>
#include <iostream>

#include "CLI11.hpp"
#include "qset/cli.hpp"

int main(int argc, char** argv) {
  using namespace qset::cli;
  using qset::Count;
  RunConfig config;
  std::string format = "text";

  CLI::App app{"qset: quasi-set kernel, qED universe audits and category-law checks"};
  app.require_subcommand(1);
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", config.seed, "Random seed")->capture_default_str();
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--cap-power", config.caps.power_operand, "Largest qcard accepted by pow")
        ->check(CLI::Range(Count{0}, kMaxCapPower));
    sub->add_option("--cap-product", config.caps.product_result, "Largest qcard produced by prod")
        ->check(CLI::Range(Count{0}, kMaxCapProduct));
    sub->add_option("--depth", config.depth, "Default build depth");
  };
  auto* eval = app.add_subcommand("eval", "Run a script and print its values");
  eval->add_option("file", config.input_path, "Script path, - for stdin")->required();
  add_common(eval);
  auto* audit = app.add_subcommand("audit", "Audit the fragments a script builds");
  audit->add_option("file", config.input_path, "Script path, - for stdin")->required();
  add_common(audit);
  auto* laws = app.add_subcommand("laws", "Check the category laws on generated quasi-functions");
  laws->add_option("--samples", config.samples, "Random composable chains")->capture_default_str();
  add_common(laws);
  auto* repl = app.add_subcommand("repl", "Interactive session");
  add_common(repl);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  if (eval->parsed()) config.mode = Mode::eval;
  if (audit->parsed()) config.mode = Mode::audit;
  if (laws->parsed()) config.mode = Mode::laws;
  if (repl->parsed()) config.mode = Mode::repl;
  config.format = format == "json" ? Format::json : Format::text;
  const char* color_env = std::getenv("QSET_COLOR");
  config.color = isatty(STDOUT_FILENO) && !(color_env != nullptr && std::strcmp(color_env, "0") == 0);
  config.interactive = isatty(STDIN_FILENO);
  return run(config, std::cin, std::cout, std::cerr);
}
