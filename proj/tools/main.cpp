#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "octk/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"octkernel: kernelization and exact solving for odd cycle transversal"};
  app.require_subcommand(1);
  app.fallthrough();

  cli::Common common;
  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "random seed (fallback: OCTKERNEL_SEED, then 1)");
  app.add_option("--ceiling-solver", common.ceiling_solver, "search nodes before the exact solver gives up")
      ->check(CLI::PositiveNumber);
  app.add_option("--ceiling-enum", common.ceiling_enum, "separator subsets visited per component")
      ->check(CLI::PositiveNumber);

  cli::KernelizeArgs ka;
  auto* kern = app.add_subcommand("kernelize", "shrink an instance whose modulator leaves a bipartite graph of small treewidth");
  kern->add_option("-w", ka.w, "treewidth bound of G - X")->check(CLI::PositiveNumber);
  kern->add_option("input", ka.input, "instance file")->required();
  kern->add_option("-o", ka.output, "output file (default stdout)");
  kern->add_option("--trace", ka.trace, "stage trace file, '-' for stderr");

  cli::SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "exact solve; prints YES <cost> <vertices...> or NO");
  solve->add_option("input", sa.input, "instance file")->required();

  cli::GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "random instances and compositions");
  gen->add_option("kind", ga.kind, "random | outerplanar | cluster | cocluster | weighted-vc")
      ->required()
      ->check(CLI::IsMember({"random", "outerplanar", "cluster", "cocluster", "weighted-vc"}));
  gen->add_option("inputs", ga.inputs, "input instances for a composition");
  gen->add_option("-o", ga.output, "output file (default stdout); compositions also write <output>.json");
  gen->add_option("--n", ga.n, "vertices")->check(CLI::PositiveNumber);
  gen->add_option("--p", ga.p, "edge probability")->check(CLI::Range(0.0, 1.0));
  gen->add_option("-w", ga.w, "treewidth bound")->check(CLI::PositiveNumber);
  gen->add_option("--modulator", ga.modulator, "planted modulator size")->check(CLI::NonNegativeNumber);
  gen->add_option("--strategy", ga.strategy, "planted | computed")->check(CLI::IsMember({"planted", "computed"}));
  gen->add_option("--budget", ga.budget, "budget");
  gen->add_option("--count", ga.count, "composition inputs to draw when none are given")->check(CLI::PositiveNumber);
  gen->add_option("--edges", ga.edges, "edges per drawn composition input")->check(CLI::NonNegativeNumber);

  cli::VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "run the property suite and print a report");
  ver->add_option("inputs", va.inputs, "instances for the equivalence and ledger checks");
  ver->add_option("--instances", va.instances, "random instances when no inputs are given")->check(CLI::PositiveNumber);
  ver->add_option("-w", va.w, "treewidth bound")->check(CLI::PositiveNumber);
  ver->add_option("--fault", va.fault, "corrupt the kernel on purpose: none | drop-budget")
      ->check(CLI::IsMember({"none", "drop-budget"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? cli::kOk : cli::kUsage;
  }
  if (seed) {
    common.seed = *seed;
  } else if (const char* env = std::getenv("OCTKERNEL_SEED")) {
    try {
      common.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: OCTKERNEL_SEED is not a number: " << env << "\n";
      return cli::kUsage;
    }
  }

  try {
    if (*kern) return cli::cmd_kernelize(common, ka);
    if (*solve) return cli::cmd_solve(common, sa);
    if (*gen) return cli::cmd_generate(common, ga);
    return cli::cmd_verify(common, va);
  } catch (const cli::UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return cli::kUsage;
  } catch (const octk::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return cli::kUsage;
  } catch (const octk::PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return cli::kPrecondition;
  } catch (const octk::CeilingExceeded& e) {
    std::cerr << "ceiling exceeded: " << e.what() << "\n";
    return cli::kCeiling;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kUsage;
  }
}
