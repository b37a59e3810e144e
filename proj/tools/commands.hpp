#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

// exit codes
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kPrecondition = 2;
constexpr int kCeiling = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 1;
  std::uint64_t ceiling_solver = 5'000'000;
  std::uint64_t ceiling_enum = 2'000'000;
};

struct KernelizeArgs {
  int w = 1;
  std::string input;
  std::string output;  // empty: stdout
  std::string trace;   // empty: none, "-": stderr
};

struct SolveArgs {
  std::string input;
};

struct GenerateArgs {
  std::string kind;  // random | outerplanar | cluster | cocluster | weighted-vc
  std::vector<std::string> inputs;
  std::string output;
  int n = 12;
  double p = 0.3;
  int w = 1;
  int modulator = 3;
  std::string strategy = "planted";
  std::optional<std::int64_t> budget;
  int count = 2;   // composition inputs when none are given
  int edges = 4;
};

struct VerifyArgs {
  std::vector<std::string> inputs;
  int instances = 40;
  int w = 1;
  std::string fault = "none";
};

int cmd_kernelize(const Common& c, const KernelizeArgs& a);
int cmd_solve(const Common& c, const SolveArgs& a);
int cmd_generate(const Common& c, const GenerateArgs& a);
int cmd_verify(const Common& c, const VerifyArgs& a);

}  // namespace cli
