#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gmlkm::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsageError = 1,
  kInputError = 2,
  kIntegrityError = 3,
};

struct GenerateArgs {
  std::string config;
  std::string out_dir;
};

struct AssociateArgs {
  std::string topology;
  std::string measurements;
  std::string out_dir;
  std::string variant = "gmlkm-ec";
  std::uint64_t seed = 1;
  int sensors_per_block = 3;
  bool strict = false;  // treat trace conflicts as integrity errors
};

struct EvaluateArgs {
  std::string config;
  std::vector<std::string> variants;
  int trials = 30;
  std::uint64_t seed = 1;
  std::string out;
  int sensors_per_block = 3;
  unsigned threads = 0;
};

/// Each command reports progress on `log` and returns an ExitCode. Input
/// and integrity errors are caught here and mapped to their codes.
int cmd_generate(const GenerateArgs& args, std::ostream& log);
int cmd_associate(const AssociateArgs& args, std::ostream& log);
int cmd_evaluate(const EvaluateArgs& args, std::ostream& log);
/// Builds the five-target worked example in memory and prints its pairing
/// and merge matrices plus the recovered trajectories.
int cmd_demo(std::ostream& out);

}  // namespace gmlkm::cli
