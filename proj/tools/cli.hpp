#pragma once

// Command-line front end. `run` is the whole program minus process setup so
// tests can drive it in-process.

#include <complex>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cknet/error.hpp"

namespace cknet::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kInvariant = 3,
  kNumerical = 4,
};

int exit_code(ErrorKind kind);

/// Parses "re+imi" style literals: "1.5", "2i", "-i", "0.3-1.2e-2i".
/// Throws ParseError.
std::complex<double> parse_complex(std::string_view text);

/// Parses "KxL". Throws ParseError.
std::pair<int, int> parse_dims(std::string_view text);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cknet::cli
