#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hbz/seqspace.hpp"

namespace hbz::cli {

enum ExitCode : int {
  kOk = 0,
  kNumericalFailure = 1,
  kCertificateFailure = 2,
  kUsage = 64,
  kEvalRange = 65,
  kBadInput = 66,
};

inline constexpr int kSchemaVersion = 1;

/// Shortest decimal that parses back to exactly `v`.
std::string format_double(double v);

/// zeros.csv: header `n,tau_n,delta_n`, then one row per zero.
std::string zeros_csv(const CoeffSequence& delta);

/// Parses zeros.csv back into the delta sequence. Throws std::runtime_error
/// on a malformed file or on tau_n inconsistent with delta_n.
CoeffSequence parse_zeros_csv(const std::string& text);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

/// Runs one command. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hbz::cli
