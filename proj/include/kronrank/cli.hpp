#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kronrank::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kVerificationFailed = 1;
inline constexpr int kInvalidInput = 2;
inline constexpr int kBudgetExceeded = 3;

// Environment variable overriding the materialization limit (entries).
inline constexpr const char* kLimitEnv = "KRONRANK_MATERIALIZE_LIMIT";

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kronrank::cli
