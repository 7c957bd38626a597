#pragma once

#include <iosfwd>

namespace symladder {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitComputation = 2;

/// Entry point of the `symladder` command line tool. Subcommands:
/// register, shoot, midpoint, symmetry, pole-ladder, errors, strain, synth.
int cli_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace symladder
