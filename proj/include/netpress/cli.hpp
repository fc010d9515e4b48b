#pragma once

namespace netpress {

// Exit codes are stable contracts.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInfeasible = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInconclusive = 3;
inline constexpr int kExitDivergence = 4;

int cli_main(int argc, char** argv);

}  // namespace netpress
