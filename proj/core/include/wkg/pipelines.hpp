#pragma once

#include <string>

#include "wkg/run_config.hpp"

namespace wkg {

// Exit-code contract: 0 ok, 2 bad config, 3 blow-up, 4 non-contraction,
// 5 verification failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBlowUp = 3;
inline constexpr int kExitNonContraction = 4;
inline constexpr int kExitVerifyFail = 5;

int cmd_simulate(const RunConfig& cfg);
int cmd_construct(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);
int cmd_oracle(const RunConfig& cfg);
int cmd_plotdata(const std::string& artifact_dir, const std::string& which,
                 const std::string& out_path);

}  // namespace wkg
