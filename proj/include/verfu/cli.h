/*
 * Copyright 2026 The verfu Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command implementations behind the `verfu` binary. Each returns the
// process exit code: 0 all verified, 1 verification failure, 2 usage,
// config or I/O error.

#ifndef VERFU_CLI_H_
#define VERFU_CLI_H_

#include <filesystem>
#include <ostream>
#include <vector>

#include "verfu/config.h"

namespace verfu {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

// Output file names written by CmdRun.
inline constexpr const char* kTranscriptFile = "transcript.jsonl";
inline constexpr const char* kMetricsFile = "metrics.csv";
inline constexpr const char* kSummaryFile = "summary.csv";
inline constexpr const char* kUtilityFile = "utility.csv";

int CmdKeygen(const RunConfig& config, const std::filesystem::path& out_dir, bool emit_trapdoor, std::ostream& out,
              std::ostream& err);

int CmdRun(const RunConfig& config, const std::filesystem::path& keys_dir, const std::filesystem::path& out_dir,
           bool strict, std::ostream& out, std::ostream& err);

int CmdAudit(const std::filesystem::path& transcript, const std::filesystem::path& keys_dir, std::ostream& out,
             std::ostream& err);

struct BenchSweep {
  std::vector<double> unlearn_rates{0.0, 0.1, 0.2, 0.4};
  std::vector<size_t> dims{16, 256};
  std::vector<unsigned> kappas{256};  // used for both n and p
};

// Frozen-gradient campaigns for every (kappa, d, rate) cell; one summary row
// set per cell.
int CmdBench(const RunConfig& base, const BenchSweep& sweep, const std::filesystem::path& out_csv,
             std::ostream& out, std::ostream& err);

// Argument parsing for the binary; `argv[0]` is the program name.
int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace verfu

#endif  // VERFU_CLI_H_
