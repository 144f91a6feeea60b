// Copyright 2026 The cvfield Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy of
// the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations under
// the License.

#ifndef CVFIELD_CLI_H_
#define CVFIELD_CLI_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cvfield/types.h"

namespace cvfield {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs one command line (without the program name). Results go to `out`,
// diagnostics and usage text to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

// Parses a frame selector: "all", an index "7", an inclusive range "3-9", or
// a comma-separated list of those. Returns the selected indices below
// frame_count in increasing order. Throws InvalidArgument on bad syntax.
std::vector<std::size_t> ParseFrameSelector(const std::string& selector,
                                            std::size_t frame_count);

struct BenchRecord {
  std::string mode;
  double ms_per_frame = 0;
  double frames_per_s = 0;
};

// Times three extraction pipelines over every GOP, `reps` times each, and
// reports the median: "decode" (plain P-frame reconstruction),
// "decode+accumulate" (plus feed-forward accumulation) and
// "decode+backtrace" (plus per-frame explicit composition). Throws
// InvalidArgument when reps < 1.
std::vector<BenchRecord> BenchExtract(std::span<const EncodedGop> gops, int reps);
std::vector<BenchRecord> BenchExtract(const std::filesystem::path& container,
                                      int reps);

// JSON object on one line: {"mode":...,"ms_per_frame":...,"frames_per_s":...}
std::string ToJsonLine(const BenchRecord& record);

}  // namespace cvfield

#endif  // CVFIELD_CLI_H_
