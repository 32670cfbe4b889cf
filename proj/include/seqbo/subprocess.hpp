/*
 * Copyright 2026 The seqbo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string>

namespace seqbo {

struct SubprocessResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string output;  // captured standard output
};

// Runs a shell command, writes input to its stdin, captures stdout, and
// enforces a wall-clock deadline.  On timeout the whole process group is
// killed.  Stderr passes through to the caller's stderr.
SubprocessResult run_command(const std::string& command,
                             const std::string& input,
                             double timeout_seconds);

}  // namespace seqbo
