#pragma once
//------------------------------------------------------------------------------
//
//   Copyright 2026 The pricematch Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include <iosfwd>
#include <string>
#include <vector>

namespace pricematch::cli {

enum ExitCode : int
{
  kSuccess       = 0,
  kNegative      = 1,
  kUsageError    = 2,
  kCapExceeded   = 3,
  kInternalError = 4,
};

/// Runs the command line `args` (args[0] is the program name), writing the
/// JSON payload to `out` and diagnostics to `err`. Returns the exit code.
int run(std::vector<std::string> const &args, std::ostream &out, std::ostream &err);

}  // namespace pricematch::cli
