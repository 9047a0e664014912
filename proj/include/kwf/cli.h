/* Copyright 2026 The kwf Authors.

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       https://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License. */

// The `kwf` command line. Run() is the whole program minus process setup so
// tests can drive it in-process.

#ifndef KWF_CLI_H_
#define KWF_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace kwf {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;

struct CliConfig {
  std::string data_dir;    // --data, else $KWF_DATA_DIR, else ./kwf-data
  std::string default_ks;  // "ks = <path>" in <data_dir>/config
  int verbosity = 0;       // "verbosity = <n>" in <data_dir>/config
};

// Reads the optional `<data_dir>/config` ("key = value" lines, '#'
// comments). Throws Error{kParse} for unknown keys or bad values.
CliConfig LoadCliConfig(const std::string& data_dir);

// `args` excludes the program name.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kwf

#endif  // KWF_CLI_H_
