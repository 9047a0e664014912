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

// Shared test inputs: the two worked examples and paths into testdata/.

#ifndef KWF_TESTS_FIXTURES_H_
#define KWF_TESTS_FIXTURES_H_

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <string>

#include "kwf/keystructure.h"
#include "kwf/text.h"

namespace kwf::testing {

inline std::string TestData(const std::string& name) {
  return std::string(KWF_TESTDATA_DIR) + "/" + name;
}

inline constexpr const char* kSoftwareParagraph =
    "Software is a set of programs running on computer with corresponding "
    "documentation. Software is classified in three classes: system software, "
    "application software and supporting software. System software includes "
    "operating systems, compilers, database management systems and utility "
    "programs. Application software includes software for numerical "
    "computation, expert systems, etc. Supporting software includes software "
    "middleware, application server, etc.";

// The paragraph with its keyword runs in bold, as the pump should mark it.
inline constexpr const char* kSoftwareMarked =
    "Software **is a** set of programs running on computer with corresponding "
    "documentation. Software **is classified in** three classes: system "
    "software, application software **and** supporting software. System "
    "software **includes** operating systems, compilers, database management "
    "systems **and** utility programs. Application software **includes** "
    "software for numerical computation, expert systems, **etc.** Supporting "
    "software **includes** software middleware, application server, **etc.**";

inline constexpr const char* kErythrocyteSentence =
    "If the color of the blood cell is red then the blood cell is called "
    "erythrocyte.";

inline KeyStructure SoftwareKs() { return LoadKeyStructure(TestData("software.ksl")); }
inline KeyStructure ErythrocyteKs() {
  return LoadKeyStructure(TestData("erythrocyte.ksl"));
}

inline std::string TaggedSoftware() {
  return std::string("<SOFTWARE>") + kSoftwareParagraph + "</SOFTWARE>";
}

// A fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  ScratchDir() {
    static std::atomic<int> n{0};
    path_ = std::filesystem::temp_directory_path() /
            ("kwf_test_" + std::to_string(::getpid()) + "_" + std::to_string(n++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() { std::filesystem::remove_all(path_); }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  std::string str() const { return path_.string(); }
  std::string operator/(const std::string& name) const { return str() + "/" + name; }

 private:
  std::filesystem::path path_;
};

}  // namespace kwf::testing

#endif  // KWF_TESTS_FIXTURES_H_
