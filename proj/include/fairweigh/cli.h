/*
 * Copyright 2026 The fairweigh Authors.
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

#ifndef FAIRWEIGH_CLI_H_
#define FAIRWEIGH_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace fairweigh {

// Exit codes: 0 success, 1 runtime failure, 2 usage error or unreadable
// input file.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Environment variable naming the default output directory.
inline constexpr char kOutDirEnv[] = "FAIRWEIGH_OUT_DIR";

// `args` excludes the program name.
int CliMain(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);
int CliMain(int argc, char** argv);

}  // namespace fairweigh

#endif  // FAIRWEIGH_CLI_H_
