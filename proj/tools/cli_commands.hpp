/* Copyright 2026 The gazesal Authors
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
 *
 */

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gazesal::cli {

enum ExitCode : int {
  kOk = 0,
  kFindings = 1,
  kInputError = 2,
  kDegenerate = 3,
};

/// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_validate_maps(const std::string& manifest_path, const std::string& attributes_path, std::ostream& out,
                      std::ostream& err);

}  // namespace gazesal::cli
