// Copyright 2026 the bevkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

namespace bevkit {

/// Entry point behind the command line tool. args excludes argv[0].
/// Returns 0 on success, 1 on data errors (a machine-readable JSON error
/// record goes to stderr), 2 on usage errors.
int run_cli(const std::vector<std::string>& args);

}  // namespace bevkit
