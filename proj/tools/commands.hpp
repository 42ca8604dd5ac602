// Copyright 2026 The bellrot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "bellrot/quantum.hpp"

namespace bellrot::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kConfig = 2,
    kSolver = 3,
    kIo = 4,
    kRunFailure = 5,
};

/// Parses argv and dispatches to a subcommand. Normal output goes to `out`,
/// diagnostics to `err`.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

/// Convenience overload for tests; args exclude the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

struct RotationTableCell {
    Axis axis;
    BellKind initial;
    std::array<cplx, 4> tabulated;  // ordered phi+, phi-, psi+, psi-
    std::array<cplx, 4> overlap;    // <bell_j| R (x) R |initial>
    double deviation = 0.0;
};

std::vector<RotationTableCell> rotation_table(double theta);

}  // namespace bellrot::cli
