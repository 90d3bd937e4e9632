// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The fimopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace fim {

// Raised when a numerical procedure produces a result that the model rules
// out (failed factorization, non-finite objective, nonpositive interference).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when gradient terms are requested from a workspace built for a
// different morphing vector.
class StaleWorkspaceError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace fim
