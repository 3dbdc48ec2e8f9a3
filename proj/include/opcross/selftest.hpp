// Copyright 2026 The opcross Authors.
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

// Seeded invariant checks across all modules, run by the `selftest` verb.

#ifndef OPCROSS_SELFTEST_HPP
#define OPCROSS_SELFTEST_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace opcross {

struct SelfTestCheck {
  std::string name;
  double value = 0;      // observed residual or drift
  double threshold = 0;  // pass iff value <= threshold
  bool passed = false;
};

std::vector<SelfTestCheck> run_selftest(std::uint64_t seed);

}  // namespace opcross

#endif  // OPCROSS_SELFTEST_HPP
