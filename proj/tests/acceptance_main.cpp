// Copyright 2026 The fednormec Authors
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

// Acceptance suite: runs every criterion at its stated scale and tolerance
// and prints one pass/fail line per criterion. Exits nonzero if any fail.

#include <cstdio>

#include "fednormec/verify.hpp"

int main() {
  const auto results = fednormec::acceptance_criteria();
  int failures = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    std::printf("criterion %2zu [%s] %-26s %s (%.2fs)\n", i + 1,
                r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str(),
                r.elapsed_s);
    if (!r.pass) {
      ++failures;
    }
  }
  if (failures > 0) {
    std::printf("%d of %zu acceptance criteria failed\n", failures,
                results.size());
    return 1;
  }
  std::printf("all %zu acceptance criteria passed\n", results.size());
  return 0;
}
