// Copyright 2026 The ssagen Authors.
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

#include "ssa/diagnostics.hpp"

namespace ssa {

std::string_view DiagCodeName(DiagCode code) {
  switch (code) {
    case DiagCode::kSpanSnapped: return "span_snapped";
    case DiagCode::kMultiFragmentCollapsed: return "multi_fragment_collapsed";
    case DiagCode::kMalformedGroup: return "malformed_group";
    case DiagCode::kTruncatedGroup: return "truncated_group";
    case DiagCode::kMissingEos: return "missing_eos";
    case DiagCode::kDuplicateTuple: return "duplicate_tuple";
    case DiagCode::kLengthCapReached: return "length_cap_reached";
  }
  return "unknown";
}

}  // namespace ssa
