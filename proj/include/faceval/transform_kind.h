// Copyright 2026 The FacEval Authors.
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

#ifndef FACEVAL_TRANSFORM_KIND_H_
#define FACEVAL_TRANSFORM_KIND_H_

#include <array>
#include <optional>
#include <string_view>

namespace faceval {

// Speaker / entity / pronoun / date / number swap, negation, and
// back-translation. BT labels positives only; the rest label negatives.
enum class TransformKind { kSS, kES, kPS, kDS, kNS, kNG, kBT };

// The six corrupting kinds, in the canonical column order used by reports.
inline constexpr std::array<TransformKind, 6> kNegativeKinds = {
    TransformKind::kNG, TransformKind::kPS, TransformKind::kSS,
    TransformKind::kES, TransformKind::kDS, TransformKind::kNS};

constexpr std::string_view TransformKindName(TransformKind kind) {
  switch (kind) {
    case TransformKind::kSS: return "SS";
    case TransformKind::kES: return "ES";
    case TransformKind::kPS: return "PS";
    case TransformKind::kDS: return "DS";
    case TransformKind::kNS: return "NS";
    case TransformKind::kNG: return "NG";
    case TransformKind::kBT: return "BT";
  }
  return "?";
}

constexpr std::optional<TransformKind> ParseTransformKind(
    std::string_view name) {
  for (TransformKind k :
       {TransformKind::kSS, TransformKind::kES, TransformKind::kPS,
        TransformKind::kDS, TransformKind::kNS, TransformKind::kNG,
        TransformKind::kBT}) {
    if (TransformKindName(k) == name) return k;
  }
  return std::nullopt;
}

constexpr bool IsNegativeKind(TransformKind kind) {
  return kind != TransformKind::kBT;
}

}  // namespace faceval

#endif  // FACEVAL_TRANSFORM_KIND_H_
