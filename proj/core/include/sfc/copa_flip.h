// Copyright 2026 The sfc-eval Authors.
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

// Cause/effect flipping of COPA-style instances.
//
// A "because" instance asks which option caused the premise. Flipping turns
// each option into a context followed by the inverse relation word, and the
// original premise into the single continuation shared by every option:
//
//   "The bar closed because" + {"it was crowded.", "it was 3 AM."}
//   ->  {"It was crowded so", "It was 3 AM so"} + "the bar closed."
//
// Capitalization is normalized mechanically: the promoted option gets an
// upper-case first character and loses its terminal period, the demoted
// premise gets a lower-case first character. There is no proper-noun
// detection.

#ifndef SFC_COPA_FLIP_H_
#define SFC_COPA_FLIP_H_

#include <span>
#include <vector>

#include "sfc/instance.h"

namespace sfc {

// Flips an unflipped instance, or flips a flipped one back. Throws
// kNotFlippable when the instance has no relation or no "premise" field.
// The gold index and instance id are preserved.
Instance CopaFlip(const Instance& instance);

std::vector<Instance> CopaFlipAll(std::span<const Instance> instances);

}  // namespace sfc

#endif  // SFC_COPA_FLIP_H_
