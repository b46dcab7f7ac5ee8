// Copyright 2026 The Rastile Authors
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

#ifndef RASTILE_HILBERT_HPP
#define RASTILE_HILBERT_HPP

#include <cstdint>
#include <utility>

namespace rastile {

// 2-D Hilbert curve over the 2^n x 2^n grid, iterative rotate-and-accumulate
// form. Orientation is fixed: code 0 at (0,0), code 1 at (x=0, y=1). Codes fit
// a 32-bit field, so orders 1..16 are supported.

inline constexpr uint32_t kMaxHilbertOrder = 16;

/// Map cell (x, y) to its position along the order-n curve, in [0, 4^n).
uint64_t hilbert_encode(uint32_t order, uint32_t x, uint32_t y);

/// Inverse of hilbert_encode.
std::pair<uint32_t, uint32_t> hilbert_decode(uint32_t order, uint64_t code);

/// Curve order whose 2^n square encloses a rows x cols grid:
/// max(1, ceil(log2(max(rows, cols)))). Cells outside the grid are simply
/// never keyed.
uint32_t order_for_level(uint32_t rows, uint32_t cols);

}  // namespace rastile

#endif  // RASTILE_HILBERT_HPP
