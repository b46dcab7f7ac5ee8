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

#include "rastile/hilbert.hpp"

#include <algorithm>
#include <string>

#include "rastile/errors.hpp"

namespace rastile {

namespace {

void check_order(uint32_t order) {
  if (order < 1 || order > kMaxHilbertOrder) {
    throw DomainError("hilbert order must be in [1, " +
                      std::to_string(kMaxHilbertOrder) +
                      "], got " + std::to_string(order));
  }
}

// Rotate/flip the quadrant-local frame.
void rotate(uint32_t side, uint32_t& x, uint32_t& y, uint32_t rx, uint32_t ry) {
  if (ry == 0) {
    if (rx == 1) {
      x = side - 1 - x;
      y = side - 1 - y;
    }
    std::swap(x, y);
  }
}

}  // namespace

uint64_t hilbert_encode(uint32_t order, uint32_t x, uint32_t y) {
  check_order(order);
  const uint32_t side = uint32_t{1} << order;
  if (x >= side || y >= side) {
    throw DomainError("hilbert cell (" + std::to_string(x) + "," +
                      std::to_string(y) + ") outside order-" +
                      std::to_string(order) + " grid");
  }
  uint64_t code = 0;
  for (uint32_t s = side >> 1; s > 0; s >>= 1) {
    const uint32_t rx = (x & s) ? 1 : 0;
    const uint32_t ry = (y & s) ? 1 : 0;
    code += static_cast<uint64_t>(s) * s * ((3 * rx) ^ ry);
    rotate(s, x, y, rx, ry);
  }
  return code;
}

std::pair<uint32_t, uint32_t> hilbert_decode(uint32_t order, uint64_t code) {
  check_order(order);
  const uint32_t side = uint32_t{1} << order;
  if (code >= (uint64_t{1} << (2 * order))) {
    throw DomainError("hilbert code " + std::to_string(code) +
                      " out of range for order " + std::to_string(order));
  }
  uint32_t x = 0;
  uint32_t y = 0;
  uint64_t t = code;
  for (uint32_t s = 1; s < side; s <<= 1) {
    const uint32_t rx = static_cast<uint32_t>(1 & (t >> 1));
    const uint32_t ry = static_cast<uint32_t>(1 & (t ^ rx));
    rotate(s, x, y, rx, ry);
    x += s * rx;
    y += s * ry;
    t >>= 2;
  }
  return {x, y};
}

uint32_t order_for_level(uint32_t rows, uint32_t cols) {
  if (rows < 1 || cols < 1) {
    throw DomainError("grid dimensions must be at least 1x1");
  }
  const uint32_t max_dim = std::max(rows, cols);
  uint32_t order = 1;
  while ((uint32_t{1} << order) < max_dim) ++order;
  if (order > kMaxHilbertOrder) {
    throw DomainError("grid too large for 32-bit hilbert codes");
  }
  return order;
}

}  // namespace rastile
