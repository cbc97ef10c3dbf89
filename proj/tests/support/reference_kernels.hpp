/*
 * Copyright 2026 the tcsim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Plain textbook implementations of the four kernels, used as the
// functional oracle for the accelerators and the generated programs. All
// arithmetic is wrapping 32-bit, matching the declared kernel semantics.

#include <cstdint>
#include <cstdlib>
#include <vector>

namespace refk {

using vec = std::vector<uint32_t>;

inline vec mm(const vec& a, const vec& b, uint32_t n) {
  vec c(static_cast<size_t>(n) * n, 0);
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = 0; j < n; ++j) {
      uint32_t acc = 0;
      for (uint32_t k = 0; k < n; ++k) acc += a[i * n + k] * b[k * n + j];
      c[i * n + j] = acc;
    }
  return c;
}

inline vec fir(const vec& x, const vec& h) {
  uint32_t taps = static_cast<uint32_t>(h.size());
  vec y(x.size() - taps + 1, 0);
  for (size_t i = 0; i < y.size(); ++i) {
    uint32_t acc = 0;
    for (uint32_t t = 0; t < taps; ++t) acc += x[i + t] * h[t];
    y[i] = acc;
  }
  return y;
}

struct KmResult {
  vec assign;
  vec sums;
  vec counts;
};

// Single assignment pass: nearest centroid by squared Euclidean distance,
// ties to the lowest index, plus per-centroid coordinate sums and counts.
inline KmResult km(const vec& nodes, const vec& cents, uint32_t n, uint32_t k,
                   uint32_t dims) {
  KmResult r{vec(n, 0), vec(static_cast<size_t>(k) * dims, 0), vec(k, 0)};
  for (uint32_t i = 0; i < n; ++i) {
    uint32_t best = 0;
    uint32_t best_d = 0xffffffffu;
    for (uint32_t c = 0; c < k; ++c) {
      uint32_t d = 0;
      for (uint32_t m = 0; m < dims; ++m) {
        uint32_t diff = nodes[i * dims + m] - cents[c * dims + m];
        d += diff * diff;
      }
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    r.assign[i] = best;
    for (uint32_t m = 0; m < dims; ++m)
      r.sums[best * dims + m] += nodes[i * dims + m];
    r.counts[best] += 1;
  }
  return r;
}

// Sobel gradient magnitude with clamp-to-edge sampling, |gx|+|gy| capped
// at 255.
inline vec sobel(const vec& in, uint32_t h, uint32_t w) {
  static constexpr int kGx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  static constexpr int kGy[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  vec out(static_cast<size_t>(h) * w, 0);
  auto sample = [&](int64_t r, int64_t c) {
    if (r < 0) r = 0;
    if (r >= h) r = h - 1;
    if (c < 0) c = 0;
    if (c >= w) c = w - 1;
    return in[static_cast<size_t>(r) * w + static_cast<size_t>(c)];
  };
  for (uint32_t r = 0; r < h; ++r)
    for (uint32_t c = 0; c < w; ++c) {
      uint32_t gx = 0, gy = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          uint32_t p = sample(static_cast<int64_t>(r) + dy,
                              static_cast<int64_t>(c) + dx);
          gx += static_cast<uint32_t>(kGx[dy + 1][dx + 1]) * p;
          gy += static_cast<uint32_t>(kGy[dy + 1][dx + 1]) * p;
        }
      uint32_t ax = static_cast<int32_t>(gx) < 0 ? 0u - gx : gx;
      uint32_t ay = static_cast<int32_t>(gy) < 0 ? 0u - gy : gy;
      uint32_t mag = ax + ay;
      out[static_cast<size_t>(r) * w + c] = mag > 255 ? 255 : mag;
    }
  return out;
}

}  // namespace refk
