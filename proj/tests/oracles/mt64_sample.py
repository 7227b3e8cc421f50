#!/usr/bin/env python3
# Copyright 2026 The palo-forge Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent model of the review sampler: 64-bit Mersenne Twister,
unbiased bounded draws, partial Fisher-Yates, sorted result."""

import sys

MASK = (1 << 64) - 1


class MT64:
    N, M = 312, 156

    def __init__(self, seed):
        self.mt = [0] * self.N
        self.mt[0] = seed & MASK
        for i in range(1, self.N):
            prev = self.mt[i - 1]
            self.mt[i] = (6364136223846793005 * (prev ^ (prev >> 62)) + i) & MASK
        self.idx = self.N

    def _twist(self):
        upper, lower = 0xFFFFFFFF80000000, 0x7FFFFFFF
        for i in range(self.N):
            x = (self.mt[i] & upper) | (self.mt[(i + 1) % self.N] & lower)
            xa = x >> 1
            if x & 1:
                xa ^= 0xB5026F5AA96619E9
            self.mt[i] = self.mt[(i + self.M) % self.N] ^ xa
        self.idx = 0

    def next(self):
        if self.idx >= self.N:
            self._twist()
        x = self.mt[self.idx]
        self.idx += 1
        x ^= (x >> 29) & 0x5555555555555555
        x ^= (x << 17) & 0x71D67FFFEDA60000
        x ^= (x << 37) & 0xFFF7EEE000000000
        x ^= x >> 43
        return x & MASK


def uniform_below(rng, bound):
    threshold = ((1 << 64) - bound) % bound
    while True:
        r = rng.next()
        if r >= threshold:
            return r % bound


def sample_indices(pop, n, seed):
    rng = MT64(seed)
    idx = list(range(pop))
    for i in range(n):
        j = i + uniform_below(rng, pop - i)
        idx[i], idx[j] = idx[j], idx[i]
    return sorted(idx[:n])


def self_check():
    rng = MT64(5489)
    for _ in range(9999):
        rng.next()
    assert rng.next() == 9981545732273789042


if __name__ == "__main__":
    self_check()
    pop, n, seed = (int(a) for a in sys.argv[1:4])
    print(sample_indices(pop, n, seed))
