// Copyright 2026 The ftzne Authors
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

#include "ftzne/bit_vec.h"

#include <random>

#include "gtest/gtest.h"

using namespace ftzne;

TEST(bit_vec, inline_and_heap_storage_agree) {
    for (size_t n : {1, 13, 64, 65, 130}) {
        BitVec v(n);
        EXPECT_EQ(v.size(), n);
        EXPECT_FALSE(v.any());
        v.set(n - 1, true);
        EXPECT_TRUE(v[n - 1]);
        v.flip(n - 1);
        EXPECT_FALSE(v.any());
        v.flip(0);
        v.set(n / 2, true);
        EXPECT_TRUE(v[0]);
        EXPECT_EQ(v.popcount(), n == 1 ? 1u : 2u);
        v.clear();
        EXPECT_FALSE(v.any());
    }
}

TEST(bit_vec, xor_and_parity) {
    std::mt19937_64 rng(7);
    for (size_t n : {5, 64, 100}) {
        BitVec a(n), b(n);
        size_t expected = 0;
        for (size_t k = 0; k < n; k++) {
            bool x = rng() & 1;
            bool y = rng() & 1;
            a.set(k, x);
            b.set(k, y);
            expected ^= (x && y);
        }
        EXPECT_EQ(a.and_parity(b), bool(expected));
        BitVec c = a ^ b;
        c ^= b;
        EXPECT_EQ(c, a);
    }
}

TEST(bit_vec, u64_round_trip_and_str) {
    BitVec v = BitVec::from_u64(6, 0b100101);
    EXPECT_EQ(v.as_u64(), 0b100101u);
    EXPECT_EQ(v.str(), "101001");
    EXPECT_TRUE(BitVec::from_u64(6, 1) < BitVec::from_u64(6, 2));
    EXPECT_EQ(BitVecHash()(v), BitVecHash()(BitVec::from_u64(6, 0b100101)));
}
