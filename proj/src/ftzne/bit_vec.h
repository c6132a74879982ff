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

#ifndef FTZNE_BIT_VEC_H
#define FTZNE_BIT_VEC_H

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ftzne {

/// Fixed-length bit vector. Lengths up to 64 bits live inline without a heap
/// allocation; longer vectors spill into multiple words.
class BitVec {
   public:
    BitVec() = default;
    explicit BitVec(size_t num_bits);

    size_t size() const {
        return num_bits_;
    }
    size_t num_words() const {
        return (num_bits_ + 63) / 64;
    }

    bool operator[](size_t k) const {
        return (word_data()[k >> 6] >> (k & 63)) & 1;
    }
    void set(size_t k, bool value);
    void flip(size_t k) {
        word_data()[k >> 6] ^= uint64_t{1} << (k & 63);
    }
    void clear();

    BitVec &operator^=(const BitVec &other);
    BitVec &operator&=(const BitVec &other);
    BitVec &operator|=(const BitVec &other);
    BitVec operator^(const BitVec &other) const;
    BitVec operator&(const BitVec &other) const;

    bool operator==(const BitVec &other) const;
    bool operator<(const BitVec &other) const;

    bool any() const;
    size_t popcount() const;
    /// Parity of the bitwise AND with `other`.
    bool and_parity(const BitVec &other) const;

    std::span<uint64_t> words() {
        return {word_data(), num_words()};
    }
    std::span<const uint64_t> words() const {
        return {word_data(), num_words()};
    }

    /// Low 64 bits as an integer (requires size() <= 64).
    uint64_t as_u64() const;
    static BitVec from_u64(size_t num_bits, uint64_t bits);

    /// Bits as a '0'/'1' string, bit 0 first.
    std::string str() const;

    size_t hash() const;

   private:
    uint64_t *word_data() {
        return num_bits_ <= 64 ? &inline_word_ : heap_.data();
    }
    const uint64_t *word_data() const {
        return num_bits_ <= 64 ? &inline_word_ : heap_.data();
    }

    size_t num_bits_ = 0;
    uint64_t inline_word_ = 0;
    std::vector<uint64_t> heap_;
};

struct BitVecHash {
    size_t operator()(const BitVec &v) const {
        return v.hash();
    }
};

}  // namespace ftzne

#endif
