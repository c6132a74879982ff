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

#include <algorithm>
#include <bit>
#include <cassert>

namespace ftzne {

BitVec::BitVec(size_t num_bits) : num_bits_(num_bits) {
    if (num_bits > 64) {
        heap_.assign((num_bits + 63) / 64, 0);
    }
}

void BitVec::set(size_t k, bool value) {
    uint64_t mask = uint64_t{1} << (k & 63);
    uint64_t &w = word_data()[k >> 6];
    w = value ? (w | mask) : (w & ~mask);
}

void BitVec::clear() {
    inline_word_ = 0;
    std::fill(heap_.begin(), heap_.end(), 0);
}

BitVec &BitVec::operator^=(const BitVec &other) {
    assert(other.num_bits_ == num_bits_);
    auto a = words();
    auto b = other.words();
    for (size_t k = 0; k < a.size(); k++) {
        a[k] ^= b[k];
    }
    return *this;
}

BitVec &BitVec::operator&=(const BitVec &other) {
    assert(other.num_bits_ == num_bits_);
    auto a = words();
    auto b = other.words();
    for (size_t k = 0; k < a.size(); k++) {
        a[k] &= b[k];
    }
    return *this;
}

BitVec &BitVec::operator|=(const BitVec &other) {
    assert(other.num_bits_ == num_bits_);
    auto a = words();
    auto b = other.words();
    for (size_t k = 0; k < a.size(); k++) {
        a[k] |= b[k];
    }
    return *this;
}

BitVec BitVec::operator^(const BitVec &other) const {
    BitVec result = *this;
    result ^= other;
    return result;
}

BitVec BitVec::operator&(const BitVec &other) const {
    BitVec result = *this;
    result &= other;
    return result;
}

bool BitVec::operator==(const BitVec &other) const {
    if (num_bits_ != other.num_bits_) {
        return false;
    }
    auto a = words();
    auto b = other.words();
    return std::equal(a.begin(), a.end(), b.begin());
}

bool BitVec::operator<(const BitVec &other) const {
    if (num_bits_ != other.num_bits_) {
        return num_bits_ < other.num_bits_;
    }
    auto a = words();
    auto b = other.words();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool BitVec::any() const {
    for (uint64_t w : words()) {
        if (w) {
            return true;
        }
    }
    return false;
}

size_t BitVec::popcount() const {
    size_t total = 0;
    for (uint64_t w : words()) {
        total += std::popcount(w);
    }
    return total;
}

bool BitVec::and_parity(const BitVec &other) const {
    assert(other.num_bits_ == num_bits_);
    auto a = words();
    auto b = other.words();
    uint64_t acc = 0;
    for (size_t k = 0; k < a.size(); k++) {
        acc ^= a[k] & b[k];
    }
    return std::popcount(acc) & 1;
}

uint64_t BitVec::as_u64() const {
    assert(num_bits_ <= 64);
    return inline_word_;
}

BitVec BitVec::from_u64(size_t num_bits, uint64_t bits) {
    assert(num_bits <= 64);
    BitVec result(num_bits);
    if (num_bits < 64) {
        bits &= (uint64_t{1} << num_bits) - 1;
    }
    result.inline_word_ = bits;
    return result;
}

std::string BitVec::str() const {
    std::string out(num_bits_, '0');
    for (size_t k = 0; k < num_bits_; k++) {
        if ((*this)[k]) {
            out[k] = '1';
        }
    }
    return out;
}

size_t BitVec::hash() const {
    uint64_t h = 0x9E3779B97F4A7C15ULL ^ num_bits_;
    for (uint64_t w : words()) {
        h ^= w + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<size_t>(h);
}

}  // namespace ftzne
