// Copyright 2026 The fcmtune Authors.
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

#ifndef FCMTUNE_KEY_INDEX_H_
#define FCMTUNE_KEY_INDEX_H_

#include <cstdint>
#include <vector>

#include "fcmtune/rng.h"

namespace fcmtune {

// Maps u64 keys to dense row ids 0, 1, 2, ... in insertion order.
// Open addressing with linear probing; UINT64_MAX is reserved as the empty
// marker and is never a valid key.
class KeyIndex {
 public:
  static constexpr uint32_t kNotFound = UINT32_MAX;

  explicit KeyIndex(size_t expected = 16) { Rehash(CapacityFor(expected)); }

  uint32_t Find(uint64_t key) const {
    size_t slot = SplitMix64(key) & mask_;
    while (true) {
      const uint64_t k = keys_[slot];
      if (k == key) return ids_[slot];
      if (k == kEmpty) return kNotFound;
      slot = (slot + 1) & mask_;
    }
  }

  // Returns the id of `key`, inserting it with id size() when absent.
  uint32_t FindOrInsert(uint64_t key) {
    if ((size_ + 1) * 4 > keys_.size() * 3) Rehash(keys_.size() * 2);
    size_t slot = SplitMix64(key) & mask_;
    while (true) {
      const uint64_t k = keys_[slot];
      if (k == key) return ids_[slot];
      if (k == kEmpty) {
        keys_[slot] = key;
        ids_[slot] = static_cast<uint32_t>(size_);
        return static_cast<uint32_t>(size_++);
      }
      slot = (slot + 1) & mask_;
    }
  }

  size_t size() const { return size_; }

 private:
  static constexpr uint64_t kEmpty = UINT64_MAX;

  static size_t CapacityFor(size_t n) {
    size_t cap = 16;
    while (cap * 3 < n * 4) cap *= 2;
    return cap;
  }

  void Rehash(size_t capacity) {
    std::vector<uint64_t> old_keys(capacity, kEmpty);
    std::vector<uint32_t> old_ids(capacity);
    old_keys.swap(keys_);
    old_ids.swap(ids_);
    mask_ = capacity - 1;
    for (size_t i = 0; i < old_keys.size(); ++i) {
      if (old_keys[i] == kEmpty) continue;
      size_t slot = SplitMix64(old_keys[i]) & mask_;
      while (keys_[slot] != kEmpty) slot = (slot + 1) & mask_;
      keys_[slot] = old_keys[i];
      ids_[slot] = old_ids[i];
    }
  }

  std::vector<uint64_t> keys_;
  std::vector<uint32_t> ids_;
  size_t mask_ = 0;
  size_t size_ = 0;
};

}  // namespace fcmtune

#endif  // FCMTUNE_KEY_INDEX_H_
