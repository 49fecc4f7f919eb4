// Copyright 2026 The ordfix Authors.
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

#ifndef ORDFIX_ATTR_VALUE_HPP
#define ORDFIX_ATTR_VALUE_HPP

#include <concepts>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <typeinfo>
#include <utility>

namespace ordfix {

/// Hash combiner (boost::hash_combine constants, 64-bit variant).
inline std::size_t hash_mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 12) + (seed >> 4));
}

template <class T>
concept SelfHashing = requires(const T& t) {
  { t.hash() } -> std::convertible_to<std::size_t>;
};

template <class T>
concept AttrPayload = std::equality_comparable<T> &&
    (SelfHashing<T> || requires(const T& t) { std::hash<T>{}(t); });

/// Immutable, hashable, equality-comparable attribute value with an opaque
/// payload. A default-constructed value is the unit value. Copies share the
/// payload.
class AttrValue {
 public:
  AttrValue() = default;

  template <AttrPayload T>
  static AttrValue make(T payload) {
    AttrValue v;
    std::size_t h;
    if constexpr (SelfHashing<T>)
      h = payload.hash();
    else
      h = std::hash<T>{}(payload);
    v.hash_ = hash_mix(typeid(T).hash_code(), h);
    v.holder_ = std::make_shared<const Holder<T>>(std::move(payload));
    return v;
  }

  template <class T>
  const T* get_if() const {
    if (!holder_ || holder_->type() != typeid(T)) return nullptr;
    return &static_cast<const Holder<T>*>(holder_.get())->value;
  }
  template <class T>
  const T& get() const {
    if (auto p = get_if<T>()) return *p;
    throw std::bad_cast();
  }

  bool is_unit() const { return holder_ == nullptr; }
  std::size_t hash() const { return hash_; }

  friend bool operator==(const AttrValue& a, const AttrValue& b) {
    if (a.hash_ != b.hash_) return false;
    if (a.holder_ == b.holder_) return true;
    if (!a.holder_ || !b.holder_) return false;
    return a.holder_->equals(*b.holder_);
  }

 private:
  struct HolderBase {
    virtual ~HolderBase() = default;
    virtual const std::type_info& type() const = 0;
    virtual bool equals(const HolderBase& o) const = 0;
  };
  template <class T>
  struct Holder final : HolderBase {
    explicit Holder(T v) : value(std::move(v)) {}
    const std::type_info& type() const override { return typeid(T); }
    bool equals(const HolderBase& o) const override {
      return o.type() == typeid(T) &&
             static_cast<const Holder<T>&>(o).value == value;
    }
    T value;
  };

  std::shared_ptr<const HolderBase> holder_;
  std::size_t hash_ = 0x5bd1e995u;
};

}  // namespace ordfix

template <>
struct std::hash<ordfix::AttrValue> {
  std::size_t operator()(const ordfix::AttrValue& v) const noexcept {
    return v.hash();
  }
};

#endif  // ORDFIX_ATTR_VALUE_HPP
