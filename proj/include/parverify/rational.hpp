// Copyright 2026 The parverify Authors.
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

#ifndef PARVERIFY_RATIONAL_HPP_
#define PARVERIFY_RATIONAL_HPP_

#include <cmath>
#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace parverify {

// Non-negative exact fraction, always stored in lowest terms.
//
// Only the operations the probability estimators need are provided:
// construction, comparison, addition and conversion to a bit cost.
// Addition and comparison widen to 128 bits so sums of estimator
// outputs (denominators 2T) never overflow for realistic counts.
class Rational {
 public:
  constexpr Rational() = default;

  Rational(std::uint64_t num, std::uint64_t den) : num_(num), den_(den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    Reduce();
  }

  std::uint64_t num() const { return num_; }
  std::uint64_t den() const { return den_; }

  double ToDouble() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  // -log2 of the value; +inf for zero.
  double Bits() const {
    if (num_ == 0) return INFINITY;
    return std::log2(static_cast<double>(den_)) -
           std::log2(static_cast<double>(num_));
  }

  std::string ToString() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    __extension__ using u128 = unsigned __int128;
    const u128 lhs = static_cast<u128>(a.num_) * b.den_;
    const u128 rhs = static_cast<u128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    __extension__ using u128 = unsigned __int128;
    const std::uint64_t g = std::gcd(a.den_, b.den_);
    u128 den = static_cast<u128>(a.den_ / g) * b.den_;
    u128 num = static_cast<u128>(a.num_) * (b.den_ / g) +
               static_cast<u128>(b.num_) * (a.den_ / g);
    u128 x = num, y = den;
    while (y != 0) {
      u128 t = x % y;
      x = y;
      y = t;
    }
    if (x > 1) {
      num /= x;
      den /= x;
    }
    if (den >> 64 || num >> 64) {
      throw std::overflow_error("Rational: sum does not fit in 64 bits");
    }
    return Rational(static_cast<std::uint64_t>(num),
                    static_cast<std::uint64_t>(den));
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.ToString();
  }

 private:
  void Reduce() {
    if (num_ == 0) {
      den_ = 1;
      return;
    }
    const std::uint64_t g = std::gcd(num_, den_);
    num_ /= g;
    den_ /= g;
  }

  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

}  // namespace parverify

#endif  // PARVERIFY_RATIONAL_HPP_
