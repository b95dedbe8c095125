#pragma once

#include <compare>
#include <limits>
#include <string>

#include "mahler/errors.hpp"

namespace mahler {

/// Degree of a polynomial or Laurent series tail: either a finite integer or
/// the distinguished value minus-infinity (degree of the zero polynomial).
/// Minus-infinity absorbs under addition and compares below every integer.
class Degree {
  public:
    constexpr Degree() : finite_(false), value_(0) {}
    constexpr Degree(long v) : finite_(true), value_(v) {}

    static constexpr Degree minus_infinity() { return Degree(); }

    constexpr bool is_finite() const { return finite_; }

    long value() const {
        if (!finite_) throw Error("Degree: minus-infinity has no integer value");
        return value_;
    }

    /// Finite value, or `fallback` for minus-infinity.
    constexpr long value_or(long fallback) const { return finite_ ? value_ : fallback; }

    friend constexpr Degree operator+(Degree a, Degree b) {
        if (!a.finite_ || !b.finite_) return minus_infinity();
        return Degree(a.value_ + b.value_);
    }
    friend constexpr Degree operator+(Degree a, long b) { return a + Degree(b); }

    friend constexpr bool operator==(Degree a, Degree b) {
        return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
    }
    friend constexpr bool operator<(Degree a, Degree b) {
        if (!a.finite_) return b.finite_;
        if (!b.finite_) return false;
        return a.value_ < b.value_;
    }
    friend constexpr bool operator<=(Degree a, Degree b) { return a < b || a == b; }
    friend constexpr bool operator>(Degree a, Degree b) { return b < a; }
    friend constexpr bool operator>=(Degree a, Degree b) { return b <= a; }

    friend constexpr bool operator==(Degree a, long b) { return a == Degree(b); }
    friend constexpr bool operator<(Degree a, long b) { return a < Degree(b); }
    friend constexpr bool operator<(long a, Degree b) { return Degree(a) < b; }
    friend constexpr bool operator>=(Degree a, long b) { return Degree(b) <= a; }

    std::string str() const { return finite_ ? std::to_string(value_) : "-inf"; }

  private:
    bool finite_;
    long value_;
};

}  // namespace mahler
