#pragma once

// Exact rational arithmetic for hand-evaluated oracle values in tests.

#include <cstdlib>
#include <numeric>

namespace selective::testing {

struct Fraction {
  long long num = 0;
  long long den = 1;

  Fraction(long long n = 0, long long d = 1) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const long long g = std::gcd(std::llabs(num), den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }

  friend Fraction operator+(Fraction a, Fraction b) {
    return {a.num * b.den + b.num * a.den, a.den * b.den};
  }
  friend Fraction operator-(Fraction a, Fraction b) {
    return {a.num * b.den - b.num * a.den, a.den * b.den};
  }
  friend Fraction operator*(Fraction a, Fraction b) {
    return {a.num * b.num, a.den * b.den};
  }
  friend Fraction operator/(Fraction a, Fraction b) {
    return {a.num * b.den, a.den * b.num};
  }
  friend bool operator==(Fraction a, Fraction b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(Fraction a, Fraction b) {
    return a.num * b.den < b.num * a.den;
  }
};

inline Fraction max0(Fraction a) { return a < Fraction(0) ? Fraction(0) : a; }

// Optimal value at (n, s) by exhaustive enumeration of the outcome tree
// (no memoization), with the exact infinite-sample value at level tail.
inline Fraction brute_force_value(int n, int s, int tail, Fraction cost,
                                  Fraction gamma) {
  const Fraction p(s, n);
  if (n == tail) return max0(p - cost) / (Fraction(1) - gamma);
  const Fraction hi = brute_force_value(n + 1, s + 1, tail, cost, gamma);
  const Fraction lo = brute_force_value(n + 1, s, tail, cost, gamma);
  return max0(p - cost + gamma * (p * hi + (Fraction(1) - p) * lo));
}

}  // namespace selective::testing
