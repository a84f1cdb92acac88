#pragma once

// Circular complex interval arithmetic with exact rational centers.
//
// A Disk is the closed set {z : |z - center| <= radius}. Every operation
// returns a disk guaranteed to contain the image of its operands; the only
// inexact steps (square roots and center rounding) are rounded outward.

#include <cstddef>

#include "dtnum/polyseq.hpp"

namespace dtnum {

// Bounds on sqrt(x) for x >= 0, accurate to about 2^-bits relative.
Rational sqrt_upper(const Rational& x, unsigned bits);
Rational sqrt_lower(const Rational& x, unsigned bits);

// x rounded toward -inf to about `bits` significant bits.
Rational round_dyadic(const Rational& x, unsigned bits);

struct Disk {
  Rational re = 0;
  Rational im = 0;
  Rational radius = 0;

  static Disk point(const Rational& re, const Rational& im = 0) { return Disk{re, im, 0}; }

  Rational center_norm2() const { return re * re + im * im; }
  bool contains_zero() const { return center_norm2() <= radius * radius; }
  bool contains(const Rational& x, const Rational& y) const;
  bool disjoint(const Disk& other) const;

  Rational abs_upper(unsigned bits) const;
  Rational abs_lower(unsigned bits) const;

  // Snaps the center to a dyadic grid of about `bits` significant bits and
  // grows the radius by the displacement.
  Disk rounded(unsigned bits) const;
};

Disk operator+(const Disk& a, const Disk& b);
Disk operator-(const Disk& a, const Disk& b);
Disk operator-(const Disk& a);
Disk multiply(const Disk& a, const Disk& b, unsigned bits);
// Throws Error when b contains zero.
Disk divide(const Disk& a, const Disk& b, unsigned bits);

// Horner evaluation with rounding after every step.
Disk evaluate(const IntPolynomial& p, const Disk& z, unsigned bits);

}  // namespace dtnum
