#pragma once

// Ultimately-Pisot decision and validated flattening bounds.
//
// A polynomial is ultimately Pisot when it factors as X^k * P with P the
// minimal polynomial of a Pisot number: irreducible, one real root above 1,
// every other root strictly inside the unit disk.

#include <cstddef>
#include <optional>
#include <vector>

#include "dtnum/disk.hpp"
#include "dtnum/polyseq.hpp"

namespace dtnum {

inline constexpr int kIrreducibilityDegreeCap = 8;
inline constexpr unsigned kStartPrecisionBits = 128;
inline constexpr unsigned kMaxPrecisionBits = 4096;

struct ShiftSplit {
  std::size_t k = 0;
  IntPolynomial rest;
};

// p = X^k * rest with rest(0) != 0.
ShiftSplit strip_shift_factor(const IntPolynomial& p);

// True iff q has no nontrivial monic integer factor. Throws Error for
// degrees above kIrreducibilityDegreeCap.
bool is_irreducible(const IntPolynomial& q);

struct RootEnclosure {
  Disk disk;
  unsigned multiplicity = 1;

  Rational real_lower() const { return disk.re - disk.radius; }
  Rational real_upper() const { return disk.re + disk.radius; }
  Rational imag_lower() const { return disk.im - disk.radius; }
  Rational imag_upper() const { return disk.im + disk.radius; }
  // A disk centered on the real axis holding a single root of a real
  // polynomial holds a real root.
  bool is_real() const { return disk.im == 0; }
};

// One pairwise-disjoint enclosure per root of a squarefree polynomial,
// sorted by decreasing modulus. Escalates precision from kStartPrecisionBits
// up to kMaxPrecisionBits, then throws.
std::vector<RootEnclosure> isolate_roots(const IntPolynomial& q, unsigned start_bits = kStartPrecisionBits);

// Single attempt at a fixed precision; empty optional when the enclosures
// could not be separated.
std::optional<std::vector<RootEnclosure>> isolate_roots_at(const IntPolynomial& q, unsigned bits);

struct UltimatelyPisot {
  std::size_t k = 0;
  IntPolynomial pisot_factor;

  IntPolynomial full() const { return IntPolynomial::x_power(k) * pisot_factor; }
};

std::optional<UltimatelyPisot> is_ultimately_pisot(const IntPolynomial& p);

struct PisotCertificate {
  std::size_t k = 0;
  IntPolynomial pisot_factor;
  // roots[0] is the Pisot number.
  std::vector<RootEnclosure> roots;
  // gamma[j] is the coefficient of theta_j^n in shift^k(reference).
  std::vector<Disk> gamma;
  Rational k_upper;
  Rational theta_upper;
  std::vector<Integer> coordinate_bounds;
  unsigned precision_bits = kStartPrecisionBits;
};

// Per-coordinate bounds on the flattening vectors of a linear recurrence
// sequence automaton whose accumulated digit strings (coefficients in the
// shifted-reference basis) stay within coeff_bound in absolute value.
//
// digit_span is the number of consecutive digit positions a single
// transition weight touches: 1 when every weight is an integer multiple of
// the reference, m in general.
PisotCertificate flattening_bounds(const UltimatelyPisot& up, const LinRecSeq& reference, const Integer& coeff_bound,
                                   std::size_t digit_span = 1, unsigned precision_bits = kStartPrecisionBits);

}  // namespace dtnum
