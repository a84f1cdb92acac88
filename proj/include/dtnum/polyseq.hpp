#pragma once

// Exact integer polynomials and linear recurrence sequences.
//
// Polynomials store their coefficients from the constant term upward, so
// {-2, -1, 1} is X^2 - X - 2. This order is used everywhere: in memory, in
// the sequence-automaton text format and in CSV output.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace dtnum {

using Integer = mpz_class;
using Rational = mpq_class;

class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<Integer> coefficients);
  IntPolynomial(std::initializer_list<long> coefficients);

  static IntPolynomial one() { return IntPolynomial{1}; }
  static IntPolynomial x_power(std::size_t k);
  // X - root
  static IntPolynomial linear(const Integer& root);

  // -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coefficients_.size()) - 1; }
  bool is_zero() const noexcept { return coefficients_.empty(); }
  bool is_monic() const noexcept { return !is_zero() && coefficients_.back() == 1; }

  // Coefficient of X^i, zero past the degree.
  Integer operator[](std::size_t i) const;
  const std::vector<Integer>& coefficients() const noexcept { return coefficients_; }
  const Integer& leading() const { return coefficients_.back(); }

  Integer evaluate(const Integer& x) const;
  IntPolynomial derivative() const;
  // X^deg * p(1/X)
  IntPolynomial reversed() const;

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;
  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator-(const IntPolynomial& a);

  // Human readable form, highest degree first: "X^2 - X - 2".
  std::string to_string() const;
  // Space separated coefficients, constant term first: "-2 -1 1".
  std::string to_coefficient_string() const;

 private:
  void normalize();
  std::vector<Integer> coefficients_;
};

std::ostream& operator<<(std::ostream& os, const IntPolynomial& p);

// Quotient of p by a monic divisor when the division is exact.
bool divides(const IntPolynomial& divisor, const IntPolynomial& p);
IntPolynomial exact_quotient(const IntPolynomial& p, const IntPolynomial& monic_divisor);

// Monic gcd / lcm over the rationals. For monic integer inputs both results
// have integer coefficients.
IntPolynomial poly_gcd(const IntPolynomial& p, const IntPolynomial& q);
IntPolynomial poly_lcm(const IntPolynomial& p, const IntPolynomial& q);

// A sequence satisfying the recurrence of a monic annihilator of degree m,
// stored as its initial vector (s_0, ..., s_{m-1}).
class LinRecSeq {
 public:
  LinRecSeq(IntPolynomial annihilator, std::vector<Integer> initial);

  static LinRecSeq zero(IntPolynomial annihilator);
  // Initial vector (0, ..., 0, 1).
  static LinRecSeq impulse(IntPolynomial annihilator);

  const IntPolynomial& annihilator() const noexcept { return annihilator_; }
  const std::vector<Integer>& initial() const noexcept { return initial_; }
  std::size_t order() const noexcept { return initial_.size(); }
  bool is_zero() const;

  Integer term(std::size_t n) const;
  std::vector<Integer> terms(std::size_t count) const;

  // Companion-matrix step: V_{shift s} = A V_s.
  LinRecSeq shift(std::size_t times = 1) const;

  // Same sequence under an annihilator that is a multiple of the current one.
  LinRecSeq rebased(const IntPolynomial& multiple) const;

  friend bool operator==(const LinRecSeq&, const LinRecSeq&) = default;
  friend LinRecSeq operator+(const LinRecSeq& a, const LinRecSeq& b);
  friend LinRecSeq operator-(const LinRecSeq& a, const LinRecSeq& b);
  friend LinRecSeq operator*(const Integer& c, const LinRecSeq& s);

 private:
  IntPolynomial annihilator_;
  std::vector<Integer> initial_;
};

// One companion-matrix step on a raw initial vector.
std::vector<Integer> companion_step(const IntPolynomial& annihilator, const std::vector<Integer>& v);

IntPolynomial minimal_annihilator(const LinRecSeq& seq);

using RationalVector = std::vector<Rational>;

// Coordinates alpha with target = sum_i alpha_i shift^i(reference).
// Throws Error("reference does not generate ...") when the Hankel matrix of
// the reference is singular.
RationalVector hankel_coordinates(const LinRecSeq& target, const LinRecSeq& reference);

// Exact Gaussian elimination. solve_rational returns false on a singular matrix.
bool solve_rational(std::vector<std::vector<Rational>> matrix, std::vector<Rational> rhs,
                    std::vector<Rational>& solution);
std::size_t rational_rank(std::vector<std::vector<Rational>> matrix);

// Smallest integer >= q.
Integer ceil(const Rational& q);

}  // namespace dtnum
