#include "dtnum/disk.hpp"

#include "dtnum/error.hpp"

namespace dtnum {

namespace {

// floor(log2 |x|) for a nonzero rational, up to one unit.
long approx_log2(const Rational& x) {
  long num_bits = static_cast<long>(mpz_sizeinbase(x.get_num_mpz_t(), 2));
  long den_bits = static_cast<long>(mpz_sizeinbase(x.get_den_mpz_t(), 2));
  return num_bits - den_bits;
}

Rational pow2(long e) {
  Rational out = 1;
  if (e >= 0)
    mpz_mul_2exp(out.get_num_mpz_t(), out.get_num_mpz_t(), static_cast<mp_bitcnt_t>(e));
  else
    mpz_mul_2exp(out.get_den_mpz_t(), out.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  out.canonicalize();
  return out;
}

// Rounds x to a multiple of 2^-scale, toward -inf (down) or +inf (up).
Rational round_to_grid(const Rational& x, long scale, bool up) {
  Rational scaled = x * pow2(scale);
  Integer q;
  if (up)
    mpz_cdiv_q(q.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  else
    mpz_fdiv_q(q.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  return Rational(q) * pow2(-scale);
}

Integer isqrt(const Integer& x) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
  return r;
}

}  // namespace

Rational sqrt_upper(const Rational& x, unsigned bits) {
  if (x < 0) throw Error("sqrt of a negative number");
  if (x == 0) return 0;
  // sqrt(n/d) = sqrt(n d) / d; scale by 2^(2s) so the integer root has s extra bits.
  long s = static_cast<long>(bits) - approx_log2(x) / 2 + 2;
  if (s < 0) s = 0;
  Integer scaled = x.get_num() * x.get_den();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<mp_bitcnt_t>(2 * s));
  Integer root = isqrt(scaled);
  if (root * root != scaled) root += 1;
  Rational out(root, x.get_den());
  out.canonicalize();
  return out * pow2(-s);
}

Rational sqrt_lower(const Rational& x, unsigned bits) {
  if (x < 0) throw Error("sqrt of a negative number");
  if (x == 0) return 0;
  long s = static_cast<long>(bits) - approx_log2(x) / 2 + 2;
  if (s < 0) s = 0;
  Integer scaled = x.get_num() * x.get_den();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<mp_bitcnt_t>(2 * s));
  Rational out(isqrt(scaled), x.get_den());
  out.canonicalize();
  return out * pow2(-s);
}

Rational round_dyadic(const Rational& x, unsigned bits) {
  if (x == 0) return x;
  return round_to_grid(x, static_cast<long>(bits) - approx_log2(x) + 2, false);
}

bool Disk::contains(const Rational& x, const Rational& y) const {
  Rational dx = x - re, dy = y - im;
  return dx * dx + dy * dy <= radius * radius;
}

bool Disk::disjoint(const Disk& other) const {
  Rational dx = re - other.re, dy = im - other.im;
  Rational sum = radius + other.radius;
  return dx * dx + dy * dy > sum * sum;
}

Rational Disk::abs_upper(unsigned bits) const { return sqrt_upper(center_norm2(), bits) + radius; }

Rational Disk::abs_lower(unsigned bits) const {
  Rational v = sqrt_lower(center_norm2(), bits) - radius;
  return v > 0 ? v : Rational(0);
}

Disk Disk::rounded(unsigned bits) const {
  Disk out;
  Rational mag = abs(re) + abs(im) + radius;
  if (mag == 0) return *this;
  long scale = static_cast<long>(bits) - approx_log2(mag) + 2;
  out.re = round_to_grid(re, scale, false);
  out.im = round_to_grid(im, scale, false);
  Rational grown = radius + (re - out.re) + (im - out.im);
  out.radius = grown == 0 ? Rational(0) : round_to_grid(grown, scale, true);
  return out;
}

Disk operator+(const Disk& a, const Disk& b) { return Disk{a.re + b.re, a.im + b.im, a.radius + b.radius}; }
Disk operator-(const Disk& a, const Disk& b) { return Disk{a.re - b.re, a.im - b.im, a.radius + b.radius}; }
Disk operator-(const Disk& a) { return Disk{-a.re, -a.im, a.radius}; }

Disk multiply(const Disk& a, const Disk& b, unsigned bits) {
  Disk out;
  out.re = a.re * b.re - a.im * b.im;
  out.im = a.re * b.im + a.im * b.re;
  out.radius = 0;
  if (a.radius != 0 || b.radius != 0) {
    out.radius = sqrt_upper(a.center_norm2(), bits) * b.radius + sqrt_upper(b.center_norm2(), bits) * a.radius +
                 a.radius * b.radius;
  }
  return out.rounded(bits);
}

Disk divide(const Disk& a, const Disk& b, unsigned bits) {
  Rational denom = b.center_norm2() - b.radius * b.radius;
  if (denom <= 0) throw Error("disk division by an enclosure containing zero");
  Disk inverse{b.re / denom, -b.im / denom, b.radius / denom};
  return multiply(a, inverse, bits);
}

Disk evaluate(const IntPolynomial& p, const Disk& z, unsigned bits) {
  Disk acc;
  const auto& c = p.coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = multiply(acc, z, bits) + Disk::point(Rational(*it));
  return acc;
}

}  // namespace dtnum
