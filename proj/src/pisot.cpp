#include "dtnum/pisot.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "dtnum/error.hpp"

namespace dtnum {

ShiftSplit strip_shift_factor(const IntPolynomial& p) {
  if (p.is_zero()) throw Error("strip_shift_factor: zero polynomial");
  const auto& c = p.coefficients();
  std::size_t k = 0;
  while (c[k] == 0) ++k;
  return ShiftSplit{k, IntPolynomial(std::vector<Integer>(c.begin() + static_cast<long>(k), c.end()))};
}

// --- irreducibility ---------------------------------------------------------

namespace {

std::vector<Integer> positive_divisors(Integer v) {
  v = abs(v);
  std::vector<Integer> small, large;
  for (Integer d = 1; d * d <= v; ++d) {
    if (v % d != 0) continue;
    small.push_back(d);
    if (d * d != v) large.push_back(v / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

Integer binomial(unsigned n, unsigned k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

// Kronecker's method restricted to monic factors of the given degree: a monic
// factor g satisfies g(x) | q(x) at every integer x, and is determined by its
// values at `degree` points once the leading term is fixed.
bool has_monic_factor(const IntPolynomial& q, unsigned degree) {
  struct Sample {
    Integer x;
    std::vector<Integer> divisors;
  };
  std::vector<Sample> samples;
  for (long x = 0; samples.size() < 12; x = x > 0 ? -x : -x + 1) {
    Integer v = q.evaluate(x);
    if (v == 0) return true;  // integer root
    samples.push_back({Integer(x), positive_divisors(v)});
  }
  std::stable_sort(samples.begin(), samples.end(),
                   [](const Sample& a, const Sample& b) { return a.divisors.size() < b.divisors.size(); });
  samples.resize(degree);

  // Inverse Vandermonde for h(x) = g(x) - x^degree.
  const std::size_t d = degree;
  std::vector<std::vector<Rational>> vinv(d, std::vector<Rational>(d));
  for (std::size_t col = 0; col < d; ++col) {
    std::vector<std::vector<Rational>> vand(d, std::vector<Rational>(d));
    for (std::size_t i = 0; i < d; ++i) {
      Rational p = 1;
      for (std::size_t j = 0; j < d; ++j) {
        vand[i][j] = p;
        p *= samples[i].x;
      }
    }
    std::vector<Rational> e(d, Rational(0)), sol;
    e[col] = 1;
    solve_rational(vand, e, sol);
    for (std::size_t i = 0; i < d; ++i) vinv[i][col] = sol[i];
  }

  Integer norm2 = 0;
  for (const auto& c : q.coefficients()) norm2 += c * c;
  std::vector<Integer> mignotte2(d + 1);
  for (unsigned j = 0; j <= d; ++j) {
    Integer b = binomial(degree, j);
    mignotte2[j] = b * b * norm2;
  }

  std::vector<std::size_t> choice(d, 0);
  std::vector<int> sign(d, 1);
  // Odometer over (divisor, sign) per sample point.
  while (true) {
    std::vector<Rational> h(d);
    for (std::size_t i = 0; i < d; ++i) {
      Integer xd = 1;
      for (unsigned t = 0; t < degree; ++t) xd *= samples[i].x;
      h[i] = Rational(sign[i] * samples[i].divisors[choice[i]] - xd);
    }
    bool ok = true;
    std::vector<Integer> g(d + 1);
    for (std::size_t r = 0; r < d && ok; ++r) {
      Rational c = 0;
      for (std::size_t i = 0; i < d; ++i) c += vinv[r][i] * h[i];
      c.canonicalize();
      if (c.get_den() != 1 || c.get_num() * c.get_num() > mignotte2[r]) ok = false;
      g[r] = c.get_num();
    }
    if (ok) {
      g[d] = 1;
      if (divides(IntPolynomial(g), q)) return true;
    }
    std::size_t pos = 0;
    while (pos < d) {
      if (sign[pos] == 1) {
        sign[pos] = -1;
        break;
      }
      sign[pos] = 1;
      if (++choice[pos] < samples[pos].divisors.size()) break;
      choice[pos] = 0;
      ++pos;
    }
    if (pos == d) return false;
  }
}

}  // namespace

bool is_irreducible(const IntPolynomial& q) {
  if (!q.is_monic() || q.degree() < 1) throw Error("is_irreducible: expected a monic polynomial of degree >= 1");
  const int n = q.degree();
  if (n > kIrreducibilityDegreeCap) throw Error("degree too large for exact irreducibility test");
  if (n == 1) return true;
  if (q[0] == 0) return false;
  for (const Integer& d : positive_divisors(q[0]))
    if (q.evaluate(d) == 0 || q.evaluate(-d) == 0) return false;
  for (int d = 2; d <= n / 2; ++d)
    if (has_monic_factor(q, static_cast<unsigned>(d))) return false;
  return true;
}

// --- root isolation ---------------------------------------------------------

namespace {

struct CQ {
  Rational re = 0, im = 0;
};

CQ operator-(const CQ& a, const CQ& b) { return {a.re - b.re, a.im - b.im}; }
CQ operator*(const CQ& a, const CQ& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
CQ operator/(const CQ& a, const CQ& b) {
  Rational n = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}
Rational norm2(const CQ& a) { return a.re * a.re + a.im * a.im; }
CQ round(const CQ& a, unsigned bits) { return {round_dyadic(a.re, bits), round_dyadic(a.im, bits)}; }

CQ horner(const IntPolynomial& p, const CQ& z) {
  CQ acc;
  const auto& c = p.coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc = acc * z;
    acc.re += *it;
  }
  return acc;
}

Rational to_rational(long double x) {
  double hi = static_cast<double>(x);
  double lo = static_cast<double>(x - static_cast<long double>(hi));
  return Rational(hi) + Rational(lo);
}

using LComplex = std::complex<long double>;

// Aberth-Ehrlich iteration in extended precision; only a starting point.
std::vector<LComplex> aberth_float(const IntPolynomial& p) {
  const int n = p.degree();
  std::vector<long double> c(p.coefficients().size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = p[i].get_d();
  long double bound = 0;
  for (int i = 0; i < n; ++i) bound = std::max(bound, std::fabs(c[i] / c[n]));
  bound += 1;
  std::vector<LComplex> z(n);
  const long double pi = std::acos(-1.0L);
  for (int k = 0; k < n; ++k) z[k] = std::polar(bound * 0.5L, 2 * pi * k / n + 0.4L);
  auto eval = [&](LComplex x, LComplex& dp) {
    LComplex v = 0;
    dp = 0;
    for (int i = n; i >= 0; --i) {
      dp = dp * x + v;
      v = v * x + c[i];
    }
    return v;
  };
  for (int iter = 0; iter < 500; ++iter) {
    long double worst = 0;
    for (int k = 0; k < n; ++k) {
      LComplex dp;
      LComplex v = eval(z[k], dp);
      if (v == LComplex(0)) continue;
      LComplex ratio = v / dp;
      LComplex sum = 0;
      for (int j = 0; j < n; ++j)
        if (j != k) sum += 1.0L / (z[k] - z[j]);
      LComplex w = ratio / (1.0L - ratio * sum);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) continue;
      z[k] -= w;
      worst = std::max(worst, std::abs(w) / std::max(1.0L, std::abs(z[k])));
    }
    if (worst < 1e-18L) break;
  }
  return z;
}

// Aberth refinement in rounded rational arithmetic.
void aberth_refine(const IntPolynomial& p, std::vector<CQ>& z, unsigned bits) {
  const std::size_t n = z.size();
  const IntPolynomial dp = p.derivative();
  Rational tol = 1;
  mpz_mul_2exp(tol.get_den_mpz_t(), tol.get_den_mpz_t(), 2 * (bits - 8));
  tol.canonicalize();
  for (int iter = 0; iter < 100; ++iter) {
    bool converged = true;
    for (std::size_t k = 0; k < n; ++k) {
      CQ v = horner(p, z[k]);
      if (v.re == 0 && v.im == 0) continue;
      CQ d = horner(dp, z[k]);
      if (d.re == 0 && d.im == 0) return;
      CQ ratio = round(v / d, bits + 8);
      CQ sum;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == k) continue;
        CQ diff = z[k] - z[j];
        if (diff.re == 0 && diff.im == 0) return;
        CQ inv = CQ{Rational(1), Rational(0)} / diff;
        sum.re += inv.re;
        sum.im += inv.im;
      }
      sum = round(sum, bits + 8);
      CQ denom = CQ{Rational(1), Rational(0)} - ratio * sum;
      if (denom.re == 0 && denom.im == 0) return;
      CQ w = round(ratio / denom, bits + 8);
      z[k] = round(z[k] - w, bits + 8);
      Rational scale = std::max(Rational(1), norm2(z[k]));
      if (norm2(w) > tol * scale) converged = false;
    }
    if (converged) break;
  }
}

// Makes near-real approximations exactly real and near-conjugate pairs exact
// conjugates, so that the validated disks inherit the symmetry.
void symmetrize(std::vector<CQ>& z, unsigned bits) {
  Rational tol = 1;
  mpz_mul_2exp(tol.get_den_mpz_t(), tol.get_den_mpz_t(), bits / 2);
  tol.canonicalize();
  const std::size_t n = z.size();
  std::vector<bool> done(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (done[i]) continue;
    Rational scale = std::max(Rational(1), norm2(z[i]));
    if (z[i].im * z[i].im <= tol * tol * scale) {
      z[i].im = 0;
      done[i] = true;
      continue;
    }
    std::size_t best = n;
    Rational best_dist;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || done[j]) continue;
      Rational dre = z[j].re - z[i].re, dim = z[j].im + z[i].im;
      Rational dist = dre * dre + dim * dim;
      if (best == n || dist < best_dist) {
        best = j;
        best_dist = dist;
      }
    }
    if (best != n && best_dist <= tol * tol * scale) {
      Rational re = (z[i].re + z[best].re) / 2;
      Rational im = abs(z[i].im - z[best].im) / 2;
      z[i] = {re, im};
      z[best] = {re, -im};
      done[best] = true;
    }
    done[i] = true;
  }
}

}  // namespace

std::optional<std::vector<RootEnclosure>> isolate_roots_at(const IntPolynomial& q, unsigned bits) {
  const int n = q.degree();
  if (n < 1) return std::vector<RootEnclosure>{};
  if (n == 1) {
    Rational root(-q[0], q[1]);
    root.canonicalize();
    return std::vector<RootEnclosure>{RootEnclosure{Disk::point(root)}};
  }

  std::vector<CQ> z;
  for (const auto& c : aberth_float(q)) z.push_back({to_rational(c.real()), to_rational(c.imag())});
  aberth_refine(q, z, bits);
  symmetrize(z, bits);

  // Smith's inclusion theorem: with W_i = q(z_i) / (lc * prod_{j != i}(z_i - z_j)),
  // the disks D(z_i, n |W_i|) cover the roots and every connected component
  // made of r disks holds exactly r roots. Pairwise disjoint disks therefore
  // isolate one root each.
  std::vector<RootEnclosure> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < z.size(); ++i) {
    CQ value = horner(q, z[i]);
    CQ denom{Rational(q.leading()), Rational(0)};
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (j == i) continue;
      CQ diff = z[i] - z[j];
      if (diff.re == 0 && diff.im == 0) return std::nullopt;
      denom = denom * diff;
    }
    Rational w2 = norm2(value) / norm2(denom);
    Rational radius = w2 == 0 ? Rational(0) : Rational(n) * sqrt_upper(w2, bits);
    out.push_back(RootEnclosure{Disk{z[i].re, z[i].im, radius}});
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j)
      if (!out[i].disk.disjoint(out[j].disk)) return std::nullopt;

  std::stable_sort(out.begin(), out.end(), [](const RootEnclosure& a, const RootEnclosure& b) {
    Rational na = a.disk.center_norm2(), nb = b.disk.center_norm2();
    if (na != nb) return na > nb;
    if (a.disk.re != b.disk.re) return a.disk.re > b.disk.re;
    return a.disk.im > b.disk.im;
  });
  return out;
}

std::vector<RootEnclosure> isolate_roots(const IntPolynomial& q, unsigned start_bits) {
  for (unsigned bits = start_bits; bits <= kMaxPrecisionBits; bits *= 2)
    if (auto roots = isolate_roots_at(q, bits)) return *roots;
  throw Error("could not separate the roots of " + q.to_string() + " at " + std::to_string(kMaxPrecisionBits) +
              " bits");
}

// --- Pisot decision ---------------------------------------------------------

namespace {

enum class Side { Inside, Outside, Unknown };

Side classify(const RootEnclosure& r, unsigned bits) {
  if (r.disk.abs_upper(bits) < 1) return Side::Inside;
  if (r.disk.abs_lower(bits) > 1) return Side::Outside;
  return Side::Unknown;
}

// Roots decided against the unit circle; empty when precision ran out.
std::optional<std::vector<RootEnclosure>> decided_roots(const IntPolynomial& p, unsigned start_bits,
                                                        unsigned* used_bits = nullptr) {
  for (unsigned bits = start_bits; bits <= kMaxPrecisionBits; bits *= 2) {
    auto roots = isolate_roots_at(p, bits);
    if (!roots) continue;
    bool decided = std::all_of(roots->begin(), roots->end(),
                               [&](const RootEnclosure& r) { return classify(r, bits) != Side::Unknown; });
    if (!decided) continue;
    if (used_bits) *used_bits = bits;
    return roots;
  }
  return std::nullopt;
}

bool has_pisot_shape(const std::vector<RootEnclosure>& roots, unsigned bits) {
  std::size_t outside = 0;
  for (const auto& r : roots)
    if (classify(r, bits) == Side::Outside) ++outside;
  if (outside != 1) return false;
  const RootEnclosure& dominant = roots.front();
  return classify(dominant, bits) == Side::Outside && dominant.is_real() && dominant.real_lower() > 1;
}

}  // namespace

std::optional<UltimatelyPisot> is_ultimately_pisot(const IntPolynomial& p) {
  if (!p.is_monic()) throw Error("is_ultimately_pisot: expected a monic polynomial, got " + p.to_string());
  auto [k, rest] = strip_shift_factor(p);
  const int n = rest.degree();
  if (n < 1) return std::nullopt;
  if (!is_irreducible(rest)) return std::nullopt;
  if (n == 1) {
    if (-rest[0] >= 2) return UltimatelyPisot{k, rest};
    return std::nullopt;
  }
  // An irreducible polynomial with a root on the unit circle is self-reciprocal
  // up to sign. Outside degree 2 such polynomials pair every root z with 1/z
  // and cannot be Pisot; in degree 2 a unit-modulus pair is non-real.
  if (n == 2) {
    Integer disc = rest[1] * rest[1] - 4 * rest[0];
    if (disc < 0) return std::nullopt;
  } else {
    IntPolynomial rev = rest.reversed();
    if (rev == rest || rev == -rest) return std::nullopt;
  }
  unsigned bits = 0;
  auto roots = decided_roots(rest, kStartPrecisionBits, &bits);
  if (!roots) throw Error("could not decide the root moduli of " + rest.to_string());
  if (!has_pisot_shape(*roots, bits)) return std::nullopt;
  return UltimatelyPisot{k, rest};
}

// --- flattening bounds ------------------------------------------------------

namespace {

Rational pow(const Rational& x, long e) {
  Rational out = 1;
  for (long i = 0; i < std::labs(e); ++i) out *= x;
  return e >= 0 ? out : Rational(1) / out;
}

}  // namespace

PisotCertificate flattening_bounds(const UltimatelyPisot& up, const LinRecSeq& reference, const Integer& coeff_bound,
                                   std::size_t digit_span, unsigned precision_bits) {
  if (coeff_bound < 0) throw Error("flattening_bounds: negative coefficient bound");
  const IntPolynomial& p = up.pisot_factor;
  const int n = p.degree();
  const std::size_t k = up.k;
  if (reference.annihilator() != up.full())
    throw Error("flattening_bounds: reference annihilator " + reference.annihilator().to_string() + " is not " +
                up.full().to_string());
  const std::size_t m = reference.order();

  // gamma_j = G(theta_j) / P'(theta_j) where G = sum_t u_t * [X^t](P(X) / (X - theta)),
  // u = shift^k(reference), expanded symbolically in theta.
  const std::vector<Integer> s = reference.terms(k + static_cast<std::size_t>(n));
  std::vector<Integer> g(static_cast<std::size_t>(n), 0);
  for (int t = 0; t < n; ++t)
    for (int i = t + 1; i <= n; ++i) g[static_cast<std::size_t>(i - t - 1)] += s[k + static_cast<std::size_t>(t)] * p[static_cast<std::size_t>(i)];
  const IntPolynomial numerator(g);
  const IntPolynomial dp = p.derivative();

  for (unsigned bits = precision_bits; bits <= kMaxPrecisionBits; bits *= 2) {
    auto roots = decided_roots(p, bits);
    if (!roots || !has_pisot_shape(*roots, bits)) continue;

    std::vector<Disk> gamma;
    bool ok = true;
    for (const auto& r : *roots) {
      Disk denom = evaluate(dp, r.disk, bits);
      if (denom.contains_zero()) {
        ok = false;
        break;
      }
      gamma.push_back(divide(evaluate(numerator, r.disk, bits), denom, bits));
    }
    if (!ok) continue;

    const RootEnclosure& dominant = roots->front();
    const Rational theta_lo = dominant.real_lower();
    const Rational theta_hi = dominant.real_upper();
    const Rational gamma_abs = gamma[0].abs_upper(bits);

    Rational k_upper = 0;
    for (std::size_t t = 0; t < k; ++t)
      k_upper += Rational(abs(s[t])) + gamma_abs * pow(theta_lo, static_cast<long>(t) - static_cast<long>(k));
    for (std::size_t j = 1; j < roots->size(); ++j) {
      Rational gap = 1 - (*roots)[j].disk.abs_upper(bits);
      if (gap <= 0) {
        ok = false;
        break;
      }
      k_upper += gamma[j].abs_upper(bits) / gap;
    }
    if (!ok) continue;

    long exponent = std::max(1L, static_cast<long>(digit_span) - 1 - static_cast<long>(k));
    Rational tail = gamma_abs * pow(theta_hi, exponent) / (theta_lo - 1);

    bool exact = std::all_of(roots->begin(), roots->end(), [](const RootEnclosure& r) { return r.disk.radius == 0; }) &&
                 std::all_of(gamma.begin(), gamma.end(), [](const Disk& d) { return d.radius == 0; });
    Rational guard = 1;
    if (!exact) guard += Rational(1, 1 << 20);

    PisotCertificate cert;
    cert.k = k;
    cert.pisot_factor = p;
    cert.roots = *roots;
    cert.gamma = gamma;
    cert.k_upper = k_upper;
    cert.theta_upper = theta_hi;
    cert.precision_bits = bits;
    Rational theta_power = 1;
    for (std::size_t i = 0; i < m; ++i) {
      Rational value = Rational(coeff_bound) * (k_upper + (k_upper + tail) * theta_power) * guard;
      cert.coordinate_bounds.push_back(ceil(value));
      theta_power *= theta_hi;
    }
    return cert;
  }
  throw Error("flattening_bounds: enclosures of " + p.to_string() + " stayed indeterminate at " +
              std::to_string(kMaxPrecisionBits) + " bits");
}

}  // namespace dtnum
