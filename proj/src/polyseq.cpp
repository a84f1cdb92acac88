#include "dtnum/polyseq.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "dtnum/error.hpp"

namespace dtnum {

namespace {

using RatPoly = std::vector<Rational>;

void trim_zeros(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

RatPoly to_rational(const IntPolynomial& p) {
  RatPoly out;
  out.reserve(p.coefficients().size());
  for (const auto& c : p.coefficients()) out.emplace_back(c);
  return out;
}

// Remainder of a by b (b nonzero), quotient written to q when non-null.
RatPoly rat_divmod(RatPoly a, const RatPoly& b, RatPoly* q) {
  trim_zeros(a);
  const std::size_t db = b.size() - 1;
  if (q) q->assign(a.size() >= b.size() ? a.size() - db : 0, Rational(0));
  while (a.size() >= b.size()) {
    Rational factor = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    if (q) (*q)[shift] = factor;
    for (std::size_t i = 0; i <= db; ++i) a[shift + i] -= factor * b[i];
    a.pop_back();
    trim_zeros(a);
  }
  return a;
}

IntPolynomial monic_from_rational(RatPoly p) {
  trim_zeros(p);
  if (p.empty()) return {};
  Rational lead = p.back();
  std::vector<Integer> out;
  out.reserve(p.size());
  for (auto& c : p) {
    c /= lead;
    c.canonicalize();
    if (c.get_den() != 1) throw Error("monic polynomial with non-integer coefficients");
    out.push_back(c.get_num());
  }
  return IntPolynomial(std::move(out));
}

}  // namespace

IntPolynomial::IntPolynomial(std::vector<Integer> coefficients) : coefficients_(std::move(coefficients)) {
  normalize();
}

IntPolynomial::IntPolynomial(std::initializer_list<long> coefficients) {
  coefficients_.reserve(coefficients.size());
  for (long c : coefficients) coefficients_.emplace_back(c);
  normalize();
}

IntPolynomial IntPolynomial::x_power(std::size_t k) {
  std::vector<Integer> c(k + 1, 0);
  c[k] = 1;
  return IntPolynomial(std::move(c));
}

IntPolynomial IntPolynomial::linear(const Integer& root) { return IntPolynomial(std::vector<Integer>{-root, 1}); }

void IntPolynomial::normalize() {
  while (!coefficients_.empty() && coefficients_.back() == 0) coefficients_.pop_back();
}

Integer IntPolynomial::operator[](std::size_t i) const {
  return i < coefficients_.size() ? coefficients_[i] : Integer(0);
}

Integer IntPolynomial::evaluate(const Integer& x) const {
  Integer acc = 0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

IntPolynomial IntPolynomial::derivative() const {
  if (coefficients_.size() <= 1) return {};
  std::vector<Integer> out(coefficients_.size() - 1);
  for (std::size_t i = 1; i < coefficients_.size(); ++i) out[i - 1] = coefficients_[i] * static_cast<unsigned long>(i);
  return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::reversed() const {
  return IntPolynomial(std::vector<Integer>(coefficients_.rbegin(), coefficients_.rend()));
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<Integer> out(std::max(a.coefficients_.size(), b.coefficients_.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return IntPolynomial(std::move(out));
}

IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<Integer> out(std::max(a.coefficients_.size(), b.coefficients_.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return IntPolynomial(std::move(out));
}

IntPolynomial operator-(const IntPolynomial& a) { return IntPolynomial() - a; }

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Integer> out(a.coefficients_.size() + b.coefficients_.size() - 1, 0);
  for (std::size_t i = 0; i < a.coefficients_.size(); ++i)
    for (std::size_t j = 0; j < b.coefficients_.size(); ++j) out[i + j] += a.coefficients_[i] * b.coefficients_[j];
  return IntPolynomial(std::move(out));
}

std::string IntPolynomial::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Integer& c = coefficients_[i];
    if (c == 0) continue;
    Integer mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0 || mag != 1) os << mag;
    if (i >= 1) os << "X";
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

std::string IntPolynomial::to_coefficient_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < coefficients_.size(); ++i) os << (i ? " " : "") << coefficients_[i];
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const IntPolynomial& p) { return os << p.to_string(); }

bool divides(const IntPolynomial& divisor, const IntPolynomial& p) {
  if (divisor.is_zero()) return p.is_zero();
  return rat_divmod(to_rational(p), to_rational(divisor), nullptr).empty();
}

IntPolynomial exact_quotient(const IntPolynomial& p, const IntPolynomial& monic_divisor) {
  if (!monic_divisor.is_monic()) throw Error("exact_quotient: divisor must be monic");
  RatPoly q;
  RatPoly r = rat_divmod(to_rational(p), to_rational(monic_divisor), &q);
  if (!r.empty()) throw Error("exact_quotient: " + monic_divisor.to_string() + " does not divide " + p.to_string());
  std::vector<Integer> out;
  for (auto& c : q) out.push_back(c.get_num());
  return IntPolynomial(std::move(out));
}

IntPolynomial poly_gcd(const IntPolynomial& p, const IntPolynomial& q) {
  RatPoly a = to_rational(p), b = to_rational(q);
  trim_zeros(a);
  trim_zeros(b);
  while (!b.empty()) {
    RatPoly r = rat_divmod(a, b, nullptr);
    a = std::move(b);
    b = std::move(r);
  }
  return monic_from_rational(std::move(a));
}

IntPolynomial poly_lcm(const IntPolynomial& p, const IntPolynomial& q) {
  if (p.is_zero() || q.is_zero()) throw Error("poly_lcm: zero polynomial");
  IntPolynomial g = poly_gcd(p, q);
  RatPoly quotient;
  rat_divmod(to_rational(p * q), to_rational(g), &quotient);
  return monic_from_rational(std::move(quotient));
}

// --- LinRecSeq --------------------------------------------------------------

LinRecSeq::LinRecSeq(IntPolynomial annihilator, std::vector<Integer> initial)
    : annihilator_(std::move(annihilator)), initial_(std::move(initial)) {
  if (!annihilator_.is_monic()) throw Error("annihilator must be monic: " + annihilator_.to_string());
  if (initial_.size() != static_cast<std::size_t>(annihilator_.degree()))
    throw Error("initial vector has " + std::to_string(initial_.size()) + " entries, annihilator " +
                annihilator_.to_string() + " needs " + std::to_string(annihilator_.degree()));
}

LinRecSeq LinRecSeq::zero(IntPolynomial annihilator) {
  auto m = static_cast<std::size_t>(std::max(annihilator.degree(), 0));
  return LinRecSeq(std::move(annihilator), std::vector<Integer>(m, 0));
}

LinRecSeq LinRecSeq::impulse(IntPolynomial annihilator) {
  auto m = static_cast<std::size_t>(std::max(annihilator.degree(), 0));
  std::vector<Integer> v(m, 0);
  if (m) v.back() = 1;
  return LinRecSeq(std::move(annihilator), std::move(v));
}

bool LinRecSeq::is_zero() const {
  return std::all_of(initial_.begin(), initial_.end(), [](const Integer& x) { return x == 0; });
}

std::vector<Integer> companion_step(const IntPolynomial& annihilator, const std::vector<Integer>& v) {
  const std::size_t m = v.size();
  if (m == 0) return {};
  std::vector<Integer> out(m);
  Integer last = 0;
  for (std::size_t i = 0; i < m; ++i) last -= annihilator[i] * v[i];
  for (std::size_t i = 0; i + 1 < m; ++i) out[i] = v[i + 1];
  out[m - 1] = std::move(last);
  return out;
}

std::vector<Integer> LinRecSeq::terms(std::size_t count) const {
  const std::size_t m = initial_.size();
  std::vector<Integer> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    if (n < m) {
      out.push_back(initial_[n]);
      continue;
    }
    Integer next = 0;
    for (std::size_t i = 0; i < m; ++i) next -= annihilator_[i] * out[n - m + i];
    out.push_back(std::move(next));
  }
  return out;
}

Integer LinRecSeq::term(std::size_t n) const {
  if (initial_.empty()) return 0;
  return terms(n + 1).back();
}

LinRecSeq LinRecSeq::shift(std::size_t times) const {
  std::vector<Integer> v = initial_;
  for (std::size_t t = 0; t < times; ++t) v = companion_step(annihilator_, v);
  return LinRecSeq(annihilator_, std::move(v));
}

LinRecSeq LinRecSeq::rebased(const IntPolynomial& multiple) const {
  if (!divides(annihilator_, multiple))
    throw Error("rebased: " + annihilator_.to_string() + " does not divide " + multiple.to_string());
  return LinRecSeq(multiple, terms(static_cast<std::size_t>(multiple.degree())));
}

namespace {

void require_same_annihilator(const LinRecSeq& a, const LinRecSeq& b) {
  if (a.annihilator() != b.annihilator())
    throw Error("sequences have different annihilators: " + a.annihilator().to_string() + " vs " +
                b.annihilator().to_string());
}

}  // namespace

LinRecSeq operator+(const LinRecSeq& a, const LinRecSeq& b) {
  require_same_annihilator(a, b);
  std::vector<Integer> v(a.initial_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.initial_[i] + b.initial_[i];
  return LinRecSeq(a.annihilator_, std::move(v));
}

LinRecSeq operator-(const LinRecSeq& a, const LinRecSeq& b) {
  require_same_annihilator(a, b);
  std::vector<Integer> v(a.initial_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.initial_[i] - b.initial_[i];
  return LinRecSeq(a.annihilator_, std::move(v));
}

LinRecSeq operator*(const Integer& c, const LinRecSeq& s) {
  std::vector<Integer> v(s.initial_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c * s.initial_[i];
  return LinRecSeq(s.annihilator_, std::move(v));
}

// --- exact linear algebra ---------------------------------------------------

std::size_t rational_rank(std::vector<std::vector<Rational>> a) {
  const std::size_t rows = a.size();
  if (rows == 0) return 0;
  const std::size_t cols = a[0].size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (a[r][col] == 0) continue;
      Rational f = a[r][col] / a[rank][col];
      for (std::size_t c = col; c < cols; ++c) a[r][c] -= f * a[rank][c];
    }
    ++rank;
  }
  return rank;
}

bool solve_rational(std::vector<std::vector<Rational>> a, std::vector<Rational> b, std::vector<Rational>& x) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return false;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

namespace {

std::vector<std::vector<Rational>> hankel(const std::vector<Integer>& t, std::size_t size) {
  std::vector<std::vector<Rational>> h(size, std::vector<Rational>(size));
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j) h[i][j] = t[i + j];
  return h;
}

}  // namespace

IntPolynomial minimal_annihilator(const LinRecSeq& seq) {
  const std::size_t m = seq.order();
  if (seq.is_zero()) return IntPolynomial::one();
  const std::vector<Integer> t = seq.terms(2 * m + 1);
  // The rank of the (m+1)x(m+1) Hankel matrix is the minimal recurrence order,
  // and the leading d x d block is then invertible.
  const std::size_t d = rational_rank(hankel(t, m + 1));
  std::vector<Rational> rhs(d);
  for (std::size_t i = 0; i < d; ++i) rhs[i] = t[d + i];
  std::vector<Rational> c;
  if (!solve_rational(hankel(t, d), rhs, c)) throw Error("minimal_annihilator: singular leading Hankel block");

  std::vector<Integer> coeffs(d + 1);
  for (std::size_t i = 0; i < d; ++i) {
    if (c[i].get_den() != 1) throw Error("minimal_annihilator: non-integer recurrence coefficient");
    coeffs[i] = -c[i].get_num();
  }
  coeffs[d] = 1;
  IntPolynomial candidate(std::move(coeffs));

  // Verification: annihilates 2m terms and divides the supplied annihilator.
  for (std::size_t n = 0; n + d < 2 * m; ++n) {
    Integer acc = 0;
    for (std::size_t i = 0; i <= d; ++i) acc += candidate[i] * t[n + i];
    if (acc != 0) throw Error("minimal_annihilator: candidate fails to annihilate the sequence");
  }
  if (!divides(candidate, seq.annihilator()))
    throw Error("minimal_annihilator: candidate does not divide " + seq.annihilator().to_string());
  return candidate;
}

RationalVector hankel_coordinates(const LinRecSeq& target, const LinRecSeq& reference) {
  require_same_annihilator(target, reference);
  const std::size_t m = reference.order();
  const std::vector<Integer> t = reference.terms(2 * m);
  std::vector<Rational> rhs(target.initial().begin(), target.initial().end());
  RationalVector alpha;
  if (!solve_rational(hankel(t, m), rhs, alpha))
    throw Error("reference does not generate the recurrence space (singular Hankel matrix)");
  return alpha;
}

Integer ceil(const Rational& q) {
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

}  // namespace dtnum
