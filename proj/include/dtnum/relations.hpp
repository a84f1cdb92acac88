#pragma once

// Automata for arithmetic relations over a numeration system given by a
// sequence automaton: addition, linear equality constraints and radix order.
// Tracks are read most significant digit first and padded on the left.

#include <cstddef>
#include <optional>
#include <vector>

#include "dtnum/automaton.hpp"
#include "dtnum/dtns.hpp"
#include "dtnum/pisot.hpp"
#include "dtnum/polyseq.hpp"
#include "dtnum/seqauto.hpp"

namespace dtnum {

enum class BoundMode { pisot, manual };

struct BoundSpec {
  BoundMode mode = BoundMode::pisot;
  // Used in manual mode only; must be positive.
  Integer manual_bound = 0;
  std::size_t state_cap = kDefaultStateCap;
};

// sum_i coefficients[i] * x_i = rhs
struct ConstraintSpec {
  std::vector<Integer> coefficients;
  Integer rhs = 0;
};

// Every transition weight is sum_{i < digit_span} c_i shift^i(reference)
// with |c_i| <= bound.
struct CoefficientBound {
  LinRecSeq reference{IntPolynomial::one(), {}};
  Integer bound = 0;
  std::size_t digit_span = 1;
};

// The same automaton with all weights under the lcm of their minimal
// annihilators.
SeqAutomaton reduce_annihilator(const SeqAutomaton& a);

// Scalar reference when every weight is an integer multiple of one
// sequence, otherwise the impulse (0, ..., 0, 1) with exact Hankel
// coordinates. Expects a reduced automaton.
CoefficientBound coefficient_bound(const SeqAutomaton& a);

// Per-coordinate flattening bounds for a reduced automaton. Throws
// NotPisotError naming the polynomial in pisot mode.
std::vector<Integer> relation_bounds(const SeqAutomaton& a, const BoundSpec& mode,
                                     std::optional<PisotCertificate>* certificate = nullptr);

struct RelationResult {
  // Minimal trimmed automaton over the tuple alphabet.
  Dfa automaton;
  // The linear combination that was flattened.
  SeqAutomaton combined;
  std::vector<Integer> bounds;
  std::optional<PisotCertificate> certificate;
  CoefficientBound coefficients;
  // State count of the trimmed flattening before minimization.
  std::size_t trimmed_states = 0;
  FlattenStats stats;
};

RelationResult linear_constraint_automaton(const SeqAutomaton& base, const ConstraintSpec& spec,
                                           const BoundSpec& mode = {});
RelationResult linear_constraint_automaton(const DtnsSystem& sys, const ConstraintSpec& spec,
                                           const BoundSpec& mode = {});

// Triples (x, y, z) with val(x) + val(y) = val(z).
RelationResult addition_automaton(const SeqAutomaton& base, const BoundSpec& mode = {});
RelationResult addition_automaton(const DtnsSystem& sys, const BoundSpec& mode = {});

// Pairs (x, y) of valid padded representations with val(x) <= val(y).
// Relies on radix order agreeing with numeric order, so on equal-length
// padded words it is the lexicographic order with the pad symbol lowest.
Dfa radix_order_automaton(const SeqAutomaton& base);
Dfa radix_order_automaton(const DtnsSystem& sys);

}  // namespace dtnum
