#pragma once

#include <string>
#include <vector>

#include "wold/operators.hpp"

namespace wold {

/// One tested power pair of one operator pair. Range equality is judged two
/// ways: directly through principal angles on range bases, and through the
/// deviation of the range projections X X* vs Y Y* as window matrices. Both
/// verdicts are recorded and must agree.
struct PairPowerCheck {
    int i = 0, j = 0;
    int mi = 1, mj = 1;
    double plain_gap = 0.0;
    double starred_gap = 0.0;
    double plain_matdev = 0.0;
    double starred_matdev = 0.0;
    bool plain_pass = false;
    bool starred_pass = false;
    bool plain_routes_agree = true;
    bool starred_routes_agree = true;
};

struct PairSummary {
    int i = 0, j = 0;
    bool plain_pass = true;
    bool starred_pass = true;
    double worst_plain_gap = 0.0;
    double worst_starred_gap = 0.0;
    // A failing verdict carries a certificate: a unit vector in one range at
    // recorded distance from the other.
    bool has_witness = false;
    SparseVector witness;
    double witness_gap = 0.0;
    std::string witness_condition;
};

struct PairCommutation {
    int i = 0, j = 0;
    double commutator_dev = 0.0;      // max column norm of Vi Vj - Vj Vi
    double star_commutator_dev = 0.0; // max column norm of Vi* Vj - Vj Vi*
    bool commuting = false;
    bool doubly_commuting = false;
};

struct CommutationFlags {
    bool commuting = false;
    bool doubly_commuting = false;
};

struct HypothesisReport {
    int cap = 0;
    double tol = 0.0;
    Window window;
    double coherence_constant = 100.0; // matrix deviation passes at c * tol

    std::vector<PairPowerCheck> checks;
    std::vector<PairSummary> pairs;
    std::vector<PairCommutation> pair_flags;
    CommutationFlags flags;

    bool plain_pass = true;
    bool starred_pass = true;
    double worst_gap = 0.0;
    std::vector<std::string> warnings;

    bool pass() const { return plain_pass && starred_pass; }
};

/// Tests R(Vi^mi Vj^mj) = R(Vj^mj Vi^mi) and R(Vi*^mi Vj^mj) = R(Vj^mj Vi*^mi)
/// for every pair i < j and all 1 <= mi, mj <= cap on the guarded window.
HypothesisReport check_equal_range(const std::vector<StructuredOperator>& tuple, int cap,
                                   const Window& w, double tol);

/// The two starred conditions of one pair, which are equivalent whenever the
/// plain condition holds for all powers.
struct StarEquivalence {
    int i = 0, j = 0;
    bool star_on_first_pass = false;  // R(Vi*^m Vj^n) = R(Vj^n Vi*^m)
    bool star_on_second_pass = false; // R(Vj*^n Vi^m) = R(Vi^m Vj*^n)
    bool agree = false;
};

/// Requires the plain condition already verified Pass in `plain`.
std::vector<StarEquivalence> check_star_equivalence(const std::vector<StructuredOperator>& tuple,
                                                    int cap, const Window& w, double tol,
                                                    const HypothesisReport& plain);

/// Commutation flags for reporting only; the decomposition never gates on
/// them.
struct CommutationReport {
    std::vector<PairCommutation> pairs;
    CommutationFlags flags;
};

CommutationReport classify_commutation(const std::vector<StructuredOperator>& tuple,
                                       const Window& w, double tol);

} // namespace wold
