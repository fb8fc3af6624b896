#pragma once

#include <string>
#include <vector>

#include "wold/hypotheses.hpp"

namespace wold {

/// Single-isometry decomposition of the window span: unitary part (the stable
/// limit of the range chain), shift part (the wandering subspace swept by
/// forward powers) and the wandering subspace itself.
struct WoldReport {
    SubspaceBasis unitary_part;
    SubspaceBasis shift_part;
    SubspaceBasis wandering;
    double residual = 0.0; // worst distance from an interior basis vector to the two parts
    int multiplicity = 0;  // dim of the wandering subspace
    bool stabilized = true;
    bool extended_beyond_m = false; // chain/sum shells ran past max_power
    Window interior;
    std::vector<std::string> warnings;
};

WoldReport wold_single(const StructuredOperator& v, const Window& w, int max_power, double tol,
                       int chain_shell_override = -1);

enum class OpClass { Shift, Unitary, Inconclusive };

const char* to_string(OpClass c);

/// One joint reducing block H_Lambda. `mask` has bit i set iff operator i
/// belongs to Lambda (and is expected to restrict to a shift here).
struct BlockResult {
    unsigned mask = 0;
    std::vector<int> members;
    SubspaceBasis basis;
    int interior_dim = 0;
    std::vector<OpClass> classes; // empty on zero blocks
    double cross_check_gap = 0.0;
    bool stabilized = true;
    std::vector<std::string> warnings;
};

struct TupleDecomposition {
    int n = 0;
    int max_power = 0;
    double tol = 0.0;
    Window window;
    Window interior;
    std::vector<BlockResult> blocks; // indexed by subset mask, 0 .. 2^n - 1

    double completeness_residual = 0.0;
    double orthogonality_worst = 0.0;
    long long interior_cardinality = 0;
    long long interior_dim_total = 0;

    bool hypotheses_known = false;
    bool hypotheses_passed = false;
    std::vector<std::string> warnings;
};

/// Four-block decomposition of a pair, computed by the closed pair formulas
/// (range chain, mixed kernel chains and the joint wandering sweep). The
/// generic tuple engine must reproduce it blockwise.
TupleDecomposition wold_pair(const StructuredOperator& v1, const StructuredOperator& v2,
                             const Window& w, int max_power, double tol,
                             const HypothesisReport* hyp = nullptr);

/// General 2^n-block decomposition. Every block is cross-checked against the
/// independent intersection formula (joint unitary chain meets joint shift
/// sweep); the principal-angle gap between the two computations is reported
/// per block.
TupleDecomposition wold_tuple(const std::vector<StructuredOperator>& tuple, const Window& w,
                              int max_power, double tol, const HypothesisReport* hyp = nullptr,
                              int chain_shell_override = -1);

struct ReducingCheck {
    unsigned mask = 0;
    int op = 0;
    double residual = 0.0;
};

struct ReducingReport {
    std::vector<ReducingCheck> checks;
    double worst = 0.0;
};

/// Checks that each block basis is invariant under every operator and its
/// adjoint, measured on interior-supported basis vectors.
ReducingReport verify_reducing(const std::vector<StructuredOperator>& tuple,
                               const TupleDecomposition& decomp, const Window& w, double tol);

struct IdentityCheck {
    std::string identity;
    unsigned mask = 0;
    int op = 0;
    double gap = 0.0;
};

struct WanderingReport {
    std::vector<IdentityCheck> checks;
    double worst_invariance = 0.0; // V_j and V_j* map W_Lambda into itself
    double worst_complement = 0.0; // W_Lambda minus V_j W_Lambda vs W_Lambda meet W_j
    double worst_exchange = 0.0;   // power-word exchange identities on sampled powers
    bool hypotheses_flagged = false;
    std::vector<std::string> warnings;
};

/// Wandering-subspace identity suite. Runs regardless of the hypothesis
/// verdict; when the hypotheses were not verified Pass the report is flagged
/// and carries no pass/fail claim.
WanderingReport verify_wandering_identities(const std::vector<StructuredOperator>& tuple,
                                            const Window& w, double tol,
                                            const HypothesisReport* hyp = nullptr);

} // namespace wold
