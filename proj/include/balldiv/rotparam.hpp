#ifndef BALLDIV_ROTPARAM_HPP
#define BALLDIV_ROTPARAM_HPP

#include <cstdint>
#include <memory>
#include <optional>

#include "balldiv/qlinalg.hpp"
#include "balldiv/words.hpp"

namespace balldiv {

struct ZeroVector : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateExpression : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OddDimension : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Number of reflection factors in the parametrization: d for even d,
// d-1 for odd d (always even, so the product lands in SO(d)).
inline int reflection_count(int d) { return d % 2 == 0 ? d : d - 1; }

// Householder reflection R_w = I - 2 w w^T / |w|^2; exact over Q.
RatMat reflect(const RatVec& w);

// Exactly validated special orthogonal matrix: M^T M = I and det M = 1.
class Rotation {
  public:
    explicit Rotation(RatMat m);
    const RatMat& matrix() const { return m_; }
    int dim() const { return m_.rows(); }

  private:
    RatMat m_;
};

// Concatenation of d' nonzero vectors in Q^d parametrizing one rotation.
struct ParamVector {
    int dim = 0;
    std::vector<RatVec> vecs;
};

// Product of the d' reflections given by the parameter vectors.
Rotation alpha_d(const ParamVector& v);

struct SampleConfig {
    long height = 997;  // numerators in [-height, height], denominators in [1, height]
};

// Rotations plus a translation drawn from high-height random rationals with
// pairwise-distinct parameter coordinates: the finitely-checkable surrogate
// of an algebraically independent system.
struct IndependentSystem {
    int dim = 0;
    std::uint64_t seed = 0;
    std::vector<ParamVector> params;
    std::vector<Rotation> rotations;
    RatVec translation;
};
IndependentSystem sample_independent(int count, int dim, std::uint64_t seed,
                                     const SampleConfig& cfg = {});

// Rational rotation within Frobenius distance eps of a numeric target.
// The certificate is exact against the dyadic rationalization of the target;
// `slack` bounds the rationalization error folded into the bound.
struct NearRotation {
    RatMat matrix;
    Rat frob_sq_to_target;  // exact squared Frobenius distance to the rationalized target
    Rat slack;              // certified bound is sqrt(frob_sq) + slack < eps
    int attempts = 0;
};
NearRotation sample_near(const std::vector<double>& target_row_major, int dim, const Rat& eps,
                         std::uint64_t seed, int budget = 40);

// ---------------------------------------------------------------------------
// Polynomial identity testing over SO(d) samples (Lemma ftln / ftlnremark)
// ---------------------------------------------------------------------------

class MatExpr;
class ScalarExpr;
using MatExprPtr = std::shared_ptr<const MatExpr>;
using ScalarExprPtr = std::shared_ptr<const ScalarExpr>;

// Matrix-valued rational-function expression over symbol matrices M_0..M_{k-1}.
class MatExpr {
  public:
    enum class Kind { sym, ident, add, sub, mul, transpose, inverse, scale };
    Kind kind;
    int sym_index = -1;
    MatExprPtr a, b;
    ScalarExprPtr scalar;
};

class ScalarExpr {
  public:
    enum class Kind { constant, trace, add, sub, mul, div };
    Kind kind;
    Rat value;
    MatExprPtr m;
    ScalarExprPtr a, b;
};

MatExprPtr mat_sym(int index);
MatExprPtr mat_identity();
MatExprPtr mat_add(MatExprPtr a, MatExprPtr b);
MatExprPtr mat_sub(MatExprPtr a, MatExprPtr b);
MatExprPtr mat_mul(MatExprPtr a, MatExprPtr b);
MatExprPtr mat_transpose(MatExprPtr a);
MatExprPtr mat_inverse(MatExprPtr a);
MatExprPtr mat_scale(ScalarExprPtr s, MatExprPtr a);
ScalarExprPtr sc_const(Rat v);
ScalarExprPtr sc_trace(MatExprPtr m);
ScalarExprPtr sc_add(ScalarExprPtr a, ScalarExprPtr b);
ScalarExprPtr sc_sub(ScalarExprPtr a, ScalarExprPtr b);
ScalarExprPtr sc_mul(ScalarExprPtr a, ScalarExprPtr b);
ScalarExprPtr sc_div(ScalarExprPtr a, ScalarExprPtr b);

// Evaluate with concrete symbol matrices. Throws std::domain_error on a
// singular inverse or zero scalar divisor (callers resample).
RatMat eval_mat(const MatExprPtr& e, const std::vector<RatMat>& symbols, int dim);

// Where the random symbol matrices come from.
enum class SampleDomain {
    so_d,           // alpha_d at random parameter vectors
    m1_quaternion,  // rational unit quaternions in the block algebra (dim 4 only)
};

struct IdentityVerdict {
    bool nontrivial = false;
    int witness_trial = -1;           // first trial with a nonzero value
    std::vector<RatMat> witness;      // symbol matrices of that trial
    int trials = 0;
    double est_failure_prob = 0.0;    // heuristic Schwartz-Zippel style bound
    long degree_bound = 0;
};

// Evaluate the expression at `trials` random exact substitutions. Any nonzero
// value certifies "nontrivial" (with the witness re-checkable exactly); all
// zero yields "plausibly trivial" with a quantified per-trial estimate.
IdentityVerdict identity_test(const MatExprPtr& expr, int num_symbols, int dim, int trials,
                              std::uint64_t seed, SampleDomain domain = SampleDomain::so_d,
                              const SampleConfig& cfg = {});

// Lemma nincsfixpont at sample scale: evaluate the word on the system's
// rotations and test det(I - W) != 0 exactly. Even dimensions only.
bool fixed_point_free(const Word& w, const IndependentSystem& sys);

}  // namespace balldiv

#endif
