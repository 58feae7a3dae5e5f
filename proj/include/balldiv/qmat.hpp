#ifndef BALLDIV_QMAT_HPP
#define BALLDIV_QMAT_HPP

#include <array>
#include <stdexcept>
#include <string>

#include "balldiv/intpoly.hpp"

namespace balldiv {

struct NonOrthogonal : std::domain_error {
    using std::domain_error::domain_error;
};
struct SingularTrace : std::domain_error {
    using std::domain_error::domain_error;
};

// Chebyshev expansions at c = cos(theta):
//   cheb_cos(m)(c)        = cos(m theta)            (first kind)
//   cheb_sin_factor(m)(c) = sin(m theta) / sin(theta)
// cheb_sin_factor handles negative m via sin(-m theta) = -sin(m theta).
IntPoly cheb_cos(long m);
IntPoly cheb_sin_factor(long m);

// Element of the algebra M(theta): the 4x4 matrix
//
//   [ p    -s*q   -r    -s*s ]
//   [ s*q   p     -s*s   r   ]          p, q, r, s integer polynomials in c,
//   [ r     s*s    p    -s*q ]          s = sin(theta), c = cos(theta),
//   [ s*s  -r      s*q   p   ]          with s^2 rewritten as 1 - c^2.
//
// This is the left regular representation of the quaternion
// p + (s*q) i + r j + (s*s) k, so multiplication is the Hamilton product
// with every even power of sin(theta) folded into polynomials in c.
class QMat {
  public:
    QMat() = default;  // zero element
    QMat(IntPoly p, IntPoly q, IntPoly r, IntPoly s)
        : p_(std::move(p)), q_(std::move(q)), r_(std::move(r)), s_(std::move(s)) {}

    static QMat identity() { return QMat(IntPoly(1), {}, {}, {}); }
    static QMat zero() { return QMat(); }
    // The generators of Lemma l40:
    static QMat gen_a() { return QMat(IntPoly::x(), IntPoly(1), {}, {}); }
    static QMat gen_b() { return QMat(IntPoly::x(), {}, {}, IntPoly(1)); }

    const IntPoly& p() const { return p_; }
    const IntPoly& q() const { return q_; }
    const IntPoly& r() const { return r_; }
    const IntPoly& s() const { return s_; }

    bool is_zero() const {
        return p_.is_zero() && q_.is_zero() && r_.is_zero() && s_.is_zero();
    }
    bool is_identity() const { return *this == identity(); }

    // Transpose of the 4x4 matrix = quaternion conjugate.
    QMat transpose() const { return QMat(p_, -q_, -r_, -s_); }

    // Squared quaternion norm: p^2 + r^2 + (1-c^2)(q^2 + s^2).
    // M^T M = norm_poly * I, and det M = norm_poly^2.
    IntPoly norm_poly() const;
    bool is_orthogonal() const { return norm_poly() == IntPoly(1); }
    IntPoly det_poly() const {
        IntPoly n = norm_poly();
        return n * n;
    }

    friend QMat operator*(const QMat& a, const QMat& b);
    friend QMat operator+(const QMat& a, const QMat& b) {
        return QMat(a.p_ + b.p_, a.q_ + b.q_, a.r_ + b.r_, a.s_ + b.s_);
    }
    friend QMat operator-(const QMat& a, const QMat& b) {
        return QMat(a.p_ - b.p_, a.q_ - b.q_, a.r_ - b.r_, a.s_ - b.s_);
    }
    QMat operator-() const { return QMat(-p_, -q_, -r_, -s_); }
    // Scalar multiple by a polynomial in c.
    friend QMat operator*(const IntPoly& k, const QMat& a) {
        return QMat(k * a.p_, k * a.q_, k * a.r_, k * a.s_);
    }

    friend bool operator==(const QMat& a, const QMat& b) {
        return a.p_ == b.p_ && a.q_ == b.q_ && a.r_ == b.r_ && a.s_ == b.s_;
    }
    friend bool operator!=(const QMat& a, const QMat& b) { return !(a == b); }

    // One 4x4 entry as u(c) + sin(theta) * v(c).
    struct CSEntry {
        IntPoly u, v;
    };
    // Row-major expansion of the full 4x4 matrix.
    std::array<CSEntry, 16> expand() const;
    // Numeric value of the 4x4 matrix at a concrete angle, row-major.
    std::array<double, 16> eval_double(double theta) const;

    std::string str() const;

  private:
    IntPoly p_, q_, r_, s_;
};

// Integer power. Generators use the Chebyshev closed form
// A^k = M(T_k, U_k, 0, 0), B^k = M(T_k, 0, 0, U_k); the general case is
// binary exponentiation. Negative k requires an orthogonal element
// (inverse = transpose) and throws NonOrthogonal otherwise.
QMat pow(const QMat& m, long k);

// Degree and leading-coefficient profile of the four polynomial slots.
// mat_deg is Definition matrixdegree: max(deg p, deg q + 1, deg r, deg s + 1).
struct DegProfile {
    Degree deg_p, deg_q, deg_r, deg_s;
    mpz_class lc_p, lc_q, lc_r, lc_s;
    Degree mat_deg;
};
DegProfile deg_profile(const QMat& m);

// The relation "=*" of Definition d4.2: all four slots agree in degree and
// leading coefficient.
bool dot_equiv(const QMat& a, const QMat& b);

// A matrix with a rational-function scalar prefactor: (1/denom) * mat.
struct ScaledQMat {
    IntPoly denom;
    QMat mat;
};

// Closed-form inverse of I - M for orthogonal M (Lemma inverz):
// (I - M)^{-1} = 1/(2-2p) (I - M^T).  Throws SingularTrace when p == 1.
ScaledQMat inv_i_minus(const QMat& m);

}  // namespace balldiv

#endif
