#include "balldiv/qmat.hpp"

#include <cmath>
#include <sstream>

namespace balldiv {

IntPoly cheb_cos(long m) {
    if (m < 0) m = -m;  // cos is even in m
    IntPoly prev(1);            // T_0
    if (m == 0) return prev;
    IntPoly cur = IntPoly::x();  // T_1
    const IntPoly two_x{0, 2};
    for (long i = 2; i <= m; ++i) {
        IntPoly next = two_x * cur - prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

IntPoly cheb_sin_factor(long m) {
    bool neg = m < 0;
    if (neg) m = -m;
    IntPoly prev;               // U-factor at 0
    if (m == 0) return prev;
    IntPoly cur(1);             // at 1
    const IntPoly two_x{0, 2};
    for (long i = 2; i <= m; ++i) {
        IntPoly next = two_x * cur - prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return neg ? -cur : cur;
}

IntPoly QMat::norm_poly() const {
    const IntPoly sin_sq{1, 0, -1};  // 1 - c^2
    return p_ * p_ + r_ * r_ + sin_sq * (q_ * q_ + s_ * s_);
}

QMat operator*(const QMat& a, const QMat& b) {
    const IntPoly sin_sq{1, 0, -1};  // 1 - c^2
    // Hamilton product of (p1, s q1, r1, s s1) and (p2, s q2, r2, s s2),
    // with sin^2 folded back into the c-polynomials.
    IntPoly p = a.p_ * b.p_ - sin_sq * (a.q_ * b.q_) - a.r_ * b.r_ - sin_sq * (a.s_ * b.s_);
    IntPoly q = a.p_ * b.q_ + a.q_ * b.p_ + a.r_ * b.s_ - a.s_ * b.r_;
    IntPoly r = a.p_ * b.r_ + a.r_ * b.p_ + sin_sq * (a.s_ * b.q_ - a.q_ * b.s_);
    IntPoly s = a.p_ * b.s_ + a.s_ * b.p_ + a.q_ * b.r_ - a.r_ * b.q_;
    return QMat(std::move(p), std::move(q), std::move(r), std::move(s));
}

QMat pow(const QMat& m, long k) {
    if (k == 0) return QMat::identity();
    // Closed form for the generators.
    if (m == QMat::gen_a()) return QMat(cheb_cos(k), cheb_sin_factor(k), {}, {});
    if (m == QMat::gen_b()) return QMat(cheb_cos(k), {}, {}, cheb_sin_factor(k));
    QMat base = m;
    if (k < 0) {
        if (!m.is_orthogonal())
            throw NonOrthogonal("pow: negative power of a non-orthogonal element");
        base = m.transpose();
        k = -k;
    }
    QMat acc = QMat::identity();
    while (k > 0) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

std::array<QMat::CSEntry, 16> QMat::expand() const {
    const IntPoly z;
    // Signs follow the block form in the class comment.
    return {
        CSEntry{p_, z},  CSEntry{z, -q_}, CSEntry{-r_, z}, CSEntry{z, -s_},
        CSEntry{z, q_},  CSEntry{p_, z},  CSEntry{z, -s_}, CSEntry{r_, z},
        CSEntry{r_, z},  CSEntry{z, s_},  CSEntry{p_, z},  CSEntry{z, -q_},
        CSEntry{z, s_},  CSEntry{-r_, z}, CSEntry{z, q_},  CSEntry{p_, z},
    };
}

std::array<double, 16> QMat::eval_double(double theta) const {
    const double c = std::cos(theta), s = std::sin(theta);
    auto e = expand();
    std::array<double, 16> out;
    for (int i = 0; i < 16; ++i) out[i] = e[i].u.eval_double(c) + s * e[i].v.eval_double(c);
    return out;
}

std::string QMat::str() const {
    std::ostringstream os;
    os << "M(" << p_.str() << ", " << q_.str() << ", " << r_.str() << ", " << s_.str() << ")";
    return os.str();
}

DegProfile deg_profile(const QMat& m) {
    DegProfile d;
    d.deg_p = m.p().degree();
    d.deg_q = m.q().degree();
    d.deg_r = m.r().degree();
    d.deg_s = m.s().degree();
    d.lc_p = m.p().leading();
    d.lc_q = m.q().leading();
    d.lc_r = m.r().leading();
    d.lc_s = m.s().leading();
    d.mat_deg = max(max(d.deg_p, d.deg_q + 1), max(d.deg_r, d.deg_s + 1));
    return d;
}

bool dot_equiv(const QMat& a, const QMat& b) {
    auto same = [](const IntPoly& x, const IntPoly& y) {
        return x.degree() == y.degree() && x.leading() == y.leading();
    };
    return same(a.p(), b.p()) && same(a.q(), b.q()) && same(a.r(), b.r()) && same(a.s(), b.s());
}

ScaledQMat inv_i_minus(const QMat& m) {
    if (m.p() == IntPoly(1)) throw SingularTrace("inv_i_minus: p == 1, I - M is singular");
    IntPoly denom = IntPoly(2) - mpz_class(2) * m.p();
    return ScaledQMat{std::move(denom), QMat::identity() - m.transpose()};
}

}  // namespace balldiv
