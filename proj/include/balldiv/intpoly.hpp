#ifndef BALLDIV_INTPOLY_HPP
#define BALLDIV_INTPOLY_HPP

#include <gmpxx.h>

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace balldiv {

// Degree of a univariate polynomial, with deg(0) = -infinity.
// The sentinel absorbs shifts (neg_inf + k = neg_inf) and loses every max.
class Degree {
  public:
    constexpr Degree() : finite_(false), v_(0) {}
    constexpr Degree(int v) : finite_(true), v_(v) {}
    static constexpr Degree neg_inf() { return Degree(); }

    constexpr bool is_finite() const { return finite_; }
    int value() const {
        if (!finite_) throw std::domain_error("Degree: value() of -infinity");
        return v_;
    }

    constexpr Degree operator+(int k) const { return finite_ ? Degree(v_ + k) : neg_inf(); }

    friend constexpr Degree max(Degree a, Degree b) {
        if (!a.finite_) return b;
        if (!b.finite_) return a;
        return Degree(a.v_ > b.v_ ? a.v_ : b.v_);
    }
    friend constexpr bool operator==(Degree a, Degree b) {
        return a.finite_ == b.finite_ && (!a.finite_ || a.v_ == b.v_);
    }
    friend constexpr bool operator!=(Degree a, Degree b) { return !(a == b); }
    friend constexpr bool operator<(Degree a, Degree b) {
        if (!a.finite_) return b.finite_;
        if (!b.finite_) return false;
        return a.v_ < b.v_;
    }
    friend constexpr bool operator>(Degree a, Degree b) { return b < a; }
    friend constexpr bool operator<=(Degree a, Degree b) { return !(b < a); }
    friend constexpr bool operator>=(Degree a, Degree b) { return !(a < b); }

    std::string str() const { return finite_ ? std::to_string(v_) : "-inf"; }

  private:
    bool finite_;
    int v_;
};

// Dense univariate polynomial over arbitrary-precision integers.
// The variable is c = cos(theta) throughout the library.
// Representation is canonical: no stored leading zero coefficient.
class IntPoly {
  public:
    IntPoly() = default;  // zero polynomial
    IntPoly(long c) { coeffs_.assign(1, mpz_class(c)); normalize(); }
    IntPoly(const mpz_class& c) { coeffs_.assign(1, c); normalize(); }
    explicit IntPoly(std::vector<mpz_class> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }
    IntPoly(std::initializer_list<long> coeffs) {
        coeffs_.reserve(coeffs.size());
        for (long c : coeffs) coeffs_.emplace_back(c);
        normalize();
    }

    // The monomial c.
    static IntPoly x() { return IntPoly({0, 1}); }
    static IntPoly monomial(const mpz_class& coeff, int deg);

    bool is_zero() const { return coeffs_.empty(); }
    Degree degree() const {
        return coeffs_.empty() ? Degree::neg_inf() : Degree(static_cast<int>(coeffs_.size()) - 1);
    }
    // Leading coefficient; LC(0) = 0 by convention.
    mpz_class leading() const { return coeffs_.empty() ? mpz_class(0) : coeffs_.back(); }
    mpz_class coeff(size_t i) const { return i < coeffs_.size() ? coeffs_[i] : mpz_class(0); }
    const std::vector<mpz_class>& coeffs() const { return coeffs_; }

    mpz_class operator()(const mpz_class& v) const;  // Horner
    double eval_double(double v) const;

    IntPoly operator-() const;
    IntPoly& operator+=(const IntPoly& o);
    IntPoly& operator-=(const IntPoly& o);
    IntPoly& operator*=(const IntPoly& o) { return *this = *this * o; }

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
    friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
    friend IntPoly operator*(const mpz_class& k, const IntPoly& a);

    friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.coeffs_ == b.coeffs_; }
    friend bool operator!=(const IntPoly& a, const IntPoly& b) { return !(a == b); }

    // Human-readable form, e.g. "4c^3 - 2c".
    std::string str() const;

  private:
    std::vector<mpz_class> coeffs_;
    void normalize() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }
};

}  // namespace balldiv

#endif
