#include "balldiv/intpoly.hpp"

#include <sstream>

namespace balldiv {

IntPoly IntPoly::monomial(const mpz_class& coeff, int deg) {
    if (deg < 0) throw std::invalid_argument("IntPoly::monomial: negative degree");
    if (coeff == 0) return IntPoly();
    std::vector<mpz_class> c(static_cast<size_t>(deg) + 1, mpz_class(0));
    c.back() = coeff;
    return IntPoly(std::move(c));
}

mpz_class IntPoly::operator()(const mpz_class& v) const {
    mpz_class acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * v + *it;
    return acc;
}

double IntPoly::eval_double(double v) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * v + it->get_d();
    return acc;
}

IntPoly IntPoly::operator-() const {
    IntPoly r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

IntPoly& IntPoly::operator+=(const IntPoly& o) {
    if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size(), mpz_class(0));
    for (size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    normalize();
    return *this;
}

IntPoly& IntPoly::operator-=(const IntPoly& o) {
    if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size(), mpz_class(0));
    for (size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    normalize();
    return *this;
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    IntPoly r = a;
    r += b;
    return r;
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) {
    IntPoly r = a;
    r -= b;
    return r;
}

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return IntPoly();
    std::vector<mpz_class> out(a.coeffs_.size() + b.coeffs_.size() - 1, mpz_class(0));
    for (size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i] == 0) continue;
        for (size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return IntPoly(std::move(out));
}

IntPoly operator*(const mpz_class& k, const IntPoly& a) {
    if (k == 0) return IntPoly();
    IntPoly r = a;
    for (auto& c : r.coeffs_) c *= k;
    return r;
}

std::string IntPoly::str() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = coeffs_.size(); i-- > 0;) {
        const mpz_class& c = coeffs_[i];
        if (c == 0) continue;
        mpz_class a = abs(c);
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        if (a != 1 || i == 0) os << a.get_str();
        if (i >= 1) {
            os << "c";
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

}  // namespace balldiv
