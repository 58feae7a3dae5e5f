#include "balldiv/qlinalg.hpp"

#include <sstream>

namespace balldiv {

RatMat RatMat::identity(int n) {
    RatMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RatMat RatMat::transpose() const {
    RatMat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool RatMat::is_identity() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

bool RatMat::is_zero() const {
    for (const Rat& v : a_)
        if (v != 0) return false;
    return true;
}

RatMat operator*(const RatMat& a, const RatMat& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("RatMat: dimension mismatch in product");
    RatMat r(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
        for (int k = 0; k < a.cols_; ++k) {
            const Rat& aik = a(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

RatMat operator+(const RatMat& a, const RatMat& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw std::invalid_argument("RatMat: dimension mismatch in sum");
    RatMat r = a;
    for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += b.a_[i];
    return r;
}

RatMat operator-(const RatMat& a, const RatMat& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw std::invalid_argument("RatMat: dimension mismatch in difference");
    RatMat r = a;
    for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] -= b.a_[i];
    return r;
}

RatVec RatMat::apply(const RatVec& x) const {
    if (static_cast<int>(x.size()) != cols_)
        throw std::invalid_argument("RatMat: dimension mismatch in apply");
    RatVec y(static_cast<size_t>(rows_));
    for (int i = 0; i < rows_; ++i) {
        Rat acc = 0;
        for (int j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[static_cast<size_t>(j)];
        y[static_cast<size_t>(i)] = acc;
    }
    return y;
}

Rat RatMat::determinant() const {
    if (rows_ != cols_) throw std::invalid_argument("RatMat: determinant of non-square matrix");
    RatMat m = *this;
    Rat det = 1;
    const int n = rows_;
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (m(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) return Rat(0);
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(m(pivot, j), m(col, j));
            det = -det;
        }
        det *= m(col, col);
        const Rat inv = 1 / m(col, col);
        for (int r = col + 1; r < n; ++r) {
            if (m(r, col) == 0) continue;
            const Rat f = m(r, col) * inv;
            for (int j = col; j < n; ++j) m(r, j) -= f * m(col, j);
        }
    }
    return det;
}

std::optional<RatVec> RatMat::solve(const RatVec& rhs) const {
    if (static_cast<int>(rhs.size()) != rows_)
        throw std::invalid_argument("RatMat: dimension mismatch in solve");
    RatMat m = *this;
    RatVec b = rhs;
    const int n = rows_, k = cols_;
    std::vector<int> pivot_col_of_row;
    int row = 0;
    for (int col = 0; col < k && row < n; ++col) {
        int pr = -1;
        for (int r = row; r < n; ++r)
            if (m(r, col) != 0) {
                pr = r;
                break;
            }
        if (pr < 0) continue;
        if (pr != row) {
            for (int j = 0; j < k; ++j) std::swap(m(pr, j), m(row, j));
            std::swap(b[static_cast<size_t>(pr)], b[static_cast<size_t>(row)]);
        }
        const Rat inv = 1 / m(row, col);
        for (int j = col; j < k; ++j) m(row, j) *= inv;
        b[static_cast<size_t>(row)] *= inv;
        for (int r = 0; r < n; ++r) {
            if (r == row || m(r, col) == 0) continue;
            const Rat f = m(r, col);
            for (int j = col; j < k; ++j) m(r, j) -= f * m(row, j);
            b[static_cast<size_t>(r)] -= f * b[static_cast<size_t>(row)];
        }
        pivot_col_of_row.push_back(col);
        ++row;
    }
    for (int r = row; r < n; ++r)
        if (b[static_cast<size_t>(r)] != 0) return std::nullopt;  // inconsistent
    RatVec x(static_cast<size_t>(k), Rat(0));
    for (int r = 0; r < row; ++r)
        x[static_cast<size_t>(pivot_col_of_row[static_cast<size_t>(r)])] =
            b[static_cast<size_t>(r)];
    return x;
}

std::optional<RatMat> RatMat::inverse() const {
    if (rows_ != cols_) throw std::invalid_argument("RatMat: inverse of non-square matrix");
    const int n = rows_;
    RatMat m = *this;
    RatMat inv = identity(n);
    for (int col = 0; col < n; ++col) {
        int pr = -1;
        for (int r = col; r < n; ++r)
            if (m(r, col) != 0) {
                pr = r;
                break;
            }
        if (pr < 0) return std::nullopt;
        if (pr != col)
            for (int j = 0; j < n; ++j) {
                std::swap(m(pr, j), m(col, j));
                std::swap(inv(pr, j), inv(col, j));
            }
        const Rat piv_inv = 1 / m(col, col);
        for (int j = 0; j < n; ++j) {
            m(col, j) *= piv_inv;
            inv(col, j) *= piv_inv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || m(r, col) == 0) continue;
            const Rat f = m(r, col);
            for (int j = 0; j < n; ++j) {
                m(r, j) -= f * m(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

int RatMat::rank() const {
    RatMat m = *this;
    int rank = 0;
    for (int col = 0; col < cols_ && rank < rows_; ++col) {
        int pr = -1;
        for (int r = rank; r < rows_; ++r)
            if (m(r, col) != 0) {
                pr = r;
                break;
            }
        if (pr < 0) continue;
        if (pr != rank)
            for (int j = 0; j < cols_; ++j) std::swap(m(pr, j), m(rank, j));
        const Rat inv = 1 / m(rank, col);
        for (int r = rank + 1; r < rows_; ++r) {
            if (m(r, col) == 0) continue;
            const Rat f = m(r, col) * inv;
            for (int j = col; j < cols_; ++j) m(r, j) -= f * m(rank, j);
        }
        ++rank;
    }
    return rank;
}

Rat RatMat::frobenius_sq_distance(const RatMat& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("RatMat: dimension mismatch in distance");
    Rat acc = 0;
    for (size_t i = 0; i < a_.size(); ++i) {
        Rat d = a_[i] - other.a_[i];
        acc += d * d;
    }
    return acc;
}

std::string RatMat::str() const {
    std::ostringstream os;
    for (int i = 0; i < rows_; ++i) {
        os << (i == 0 ? "[" : " ");
        for (int j = 0; j < cols_; ++j) os << (*this)(i, j).get_str() << (j + 1 < cols_ ? " " : "");
        os << (i + 1 < rows_ ? ";\n" : "]");
    }
    return os.str();
}

Rat dot(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    Rat acc = 0;
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

Rat norm_sq(const RatVec& a) { return dot(a, a); }

RatVec operator-(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("RatVec: dimension mismatch");
    RatVec r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

RatVec operator+(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("RatVec: dimension mismatch");
    RatVec r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

RatVec AffineMap::apply(const RatVec& x) const { return linear.apply(x) + offset; }

AffineMap AffineMap::compose(const AffineMap& other) const {
    return AffineMap{linear * other.linear, linear.apply(other.offset) + offset};
}

AffineMap AffineMap::inverse() const {
    auto inv = linear.inverse();
    if (!inv) throw std::invalid_argument("AffineMap: linear part not invertible");
    RatVec neg(offset.size());
    for (size_t i = 0; i < offset.size(); ++i) neg[i] = -offset[i];
    return AffineMap{*inv, inv->apply(neg)};
}

AffineMap AffineMap::linear_map(RatMat m) {
    RatVec zero(static_cast<size_t>(m.rows()), Rat(0));
    return AffineMap{std::move(m), std::move(zero)};
}

}  // namespace balldiv
