#ifndef BALLDIV_QLINALG_HPP
#define BALLDIV_QLINALG_HPP

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace balldiv {

using Rat = mpq_class;
using RatVec = std::vector<Rat>;

// mpq_class(num, den) does not canonicalize; every fraction built from a
// numerator/denominator pair must go through here.
inline Rat make_rat(long num, long den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Dense matrix over exact rationals. Small dimensions only (desk scale).
class RatMat {
  public:
    RatMat() = default;
    RatMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows * cols)) {}
    static RatMat identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Rat& operator()(int i, int j) { return a_[static_cast<size_t>(i * cols_ + j)]; }
    const Rat& operator()(int i, int j) const { return a_[static_cast<size_t>(i * cols_ + j)]; }

    RatMat transpose() const;
    bool is_identity() const;
    bool is_zero() const;

    friend RatMat operator*(const RatMat& a, const RatMat& b);
    friend RatMat operator+(const RatMat& a, const RatMat& b);
    friend RatMat operator-(const RatMat& a, const RatMat& b);
    friend bool operator==(const RatMat& a, const RatMat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }
    friend bool operator!=(const RatMat& a, const RatMat& b) { return !(a == b); }

    RatVec apply(const RatVec& x) const;

    // Exact determinant (Gaussian elimination over Q).
    Rat determinant() const;
    // Solve A x = b exactly; nullopt when inconsistent. For rank-deficient
    // consistent systems returns one solution (free variables set to 0).
    std::optional<RatVec> solve(const RatVec& rhs) const;
    std::optional<RatMat> inverse() const;
    int rank() const;

    // Sum of squared entries of (this - other); exact.
    Rat frobenius_sq_distance(const RatMat& other) const;

    std::string str() const;

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<Rat> a_;
};

// x . y, |x|^2, scaling.
Rat dot(const RatVec& a, const RatVec& b);
Rat norm_sq(const RatVec& a);
RatVec operator-(const RatVec& a, const RatVec& b);
RatVec operator+(const RatVec& a, const RatVec& b);

// Affine map x -> M x + b over exact rationals.
struct AffineMap {
    RatMat linear;
    RatVec offset;

    RatVec apply(const RatVec& x) const;
    // this after other: x -> this(other(x)).
    AffineMap compose(const AffineMap& other) const;
    AffineMap inverse() const;  // requires invertible linear part
    static AffineMap linear_map(RatMat m);
};

}  // namespace balldiv

#endif
