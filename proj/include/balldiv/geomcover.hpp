#ifndef BALLDIV_GEOMCOVER_HPP
#define BALLDIV_GEOMCOVER_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace balldiv {

struct NoIndex : std::domain_error {
    using std::domain_error::domain_error;
};
struct BoundViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Small dense double-precision matrix, row-major.
struct DMat {
    int n = 0;
    std::vector<double> a;

    DMat() = default;
    explicit DMat(int dim) : n(dim), a(static_cast<size_t>(dim * dim), 0.0) {}
    static DMat identity(int dim);
    double& at(int i, int j) { return a[static_cast<size_t>(i * n + j)]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i * n + j)]; }
    std::vector<double> apply(std::span<const double> x) const;
    std::vector<double> apply_transpose(std::span<const double> x) const;
    friend DMat operator*(const DMat& a, const DMat& b);
    double max_abs_diff(const DMat& other) const;
    double det() const;
};

double norm(std::span<const double> x);
double dist(std::span<const double> x, std::span<const double> y);

// Vertices of the regular simplex inscribed in the unit sphere with
// A_1 = e_d; the remaining vertices share last coordinate -1/d.
struct SimplexFrame {
    int dim = 0;
    std::vector<std::vector<double>> vertices;  // d+1 unit vectors
};
SimplexFrame simplex(int d);

// The rotation phi_k mapping the facet opposite A_1 onto the facet opposite
// A_k as a product of two vertex-swapping reflections; phi_1 = identity.
// k is 1-based.
DMat phi_k(const SimplexFrame& frame, int k);

// Upper bound on the translation length of the core cover: 2/(3d+4).
double max_translation(int d);

struct CoverAtlas {
    SimplexFrame frame;
    std::vector<DMat> phis;  // phis[0] = identity = phi_1
    double t = 0.0;          // translation length, must stay below max_translation
};
CoverAtlas make_atlas(int d, double t_scale = 0.9);

// Index j (1-based) such that y = phi_j^{-1}(x) admits the safe translate:
// j = 1 deep inside, otherwise any k with x in the outer region E_k^{1-2t}.
// Throws NoIndex only for |x| > 1 (+tolerance).
int core_cover_index(std::span<const double> x, const CoverAtlas& atlas, double tol = 1e-9);

// Sufficient condition that z + b stays in the ball for every
// z in B(y, t) with |z| <= 1, where b = t e_d: either the whole
// neighbourhood is deep inside, or its last coordinate stays below -t/2.
bool translate_safe(std::span<const double> y, double t, double tol = 1e-9);

// Lemma geom(a): for |x| > 1/3 find the symmetry pushing the last coordinate
// of phi_i^{-1}(x) below -1/(3k), and certify the |u + c| <= |x| bound over
// the admissible neighbourhood (analytically; callers spot-check by
// sampling). c_len must satisfy c_len <= 1/(6k).
struct GeomBound {
    int index = 1;          // 1-based symmetry index
    double last_coord = 0;  // last coordinate of phi_index^{-1}(x)
    double margin = 0;      // -1/(3k) - last_coord >= 0
};
GeomBound geom_bound_check(std::span<const double> x, const CoverAtlas& atlas, double c_len);

// Constraint chain of the block construction in dimension d'+3.
struct BlockGeometry {
    int dprime = 0;
    double theta_dprime = 0;  // -(1/3)(1/(6 d'))
    double theta_3 = 0;       // -(1/3)(1/18)
    double eps_z = 0;         // -theta_dprime / 6
    double eps_y = 0;         // -theta_3 / 6
    double t_max = 0;         // the whole chain's admissible translation bound
};
BlockGeometry block_geometry(int dprime);

struct KiegVerdict {
    std::string branch;  // "deep" | "y-major" | "y-major-thin-z" | "z-major" | "z-major-thin-y"
    int i = 1, j = 1;    // chosen product symmetry (phi_i, phi'_j), 1-based
    bool ok = false;
    double margin = 0;
    std::string detail;
};
// Case split of the block-translation argument for x = (y, z): picks the
// product symmetry and verifies the inequality that keeps u + b inside the
// ball. Requires t <= block_geometry(dprime).t_max.
KiegVerdict geomkieg_check(std::span<const double> y, std::span<const double> z,
                           const CoverAtlas& atlas_y, const CoverAtlas& atlas_z, double t);

// Piece counts of the constructions, the d+1 lower bound, and the open cases.
struct PieceCount {
    int d = 0;
    std::optional<long> count;  // set for the constructive cases
    int lower_bound = 0;        // d+1: no decomposition into <= d pieces
    std::string status;         // "constructed" | "cited" | "open"
    std::string note;
};
PieceCount piece_count(int d);

}  // namespace balldiv

#endif
