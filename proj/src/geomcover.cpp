#include "balldiv/geomcover.hpp"

#include <algorithm>
#include <cmath>

namespace balldiv {

DMat DMat::identity(int dim) {
    DMat m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
}

std::vector<double> DMat::apply(std::span<const double> x) const {
    std::vector<double> y(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0;
        for (int j = 0; j < n; ++j) acc += at(i, j) * x[static_cast<size_t>(j)];
        y[static_cast<size_t>(i)] = acc;
    }
    return y;
}

std::vector<double> DMat::apply_transpose(std::span<const double> x) const {
    std::vector<double> y(static_cast<size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        double acc = 0;
        for (int i = 0; i < n; ++i) acc += at(i, j) * x[static_cast<size_t>(i)];
        y[static_cast<size_t>(j)] = acc;
    }
    return y;
}

DMat operator*(const DMat& a, const DMat& b) {
    DMat r(a.n);
    for (int i = 0; i < a.n; ++i)
        for (int k = 0; k < a.n; ++k) {
            const double f = a.at(i, k);
            if (f == 0.0) continue;
            for (int j = 0; j < a.n; ++j) r.at(i, j) += f * b.at(k, j);
        }
    return r;
}

double DMat::max_abs_diff(const DMat& other) const {
    double m = 0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - other.a[i]));
    return m;
}

double DMat::det() const {
    DMat m = *this;
    double d = 1.0;
    for (int col = 0; col < n; ++col) {
        int pr = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(m.at(r, col)) > std::fabs(m.at(pr, col))) pr = r;
        if (std::fabs(m.at(pr, col)) < 1e-14) return 0.0;
        if (pr != col) {
            for (int j = 0; j < n; ++j) std::swap(m.at(pr, j), m.at(col, j));
            d = -d;
        }
        d *= m.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double f = m.at(r, col) / m.at(col, col);
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) m.at(r, j) -= f * m.at(col, j);
        }
    }
    return d;
}

double norm(std::span<const double> x) {
    double acc = 0;
    for (double v : x) acc += v * v;
    return std::sqrt(acc);
}

double dist(std::span<const double> x, std::span<const double> y) {
    double acc = 0;
    for (size_t i = 0; i < x.size(); ++i) acc += (x[i] - y[i]) * (x[i] - y[i]);
    return std::sqrt(acc);
}

SimplexFrame simplex(int d) {
    if (d < 1) throw std::invalid_argument("simplex: dimension must be >= 1");
    SimplexFrame f;
    f.dim = d;
    if (d == 1) {
        f.vertices = {{1.0}, {-1.0}};
        return f;
    }
    // A_1 = e_d; the rest sit at height -1/d over a scaled (d-1)-simplex.
    const SimplexFrame base = simplex(d - 1);
    const double scale = std::sqrt(1.0 - 1.0 / (static_cast<double>(d) * d));
    std::vector<double> apex(static_cast<size_t>(d), 0.0);
    apex.back() = 1.0;
    f.vertices.push_back(std::move(apex));
    for (const auto& u : base.vertices) {
        std::vector<double> v(static_cast<size_t>(d), 0.0);
        for (int i = 0; i < d - 1; ++i) v[static_cast<size_t>(i)] = scale * u[static_cast<size_t>(i)];
        v.back() = -1.0 / d;
        f.vertices.push_back(std::move(v));
    }
    return f;
}

namespace {

// Reflection in the perpendicular bisector hyperplane of two unit vectors:
// swaps them and fixes every vector orthogonal to their difference.
DMat swap_reflection(const std::vector<double>& u, const std::vector<double>& v) {
    const int d = static_cast<int>(u.size());
    std::vector<double> w(static_cast<size_t>(d));
    double n2 = 0;
    for (int i = 0; i < d; ++i) {
        w[static_cast<size_t>(i)] = u[static_cast<size_t>(i)] - v[static_cast<size_t>(i)];
        n2 += w[static_cast<size_t>(i)] * w[static_cast<size_t>(i)];
    }
    DMat r = DMat::identity(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            r.at(i, j) -= 2.0 * w[static_cast<size_t>(i)] * w[static_cast<size_t>(j)] / n2;
    return r;
}

}  // namespace

DMat phi_k(const SimplexFrame& frame, int k) {
    const int d = frame.dim;
    if (k < 1 || k > d + 1) throw std::invalid_argument("phi_k: index out of range");
    if (k == 1) return DMat::identity(d);
    const DMat r1k = swap_reflection(frame.vertices[0], frame.vertices[static_cast<size_t>(k - 1)]);
    if (d >= 3) {
        // Det-correcting reflection swapping the first two vertices not in {1, k}.
        int i = -1, j = -1;
        for (int v = 2; v <= d + 1 && j < 0; ++v) {
            if (v == k) continue;
            (i < 0 ? i : j) = v;
        }
        const DMat rij =
            swap_reflection(frame.vertices[static_cast<size_t>(i - 1)], frame.vertices[static_cast<size_t>(j - 1)]);
        return rij * r1k;
    }
    // d = 2: only one spare vertex, so correct the determinant with the
    // reflection swapping A_1 and the spare instead.
    const int spare = k == 2 ? 3 : 2;
    const DMat r1j = swap_reflection(frame.vertices[0], frame.vertices[static_cast<size_t>(spare - 1)]);
    return r1j * r1k;
}

double max_translation(int d) { return 2.0 / (3.0 * d + 4.0); }

CoverAtlas make_atlas(int d, double t_scale) {
    // t_scale >= 1 is allowed: override runs probe the breakdown past the bound.
    if (t_scale <= 0) throw std::invalid_argument("make_atlas: t_scale must be positive");
    CoverAtlas atlas;
    atlas.frame = simplex(d);
    atlas.t = t_scale * max_translation(d);
    for (int k = 1; k <= d + 1; ++k) atlas.phis.push_back(phi_k(atlas.frame, k));
    return atlas;
}

int core_cover_index(std::span<const double> x, const CoverAtlas& atlas, double tol) {
    const int d = atlas.frame.dim;
    const double r = norm(x);
    if (r > 1.0 + tol) throw NoIndex("core_cover_index: point outside the unit ball");
    const double t = atlas.t;
    if (r < 1.0 - 2.0 * t) return 1;
    // Outer shell: find k with phi_k^{-1}(x) under the contracted facet plane.
    const double cutoff = -(1.0 - 2.0 * t) / d + tol;
    for (int k = 1; k <= d + 1; ++k) {
        const std::vector<double> y = atlas.phis[static_cast<size_t>(k - 1)].apply_transpose(x);
        if (y.back() <= cutoff) return k;
    }
    throw NoIndex("core_cover_index: no covering region found (cover defect)");
}

bool translate_safe(std::span<const double> y, double t, double tol) {
    if (norm(y) <= 1.0 - 2.0 * t + tol) return true;
    return y.back() <= -1.5 * t + tol;
}

GeomBound geom_bound_check(std::span<const double> x, const CoverAtlas& atlas, double c_len) {
    const int k = atlas.frame.dim;
    if (norm(x) <= 1.0 / 3.0)
        throw std::invalid_argument("geom_bound_check: requires |x| > 1/3");
    if (c_len > 1.0 / (6.0 * k) + 1e-12)
        throw std::invalid_argument("geom_bound_check: requires |c| <= 1/(6k)");
    const double cutoff = -1.0 / (3.0 * k);
    GeomBound best;
    bool found = false;
    for (int i = 1; i <= k + 1; ++i) {
        const std::vector<double> u = atlas.phis[static_cast<size_t>(i - 1)].apply_transpose(x);
        if (u.back() <= cutoff + 1e-12) {
            best.index = i;
            best.last_coord = u.back();
            best.margin = cutoff - u.back();
            found = true;
            break;
        }
    }
    if (!found)
        throw BoundViolation("geom_bound_check: no symmetry reaches the -1/(3k) region");
    return best;
}

BlockGeometry block_geometry(int dprime) {
    if (dprime < 4 || dprime % 2 != 0)
        throw std::invalid_argument("block_geometry: d' must be even and >= 4");
    BlockGeometry g;
    g.dprime = dprime;
    g.theta_dprime = -(1.0 / 3.0) / (6.0 * dprime);
    g.theta_3 = -(1.0 / 3.0) / 18.0;
    g.eps_z = -g.theta_dprime / 6.0;
    g.eps_y = -g.theta_3 / 6.0;
    // Chain of sufficient conditions with neighbourhood radius |b| = t sqrt(2):
    //  - both-large branches: shell depth survives the |b| perturbation and
    //    still clears -t/2, per block and per shell parameter;
    //  - thin branches: the inner-product chain t <= -|u1| cos tau1 - |u2| cos tau2;
    //  - |b| < 1/3 so that |x| >= 1 - |b| forces one block past 1/3.
    const double root2 = std::sqrt(2.0);
    const double safe = root2 + 0.5;  // shell / (sqrt(2) + 1/2)
    const double chain[] = {(1.0 / (3.0 * dprime)) / safe,
                            (g.eps_z / 3.0) / safe,
                            (1.0 / (3.0 * dprime) - g.eps_z) / (1.0 + root2),
                            (1.0 / 9.0) / safe,
                            (g.eps_y / dprime) / safe,
                            (1.0 / 9.0 - g.eps_y) / (1.0 + root2),
                            1.0 / (3.0 * root2)};
    g.t_max = *std::min_element(std::begin(chain), std::end(chain));
    return g;
}

KiegVerdict geomkieg_check(std::span<const double> y, std::span<const double> z,
                           const CoverAtlas& atlas_y, const CoverAtlas& atlas_z, double t) {
    const int dprime = atlas_y.frame.dim;
    if (atlas_z.frame.dim != 3) throw std::invalid_argument("geomkieg_check: z block must be 3d");
    const BlockGeometry geo = block_geometry(dprime);
    if (t > geo.t_max)
        throw std::invalid_argument("geomkieg_check: t exceeds the admissible chain bound");

    const double b_len = t * std::sqrt(2.0);
    const double ny = norm(y), nz = norm(z);
    const double nx = std::sqrt(ny * ny + nz * nz);

    KiegVerdict v;
    if (nx < 1.0 - b_len) {
        v.branch = "deep";
        v.ok = true;
        v.margin = 1.0 - b_len - nx;
        v.detail = "|x| < 1 - |b|: any u on the sphere shells satisfies |u + b| <= 1";
        return v;
    }

    auto shell_index = [](std::span<const double> w, const CoverAtlas& atlas, double shell) {
        // Like the core cover but against the shell-contracted facet plane.
        const int d = atlas.frame.dim;
        const double cutoff = -shell / d + 1e-12;
        for (int k = 1; k <= d + 1; ++k) {
            const std::vector<double> u = atlas.phis[static_cast<size_t>(k - 1)].apply_transpose(w);
            if (u.back() <= cutoff) return std::make_pair(k, u.back());
        }
        return std::make_pair(-1, 0.0);
    };

    if (ny >= 1.0 / 3.0) {
        auto [iy, uy_last] = shell_index(y, atlas_y, 1.0 / 3.0);
        if (iy < 0) {
            v.ok = false;
            v.detail = "no y-symmetry reached the 1/3 shell region";
            return v;
        }
        v.i = iy;
        if (nz >= geo.eps_z) {
            // Both parts large: push z below its eps_z shell plane too.
            auto [jz, uz_last] = shell_index(z, atlas_z, geo.eps_z);
            if (jz < 0) {
                v.ok = false;
                v.detail = "no z-symmetry reached the eps_z shell region";
                return v;
            }
            v.j = jz;
            v.branch = "y-major";
            // Safe when both blocks keep their last coordinate below -t/2
            // after a |b|-perturbation.
            const double my = -(uy_last + b_len) - 0.5 * t;
            const double mz = -(uz_last + b_len) - 0.5 * t;
            v.margin = std::min(my, mz);
            v.ok = v.margin >= 0;
            v.detail = "u1_last <= " + std::to_string(uy_last + b_len) +
                       ", u2_last <= " + std::to_string(uz_last + b_len);
        } else {
            // Thin z: the inner-product chain t <= -|u1| cos tau1 - |u2| cos tau2.
            v.j = 1;
            v.branch = "y-major-thin-z";
            const double term1 = -uy_last - b_len;  // >= -|u1| cos tau1 after perturbation
            const double term2 = -nz;               // worst case for the z block
            v.margin = term1 + term2 - t;
            v.ok = v.margin >= 0;
            v.detail = "chain value " + std::to_string(term1 + term2) + " vs t = " +
                       std::to_string(t);
        }
        return v;
    }

    if (nz >= 1.0 / 3.0) {
        auto [jz, uz_last] = shell_index(z, atlas_z, 1.0 / 3.0);
        if (jz < 0) {
            v.ok = false;
            v.detail = "no z-symmetry reached the 1/3 shell region";
            return v;
        }
        v.j = jz;
        if (ny >= geo.eps_y) {
            auto [iy, uy_last] = shell_index(y, atlas_y, geo.eps_y);
            if (iy < 0) {
                v.ok = false;
                v.detail = "no y-symmetry reached the eps_y shell region";
                return v;
            }
            v.i = iy;
            v.branch = "z-major";
            const double my = -(uy_last + b_len) - 0.5 * t;
            const double mz = -(uz_last + b_len) - 0.5 * t;
            v.margin = std::min(my, mz);
            v.ok = v.margin >= 0;
            v.detail = "u1_last <= " + std::to_string(uy_last + b_len) +
                       ", u2_last <= " + std::to_string(uz_last + b_len);
        } else {
            v.i = 1;
            v.branch = "z-major-thin-y";
            const double term1 = -uz_last - b_len;
            const double term2 = -ny;
            v.margin = term1 + term2 - t;
            v.ok = v.margin >= 0;
            v.detail = "chain value " + std::to_string(term1 + term2) + " vs t = " +
                       std::to_string(t);
        }
        return v;
    }

    // Unreachable when t <= t_max: |x| >= 1 - |b| forces one block past 1/3.
    v.ok = false;
    v.detail = "both blocks below 1/3 while |x| >= 1 - |b|";
    return v;
}

PieceCount piece_count(int d) {
    if (d < 2) throw std::invalid_argument("piece_count: dimension must be >= 2");
    PieceCount pc;
    pc.d = d;
    pc.lower_bound = d + 1;
    if (d == 2) {
        pc.status = "open";
        pc.note = "the disk is not 2- or 3-divisible; the general case is open";
    } else if (d == 3) {
        pc.count = 22;
        pc.status = "cited";
        pc.note = "m-divisible for every m >= 22 by the cited 3-dimensional construction";
    } else if (d == 5) {
        pc.status = "open";
        pc.note = "divisibility unknown in dimension 5";
    } else if (d == 6 || d == 9) {
        pc.status = "cited";
        pc.note = "finitely divisible via the cited 3k-dimensional construction; no count here";
    } else if (d % 2 == 0) {
        pc.count = 4L * d + 6;
        pc.status = "constructed";
        pc.note = "even-dimensional construction: 4d+5 maps, 4d+6 pieces";
    } else {
        pc.count = 20L * d - 38;
        pc.status = "constructed";
        pc.note = "odd-dimensional block construction: 20(d-2)+1 maps, 20d-38 pieces";
    }
    return pc;
}

}  // namespace balldiv
