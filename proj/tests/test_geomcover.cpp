#include <random>
#include <set>

#include "doctest.h"

#include "balldiv/geomcover.hpp"

using namespace balldiv;

namespace {

std::vector<double> ball_point(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> gauss(0, 1);
    std::uniform_real_distribution<double> unit(0, 1);
    std::vector<double> x(static_cast<size_t>(d));
    double n2 = 0;
    for (auto& v : x) {
        v = gauss(rng);
        n2 += v * v;
    }
    const double r = std::pow(unit(rng), 1.0 / d) / std::sqrt(n2);
    for (auto& v : x) v *= r;
    return x;
}

std::vector<double> sphere_point(std::mt19937_64& rng, int d, double radius) {
    std::normal_distribution<double> gauss(0, 1);
    std::vector<double> x(static_cast<size_t>(d));
    double n2 = 0;
    for (auto& v : x) {
        v = gauss(rng);
        n2 += v * v;
    }
    for (auto& v : x) v *= radius / std::sqrt(n2);
    return x;
}

}  // namespace

TEST_CASE("simplex frames satisfy the exact-dot-product invariants") {
    for (int d = 2; d <= 32; ++d) {
        const SimplexFrame f = simplex(d);
        REQUIRE(static_cast<int>(f.vertices.size()) == d + 1);
        // A_1 = e_d and the remaining last coordinates are -1/d.
        CHECK(f.vertices[0].back() == doctest::Approx(1.0).epsilon(1e-14));
        for (size_t k = 1; k < f.vertices.size(); ++k)
            CHECK(f.vertices[k].back() == doctest::Approx(-1.0 / d).epsilon(1e-12));
        std::vector<double> sum(static_cast<size_t>(d), 0.0);
        for (const auto& v : f.vertices) {
            CHECK(std::abs(norm(v) - 1.0) < 1e-12);
            for (int i = 0; i < d; ++i) sum[static_cast<size_t>(i)] += v[static_cast<size_t>(i)];
        }
        for (double s : sum) CHECK(std::abs(s) < 1e-12);
        for (size_t i = 0; i < f.vertices.size(); ++i)
            for (size_t j = i + 1; j < f.vertices.size(); ++j) {
                double dot = 0;
                for (int c = 0; c < d; ++c)
                    dot += f.vertices[i][static_cast<size_t>(c)] * f.vertices[j][static_cast<size_t>(c)];
                CHECK(std::abs(dot + 1.0 / d) < 1e-12);
            }
    }
}

TEST_CASE("2d simplex closed form") {
    const SimplexFrame f = simplex(2);
    CHECK(f.vertices[0][0] == doctest::Approx(0.0));
    CHECK(f.vertices[0][1] == doctest::Approx(1.0));
    const double s3 = std::sqrt(3.0) / 2.0;
    CHECK(std::abs(std::abs(f.vertices[1][0]) - s3) < 1e-12);
    CHECK(f.vertices[1][1] == doctest::Approx(-0.5));
}

TEST_CASE("phi_k maps the facet vertex sets correctly") {
    for (int d : {2, 3, 4, 7, 12}) {
        const SimplexFrame f = simplex(d);
        for (int k = 1; k <= d + 1; ++k) {
            const DMat phi = phi_k(f, k);
            // Orthogonality and determinant +1.
            DMat prod(d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    double acc = 0;
                    for (int c = 0; c < d; ++c) acc += phi.at(c, i) * phi.at(c, j);
                    prod.at(i, j) = acc;
                }
            CHECK(prod.max_abs_diff(DMat::identity(d)) < 1e-9);
            CHECK(std::abs(phi.det() - 1.0) < 1e-9);
            if (k == 1) {
                CHECK(phi.max_abs_diff(DMat::identity(d)) < 1e-15);
                continue;
            }
            // phi_k({A_i : i != 1}) = {A_i : i != k} as sets.
            for (size_t src = 1; src < f.vertices.size(); ++src) {
                const std::vector<double> img = phi.apply(f.vertices[src]);
                double best = 1e9;
                for (size_t dst = 0; dst < f.vertices.size(); ++dst) {
                    if (static_cast<int>(dst) == k - 1) continue;
                    best = std::min(best, dist(img, f.vertices[dst]));
                }
                CHECK(best < 1e-9);
            }
        }
    }
}

TEST_CASE("translate_safe on the frozen examples") {
    // y = -0.5 e_d, t = 0.1: last-coordinate branch.
    CHECK(translate_safe(std::vector<double>{0, 0, -0.5}, 0.1));
    // y = 0.99 e_d: neither branch holds.
    CHECK(!translate_safe(std::vector<double>{0, 0, 0.99}, 0.1));
    // y = 0: deep-interior branch.
    CHECK(translate_safe(std::vector<double>{0, 0, 0}, 0.1));
}

TEST_CASE("translate_safe implies the translate stays in the ball (monte carlo)") {
    std::mt19937_64 rng(61);
    for (int d : {3, 4, 6}) {
        const double t = 0.9 * max_translation(d);
        for (int iter = 0; iter < 2000; ++iter) {
            std::vector<double> y = ball_point(rng, d);
            if (!translate_safe(y, t, 0.0)) continue;
            // Sample z in B(y, t) cap B_d and translate by b = t e_d.
            for (int s = 0; s < 10; ++s) {
                std::vector<double> z = sphere_point(rng, d, t * std::pow(0.999, s));
                for (int c = 0; c < d; ++c) z[static_cast<size_t>(c)] += y[static_cast<size_t>(c)];
                if (norm(z) > 1.0) continue;
                z.back() += t;
                CHECK(norm(z) <= 1.0 + 1e-9);
            }
        }
    }
}

TEST_CASE("core cover: every ball point gets a safe index") {
    std::mt19937_64 rng(67);
    for (int d : {3, 4, 6}) {
        const CoverAtlas atlas = make_atlas(d, 0.9);
        for (int iter = 0; iter < 4000; ++iter) {
            const std::vector<double> x = ball_point(rng, d);
            const int j = core_cover_index(x, atlas);
            REQUIRE(j >= 1);
            REQUIRE(j <= d + 1);
            const std::vector<double> y = atlas.phis[static_cast<size_t>(j - 1)].apply_transpose(x);
            CHECK(translate_safe(y, atlas.t));
        }
        // x = 0 takes the identity branch; boundary simplex vertex needs k >= 2.
        CHECK(core_cover_index(std::vector<double>(static_cast<size_t>(d), 0.0), atlas) == 1);
        CHECK(core_cover_index(atlas.frame.vertices[0], atlas) >= 2);
        CHECK_THROWS_AS(
            core_cover_index(std::vector<double>(static_cast<size_t>(d), 1.0), atlas), NoIndex);
    }
}

TEST_CASE("north pole region example in d = 4") {
    const CoverAtlas atlas = make_atlas(4, 0.9);
    const int j = core_cover_index(atlas.frame.vertices[0], atlas);
    CHECK(j >= 2);
    const std::vector<double> y =
        atlas.phis[static_cast<size_t>(j - 1)].apply_transpose(atlas.frame.vertices[0]);
    CHECK(y.back() <= -(1.0 - 2.0 * atlas.t) / 4 + 1e-9);
}

TEST_CASE("geom bound check") {
    const CoverAtlas atlas = make_atlas(3, 0.9);
    const double c_len = 1.0 / 18.0;  // 1/(6k) with k = 3
    const GeomBound g1 = geom_bound_check(std::vector<double>{0, 0, 0.5}, atlas, c_len);
    CHECK(g1.last_coord <= -1.0 / 9.0 + 1e-12);
    const GeomBound g2 = geom_bound_check(std::vector<double>{0, 0, -0.5}, atlas, c_len);
    CHECK(g2.index == 1);  // already deep below the plane
    CHECK_THROWS_AS(
        geom_bound_check(std::vector<double>{0.1, 0.0, 0.0}, atlas, c_len),
        std::invalid_argument);

    // Monte-Carlo confirmation of |u + c| <= |x| over the admissible cap.
    std::mt19937_64 rng(71);
    for (int iter = 0; iter < 500; ++iter) {
        std::vector<double> x = sphere_point(rng, 3, 0.34 + 0.66 * (iter % 100) / 100.0);
        const GeomBound g = geom_bound_check(x, atlas, c_len);
        const std::vector<double> base =
            atlas.phis[static_cast<size_t>(g.index - 1)].apply_transpose(x);
        for (int s = 0; s < 20; ++s) {
            // u on the same sphere within c_len of the base point.
            std::vector<double> u = base;
            std::vector<double> nudge = sphere_point(rng, 3, c_len * 0.999);
            for (int c = 0; c < 3; ++c) u[static_cast<size_t>(c)] += nudge[static_cast<size_t>(c)];
            const double un = norm(u);
            for (auto& v : u) v *= norm(x) / un;  // project back to the sphere of |x|
            if (dist(u, base) > c_len) continue;
            CHECK(u[2] <= -1.0 / 18.0 + 1e-9);
            std::vector<double> shifted = u;
            shifted[2] += c_len;
            CHECK(norm(shifted) <= norm(x) + 1e-9);
        }
    }
}

namespace {

// Point (y, z) with |x| = r and |y| = frac_y * r, as a random direction pair.
std::pair<std::vector<double>, std::vector<double>> shell_point(std::mt19937_64& rng, double r,
                                                                double ny) {
    const double nz = std::sqrt(std::max(0.0, r * r - ny * ny));
    return {sphere_point(rng, 4, ny), sphere_point(rng, 3, nz)};
}

}  // namespace

TEST_CASE("block geometry chain and kieg branches") {
    const BlockGeometry geo = block_geometry(4);
    CHECK(geo.theta_dprime == doctest::Approx(-1.0 / 72.0));
    CHECK(geo.eps_z == doctest::Approx(1.0 / 432.0));
    CHECK(geo.t_max > 0);

    const CoverAtlas atlas_y = make_atlas(4, 0.9);
    const CoverAtlas atlas_z = make_atlas(3, 0.9);
    const double t = 0.9 * geo.t_max;
    const double b_len = t * std::sqrt(2.0);
    // The non-trivial branches live in the razor-thin shell |x| >= 1 - |b|.
    const double r = 1.0 - 0.25 * b_len;
    std::mt19937_64 rng(59);

    // Deep interior.
    KiegVerdict deep = geomkieg_check(std::vector<double>{0.05, 0, 0, 0},
                                      std::vector<double>{0.05, 0, 0}, atlas_y, atlas_z, t);
    CHECK(deep.branch == "deep");
    CHECK(deep.ok);

    // |y| large, |z| moderate: both-large branch.
    auto [by, bz] = shell_point(rng, r, 0.9 * r);
    KiegVerdict both = geomkieg_check(by, bz, atlas_y, atlas_z, t);
    CHECK(both.branch == "y-major");
    CHECK(both.ok);

    // |y| large, |z| below eps_z: the inner-product chain branch.
    const double nz_thin = geo.eps_z / 4;
    auto [ty, tz] = shell_point(rng, r, std::sqrt(r * r - nz_thin * nz_thin));
    KiegVerdict thin = geomkieg_check(ty, tz, atlas_y, atlas_z, t);
    CHECK(thin.branch == "y-major-thin-z");
    CHECK(thin.ok);

    // Symmetric: |z| large, |y| small but above eps_y.
    auto [zy, zz] = shell_point(rng, r, 0.2);
    KiegVerdict zmaj = geomkieg_check(zy, zz, atlas_y, atlas_z, t);
    CHECK(zmaj.branch == "z-major");
    CHECK(zmaj.ok);

    // |z| large, |y| below eps_y.
    auto [wy, wz] = shell_point(rng, r, geo.eps_y / 4);
    KiegVerdict thin_y = geomkieg_check(wy, wz, atlas_y, atlas_z, t);
    CHECK(thin_y.branch == "z-major-thin-y");
    CHECK(thin_y.ok);

    CHECK_THROWS_AS(geomkieg_check(std::vector<double>{0.9, 0, 0, 0},
                                   std::vector<double>{0.3, 0, 0}, atlas_y, atlas_z,
                                   geo.t_max * 2),
                    std::invalid_argument);
}

TEST_CASE("kieg branches keep u + b inside the ball (monte carlo)") {
    const BlockGeometry geo = block_geometry(4);
    const CoverAtlas atlas_y = make_atlas(4, 0.9);
    const CoverAtlas atlas_z = make_atlas(3, 0.9);
    const double t = 0.9 * geo.t_max;
    const double b_len = t * std::sqrt(2.0);
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int checked = 0;
    for (int iter = 0; iter < 1500; ++iter) {
        // Concentrate on the critical shell; force the thin branches regularly.
        const double r = 1.0 - b_len * unit(rng);
        double ny;
        switch (iter % 4) {
            case 0: ny = std::sqrt(r * r - std::pow(geo.eps_z * unit(rng), 2));  break;
            case 1: ny = geo.eps_y * unit(rng); break;
            default: ny = r * std::sqrt(unit(rng)); break;
        }
        auto [y, z] = shell_point(rng, r, ny);
        const KiegVerdict v = geomkieg_check(y, z, atlas_y, atlas_z, t);
        CHECK(v.ok);
        if (!v.ok) continue;
        ++checked;
        const std::vector<double> uy0 =
            atlas_y.phis[static_cast<size_t>(v.i - 1)].apply_transpose(y);
        const std::vector<double> uz0 =
            atlas_z.phis[static_cast<size_t>(v.j - 1)].apply_transpose(z);
        for (int s = 0; s < 8; ++s) {
            // u near (uy0, uz0) on the product of spheres, within |b| jointly.
            std::vector<double> uy = uy0, uz = uz0;
            const std::vector<double> ny4 = sphere_point(rng, 4, b_len * 0.6);
            const std::vector<double> nz3 = sphere_point(rng, 3, b_len * 0.6);
            for (int c = 0; c < 4; ++c) uy[static_cast<size_t>(c)] += ny4[static_cast<size_t>(c)];
            for (int c = 0; c < 3; ++c) uz[static_cast<size_t>(c)] += nz3[static_cast<size_t>(c)];
            double nuy = norm(uy), nuz = norm(uz);
            if (nuy > 0 && norm(y) > 0)
                for (auto& c : uy) c *= norm(y) / nuy;
            if (nuz > 0 && norm(z) > 0)
                for (auto& c : uz) c *= norm(z) / nuz;
            if (std::hypot(dist(uy, uy0), dist(uz, uz0)) > b_len) continue;
            uy.back() += t;
            uz.back() += t;
            const double total = std::sqrt(norm(uy) * norm(uy) + norm(uz) * norm(uz));
            CHECK(total <= 1.0 + 1e-9);
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("piece counts reproduce the stated table") {
    CHECK(*piece_count(4).count == 22);
    CHECK(*piece_count(7).count == 102);
    CHECK(*piece_count(11).count == 182);
    CHECK(piece_count(5).status == "open");
    CHECK(!piece_count(5).count.has_value());
    CHECK(piece_count(2).status == "open");
    CHECK(piece_count(6).status == "cited");
    CHECK(piece_count(9).status == "cited");
    CHECK(*piece_count(3).count == 22);
    for (int d = 2; d <= 40; ++d) {
        const PieceCount pc = piece_count(d);
        CHECK(pc.lower_bound == d + 1);
        if (pc.count) {
            CHECK(*pc.count > d);
            if (d >= 10) CHECK(*pc.count < 20 * d);
        }
    }
    CHECK(*piece_count(8).count == 38);
    CHECK(*piece_count(10).count == 46);
}
