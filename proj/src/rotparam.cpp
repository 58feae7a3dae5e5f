#include "balldiv/rotparam.hpp"

#include <cmath>
#include <random>
#include <set>

namespace balldiv {

RatMat reflect(const RatVec& w) {
    const Rat n2 = norm_sq(w);
    if (n2 == 0) throw ZeroVector("reflect: zero vector");
    const int d = static_cast<int>(w.size());
    RatMat r = RatMat::identity(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            r(i, j) -= 2 * w[static_cast<size_t>(i)] * w[static_cast<size_t>(j)] / n2;
    return r;
}

Rotation::Rotation(RatMat m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("Rotation: square matrix required");
    if (!(m_.transpose() * m_).is_identity())
        throw std::invalid_argument("Rotation: matrix is not exactly orthogonal");
    if (m_.determinant() != 1) throw std::invalid_argument("Rotation: determinant is not 1");
}

Rotation alpha_d(const ParamVector& v) {
    const int d = v.dim;
    if (d < 2) throw std::invalid_argument("alpha_d: dimension must be >= 2");
    if (static_cast<int>(v.vecs.size()) != reflection_count(d))
        throw std::invalid_argument("alpha_d: wrong number of parameter vectors");
    RatMat m = RatMat::identity(d);
    for (const RatVec& w : v.vecs) m = m * reflect(w);
    return Rotation(std::move(m));
}

namespace {

Rat random_rat(std::mt19937_64& rng, long height) {
    std::uniform_int_distribution<long> num(-height, height);
    std::uniform_int_distribution<long> den(1, height);
    return make_rat(num(rng), den(rng));
}

}  // namespace

IndependentSystem sample_independent(int count, int dim, std::uint64_t seed,
                                     const SampleConfig& cfg) {
    if (count < 1 || dim < 2) throw std::invalid_argument("sample_independent: bad arguments");
    std::mt19937_64 rng(seed);
    std::set<Rat> used;  // pairwise-distinct coordinates across the whole system
    auto draw = [&]() {
        for (;;) {
            Rat v = random_rat(rng, cfg.height);
            if (v != 0 && used.insert(v).second) return v;
        }
    };
    IndependentSystem sys;
    sys.dim = dim;
    sys.seed = seed;
    const int dprime = reflection_count(dim);
    for (int i = 0; i < count; ++i) {
        ParamVector pv;
        pv.dim = dim;
        for (int k = 0; k < dprime; ++k) {
            RatVec w(static_cast<size_t>(dim));
            for (auto& x : w) x = draw();
            pv.vecs.push_back(std::move(w));
        }
        sys.rotations.push_back(alpha_d(pv));
        sys.params.push_back(std::move(pv));
    }
    sys.translation.resize(static_cast<size_t>(dim));
    for (auto& x : sys.translation) x = draw();
    return sys;
}

namespace {

// Cayley transform of a skew-symmetric matrix. I + S is positive definite in
// its symmetric part, so the inverse always exists and the image is in SO(d).
RatMat cayley(const RatMat& s) {
    const RatMat id = RatMat::identity(s.rows());
    auto inv = (id + s).inverse();
    if (!inv) throw std::logic_error("cayley: I + S singular for skew S");
    return (id - s) * *inv;
}

// round(x * 2^k) / 2^k
Rat dyadic(double x, long k) {
    const double scaled = std::ldexp(x, static_cast<int>(k));
    if (!std::isfinite(scaled)) throw std::invalid_argument("dyadic: non-finite value");
    mpz_class num;
    mpz_set_d(num.get_mpz_t(), std::nearbyint(scaled));
    mpz_class den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(k));
    Rat r(num, den);
    r.canonicalize();
    return r;
}

Rat pow2_inv(long k) {  // 2^{-k}
    mpz_class den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(k));
    return Rat(1, den);
}

// Plain double-precision Gaussian elimination; false on a tiny pivot.
bool invert_dbl(std::vector<double>& m, int n) {
    std::vector<double> inv(static_cast<size_t>(n * n), 0.0);
    for (int i = 0; i < n; ++i) inv[static_cast<size_t>(i * n + i)] = 1.0;
    for (int col = 0; col < n; ++col) {
        int pr = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(m[static_cast<size_t>(r * n + col)]) >
                std::fabs(m[static_cast<size_t>(pr * n + col)]))
                pr = r;
        if (std::fabs(m[static_cast<size_t>(pr * n + col)]) < 1e-12) return false;
        if (pr != col)
            for (int j = 0; j < n; ++j) {
                std::swap(m[static_cast<size_t>(pr * n + j)], m[static_cast<size_t>(col * n + j)]);
                std::swap(inv[static_cast<size_t>(pr * n + j)],
                          inv[static_cast<size_t>(col * n + j)]);
            }
        const double piv = m[static_cast<size_t>(col * n + col)];
        for (int j = 0; j < n; ++j) {
            m[static_cast<size_t>(col * n + j)] /= piv;
            inv[static_cast<size_t>(col * n + j)] /= piv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = m[static_cast<size_t>(r * n + col)];
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                m[static_cast<size_t>(r * n + j)] -= f * m[static_cast<size_t>(col * n + j)];
                inv[static_cast<size_t>(r * n + j)] -= f * inv[static_cast<size_t>(col * n + j)];
            }
        }
    }
    m = std::move(inv);
    return true;
}

}  // namespace

NearRotation sample_near(const std::vector<double>& target_row_major, int dim, const Rat& eps,
                         std::uint64_t seed, int budget) {
    if (eps <= 0) throw std::invalid_argument("sample_near: eps must be positive");
    if (static_cast<int>(target_row_major.size()) != dim * dim)
        throw std::invalid_argument("sample_near: target size mismatch");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> pert(-64, 64);

    for (int attempt = 0; attempt < budget; ++attempt) {
        const long k = 12 + 4L * attempt;

        // Exact base rotation; perturbed on retries to step away from
        // eigenvalue -1 where the Cayley chart degenerates.
        RatMat r0 = RatMat::identity(dim);
        if (attempt % 2 == 1) {
            RatMat skew(dim, dim);
            for (int i = 0; i < dim; ++i)
                for (int j = i + 1; j < dim; ++j) {
                    skew(i, j) = make_rat(pert(rng), 256);
                    skew(j, i) = -skew(i, j);
                }
            r0 = cayley(skew);
        }

        // T2 = target * r0^T in doubles.
        std::vector<double> r0d(static_cast<size_t>(dim * dim));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) r0d[static_cast<size_t>(i * dim + j)] = r0(i, j).get_d();
        std::vector<double> t2(static_cast<size_t>(dim * dim), 0.0);
        for (int i = 0; i < dim; ++i)
            for (int kk = 0; kk < dim; ++kk)
                for (int j = 0; j < dim; ++j)
                    t2[static_cast<size_t>(i * dim + j)] +=
                        target_row_major[static_cast<size_t>(i * dim + kk)] *
                        r0d[static_cast<size_t>(j * dim + kk)];

        // S = (I - T2)(I + T2)^{-1} in doubles.
        std::vector<double> a(static_cast<size_t>(dim * dim));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                a[static_cast<size_t>(i * dim + j)] =
                    (i == j ? 1.0 : 0.0) + t2[static_cast<size_t>(i * dim + j)];
        if (!invert_dbl(a, dim)) continue;
        std::vector<double> s(static_cast<size_t>(dim * dim), 0.0);
        for (int i = 0; i < dim; ++i)
            for (int kk = 0; kk < dim; ++kk) {
                const double lhs = (i == kk ? 1.0 : 0.0) - t2[static_cast<size_t>(i * dim + kk)];
                if (lhs == 0.0) continue;
                for (int j = 0; j < dim; ++j)
                    s[static_cast<size_t>(i * dim + j)] += lhs * a[static_cast<size_t>(kk * dim + j)];
            }

        // Exactly skew rationalization, then back through the Cayley chart.
        RatMat sk(dim, dim);
        bool finite = true;
        for (int i = 0; i < dim && finite; ++i)
            for (int j = i + 1; j < dim && finite; ++j) {
                const double v = 0.5 * (s[static_cast<size_t>(i * dim + j)] -
                                        s[static_cast<size_t>(j * dim + i)]);
                if (!std::isfinite(v) || std::fabs(v) > 1e12) {
                    finite = false;
                    break;
                }
                sk(i, j) = dyadic(v, k);
                sk(j, i) = -sk(i, j);
            }
        if (!finite) continue;
        const RatMat m = cayley(sk) * r0;

        // Certify against the dyadic rationalization of the target.
        RatMat t_rat(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                t_rat(i, j) = dyadic(target_row_major[static_cast<size_t>(i * dim + j)], k);
        const Rat slack = Rat(dim) * pow2_inv(k + 1);  // |T - T_rat|_F <= d 2^{-k-1}
        if (eps <= slack) continue;
        const Rat frob_sq = m.frobenius_sq_distance(t_rat);
        const Rat allowed = eps - slack;
        if (frob_sq < allowed * allowed) {
            NearRotation out;
            out.matrix = m;
            out.frob_sq_to_target = frob_sq;
            out.slack = slack;
            out.attempts = attempt + 1;
            return out;
        }
    }
    throw BudgetExceeded("sample_near: no certified approximation within budget");
}

// ---------------------------------------------------------------------------
// Expression AST
// ---------------------------------------------------------------------------

namespace {

MatExprPtr make_mat(MatExpr::Kind k, int sym, MatExprPtr a, MatExprPtr b, ScalarExprPtr s) {
    auto e = std::make_shared<MatExpr>();
    e->kind = k;
    e->sym_index = sym;
    e->a = std::move(a);
    e->b = std::move(b);
    e->scalar = std::move(s);
    return e;
}

ScalarExprPtr make_sc(ScalarExpr::Kind k, Rat v, MatExprPtr m, ScalarExprPtr a, ScalarExprPtr b) {
    auto e = std::make_shared<ScalarExpr>();
    e->kind = k;
    e->value = std::move(v);
    e->m = std::move(m);
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}

}  // namespace

MatExprPtr mat_sym(int index) { return make_mat(MatExpr::Kind::sym, index, nullptr, nullptr, nullptr); }
MatExprPtr mat_identity() { return make_mat(MatExpr::Kind::ident, -1, nullptr, nullptr, nullptr); }
MatExprPtr mat_add(MatExprPtr a, MatExprPtr b) {
    return make_mat(MatExpr::Kind::add, -1, std::move(a), std::move(b), nullptr);
}
MatExprPtr mat_sub(MatExprPtr a, MatExprPtr b) {
    return make_mat(MatExpr::Kind::sub, -1, std::move(a), std::move(b), nullptr);
}
MatExprPtr mat_mul(MatExprPtr a, MatExprPtr b) {
    return make_mat(MatExpr::Kind::mul, -1, std::move(a), std::move(b), nullptr);
}
MatExprPtr mat_transpose(MatExprPtr a) {
    return make_mat(MatExpr::Kind::transpose, -1, std::move(a), nullptr, nullptr);
}
MatExprPtr mat_inverse(MatExprPtr a) {
    return make_mat(MatExpr::Kind::inverse, -1, std::move(a), nullptr, nullptr);
}
MatExprPtr mat_scale(ScalarExprPtr s, MatExprPtr a) {
    return make_mat(MatExpr::Kind::scale, -1, std::move(a), nullptr, std::move(s));
}
ScalarExprPtr sc_const(Rat v) {
    return make_sc(ScalarExpr::Kind::constant, std::move(v), nullptr, nullptr, nullptr);
}
ScalarExprPtr sc_trace(MatExprPtr m) {
    return make_sc(ScalarExpr::Kind::trace, Rat(0), std::move(m), nullptr, nullptr);
}
ScalarExprPtr sc_add(ScalarExprPtr a, ScalarExprPtr b) {
    return make_sc(ScalarExpr::Kind::add, Rat(0), nullptr, std::move(a), std::move(b));
}
ScalarExprPtr sc_sub(ScalarExprPtr a, ScalarExprPtr b) {
    return make_sc(ScalarExpr::Kind::sub, Rat(0), nullptr, std::move(a), std::move(b));
}
ScalarExprPtr sc_mul(ScalarExprPtr a, ScalarExprPtr b) {
    return make_sc(ScalarExpr::Kind::mul, Rat(0), nullptr, std::move(a), std::move(b));
}
ScalarExprPtr sc_div(ScalarExprPtr a, ScalarExprPtr b) {
    return make_sc(ScalarExpr::Kind::div, Rat(0), nullptr, std::move(a), std::move(b));
}

namespace {

Rat eval_scalar(const ScalarExprPtr& e, const std::vector<RatMat>& symbols, int dim);

RatMat eval_mat_impl(const MatExprPtr& e, const std::vector<RatMat>& symbols, int dim) {
    switch (e->kind) {
        case MatExpr::Kind::sym:
            if (e->sym_index < 0 || e->sym_index >= static_cast<int>(symbols.size()))
                throw std::invalid_argument("eval_mat: symbol index out of range");
            return symbols[static_cast<size_t>(e->sym_index)];
        case MatExpr::Kind::ident:
            return RatMat::identity(dim);
        case MatExpr::Kind::add:
            return eval_mat_impl(e->a, symbols, dim) + eval_mat_impl(e->b, symbols, dim);
        case MatExpr::Kind::sub:
            return eval_mat_impl(e->a, symbols, dim) - eval_mat_impl(e->b, symbols, dim);
        case MatExpr::Kind::mul:
            return eval_mat_impl(e->a, symbols, dim) * eval_mat_impl(e->b, symbols, dim);
        case MatExpr::Kind::transpose:
            return eval_mat_impl(e->a, symbols, dim).transpose();
        case MatExpr::Kind::inverse: {
            auto inv = eval_mat_impl(e->a, symbols, dim).inverse();
            if (!inv) throw std::domain_error("eval_mat: singular inverse at sample");
            return *inv;
        }
        case MatExpr::Kind::scale: {
            const Rat s = eval_scalar(e->scalar, symbols, dim);
            RatMat m = eval_mat_impl(e->a, symbols, dim);
            RatMat r(m.rows(), m.cols());
            for (int i = 0; i < m.rows(); ++i)
                for (int j = 0; j < m.cols(); ++j) r(i, j) = s * m(i, j);
            return r;
        }
    }
    throw std::logic_error("eval_mat: unreachable");
}

Rat eval_scalar(const ScalarExprPtr& e, const std::vector<RatMat>& symbols, int dim) {
    switch (e->kind) {
        case ScalarExpr::Kind::constant:
            return e->value;
        case ScalarExpr::Kind::trace: {
            RatMat m = eval_mat_impl(e->m, symbols, dim);
            Rat acc = 0;
            for (int i = 0; i < m.rows(); ++i) acc += m(i, i);
            return acc;
        }
        case ScalarExpr::Kind::add:
            return eval_scalar(e->a, symbols, dim) + eval_scalar(e->b, symbols, dim);
        case ScalarExpr::Kind::sub:
            return eval_scalar(e->a, symbols, dim) - eval_scalar(e->b, symbols, dim);
        case ScalarExpr::Kind::mul:
            return eval_scalar(e->a, symbols, dim) * eval_scalar(e->b, symbols, dim);
        case ScalarExpr::Kind::div: {
            const Rat d = eval_scalar(e->b, symbols, dim);
            if (d == 0) throw std::domain_error("eval_scalar: division by zero at sample");
            return eval_scalar(e->a, symbols, dim) / d;
        }
    }
    throw std::logic_error("eval_scalar: unreachable");
}

long scalar_degree_bound(const ScalarExprPtr& e, long sym_deg);

long mat_degree_bound(const MatExprPtr& e, long sym_deg, int dim) {
    switch (e->kind) {
        case MatExpr::Kind::sym:
            return sym_deg;
        case MatExpr::Kind::ident:
            return 0;
        case MatExpr::Kind::add:
        case MatExpr::Kind::sub:
        case MatExpr::Kind::mul:
            return mat_degree_bound(e->a, sym_deg, dim) + mat_degree_bound(e->b, sym_deg, dim);
        case MatExpr::Kind::transpose:
            return mat_degree_bound(e->a, sym_deg, dim);
        case MatExpr::Kind::inverse:
            return dim * mat_degree_bound(e->a, sym_deg, dim);
        case MatExpr::Kind::scale:
            return scalar_degree_bound(e->scalar, sym_deg) +
                   mat_degree_bound(e->a, sym_deg, dim);
    }
    return 0;
}

long scalar_degree_bound(const ScalarExprPtr& e, long sym_deg) {
    switch (e->kind) {
        case ScalarExpr::Kind::constant:
            return 0;
        case ScalarExpr::Kind::trace:
            return mat_degree_bound(e->m, sym_deg, 1);
        default:
            return scalar_degree_bound(e->a, sym_deg) + scalar_degree_bound(e->b, sym_deg);
    }
}

// Rational point on the unit quaternion sphere via the stereographic chart,
// expanded to the 4x4 block-algebra pattern.
RatMat m1_quaternion_sample(std::mt19937_64& rng, long height) {
    const Rat u1 = random_rat(rng, height), u2 = random_rat(rng, height),
              u3 = random_rat(rng, height);
    const Rat n = 1 + u1 * u1 + u2 * u2 + u3 * u3;
    const Rat a = (2 - n) / n;  // (1 - |u|^2) / (1 + |u|^2)
    const Rat b = 2 * u1 / n, c = 2 * u2 / n, d = 2 * u3 / n;
    RatMat m(4, 4);
    const Rat vals[4][4] = {{a, -b, -c, -d}, {b, a, -d, c}, {c, d, a, -b}, {d, -c, b, a}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = vals[i][j];
    return m;
}

}  // namespace

RatMat eval_mat(const MatExprPtr& e, const std::vector<RatMat>& symbols, int dim) {
    return eval_mat_impl(e, symbols, dim);
}

IdentityVerdict identity_test(const MatExprPtr& expr, int num_symbols, int dim, int trials,
                              std::uint64_t seed, SampleDomain domain, const SampleConfig& cfg) {
    if (trials < 1 || num_symbols < 0) throw std::invalid_argument("identity_test: bad arguments");
    if (domain == SampleDomain::m1_quaternion && dim != 4)
        throw std::invalid_argument("identity_test: the quaternion domain requires dim = 4");

    IdentityVerdict verdict;
    verdict.trials = trials;
    const long sym_deg = domain == SampleDomain::so_d ? 4L * reflection_count(dim) : 4L;
    verdict.degree_bound = mat_degree_bound(expr, sym_deg, dim);

    constexpr int kResampleBudget = 16;
    for (int trial = 0; trial < trials; ++trial) {
        bool evaluated = false;
        for (int resample = 0; resample < kResampleBudget && !evaluated; ++resample) {
            // Trials partition the seed space: deterministic and parallelizable.
            std::mt19937_64 rng(seed + 0x1000003ull * static_cast<std::uint64_t>(trial) +
                                static_cast<std::uint64_t>(resample));
            std::vector<RatMat> symbols;
            symbols.reserve(static_cast<size_t>(num_symbols));
            for (int i = 0; i < num_symbols; ++i) {
                if (domain == SampleDomain::so_d) {
                    ParamVector pv;
                    pv.dim = dim;
                    for (int kk = 0; kk < reflection_count(dim); ++kk) {
                        RatVec w(static_cast<size_t>(dim));
                        bool nonzero = false;
                        for (auto& x : w) {
                            x = random_rat(rng, cfg.height);
                            nonzero = nonzero || x != 0;
                        }
                        if (!nonzero) w[0] = 1;
                        pv.vecs.push_back(std::move(w));
                    }
                    symbols.push_back(alpha_d(pv).matrix());
                } else {
                    symbols.push_back(m1_quaternion_sample(rng, cfg.height));
                }
            }
            try {
                RatMat value = eval_mat(expr, symbols, dim);
                evaluated = true;
                if (!value.is_zero()) {
                    verdict.nontrivial = true;
                    verdict.witness_trial = trial;
                    verdict.witness = std::move(symbols);
                    return verdict;
                }
            } catch (const std::domain_error&) {
                // denominator hit; resample
            }
        }
        if (!evaluated)
            throw DegenerateExpression("identity_test: every sample hit a zero denominator");
    }
    const double space = 0.5 * static_cast<double>(cfg.height) * static_cast<double>(cfg.height);
    const double per_trial = std::min(1.0, static_cast<double>(verdict.degree_bound) / space);
    verdict.est_failure_prob = std::pow(per_trial, trials);
    return verdict;
}

bool fixed_point_free(const Word& w, const IndependentSystem& sys) {
    if (sys.dim % 2 != 0)
        throw OddDimension("fixed_point_free: defined for even dimensions only");
    if (w.empty()) throw std::invalid_argument("fixed_point_free: word must be nonempty");
    RatMat m = RatMat::identity(sys.dim);
    for (const Letter& l : w.letters()) {
        if (l.sym < 0 || l.sym >= static_cast<int>(sys.rotations.size()))
            throw std::invalid_argument("fixed_point_free: symbol outside the system");
        const RatMat& rot = sys.rotations[static_cast<size_t>(l.sym)].matrix();
        m = m * (l.sign == 1 ? rot : rot.transpose());
    }
    return (RatMat::identity(sys.dim) - m).determinant() != 0;
}

}  // namespace balldiv
