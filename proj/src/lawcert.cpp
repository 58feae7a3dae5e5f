#include "balldiv/lawcert.hpp"

namespace balldiv {

QMat eval_ab(const Word& w) {
    QMat acc = QMat::identity();
    for (const Letter& l : w.letters()) {
        QMat g;
        if (l.sym == kSymA)
            g = l.sign == 1 ? QMat::gen_a() : QMat::gen_a().transpose();
        else if (l.sym == kSymB)
            g = l.sign == 1 ? QMat::gen_b() : QMat::gen_b().transpose();
        else
            throw WrongAlphabet("eval_ab: word uses symbols outside {A,B}");
        acc = acc * g;
    }
    return acc;
}

QMat eval_ab_blocks(const BlockForm& bf) {
    QMat acc = QMat::identity();
    for (const Block& b : bf.blocks) {
        if (b.sym == kSymA)
            acc = acc * QMat(cheb_cos(b.exp), cheb_sin_factor(b.exp), {}, {});
        else if (b.sym == kSymB)
            acc = acc * QMat(cheb_cos(b.exp), {}, {}, cheb_sin_factor(b.exp));
        else
            throw WrongAlphabet("eval_ab_blocks: word uses symbols outside {A,B}");
    }
    return acc;
}

std::optional<LawCase> classify_shape(const BlockForm& bf) {
    if (bf.blocks.empty()) return std::nullopt;
    int first = bf.blocks.front().sym;
    int last = bf.blocks.back().sym;
    if (first == kSymA && last == kSymB) return LawCase::a;
    if (first == kSymA && last == kSymA) return LawCase::b;
    if (first == kSymB && last == kSymB) return LawCase::c;
    return std::nullopt;  // B...A: covered by the inverse of a case-a word
}

namespace {

mpz_class pow2(long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(e));
    return r;
}

// Shared tail for cases b and c: `hi` is the slot pair expected at degree
// sigma as (deg, deg+1), `lo` the other pair.
struct SlotPair {
    Degree deg_hi, deg_lo;  // deg_hi at sigma, deg_lo at sigma-1
    mpz_class lc_hi, lc_lo;
};

void finish_bc(LawReport& rep, const SlotPair& one, const SlotPair& two) {
    const long sigma = rep.sigma;
    auto dominates = [&](const SlotPair& sp) {
        return sp.deg_hi == Degree(static_cast<int>(sigma)) &&
               sp.deg_lo == Degree(static_cast<int>(sigma) - 1);
    };
    auto below = [&](const SlotPair& sp) {
        return max(sp.deg_hi, sp.deg_lo + 1) < Degree(static_cast<int>(sigma));
    };
    const bool one_dom = dominates(one) && below(two);
    const bool two_dom = dominates(two) && below(one);
    rep.degrees_ok = one_dom != two_dom;  // exactly one subcase
    rep.subcase = one_dom ? 1 : (two_dom ? 2 : 0);
    if (rep.degrees_ok) {
        const SlotPair& dom = one_dom ? one : two;
        rep.lc_equal_ok = abs(dom.lc_hi) == abs(dom.lc_lo);
        rep.lc_observed = rep.lc_equal_ok ? abs(dom.lc_hi) : mpz_class(0);
    }
    rep.lc_derived = pow2(sigma - rep.t);
    if (sigma - rep.t - 2 >= 0) rep.lc_printed = pow2(sigma - rep.t - 2);
    rep.lc_derived_ok = rep.lc_equal_ok && rep.lc_observed == rep.lc_derived;
    rep.lc_printed_ok =
        rep.lc_equal_ok && rep.lc_printed.has_value() && rep.lc_observed == *rep.lc_printed;
    rep.pass = rep.degrees_ok && rep.lc_equal_ok && rep.lc_derived_ok;
}

}  // namespace

LawReport check_law_case_a(const BlockForm& bf) {
    if (classify_shape(bf) != LawCase::a)
        throw WrongShape("check_law_case_a: word must start with an A-block and end with a B-block");
    LawReport rep;
    rep.word = format_word(bf.expand(), Alphabet::ab());
    rep.law_case = LawCase::a;
    rep.sigma = bf.sigma();
    rep.t = bf.block_count(kSymA);
    rep.observed = deg_profile(eval_ab_blocks(bf));
    const Degree want(static_cast<int>(rep.sigma));
    rep.degrees_ok = rep.observed.deg_p == want && rep.observed.deg_r == want &&
                     rep.observed.deg_q + 1 == want && rep.observed.deg_s + 1 == want;
    rep.lc_equal_ok = abs(rep.observed.lc_p) == abs(rep.observed.lc_q) &&
                      abs(rep.observed.lc_q) == abs(rep.observed.lc_r) &&
                      abs(rep.observed.lc_r) == abs(rep.observed.lc_s);
    rep.lc_observed = rep.lc_equal_ok ? abs(rep.observed.lc_p) : mpz_class(0);
    rep.lc_derived = pow2(rep.sigma - rep.t - 1);
    rep.lc_printed = rep.lc_derived;  // printed and derived agree in case (a)
    rep.lc_derived_ok = rep.lc_equal_ok && rep.lc_observed == rep.lc_derived;
    rep.lc_printed_ok = rep.lc_derived_ok;
    rep.pass = rep.degrees_ok && rep.lc_equal_ok && rep.lc_derived_ok;
    return rep;
}

LawReport check_law_case_b(const BlockForm& bf) {
    if (classify_shape(bf) != LawCase::b)
        throw WrongShape("check_law_case_b: word must start and end with an A-block");
    LawReport rep;
    rep.word = format_word(bf.expand(), Alphabet::ab());
    rep.law_case = LawCase::b;
    rep.sigma = bf.sigma();
    rep.t = bf.block_count(kSymA);
    rep.observed = deg_profile(eval_ab_blocks(bf));
    SlotPair pq{rep.observed.deg_p, rep.observed.deg_q, rep.observed.lc_p, rep.observed.lc_q};
    SlotPair rs{rep.observed.deg_r, rep.observed.deg_s, rep.observed.lc_r, rep.observed.lc_s};
    finish_bc(rep, pq, rs);
    return rep;
}

LawReport check_law_case_c(const BlockForm& bf) {
    if (classify_shape(bf) != LawCase::c)
        throw WrongShape("check_law_case_c: word must start and end with a B-block");
    LawReport rep;
    rep.word = format_word(bf.expand(), Alphabet::ab());
    rep.law_case = LawCase::c;
    rep.sigma = bf.sigma();
    rep.t = bf.block_count(kSymB);
    rep.observed = deg_profile(eval_ab_blocks(bf));
    SlotPair ps{rep.observed.deg_p, rep.observed.deg_s, rep.observed.lc_p, rep.observed.lc_s};
    SlotPair rq{rep.observed.deg_r, rep.observed.deg_q, rep.observed.lc_r, rep.observed.lc_q};
    finish_bc(rep, ps, rq);
    return rep;
}

TraceReport check_trace_criterion(const BlockForm& bf) {
    if (classify_shape(bf) != LawCase::b)
        throw WrongShape("check_trace_criterion: case-(b) shape required");
    TraceReport tr;
    tr.m1_mt_positive = bf.blocks.front().exp * bf.blocks.back().exp > 0;
    DegProfile d = deg_profile(eval_ab_blocks(bf));
    tr.p_dominant = d.deg_p == d.mat_deg && d.deg_q + 1 == d.mat_deg &&
                    max(d.deg_r, d.deg_s + 1) < d.mat_deg;
    return tr;
}

namespace {

// Depth-first walk over all nonempty reduced {A,B}-words of length <= max_len
// with the evaluated matrix maintained incrementally.
template <typename Fn>
void for_each_ab_word(int max_len, Fn&& fn) {
    struct Frame {
        Word word;
        QMat value;
    };
    const std::array<Letter, 4> gens{Letter{kSymA, 1}, Letter{kSymA, -1}, Letter{kSymB, 1},
                                     Letter{kSymB, -1}};
    const std::array<QMat, 4> mats{QMat::gen_a(), QMat::gen_a().transpose(), QMat::gen_b(),
                                   QMat::gen_b().transpose()};
    // Explicit stack: (word, value) pairs extended one letter at a time.
    std::vector<Frame> stack;
    stack.push_back(Frame{Word(), QMat::identity()});
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (!f.word.empty()) fn(f.word, f.value);
        if (f.word.length() >= max_len) continue;
        for (int g = 3; g >= 0; --g) {
            if (!f.word.empty() && f.word.last() == gens[static_cast<size_t>(g)].inverse())
                continue;
            std::vector<Letter> raw = f.word.letters();
            raw.push_back(gens[static_cast<size_t>(g)]);
            stack.push_back(Frame{reduce(raw), f.value * mats[static_cast<size_t>(g)]});
        }
    }
}

}  // namespace

FreeGroupSweep free_group_sweep(int max_len) {
    if (max_len < 1) throw std::invalid_argument("free_group_sweep: max_len must be >= 1");
    FreeGroupSweep sweep;
    sweep.max_len = max_len;
    for_each_ab_word(max_len, [&](const Word& w, const QMat& m) {
        ++sweep.words_checked;
        if (m.is_identity() || m.p() == IntPoly(1))
            sweep.violations.push_back(format_word(w, Alphabet::ab()));
    });
    return sweep;
}

DegreeLawSweep degree_law_sweep(int max_len, std::optional<LawCase> shape_filter) {
    if (max_len < 1) throw std::invalid_argument("degree_law_sweep: max_len must be >= 1");
    DegreeLawSweep sweep;
    sweep.max_len = max_len;
    for_each_ab_word(max_len, [&](const Word& w, const QMat&) {
        BlockForm bf = to_block_form(w);
        auto shape = classify_shape(bf);
        if (!shape || (shape_filter && shape != *shape_filter)) {
            ++sweep.skipped_shape;
            return;
        }
        ++sweep.words_checked;
        LawReport rep;
        switch (*shape) {
            case LawCase::a:
                ++sweep.case_a;
                rep = check_law_case_a(bf);
                break;
            case LawCase::b:
                ++sweep.case_b;
                rep = check_law_case_b(bf);
                break;
            case LawCase::c:
                ++sweep.case_c;
                rep = check_law_case_c(bf);
                break;
        }
        if (!rep.pass) sweep.failures.push_back(rep);
        if (*shape != LawCase::a) {
            if (rep.lc_printed.has_value()) {
                ++sweep.printed_lc_checked;
                if (rep.lc_printed_ok) ++sweep.printed_lc_matches;
            } else {
                ++sweep.excluded_small_shapes;
            }
        }
        if (*shape == LawCase::b) {
            TraceReport tr = check_trace_criterion(bf);
            if (!tr.equivalent()) sweep.trace_failures.push_back(rep.word);
        }
    });
    return sweep;
}

LgDegSweep lg_deg_sweep(int max_len) {
    if (max_len < 1) throw std::invalid_argument("lg_deg_sweep: max_len must be >= 1");
    LgDegSweep sweep;
    sweep.max_len = max_len;
    for_each_ab_word(max_len, [&](const Word& w, const QMat& m) {
        ++sweep.words_checked;
        if (deg_profile(m).mat_deg != Degree(w.length()))
            sweep.violations.push_back(format_word(w, Alphabet::ab()));
    });
    return sweep;
}

OneOsSweep lemma_1os_identities(int max_len) {
    if (max_len < 1) throw std::invalid_argument("lemma_1os_identities: max_len must be >= 1");
    OneOsSweep sweep;
    sweep.max_len = max_len;
    const QMat id = QMat::identity();
    for_each_ab_word(max_len, [&](const Word& w, const QMat& u) {
        ++sweep.words_checked;
        // U(U-I)^{-1} = U^2(U^2-I)^{-1} simplifies to U = I; and
        // I = (U+I)U means U^2 + U - I = 0. Both must fail for U != I.
        const QMat u2 = u * u;
        bool first_ok = !(u2 - id - (u - id) * u).is_zero();   // equals U - I
        bool second_ok = !(u2 + u - id).is_zero();
        if (!first_ok || !second_ok) sweep.violations.push_back(format_word(w, Alphabet::ab()));
    });
    return sweep;
}

}  // namespace balldiv
