#include <algorithm>
#include <random>

#include "balldiv/lawcert.hpp"

namespace balldiv {

FSplit split_on_f(const Word& w, int f_sym) {
    FSplit fs;
    std::vector<Letter> seg;
    bool saw_f = false;
    for (const Letter& l : w.letters()) {
        if (l.sym == f_sym) {
            fs.s.push_back(reduce(seg));
            seg.clear();
            fs.alpha.push_back(l.sign);
            saw_f = true;
        } else {
            seg.push_back(l);
        }
    }
    if (!saw_f) throw NoTranslation("split_on_f: word contains no F letter");
    fs.s_star = reduce(seg);
    return fs;
}

namespace {

std::map<int, Word> image_map(const Substitution& subst) {
    std::map<int, Word> m;
    for (size_t i = 0; i < subst.images.size(); ++i) m[static_cast<int>(i)] = subst.images[i];
    return m;
}

}  // namespace

std::pair<QMat, QMat> build_u_v(const Word& w, const Substitution& subst, int f_sym) {
    FSplit fs = split_on_f(w, f_sym);
    const std::map<int, Word> images = image_map(subst);
    auto eval_segment = [&](const Word& seg) { return eval_ab(substitute(seg, images)); };

    const QMat o0 = eval_ab(subst.o0);
    const QMat o0_inv = o0.transpose();  // words in A,B are orthogonal

    QMat prefix = QMat::identity();
    QMat v = QMat::zero();
    for (int k = 0; k < fs.n(); ++k) {
        QMat u_k = prefix * eval_segment(fs.s[static_cast<size_t>(k)]);
        if (fs.alpha[static_cast<size_t>(k)] == 1) {
            v = v + u_k;                   // beta = 0
            prefix = u_k * o0;
        } else {
            v = v - u_k * o0_inv;          // beta = -1
            prefix = u_k * o0_inv;
        }
    }
    QMat u = prefix * eval_segment(fs.s_star);
    return {std::move(u), std::move(v)};
}

long monotone_d(const Word& w1, const Word& w2, const std::vector<std::array<long, 3>>& exponents) {
    // Validate: pairwise-distinct absolute values across all triples,
    // |i3| >= |i1|, |i2| > 1.
    std::vector<long> all;
    for (const auto& e : exponents) {
        long a1 = std::labs(e[0]), a3 = std::labs(e[1]), a2 = std::labs(e[2]);
        if (a1 <= 1 || a2 <= 1 || a3 <= 1)
            throw BadExponents("monotone_d: exponent magnitudes must exceed 1");
        if (a3 < a1 || a3 < a2) throw BadExponents("monotone_d: |i3| must dominate |i1|, |i2|");
        all.push_back(a1);
        all.push_back(a3);
        all.push_back(a2);
    }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end())
        throw BadExponents("monotone_d: absolute values must be pairwise distinct");

    long d = 0;
    for (size_t i = 0; i < exponents.size(); ++i) {
        long occ = 0;
        for (const Letter& l : w1.letters())
            if (l.sym == static_cast<int>(i)) ++occ;
        for (const Letter& l : w2.letters())
            if (l.sym == static_cast<int>(i)) ++occ;
        const auto& e = exponents[i];
        d += occ * (std::labs(e[0]) + std::labs(e[1]) + std::labs(e[2]));
    }
    return d;
}

namespace {

bool contains_f(const Word& w, int f_sym) {
    for (const Letter& l : w.letters())
        if (l.sym == f_sym) return true;
    return false;
}

// Sign of the rightmost F letter (the first one applied).
int last_applied_f_sign(const Word& w, int f_sym) {
    for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it)
        if (it->sym == f_sym) return it->sign;
    return 0;
}

// Sign of the leftmost F letter (the last one applied).
int first_in_word_f_sign(const Word& w, int f_sym) {
    for (const Letter& l : w.letters())
        if (l.sym == f_sym) return l.sign;
    return 0;
}

struct Candidate {
    Word common, br1, br2;
    std::string tag;  // a1 | a2 | e | fallback
    int rank = 0;     // lower runs first
};

Word triple_word(long i1, long i3, long i2) {
    // A^{i1} B^{i3} A^{i2}
    BlockForm bf;
    bf.blocks = {Block{kSymA, i1}, Block{kSymB, i3}, Block{kSymA, i2}};
    return bf.expand();
}

Word power_word(int sym, long e) {
    BlockForm bf;
    bf.blocks = {Block{sym, e}};
    return bf.expand();
}

}  // namespace

Certificate certify_cycle_pair(const CyclePair& pair, const EngineConfig& cfg) {
    if (pair.m < 1) throw std::invalid_argument("certify_cycle_pair: need at least one O symbol");
    const int f_sym = pair.m;
    if (pair.common.empty() || pair.branch1.empty() || pair.branch2.empty())
        throw std::invalid_argument("certify_cycle_pair: all three paths must be nonempty");
    if (pair.branch1 == pair.branch2 || pair.branch1 == pair.common ||
        pair.branch2 == pair.common)
        throw std::invalid_argument("certify_cycle_pair: identical input paths");
    {
        const Word w1 = pair.w1(), w2 = pair.w2();
        if (w1 == w2) throw std::invalid_argument("certify_cycle_pair: identical input words");
        if (w1.length() != pair.branch1.length() + pair.common.length() ||
            w2.length() != pair.branch2.length() + pair.common.length())
            throw std::invalid_argument(
                "certify_cycle_pair: paths cancel at a junction; not a valid three-paths "
                "structure");
        if (!contains_f(w1, f_sym) || !contains_f(w2, f_sym))
            throw std::invalid_argument(
                "certify_cycle_pair: every cycle word must contain F or F^-1");
    }

    // Enumerate normalizations: choice of common path among the three
    // (cases b/c of the analysis reduce to a by re-rooting) and of the
    // orientation (swapping P and Q inverts all paths).
    std::vector<Candidate> cands;
    const std::array<std::array<Word, 3>, 3> roles{{{pair.common, pair.branch1, pair.branch2},
                                                    {pair.branch1, pair.common, pair.branch2},
                                                    {pair.branch2, pair.common, pair.branch1}}};
    for (const auto& role : roles) {
        for (int orient = 0; orient < 2; ++orient) {
            Candidate c;
            c.common = orient ? role[0].inverse() : role[0];
            c.br1 = orient ? role[1].inverse() : role[1];
            c.br2 = orient ? role[2].inverse() : role[2];
            if (!contains_f(c.common, f_sym)) continue;  // S* must be shared
            const Word w1 = c.br1.inverse() * c.common;
            const Word w2 = c.br2.inverse() * c.common;
            if (w1.length() != c.br1.length() + c.common.length() ||
                w2.length() != c.br2.length() + c.common.length())
                continue;  // re-rooted pair degenerates
            if (!contains_f(w1, f_sym) || !contains_f(w2, f_sym)) continue;
            const int alpha_last = last_applied_f_sign(c.common, f_sym);
            if (alpha_last == -1) {
                FSplit fs = split_on_f(w1, f_sym);
                c.tag = fs.s_star.empty() ? "a1" : "a2";
                c.rank = fs.s_star.empty() ? 0 : 1;
            } else if (first_in_word_f_sign(w1, f_sym) == -1 &&
                       first_in_word_f_sign(w2, f_sym) == -1) {
                c.tag = "e";
                c.rank = 2;
            } else {
                c.tag = "fallback";
                c.rank = 3;
            }
            cands.push_back(std::move(c));
        }
    }
    if (cands.empty())
        throw SubstitutionFailure(
            "certify_cycle_pair: no normalization has an F on the common path");
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Candidate& a, const Candidate& b) { return a.rank < b.rank; });

    Certificate best;
    best.status = "not-certified";
    const Alphabet ab = Alphabet::ab();
    const Alphabet iso = pair.alphabet();

    int attempts = 0;
    for (const Candidate& cand : cands) {
        const Word w1 = cand.br1.inverse() * cand.common;
        const Word w2 = cand.br2.inverse() * cand.common;
        const FSplit fs1 = split_on_f(w1, f_sym);

        for (int k = 0; k < cfg.exponent_budget && attempts < cfg.exponent_budget; ++k) {
            ++attempts;
            // Deterministic exponent schedule: 8 sign patterns per magnitude
            // level, then bump all magnitudes.
            const long base = cfg.base_magnitude + 3 * (k / 8);
            std::mt19937_64 rng(0xBA11D1Full + static_cast<unsigned long>(k));
            auto sign = [&](bool fixed_plus) -> long {
                if (fixed_plus || k % 8 == 0) return 1;
                return (rng() & 1) ? 1 : -1;
            };
            const int eps_combo = k % 4;
            const long eps1 = (eps_combo & 1) ? -1 : 1;
            const long eps2 = (eps_combo & 2) ? -1 : 1;

            const bool o0_triple = cand.tag == "a1" || cand.tag == "fallback";
            std::vector<std::array<long, 3>> triples;
            Substitution subst;
            for (int j = 0; j < pair.m + (o0_triple ? 1 : 0); ++j) {
                const long lo = base + 3 * j;
                std::array<long, 3> tr{sign(k == 0) * lo, sign(k == 0) * (lo + 2),
                                       sign(k == 0) * (lo + 1)};
                triples.push_back(tr);
                if (j < pair.m)
                    subst.images.push_back(triple_word(tr[0], tr[1], tr[2]));
                else
                    subst.o0 = triple_word(tr[0], tr[1], tr[2]);
            }
            if (!o0_triple) {
                // Bulk form around the shared tail S*: O0 = S* A^e1 B^D A^e2
                // (case a2) or A^e1 B^D A^e2 S*^{-1} (case e).
                std::vector<std::array<long, 3>> d_triples(triples.begin(),
                                                           triples.begin() + pair.m);
                const long d_exp = monotone_d(w1, w2, d_triples);
                std::map<int, Word> imgs;
                for (int i = 0; i < pair.m; ++i) imgs[i] = subst.images[static_cast<size_t>(i)];
                const Word s_star_sub = substitute(fs1.s_star, imgs);
                const Word bulk =
                    power_word(kSymA, eps1) * power_word(kSymB, d_exp) * power_word(kSymA, eps2);
                subst.o0 = cand.tag == "a2" ? s_star_sub * bulk : bulk * s_star_sub.inverse();
                best.d_exponent = d_exp;
            }

            auto [u1, v1] = build_u_v(w1, subst, f_sym);
            auto [u2, v2] = build_u_v(w2, subst, f_sym);
            if (u1.p() == IntPoly(1) || u2.p() == IntPoly(1)) continue;  // degenerate draw

            const QMat id = QMat::identity();
            const QMat m1 = (id - u1.transpose()) * v1;
            const QMat m2 = (id - u2.transpose()) * v2;
            const IntPoly one(1);
            const QMat lhs = (one - u2.p()) * m1;
            const QMat rhs = (one - u1.p()) * m2;

            if (lhs != rhs) {
                Certificate cert;
                cert.certified = true;
                cert.status = "certified";
                cert.case_tag = cand.tag;
                cert.attempts = attempts;
                for (const Word& im : subst.images) cert.o_images.push_back(format_word(im, ab));
                cert.o0_image = format_word(subst.o0, ab);
                cert.d_exponent = o0_triple ? 0 : best.d_exponent;
                cert.w1 = format_word(w1, iso);
                cert.w2 = format_word(w2, iso);
                cert.u1 = u1;
                cert.u2 = u2;
                cert.v1 = v1;
                cert.v2 = v2;
                cert.m1 = m1;
                cert.m2 = m2;
                cert.lhs = lhs;
                cert.rhs = rhs;
                cert.m1_profile = deg_profile(m1);
                cert.m2_profile = deg_profile(m2);
                cert.p1_nontrivial = true;
                cert.p2_nontrivial = true;
                return cert;
            }
        }
        if (attempts >= cfg.exponent_budget) break;
    }
    best.attempts = attempts;
    best.case_tag = cands.front().tag;
    best.w1 = format_word(pair.w1(), iso);
    best.w2 = format_word(pair.w2(), iso);
    return best;
}

}  // namespace balldiv
