#include "balldiv/words.hpp"

#include <algorithm>
#include <sstream>

namespace balldiv {

Alphabet Alphabet::isometry(int m) {
    if (m < 1) throw std::invalid_argument("Alphabet::isometry: need m >= 1");
    std::vector<std::string> names;
    names.reserve(static_cast<size_t>(m) + 1);
    for (int i = 1; i <= m; ++i) names.push_back("O" + std::to_string(i));
    names.push_back("F");
    return Alphabet(std::move(names));
}

std::optional<int> Alphabet::find(const std::string& name) const {
    for (size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    return std::nullopt;
}

Word reduce(const std::vector<Letter>& raw) {
    Word w;
    w.letters_.reserve(raw.size());
    for (const Letter& l : raw) {
        if (l.sign != 1 && l.sign != -1) throw std::invalid_argument("reduce: sign must be +-1");
        if (!w.letters_.empty() && w.letters_.back() == l.inverse())
            w.letters_.pop_back();
        else
            w.letters_.push_back(l);
    }
    return w;
}

Word Word::inverse() const {
    Word w;
    w.letters_.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
        w.letters_.push_back(it->inverse());
    return w;
}

Word operator*(const Word& a, const Word& b) {
    std::vector<Letter> raw = a.letters_;
    raw.insert(raw.end(), b.letters_.begin(), b.letters_.end());
    return reduce(raw);
}

bool operator<(const Word& a, const Word& b) {
    if (a.letters_.size() != b.letters_.size()) return a.letters_.size() < b.letters_.size();
    for (size_t i = 0; i < a.letters_.size(); ++i) {
        if (a.letters_[i].sym != b.letters_[i].sym) return a.letters_[i].sym < b.letters_[i].sym;
        if (a.letters_[i].sign != b.letters_[i].sign) return a.letters_[i].sign < b.letters_[i].sign;
    }
    return false;
}

bool has_shorter_conjugate(const Word& w) {
    if (w.empty()) return false;
    return w.first().inverse() == w.last();
}

long BlockForm::sigma() const {
    long s = 0;
    for (const Block& b : blocks) s += std::abs(b.exp);
    return s;
}

int BlockForm::block_count(int sym) const {
    int n = 0;
    for (const Block& b : blocks)
        if (b.sym == sym) ++n;
    return n;
}

Word BlockForm::expand() const {
    std::vector<Letter> raw;
    for (const Block& b : blocks) {
        int sign = b.exp > 0 ? 1 : -1;
        for (long i = 0; i < std::abs(b.exp); ++i) raw.push_back(Letter{b.sym, sign});
    }
    return reduce(raw);
}

BlockForm to_block_form(const Word& w) {
    BlockForm bf;
    for (const Letter& l : w.letters()) {
        if (!bf.blocks.empty() && bf.blocks.back().sym == l.sym)
            bf.blocks.back().exp += l.sign;
        else
            bf.blocks.push_back(Block{l.sym, l.sign});
    }
    // A reduced word cannot produce a zero block.
    return bf;
}

BlockForm to_ab_block_form(const Word& w) {
    for (const Letter& l : w.letters())
        if (l.sym != kSymA && l.sym != kSymB)
            throw WrongAlphabet("to_ab_block_form: word uses symbols outside {A,B}");
    return to_block_form(w);
}

std::uint64_t reduced_word_count(int k, int n) {
    if (n == 0) return 1;
    if (k == 0) return 0;
    std::uint64_t c = 2ull * static_cast<std::uint64_t>(k);
    for (int i = 1; i < n; ++i) c *= 2ull * k - 1;
    return c;
}

ReducedWordEnumerator::ReducedWordEnumerator(int k, int max_len, bool include_empty)
    : k_(k), max_len_(max_len), emit_empty_(include_empty) {
    if (k < 0 || max_len < 0) throw std::invalid_argument("ReducedWordEnumerator: bad arguments");
}

Letter ReducedWordEnumerator::letter_of(int choice) {
    return Letter{choice / 2, (choice % 2 == 0) ? 1 : -1};
}

// Choices are 0..2k-1 per position; a position following letter L skips the
// single choice equal to L^{-1}.
bool ReducedWordEnumerator::advance() {
    // Try to extend to the next length first when possible.
    if (len_ < max_len_ && k_ > 0) {
        state_.push_back(0);
        ++len_;
        // fix up: first candidate at the new position must not cancel
        if (len_ >= 2) {
            Letter prev = letter_of(state_[static_cast<size_t>(len_) - 2]);
            Letter cand = letter_of(0);
            if (cand == prev.inverse()) state_.back() = 1;
        }
        return true;
    }
    // Otherwise increment like an odometer.
    while (!state_.empty()) {
        int pos = static_cast<int>(state_.size()) - 1;
        int c = state_[static_cast<size_t>(pos)] + 1;
        for (; c < 2 * k_; ++c) {
            if (pos >= 1) {
                Letter prev = letter_of(state_[static_cast<size_t>(pos) - 1]);
                if (letter_of(c) == prev.inverse()) continue;
            }
            break;
        }
        if (c < 2 * k_) {
            state_[static_cast<size_t>(pos)] = c;
            return true;
        }
        state_.pop_back();
        --len_;
    }
    return false;
}

Word ReducedWordEnumerator::materialize() const {
    std::vector<Letter> raw;
    raw.reserve(state_.size());
    for (int c : state_) raw.push_back(letter_of(c));
    return reduce(raw);
}

std::optional<Word> ReducedWordEnumerator::next() {
    if (fresh_) {
        fresh_ = false;
        if (emit_empty_) return Word();
    }
    if (max_len_ == 0 || k_ == 0) return std::nullopt;
    if (!advance()) return std::nullopt;
    return materialize();
}

Word substitute(const Word& w, const std::map<int, Word>& images) {
    std::vector<Letter> raw;
    for (const Letter& l : w.letters()) {
        auto it = images.find(l.sym);
        if (it == images.end())
            throw UnmappedSymbol("substitute: no image for symbol " + std::to_string(l.sym));
        const Word image = l.sign == 1 ? it->second : it->second.inverse();
        raw.insert(raw.end(), image.letters().begin(), image.letters().end());
    }
    return reduce(raw);
}

std::string format_word(const Word& w, const Alphabet& alpha) {
    if (w.empty()) return "e";
    BlockForm bf = to_block_form(w);
    std::ostringstream os;
    bool first = true;
    for (const Block& b : bf.blocks) {
        if (!first) os << " ";
        first = false;
        os << alpha.name(b.sym);
        if (b.exp != 1) os << "^" << b.exp;
    }
    return os.str();
}

Word parse_word(const std::string& text, const Alphabet& alpha) {
    std::istringstream is(text);
    std::vector<Letter> raw;
    std::string tok;
    while (is >> tok) {
        if (tok == "e") continue;
        std::string name = tok;
        long exp = 1;
        auto caret = tok.find('^');
        if (caret != std::string::npos) {
            name = tok.substr(0, caret);
            try {
                exp = std::stol(tok.substr(caret + 1));
            } catch (const std::exception&) {
                throw std::invalid_argument("parse_word: bad exponent in '" + tok + "'");
            }
        }
        auto sym = alpha.find(name);
        if (!sym) throw WrongAlphabet("parse_word: unknown symbol '" + name + "'");
        int sign = exp > 0 ? 1 : -1;
        for (long i = 0; i < std::labs(exp); ++i) raw.push_back(Letter{*sym, sign});
    }
    return reduce(raw);
}

}  // namespace balldiv
