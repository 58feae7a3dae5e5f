#ifndef BALLDIV_WORDS_HPP
#define BALLDIV_WORDS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace balldiv {

struct WrongAlphabet : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct UnmappedSymbol : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// One generator occurrence: symbol id and exponent sign.
struct Letter {
    int sym;
    int sign;  // +1 or -1
    friend bool operator==(const Letter& a, const Letter& b) {
        return a.sym == b.sym && a.sign == b.sign;
    }
    friend bool operator!=(const Letter& a, const Letter& b) { return !(a == b); }
    Letter inverse() const { return Letter{sym, -sign}; }
};

// Symbol registry mapping small integer ids to display names.
class Alphabet {
  public:
    explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {}

    // {A, B}, symbols 0 and 1.
    static Alphabet ab() { return Alphabet({"A", "B"}); }
    // {O1..Om, F}: symbols 0..m-1 are the rotations, symbol m is F.
    static Alphabet isometry(int m);

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int sym) const { return names_.at(static_cast<size_t>(sym)); }
    std::optional<int> find(const std::string& name) const;

  private:
    std::vector<std::string> names_;
};

inline constexpr int kSymA = 0;
inline constexpr int kSymB = 1;

// Reduced word over a free alphabet. Letters are in product order: the
// leftmost letter is applied last, matching matrix products acting from
// the left. Instances are reduced by construction.
class Word {
  public:
    Word() = default;

    const std::vector<Letter>& letters() const { return letters_; }
    int length() const { return static_cast<int>(letters_.size()); }
    bool empty() const { return letters_.empty(); }
    const Letter& first() const { return letters_.front(); }  // W[1]
    const Letter& last() const { return letters_.back(); }    // W[-1]

    Word inverse() const;
    // Concatenation followed by free reduction.
    friend Word operator*(const Word& a, const Word& b);

    friend bool operator==(const Word& a, const Word& b) { return a.letters_ == b.letters_; }
    friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }
    friend bool operator<(const Word& a, const Word& b);  // shortlex-ish, for containers

    friend Word reduce(const std::vector<Letter>& raw);
    friend class ReducedWordEnumerator;

  private:
    std::vector<Letter> letters_;
};

// Free reduction of a raw letter sequence; idempotent and length-nonincreasing.
Word reduce(const std::vector<Letter>& raw);

// True iff W[1]^{-1} = W[-1] (empty word: false).
bool has_shorter_conjugate(const Word& w);

// Maximal run of one symbol with a signed integer exponent.
struct Block {
    int sym;
    long exp;  // nonzero
    friend bool operator==(const Block& a, const Block& b) {
        return a.sym == b.sym && a.exp == b.exp;
    }
};

// Exponent-block normal form A^{m1} B^{n1} ... of a reduced word.
struct BlockForm {
    std::vector<Block> blocks;  // adjacent blocks have distinct symbols

    long sigma() const;                // sum of |exponents| = lg of the word
    int block_count(int sym) const;    // number of blocks carrying `sym`
    Word expand() const;               // round-trips with to_block_form
    bool empty() const { return blocks.empty(); }
};

// Generic run-length block form (any alphabet).
BlockForm to_block_form(const Word& w);
// Block form restricted to the {A,B} alphabet; throws WrongAlphabet otherwise.
BlockForm to_ab_block_form(const Word& w);

// Number of reduced words of length exactly n over k free generators:
// 1 for n = 0, else 2k (2k-1)^{n-1}.
std::uint64_t reduced_word_count(int k, int n);

// Streams every reduced word of length <= max_len over k symbols exactly
// once, in depth-first order. The empty word is emitted first when
// include_empty is set. Restartable and deterministic.
class ReducedWordEnumerator {
  public:
    ReducedWordEnumerator(int k, int max_len, bool include_empty = false);
    std::optional<Word> next();

  private:
    int k_, max_len_;
    int len_ = 0;
    std::vector<int> state_;  // per-position choice index
    bool advance();
    Word materialize() const;
    static Letter letter_of(int choice);
    bool fresh_ = true;
    bool emit_empty_;
};

// Homomorphic substitution: each letter sym^{+-1} maps to images[sym]^{+-1};
// the result is reduced. Throws UnmappedSymbol for symbols absent from the map.
Word substitute(const Word& w, const std::map<int, Word>& images);

// Text round-trip format: whitespace-separated signed exponent blocks,
// e.g. "A^2 B^-3 A".
std::string format_word(const Word& w, const Alphabet& alpha);
Word parse_word(const std::string& text, const Alphabet& alpha);

}  // namespace balldiv

#endif
