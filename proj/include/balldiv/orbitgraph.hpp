#ifndef BALLDIV_ORBITGRAPH_HPP
#define BALLDIV_ORBITGRAPH_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "balldiv/lawcert.hpp"
#include "balldiv/qlinalg.hpp"
#include "balldiv/rotparam.hpp"
#include "balldiv/words.hpp"

namespace balldiv {

struct VertexBudget : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ExtractionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Generating isometries: F(x) = O0 x + t plus rotations O1..Om.
// Word symbols 0..m-1 are the rotations, symbol m is F.
struct IsoSystem {
    int dim = 0;
    RatMat o0;
    RatVec t;
    std::vector<RatMat> rotations;

    int m() const { return static_cast<int>(rotations.size()); }
    int f_sym() const { return m(); }
    AffineMap generator(int sym, int sign) const;
    AffineMap map_of_word(const Word& w) const;
    Alphabet alphabet() const { return Alphabet::isometry(m()); }
};

// m rotations plus O0 and t, all sampled as an independent system.
IsoSystem make_iso_system(int m, int dim, std::uint64_t seed, const SampleConfig& cfg = {});

// The multiset {O1(x), ..., Om(x), F(x)}.
std::vector<RatVec> image_multiset(const RatVec& x, const IsoSystem& sys);
// True iff x and all its images are pairwise distinct (exact comparison).
bool is_core_point(const RatVec& x, const IsoSystem& sys);

// Directed labelled graph on exact rational points. An edge (tail, head, sym)
// is present iff generator `sym` maps tail to head; loops are never stored
// (edges connect distinct points). Imported test graphs may carry labels with
// no function semantics; nothing here assumes otherwise except expansion.
class OrbitGraph {
  public:
    struct Edge {
        int tail, head, sym;
    };

    int add_vertex(const RatVec& p);             // returns existing id if present
    std::optional<int> find_vertex(const RatVec& p) const;
    bool add_edge(int tail, int head, int sym);  // false if duplicate or loop

    int vertex_count() const { return static_cast<int>(verts_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const RatVec& vertex(int id) const { return verts_[static_cast<size_t>(id)]; }
    const Edge& edge(int id) const { return edges_[static_cast<size_t>(id)]; }
    const std::vector<int>& incident_edges(int v) const {
        return incidence_[static_cast<size_t>(v)];
    }

    int dim = 0;
    std::vector<std::string> labels;  // display names per symbol id

    std::string to_json() const;
    static OrbitGraph from_json(const std::string& text);

  private:
    std::vector<RatVec> verts_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> incidence_;
    std::unordered_map<std::string, int> index_;
    std::set<std::tuple<int, int, int>> edge_keys_;
};

// Canonical hash key of an exact rational point.
std::string point_key(const RatVec& p);

struct ExpandOptions {
    int steps = 1;
    size_t max_vertices = 20000;
    bool throw_on_budget = true;  // otherwise stop and report truncation
};
struct ExpandResult {
    bool truncated = false;
    int new_vertices = 0;
};
// Adds every point within `steps` applications of the generators and their
// inverses from the current vertex set, with exact edges.
ExpandResult expand(OrbitGraph& g, const IsoSystem& sys, const ExpandOptions& opt);

// Undirected simple cycle: >= 2 distinct edges, distinct vertices.
struct Cycle {
    std::vector<int> verts;     // v0 .. v_{L-1}; closes back to v0
    std::vector<int> edges;     // edge ids, length L
    std::vector<Letter> steps;  // traversal letters, applied in order from v0

    // Label word in product order (leftmost letter applied last).
    Word word() const;
    std::set<int> vertex_set() const { return {verts.begin(), verts.end()}; }
    std::set<int> edge_set() const { return {edges.begin(), edges.end()}; }
};

// Exhaustively enumerates undirected simple cycles of length <= max_len,
// each exactly once. When `verify` is given, every cycle's word is checked
// to fix its base vertex exactly.
std::vector<Cycle> find_cycles(const OrbitGraph& g, int max_len,
                               const IsoSystem* verify = nullptr);

struct CoinViolation {
    Cycle c1, c2;
    int shared_edge = -1;
};
struct CoinVerdict {
    bool pass = true;
    std::optional<CoinViolation> violation;
    size_t cycles_examined = 0;
};
// Property (coin): any two cycles sharing an edge have identical vertex sets.
CoinVerdict coin_check(const OrbitGraph& g, int max_cycle_len);

// P, Q and three internally disjoint P->Q paths extracted from a violation.
struct ThreePathsResult {
    int p = -1, q = -1;
    std::array<std::vector<int>, 3> path_edges;
    std::array<Word, 3> path_words;  // P->Q maps in product order
};
ThreePathsResult three_paths(const OrbitGraph& g, const CoinViolation& v);

// Builds the certificate-engine input from an extracted structure; the
// graph's labels must be an isometry alphabet (O1..Om, F).
CyclePair to_cycle_pair(const ThreePathsResult& tp, int m);

// ---------------------------------------------------------------------------
// Block systems (odd-dimension construction)
// ---------------------------------------------------------------------------

// Generators of the form O-hat(y,z) = (O y, O' z) on R^{d'+3}, plus
// F-hat = T_b O-hat_0 with b = (b1, b2), |b1| = |b2| = t.
struct BlockSystem {
    int dprime = 0;
    std::vector<RatMat> gens_y;  // d' x d', per symbol
    std::vector<RatMat> gens_z;  // 3 x 3, per symbol
    RatMat f_y, f_z;             // rotation parts of F-hat
    RatVec b1, b2;

    int m() const { return static_cast<int>(gens_y.size()); }
    int f_sym() const { return m(); }
};
BlockSystem make_block_system(int dprime, int m, const Rat& t, std::uint64_t seed);

struct BlockFilterVerdict {
    bool contains_f = false;
    std::string branch;  // "3d-translation" or "dprime-rotation"
    bool pass = false;
    std::string detail;
};
// Tests the cycle-exclusion argument on one concrete word: with F present the
// 3-dimensional restriction must have no fixed point (exact affine solve);
// without F the d'-dimensional restriction must fix only the origin.
BlockFilterVerdict block_fixed_point_filter(const Word& w, const BlockSystem& sys);

}  // namespace balldiv

#endif
