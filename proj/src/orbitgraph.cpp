#include "balldiv/orbitgraph.hpp"

#include <algorithm>

#include "json.hpp"

namespace balldiv {

AffineMap IsoSystem::generator(int sym, int sign) const {
    if (sym == f_sym()) {
        AffineMap f{o0, t};
        return sign == 1 ? f : f.inverse();
    }
    if (sym < 0 || sym >= m()) throw std::invalid_argument("IsoSystem: bad symbol");
    const RatMat& r = rotations[static_cast<size_t>(sym)];
    return AffineMap::linear_map(sign == 1 ? r : r.transpose());
}

AffineMap IsoSystem::map_of_word(const Word& w) const {
    AffineMap acc = AffineMap::linear_map(RatMat::identity(dim));
    // Product order: the rightmost letter acts first.
    for (const Letter& l : w.letters()) acc = acc.compose(generator(l.sym, l.sign));
    return acc;
}

IsoSystem make_iso_system(int m, int dim, std::uint64_t seed, const SampleConfig& cfg) {
    IndependentSystem base = sample_independent(m + 1, dim, seed, cfg);
    IsoSystem sys;
    sys.dim = dim;
    sys.o0 = base.rotations.back().matrix();
    sys.t = base.translation;
    for (int i = 0; i < m; ++i) sys.rotations.push_back(base.rotations[static_cast<size_t>(i)].matrix());
    return sys;
}

std::vector<RatVec> image_multiset(const RatVec& x, const IsoSystem& sys) {
    std::vector<RatVec> images;
    images.reserve(static_cast<size_t>(sys.m()) + 1);
    for (int i = 0; i < sys.m(); ++i)
        images.push_back(sys.rotations[static_cast<size_t>(i)].apply(x));
    images.push_back(sys.o0.apply(x) + sys.t);
    return images;
}

bool is_core_point(const RatVec& x, const IsoSystem& sys) {
    std::vector<RatVec> pts = image_multiset(x, sys);
    pts.push_back(x);
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            if (pts[i] == pts[j]) return false;
    return true;
}

std::string point_key(const RatVec& p) {
    std::string key;
    for (const Rat& c : p) {
        key += c.get_str();
        key += ',';
    }
    return key;
}

int OrbitGraph::add_vertex(const RatVec& p) {
    const std::string key = point_key(p);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    const int id = static_cast<int>(verts_.size());
    verts_.push_back(p);
    incidence_.emplace_back();
    index_.emplace(key, id);
    return id;
}

std::optional<int> OrbitGraph::find_vertex(const RatVec& p) const {
    auto it = index_.find(point_key(p));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool OrbitGraph::add_edge(int tail, int head, int sym) {
    if (tail == head) return false;  // edges connect distinct points
    if (!edge_keys_.insert({tail, head, sym}).second) return false;
    const int id = static_cast<int>(edges_.size());
    edges_.push_back(Edge{tail, head, sym});
    incidence_[static_cast<size_t>(tail)].push_back(id);
    incidence_[static_cast<size_t>(head)].push_back(id);
    return true;
}

std::string OrbitGraph::to_json() const {
    nlohmann::json j;
    j["schema"] = 1;
    j["dim"] = dim;
    j["labels"] = labels;
    auto& vs = j["vertices"] = nlohmann::json::array();
    for (const RatVec& v : verts_) {
        nlohmann::json row = nlohmann::json::array();
        for (const Rat& c : v) row.push_back(c.get_str());
        vs.push_back(std::move(row));
    }
    auto& es = j["edges"] = nlohmann::json::array();
    for (const Edge& e : edges_) {
        const std::string label =
            e.sym < static_cast<int>(labels.size()) ? labels[static_cast<size_t>(e.sym)]
                                                    : std::to_string(e.sym);
        es.push_back(nlohmann::json::array({e.tail, e.head, label}));
    }
    return j.dump(2);
}

OrbitGraph OrbitGraph::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    OrbitGraph g;
    g.dim = j.value("dim", 0);
    if (j.contains("labels")) g.labels = j["labels"].get<std::vector<std::string>>();
    for (const auto& row : j.at("vertices")) {
        RatVec v;
        for (const auto& c : row) v.emplace_back(Rat(c.get<std::string>()));
        for (auto& c : v) c.canonicalize();
        g.add_vertex(v);
    }
    auto label_id = [&](const std::string& name) {
        for (size_t i = 0; i < g.labels.size(); ++i)
            if (g.labels[i] == name) return static_cast<int>(i);
        g.labels.push_back(name);
        return static_cast<int>(g.labels.size()) - 1;
    };
    for (const auto& e : j.at("edges")) {
        const int tail = e.at(0).get<int>();
        const int head = e.at(1).get<int>();
        const int sym = e.at(2).is_string() ? label_id(e.at(2).get<std::string>())
                                            : e.at(2).get<int>();
        if (tail < 0 || tail >= g.vertex_count() || head < 0 || head >= g.vertex_count())
            throw std::invalid_argument("OrbitGraph::from_json: edge endpoint out of range");
        g.add_edge(tail, head, sym);
    }
    return g;
}

ExpandResult expand(OrbitGraph& g, const IsoSystem& sys, const ExpandOptions& opt) {
    ExpandResult res;
    std::vector<int> frontier;
    for (int v = 0; v < g.vertex_count(); ++v) frontier.push_back(v);
    for (int step = 0; step < opt.steps; ++step) {
        std::vector<int> next;
        for (int v : frontier) {
            const RatVec x = g.vertex(v);
            for (int sym = 0; sym <= sys.m(); ++sym) {
                for (int sign : {1, -1}) {
                    const RatVec y = sys.generator(sym, sign).apply(x);
                    if (y == x) continue;  // fixed point: no loop edge
                    auto existing = g.find_vertex(y);
                    if (!existing && g.vertex_count() >= static_cast<int>(opt.max_vertices)) {
                        if (opt.throw_on_budget)
                            throw VertexBudget("expand: vertex budget exceeded");
                        res.truncated = true;
                        continue;
                    }
                    const bool fresh = !existing.has_value();
                    const int w = existing ? *existing : g.add_vertex(y);
                    if (fresh) {
                        next.push_back(w);
                        ++res.new_vertices;
                    }
                    // Store the edge in its forward direction.
                    if (sign == 1)
                        g.add_edge(v, w, sym);
                    else
                        g.add_edge(w, v, sym);
                }
            }
        }
        frontier = std::move(next);
        if (frontier.empty()) break;
    }
    return res;
}

Word Cycle::word() const {
    std::vector<Letter> raw(steps.rbegin(), steps.rend());
    return reduce(raw);
}

namespace {

struct CycleSearch {
    const OrbitGraph& g;
    int max_len;
    std::vector<Cycle>& out;
    std::vector<int> vert_path;
    std::vector<int> edge_path;
    std::vector<Letter> step_path;
    std::vector<bool> on_path;
    std::vector<bool> edge_used;

    void dfs(int start, int current) {
        for (int eid : g.incident_edges(current)) {
            if (edge_used[static_cast<size_t>(eid)]) continue;
            const auto& e = g.edge(eid);
            const int other = e.tail == current ? e.head : e.tail;
            const Letter step{e.sym, e.tail == current ? 1 : -1};
            if (other == start) {
                if (edge_path.empty()) continue;  // single edge is not a cycle
                // Each undirected cycle appears once: smallest vertex first,
                // orientation fixed by first edge id < closing edge id.
                if (edge_path.front() < eid) {
                    Cycle c;
                    c.verts = vert_path;
                    c.edges = edge_path;
                    c.edges.push_back(eid);
                    c.steps = step_path;
                    c.steps.push_back(step);
                    out.push_back(std::move(c));
                }
                continue;
            }
            if (other < start) continue;  // start must be the minimal vertex
            if (on_path[static_cast<size_t>(other)]) continue;
            if (static_cast<int>(edge_path.size()) + 1 >= max_len) continue;
            vert_path.push_back(other);
            edge_path.push_back(eid);
            step_path.push_back(step);
            on_path[static_cast<size_t>(other)] = true;
            edge_used[static_cast<size_t>(eid)] = true;
            dfs(start, other);
            edge_used[static_cast<size_t>(eid)] = false;
            on_path[static_cast<size_t>(other)] = false;
            step_path.pop_back();
            edge_path.pop_back();
            vert_path.pop_back();
        }
    }
};

}  // namespace

std::vector<Cycle> find_cycles(const OrbitGraph& g, int max_len, const IsoSystem* verify) {
    std::vector<Cycle> out;
    if (max_len < 2) return out;
    CycleSearch search{g, max_len, out, {}, {}, {}, std::vector<bool>(static_cast<size_t>(g.vertex_count())),
                       std::vector<bool>(static_cast<size_t>(g.edge_count()))};
    for (int s = 0; s < g.vertex_count(); ++s) {
        search.vert_path = {s};
        search.on_path[static_cast<size_t>(s)] = true;
        search.dfs(s, s);
        search.on_path[static_cast<size_t>(s)] = false;
    }
    if (verify) {
        for (const Cycle& c : out) {
            const RatVec base = g.vertex(c.verts.front());
            if (verify->map_of_word(c.word()).apply(base) != base)
                throw std::logic_error("find_cycles: cycle word does not fix its base vertex");
        }
    }
    return out;
}

CoinVerdict coin_check(const OrbitGraph& g, int max_cycle_len) {
    CoinVerdict verdict;
    const std::vector<Cycle> cycles = find_cycles(g, max_cycle_len);
    verdict.cycles_examined = cycles.size();
    std::vector<std::set<int>> edge_sets, vert_sets;
    edge_sets.reserve(cycles.size());
    vert_sets.reserve(cycles.size());
    for (const Cycle& c : cycles) {
        edge_sets.push_back(c.edge_set());
        vert_sets.push_back(c.vertex_set());
    }
    for (size_t i = 0; i < cycles.size(); ++i) {
        for (size_t j = i + 1; j < cycles.size(); ++j) {
            if (vert_sets[i] == vert_sets[j]) continue;
            std::vector<int> shared;
            std::set_intersection(edge_sets[i].begin(), edge_sets[i].end(), edge_sets[j].begin(),
                                  edge_sets[j].end(), std::back_inserter(shared));
            if (!shared.empty()) {
                verdict.pass = false;
                verdict.violation = CoinViolation{cycles[i], cycles[j], shared.front()};
                return verdict;
            }
        }
    }
    return verdict;
}

namespace {

// Rotate the cycle so the traversal starts by walking edge `eid`, forward in
// the cycle's own orientation or reversed.
Cycle rotate_to_edge(const Cycle& c, int eid, bool reversed) {
    Cycle r;
    const size_t n = c.edges.size();
    size_t pos = 0;
    Cycle base = c;
    if (reversed) {
        // Reverse traversal: vertices backward, steps inverted.
        Cycle rev;
        rev.verts.push_back(c.verts.front());
        for (size_t i = n; i-- > 1;) rev.verts.push_back(c.verts[i]);
        for (size_t i = n; i-- > 0;) {
            rev.edges.push_back(c.edges[i]);
            rev.steps.push_back(c.steps[i].inverse());
        }
        base = std::move(rev);
    }
    for (size_t i = 0; i < n; ++i)
        if (base.edges[i] == eid) {
            pos = i;
            break;
        }
    for (size_t i = 0; i < n; ++i) {
        const size_t k = (pos + i) % n;
        r.verts.push_back(base.verts[k]);
        r.edges.push_back(base.edges[k]);
        r.steps.push_back(base.steps[k]);
    }
    return r;
}

Word path_word(const std::vector<Letter>& steps) {
    std::vector<Letter> raw(steps.rbegin(), steps.rend());
    return reduce(raw);
}

}  // namespace

ThreePathsResult three_paths(const OrbitGraph& g, const CoinViolation& v) {
    (void)g;
    const Cycle& c1 = v.c1;
    if (std::find(c1.edges.begin(), c1.edges.end(), v.shared_edge) == c1.edges.end() ||
        std::find(v.c2.edges.begin(), v.c2.edges.end(), v.shared_edge) == v.c2.edges.end())
        throw ExtractionFailure("three_paths: cycles do not share the claimed edge");

    // Align both cycles to start by traversing the shared edge the same way.
    const Cycle a = rotate_to_edge(c1, v.shared_edge, false);
    Cycle b = rotate_to_edge(v.c2, v.shared_edge, false);
    if (b.verts.front() != a.verts.front()) b = rotate_to_edge(v.c2, v.shared_edge, true);
    if (b.verts.front() != a.verts.front())
        throw ExtractionFailure("three_paths: shared edge endpoints do not match");

    const size_t na = a.edges.size(), nb = b.edges.size();
    // Maximal common edge run forward from the shared edge.
    size_t k = 0;
    while (k < na && k < nb && a.edges[k] == b.edges[k]) ++k;
    if (k == na && k == nb) throw ExtractionFailure("three_paths: cycles are identical");
    // P: the vertex where the cycles diverge.
    const int p = a.verts[k % na];

    // Walk b from the divergence point to the first vertex on a.
    std::set<int> a_verts(a.verts.begin(), a.verts.end());
    size_t bq = 0;
    int q = -1;
    for (size_t i = k + 1; i <= nb; ++i) {
        const int cand = b.verts[i % nb];
        if (a_verts.count(cand)) {
            bq = i;
            q = cand;
            break;
        }
    }
    if (q < 0 || q == p) throw ExtractionFailure("three_paths: no second junction found");

    ThreePathsResult res;
    res.p = p;
    res.q = q;

    // Path 0: b's divergent segment P -> Q.
    std::vector<Letter> steps0;
    std::set<int> interior0;
    for (size_t i = k; i < bq; ++i) {
        res.path_edges[0].push_back(b.edges[i % nb]);
        steps0.push_back(b.steps[i % nb]);
        if (i > k) interior0.insert(b.verts[i % nb]);
    }
    // Paths 1 and 2: the two arcs of cycle a between P and Q.
    size_t aq = 0;
    for (size_t i = 0; i < na; ++i)
        if (a.verts[i] == q) {
            aq = i;
            break;
        }
    std::vector<Letter> steps1;
    std::set<int> interior1;
    for (size_t i = k; i != aq; i = (i + 1) % na) {
        res.path_edges[1].push_back(a.edges[i]);
        steps1.push_back(a.steps[i]);
        if (i != k) interior1.insert(a.verts[i]);
    }
    std::vector<Letter> steps2;  // backward arc, traversed P -> Q against orientation
    std::set<int> interior2;
    for (size_t i = k; i != aq; i = (i + na - 1) % na) {
        const size_t eidx = (i + na - 1) % na;
        res.path_edges[2].push_back(a.edges[eidx]);
        steps2.push_back(a.steps[eidx].inverse());
        if (i != k) interior2.insert(a.verts[i]);
    }
    res.path_words[0] = path_word(steps0);
    res.path_words[1] = path_word(steps1);
    res.path_words[2] = path_word(steps2);

    // Pairwise internal disjointness; P and Q never appear as interiors.
    auto disjoint = [&](const std::set<int>& x, const std::set<int>& y) {
        for (int vtx : x)
            if (y.count(vtx)) return false;
        return true;
    };
    for (const auto* in : {&interior0, &interior1, &interior2})
        if (in->count(p) || in->count(q))
            throw ExtractionFailure("three_paths: endpoint appears inside a path");
    if (!disjoint(interior0, interior1) || !disjoint(interior0, interior2) ||
        !disjoint(interior1, interior2))
        throw ExtractionFailure("three_paths: paths are not internally disjoint");
    for (int i = 0; i < 3; ++i) {
        if (res.path_edges[static_cast<size_t>(i)].empty())
            throw ExtractionFailure("three_paths: degenerate empty path");
    }
    return res;
}

CyclePair to_cycle_pair(const ThreePathsResult& tp, int m) {
    CyclePair pair;
    pair.m = m;
    pair.common = tp.path_words[0];
    pair.branch1 = tp.path_words[1];
    pair.branch2 = tp.path_words[2];
    return pair;
}

BlockSystem make_block_system(int dprime, int m, const Rat& t, std::uint64_t seed) {
    if (dprime < 4 || dprime % 2 != 0)
        throw std::invalid_argument("make_block_system: d' must be even and >= 4");
    BlockSystem sys;
    sys.dprime = dprime;
    IndependentSystem ysys = sample_independent(m + 1, dprime, seed, {});
    IndependentSystem zsys = sample_independent(m + 1, 3, seed ^ 0x5eedf00dULL, {});
    for (int i = 0; i < m; ++i) {
        sys.gens_y.push_back(ysys.rotations[static_cast<size_t>(i)].matrix());
        sys.gens_z.push_back(zsys.rotations[static_cast<size_t>(i)].matrix());
    }
    sys.f_y = ysys.rotations.back().matrix();
    sys.f_z = zsys.rotations.back().matrix();
    sys.b1.assign(static_cast<size_t>(dprime), Rat(0));
    sys.b1.back() = t;
    sys.b2.assign(3, Rat(0));
    sys.b2.back() = t;
    return sys;
}

BlockFilterVerdict block_fixed_point_filter(const Word& w, const BlockSystem& sys) {
    if (w.empty())
        throw std::invalid_argument("block_fixed_point_filter: word must be nonempty");
    BlockFilterVerdict verdict;
    for (const Letter& l : w.letters())
        if (l.sym == sys.f_sym()) verdict.contains_f = true;

    auto word_map = [&](const std::vector<RatMat>& gens, const RatMat& f_rot, const RatVec& b,
                        int dim) {
        AffineMap acc = AffineMap::linear_map(RatMat::identity(dim));
        for (const Letter& l : w.letters()) {
            AffineMap g = l.sym == sys.f_sym()
                              ? AffineMap{f_rot, b}
                              : AffineMap::linear_map(gens[static_cast<size_t>(l.sym)]);
            if (l.sign == -1) g = g.inverse();
            acc = acc.compose(g);
        }
        return acc;
    };

    if (verdict.contains_f) {
        verdict.branch = "3d-translation";
        const AffineMap wz = word_map(sys.gens_z, sys.f_z, sys.b2, 3);
        const RatMat id = RatMat::identity(3);
        auto fixed = (id - wz.linear).solve(wz.offset);
        verdict.pass = !fixed.has_value();
        verdict.detail = fixed ? "restriction has an exact fixed point"
                               : "no solution of (I - U')x = v': fixed-point-free";
    } else {
        verdict.branch = "dprime-rotation";
        const AffineMap wy = word_map(sys.gens_y, sys.f_y, sys.b1, sys.dprime);
        const Rat det = (RatMat::identity(sys.dprime) - wy.linear).determinant();
        verdict.pass = det != 0;
        verdict.detail = "det(I - W'') = " + det.get_str();
    }
    return verdict;
}

}  // namespace balldiv
