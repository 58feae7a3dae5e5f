// Command-line front end: verification sweeps, cycle-pair certification,
// cover sampling, piece counts, and orbit-graph reports.
//
// Exit codes: 0 = all checks pass, 1 = usage/parse error,
//             2 = verified counterexample found.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "balldiv/geomcover.hpp"
#include "balldiv/lawcert.hpp"
#include "balldiv/orbitgraph.hpp"
#include "balldiv/rotparam.hpp"

using nlohmann::json;
using namespace balldiv;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCounterexample = 2;

int thread_count() {
    if (const char* env = std::getenv("BALLDIV_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

// Output written once, atomically, at the end of a run.
void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text << "\n";
        return;
    }
    const std::filesystem::path target(out_path);
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream os(tmp);
        if (!os) throw std::runtime_error("cannot write " + tmp.string());
        os << text << "\n";
    }
    std::filesystem::rename(tmp, target);
}

json deg_profile_json(const DegProfile& d) {
    return json{{"deg_p", d.deg_p.str()},     {"deg_q", d.deg_q.str()},
                {"deg_r", d.deg_r.str()},     {"deg_s", d.deg_s.str()},
                {"lc_p", d.lc_p.get_str()},   {"lc_q", d.lc_q.get_str()},
                {"lc_r", d.lc_r.get_str()},   {"lc_s", d.lc_s.get_str()},
                {"mat_deg", d.mat_deg.str()}};
}

json qmat_json(const QMat& m) {
    return json{{"p", m.p().str()}, {"q", m.q().str()}, {"r", m.r().str()}, {"s", m.s().str()}};
}

json law_report_json(const LawReport& rep) {
    json j{{"word", rep.word},
           {"case", rep.law_case == LawCase::a ? "a" : rep.law_case == LawCase::b ? "b" : "c"},
           {"sigma", rep.sigma},
           {"t", rep.t},
           {"subcase", rep.subcase},
           {"degrees_ok", rep.degrees_ok},
           {"lc_equal_ok", rep.lc_equal_ok},
           {"lc_observed", rep.lc_observed.get_str()},
           {"lc_derived", rep.lc_derived.get_str()},
           {"lc_derived_ok", rep.lc_derived_ok},
           {"pass", rep.pass},
           {"observed", deg_profile_json(rep.observed)}};
    if (rep.lc_printed) j["lc_printed"] = rep.lc_printed->get_str();
    j["lc_printed_ok"] = rep.lc_printed_ok;
    return j;
}

json certificate_json(const Certificate& cert) {
    return json{{"certified", cert.certified},
                {"status", cert.status},
                {"case", cert.case_tag},
                {"attempts", cert.attempts},
                {"w1", cert.w1},
                {"w2", cert.w2},
                {"o_images", cert.o_images},
                {"o0_image", cert.o0_image},
                {"d_exponent", cert.d_exponent},
                {"u1", qmat_json(cert.u1)},
                {"u2", qmat_json(cert.u2)},
                {"v1", qmat_json(cert.v1)},
                {"v2", qmat_json(cert.v2)},
                {"m1", qmat_json(cert.m1)},
                {"m2", qmat_json(cert.m2)},
                {"lhs", qmat_json(cert.lhs)},
                {"rhs", qmat_json(cert.rhs)},
                {"m1_profile", deg_profile_json(cert.m1_profile)},
                {"m2_profile", deg_profile_json(cert.m2_profile)}};
}

std::vector<CyclePair> parse_cycle_pairs(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    json j = json::parse(is);
    const int m = j.at("m").get<int>();
    if (m < 1) throw std::runtime_error("cycle-pair file: m must be >= 1");
    const Alphabet alpha = Alphabet::isometry(m);
    std::vector<CyclePair> pairs;
    for (const auto& p : j.at("pairs")) {
        CyclePair cp;
        cp.m = m;
        cp.common = parse_word(p.at("common").get<std::string>(), alpha);
        cp.branch1 = parse_word(p.at("branch1").get<std::string>(), alpha);
        cp.branch2 = parse_word(p.at("branch2").get<std::string>(), alpha);
        pairs.push_back(std::move(cp));
    }
    return pairs;
}

// Uniform point in the d-ball.
std::vector<double> ball_sample(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> x(static_cast<size_t>(d));
    double n2 = 0;
    do {
        n2 = 0;
        for (auto& v : x) {
            v = gauss(rng);
            n2 += v * v;
        }
    } while (n2 == 0);
    const double r = std::pow(unit(rng), 1.0 / d) / std::sqrt(n2);
    for (auto& v : x) v *= r;
    return x;
}

struct CoverRunResult {
    int d = 0;
    long samples = 0;
    long failures = 0;
    double min_margin = 1e300;
    std::vector<json> failure_rows;
    std::string csv;  // per-sample rows when requested
};

CoverRunResult run_cover_dim(int d, long samples, double t_scale, std::uint64_t seed,
                             bool want_csv) {
    const CoverAtlas atlas = make_atlas(d, t_scale);
    const int threads = std::min<long>(thread_count(), std::max<long>(1, samples / 1024));
    std::vector<CoverRunResult> partial(static_cast<size_t>(threads));
    auto work = [&](int chunk) {
        CoverRunResult& res = partial[static_cast<size_t>(chunk)];
        res.d = d;
        // Seed space partitioned per chunk: deterministic merge.
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(chunk));
        const long lo = samples * chunk / threads, hi = samples * (chunk + 1) / threads;
        std::string csv;
        for (long i = lo; i < hi; ++i) {
            const std::vector<double> x = ball_sample(rng, d);
            long idx = -1;
            double margin = -1;
            bool ok = false;
            try {
                idx = core_cover_index(x, atlas);
                const std::vector<double> y =
                    atlas.phis[static_cast<size_t>(idx - 1)].apply_transpose(x);
                ok = translate_safe(y, atlas.t);
                // Slack of whichever sufficient condition holds.
                margin = std::max(1.0 - 2.0 * atlas.t - norm(y), -1.5 * atlas.t - y.back());
            } catch (const NoIndex&) {
                ok = false;
            }
            res.min_margin = std::min(res.min_margin, margin);
            ++res.samples;
            if (!ok) {
                ++res.failures;
                if (res.failure_rows.size() < 32) {
                    res.failure_rows.push_back(json{{"point", x}, {"index", idx}});
                }
            }
            if (want_csv) {
                for (size_t c = 0; c < x.size(); ++c)
                    csv += (c ? ";" : "") + std::to_string(x[c]);
                csv += "," + std::to_string(idx) + "," + std::to_string(margin) + "\n";
            }
        }
        res.csv = std::move(csv);
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int c = 0; c < threads; ++c) pool.emplace_back(work, c);
        for (auto& th : pool) th.join();
    }
    CoverRunResult total;
    total.d = d;
    for (const auto& p : partial) {
        total.samples += p.samples;
        total.failures += p.failures;
        total.min_margin = std::min(total.min_margin, p.min_margin);
        for (const auto& row : p.failure_rows)
            if (total.failure_rows.size() < 32) total.failure_rows.push_back(row);
        total.csv += p.csv;
    }
    return total;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ball decomposition verification toolkit"};
    app.set_config("--config", "", "key-value config file mirroring the flags");
    app.require_subcommand(1);

    int depth = 8;
    std::vector<int> dims;
    std::uint64_t seed = 0;
    double t_scale = 0.9;
    long samples = 100000;
    int budget = 48;
    std::string out_path;
    std::string format = "json";
    app.add_option("--depth", depth, "sweep depth / expansion steps");
    app.add_option("--dims", dims, "dimension list");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--t-scale", t_scale, "translation length as a fraction of the bound");
    app.add_option("--samples", samples, "Monte-Carlo sample count");
    app.add_option("--budget", budget, "substitution attempts / vertex cap (x1000) budget");
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_option("--format", format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));

    auto* cmd_free = app.add_subcommand("verify-free-group",
                                        "sweep reduced words: no identity, no fixed point");
    auto* cmd_laws = app.add_subcommand("verify-degree-laws",
                                        "degree / leading-coefficient laws and trace criterion");
    std::string shape_filter;
    cmd_laws->add_option("--shape", shape_filter, "restrict to one shape: case-a | case-b | case-c")
        ->check(CLI::IsMember({"case-a", "case-b", "case-c"}));
    auto* cmd_certify = app.add_subcommand("certify", "certify cycle pairs from a JSON file");
    std::string pair_file;
    cmd_certify->add_option("file", pair_file, "cycle-pair JSON file")->required();
    auto* cmd_cover = app.add_subcommand("cover", "core cover sampling over the unit ball");
    auto* cmd_pieces = app.add_subcommand("piece-count", "piece-count table per dimension");
    auto* cmd_orbit = app.add_subcommand("orbit", "expand an orbit graph and check properties");
    std::string graph_in;
    cmd_orbit->add_option("--in", graph_in, "planted graph JSON instead of a sampled system");
    int orbit_m = 3;
    cmd_orbit->add_option("--generators", orbit_m, "number of rotation generators");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(cmd_free)) {
            if (depth < 1) {
                std::cerr << "error: --depth must be >= 1\n";
                return kExitUsage;
            }
            const FreeGroupSweep sweep = free_group_sweep(depth);
            json j{{"schema", 1},
                   {"command", "verify-free-group"},
                   {"depth", sweep.max_len},
                   {"words_checked", sweep.words_checked},
                   {"violations", sweep.violations}};
            emit(j.dump(2), out_path);
            return sweep.ok() ? kExitPass : kExitCounterexample;
        }

        if (app.got_subcommand(cmd_laws)) {
            if (depth < 1) {
                std::cerr << "error: --depth must be >= 1\n";
                return kExitUsage;
            }
            std::optional<LawCase> filter;
            if (shape_filter == "case-a") filter = LawCase::a;
            if (shape_filter == "case-b") filter = LawCase::b;
            if (shape_filter == "case-c") filter = LawCase::c;
            const DegreeLawSweep sweep = degree_law_sweep(depth, filter);
            json fails = json::array();
            for (const auto& rep : sweep.failures) fails.push_back(law_report_json(rep));
            json j{{"schema", 1},
                   {"command", "verify-degree-laws"},
                   {"depth", sweep.max_len},
                   {"words_checked", sweep.words_checked},
                   {"case_a", sweep.case_a},
                   {"case_b", sweep.case_b},
                   {"case_c", sweep.case_c},
                   {"skipped_shape", sweep.skipped_shape},
                   {"printed_lc_checked", sweep.printed_lc_checked},
                   {"printed_lc_matches", sweep.printed_lc_matches},
                   {"excluded_small_shapes", sweep.excluded_small_shapes},
                   {"failures", fails},
                   {"trace_failures", sweep.trace_failures}};
            emit(j.dump(2), out_path);
            return sweep.ok() ? kExitPass : kExitCounterexample;
        }

        if (app.got_subcommand(cmd_certify)) {
            std::vector<CyclePair> pairs;
            try {
                pairs = parse_cycle_pairs(pair_file);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitUsage;
            }
            EngineConfig cfg;
            cfg.exponent_budget = budget;
            json arr = json::array();
            bool all_certified = true;
            bool any_rejected = false;
            for (const CyclePair& p : pairs) {
                try {
                    const Certificate cert = certify_cycle_pair(p, cfg);
                    all_certified = all_certified && cert.certified;
                    arr.push_back(certificate_json(cert));
                } catch (const std::invalid_argument& e) {
                    any_rejected = true;
                    arr.push_back(json{{"certified", false}, {"status", std::string("rejected: ") + e.what()}});
                }
            }
            json j{{"schema", 1}, {"command", "certify"}, {"certificates", arr}};
            emit(j.dump(2), out_path);
            if (any_rejected) return kExitUsage;
            return all_certified ? kExitPass : kExitCounterexample;
        }

        if (app.got_subcommand(cmd_cover)) {
            if (dims.empty()) dims = {4, 8, 10};
            for (int d : dims)
                if (d < 2) {
                    std::cerr << "error: dimensions must be >= 2\n";
                    return kExitUsage;
                }
            if (samples < 1 || t_scale <= 0) {
                std::cerr << "error: --samples must be >= 1 and --t-scale positive\n";
                return kExitUsage;
            }
            bool all_ok = true;
            if (format == "csv") {
                std::string csv = "point,index,margin\n";
                for (int d : dims) {
                    const CoverRunResult res = run_cover_dim(d, samples, t_scale, seed, true);
                    csv += res.csv;
                    all_ok = all_ok && res.failures == 0;
                }
                emit(csv, out_path);
            } else {
                json arr = json::array();
                for (int d : dims) {
                    const CoverRunResult res = run_cover_dim(d, samples, t_scale, seed, false);
                    arr.push_back(json{{"d", d},
                                       {"t", t_scale * max_translation(d)},
                                       {"samples", res.samples},
                                       {"failures", res.failures},
                                       {"failure_examples", res.failure_rows}});
                    all_ok = all_ok && res.failures == 0;
                }
                json j{{"schema", 1}, {"command", "cover"}, {"runs", arr}};
                emit(j.dump(2), out_path);
            }
            return all_ok ? kExitPass : kExitCounterexample;
        }

        if (app.got_subcommand(cmd_pieces)) {
            if (dims.empty())
                for (int d = 2; d <= 20; ++d) dims.push_back(d);
            if (format == "csv") {
                std::string csv = "d,count,lower_bound,status,note\n";
                for (int d : dims) {
                    const PieceCount pc = piece_count(d);
                    csv += std::to_string(pc.d) + "," +
                           (pc.count ? std::to_string(*pc.count) : std::string("")) + "," +
                           std::to_string(pc.lower_bound) + "," + pc.status + ",\"" + pc.note +
                           "\"\n";
                }
                emit(csv, out_path);
            } else {
                json arr = json::array();
                for (int d : dims) {
                    const PieceCount pc = piece_count(d);
                    json row{{"d", pc.d},
                             {"lower_bound", pc.lower_bound},
                             {"status", pc.status},
                             {"note", pc.note}};
                    if (pc.count) row["count"] = *pc.count;
                    arr.push_back(std::move(row));
                }
                json j{{"schema", 1}, {"command", "piece-count"}, {"table", arr}};
                emit(j.dump(2), out_path);
            }
            return kExitPass;
        }

        if (app.got_subcommand(cmd_orbit)) {
            if (!graph_in.empty()) {
                std::ifstream is(graph_in);
                if (!is) {
                    std::cerr << "error: cannot open " << graph_in << "\n";
                    return kExitUsage;
                }
                OrbitGraph g;
                try {
                    std::string text((std::istreambuf_iterator<char>(is)),
                                     std::istreambuf_iterator<char>());
                    g = OrbitGraph::from_json(text);
                } catch (const std::exception& e) {
                    std::cerr << "error: " << e.what() << "\n";
                    return kExitUsage;
                }
                const CoinVerdict verdict = coin_check(g, std::max(depth, 3));
                json j{{"schema", 1},
                       {"command", "orbit"},
                       {"mode", "planted"},
                       {"vertices", g.vertex_count()},
                       {"edges", g.edge_count()},
                       {"cycles_examined", verdict.cycles_examined},
                       {"coin_pass", verdict.pass}};
                if (!verdict.pass) {
                    const auto& viol = *verdict.violation;
                    j["violation"] = {{"shared_edge", viol.shared_edge},
                                      {"cycle1_vertices", viol.c1.verts},
                                      {"cycle2_vertices", viol.c2.verts}};
                    try {
                        const ThreePathsResult tp = three_paths(g, viol);
                        j["three_paths"] = {{"p", tp.p},
                                            {"q", tp.q},
                                            {"path_edges",
                                             {tp.path_edges[0], tp.path_edges[1], tp.path_edges[2]}}};
                    } catch (const ExtractionFailure& e) {
                        j["three_paths_error"] = e.what();
                    }
                }
                emit(j.dump(2), out_path);
                return verdict.pass ? kExitPass : kExitCounterexample;
            }

            const int d = dims.empty() ? 4 : dims.front();
            if (d < 2 || d % 2 != 0) {
                std::cerr << "error: orbit sampling needs an even dimension >= 2\n";
                return kExitUsage;
            }
            const IsoSystem sys = make_iso_system(orbit_m, d, seed);
            OrbitGraph g;
            g.dim = d;
            const Alphabet alpha = sys.alphabet();
            for (int i = 0; i < alpha.size(); ++i) g.labels.push_back(alpha.name(i));
            std::mt19937_64 rng(seed ^ 0xceedULL);
            RatVec x0(static_cast<size_t>(d));
            std::uniform_int_distribution<long> coord(-20, 20);
            for (auto& c : x0) c = make_rat(coord(rng), 7);
            g.add_vertex(x0);
            ExpandOptions opt;
            opt.steps = depth;
            opt.max_vertices = static_cast<size_t>(budget) * 1000;
            opt.throw_on_budget = false;
            const ExpandResult res = expand(g, sys, opt);
            const std::vector<Cycle> cycles = find_cycles(g, 6, &sys);
            const CoinVerdict verdict = coin_check(g, 6);
            json j{{"schema", 1},
                   {"command", "orbit"},
                   {"mode", "sampled"},
                   {"dim", d},
                   {"seed", seed},
                   {"generators", orbit_m},
                   {"vertices", g.vertex_count()},
                   {"edges", g.edge_count()},
                   {"truncated", res.truncated},
                   {"cycles", cycles.size()},
                   {"coin_pass", verdict.pass}};
            emit(j.dump(2), out_path);
            return verdict.pass ? kExitPass : kExitCounterexample;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
