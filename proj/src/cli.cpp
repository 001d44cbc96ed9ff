#include "qtrees/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <sstream>

#include "qtrees/bassserre.hpp"
#include "qtrees/coarse.hpp"
#include "qtrees/crossing.hpp"
#include "qtrees/error.hpp"
#include "qtrees/fixtures.hpp"
#include "qtrees/formats.hpp"
#include "qtrees/gog.hpp"
#include "qtrees/patterns.hpp"
#include "qtrees/quasiedges.hpp"
#include "qtrees/rafts.hpp"
#include "qtrees/report.hpp"
#include "qtrees/tracks.hpp"

namespace qtrees::cli {

namespace {

using quasiedges::VertexMap;

std::vector<VertexMap> parse_gens(const std::string& text, int tree_size) {
    std::vector<VertexMap> gens;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        if (toks.empty()) continue;
        if (!header) {
            if (toks.size() != 2 || toks[0] != "gens" || toks[1] != "v1")
                throw ParseError(lineno, "expected 'gens v1'");
            header = true;
            continue;
        }
        if (toks[0] == "gen" && toks.size() == 2) {
            gens.push_back(VertexMap{toks[1], std::vector<int>(tree_size, -1)});
        } else if (toks[0] == "m" && toks.size() == 3) {
            if (gens.empty()) throw ParseError(lineno, "m line before any gen line");
            int from = std::stoi(toks[1]), to = std::stoi(toks[2]);
            if (from < 0 || from >= tree_size || to < 0 || to >= tree_size)
                throw ParseError(lineno, "vertex id out of range");
            gens.back().img[from] = to;
        } else {
            throw ParseError(lineno, "unknown directive '" + toks[0] + "'");
        }
    }
    if (!header) throw ParseError(1, "missing gens header");
    for (const auto& g : gens)
        for (int v : g.img)
            if (v < 0) throw ParseError(1, "generator " + g.name + " is not total");
    return gens;
}

std::vector<int> parse_clopen(const std::string& spec) {
    std::vector<int> ids;
    std::string cell;
    for (char c : spec + ",") {
        if (c == ',') {
            if (!cell.empty()) ids.push_back(std::stoi(cell));
            cell.clear();
        } else
            cell += c;
    }
    return ids;
}

gog::GraphOfGroups load_gog(const std::string& path) {
    return gog::parse_gog(formats::load_file(path));
}

quasiedges::BoundedTree load_bounded_tree(const std::string& path) {
    return quasiedges::BoundedTree::from_ball(bassserre::parse_tree(formats::load_file(path)));
}

struct Ctx {
    std::string out;
    int exit_code = 0;

    void emit(const Report& rep) { out += rep.text(); }
    void line(const std::string& s) { out += s + "\n"; }
};

void cmd_classify(Ctx& ctx, const std::string& path) {
    auto g = load_gog(path);
    Report rep;
    rep.add("trichotomy", bassserre::to_string(bassserre::classify_trichotomy(g)));
    ctx.emit(rep);
}

void cmd_reduce(Ctx& ctx, const std::string& path, const std::string& outpath) {
    auto g = load_gog(path);
    gog::ReduceResult r = gog::reduce(g);
    Report rep;
    rep.add("steps", r.trace.size());
    for (size_t i = 0; i < r.trace.size(); ++i) rep.add("trace." + std::to_string(i), r.trace[i]);
    rep.add("non_collapsible", r.has_non_collapsible());
    rep.add("reduced", gog::is_reduced(r.graph).reduced);
    std::string text = gog::serialize_gog(r.graph);
    if (!outpath.empty()) {
        formats::save_file(outpath, text);
        rep.add("out", outpath);
        ctx.emit(rep);
    } else {
        ctx.emit(rep);
        ctx.line("graph:");
        ctx.out += text;
    }
}

void cmd_expand(Ctx& ctx, const std::string& path, const std::string& base, int radius,
                long long budget, const std::string& outpath) {
    auto g = load_gog(path);
    std::string root = base.empty() ? g.vertices.begin()->first : base;
    bassserre::ExpandOptions opts;
    if (budget > 0) opts.vertex_budget = budget;
    bassserre::TreeBall ball = bassserre::expand_ball(g, root, radius, opts);
    Report rep;
    rep.add("vertices", ball.vertices.size());
    rep.add("edges", ball.edges.size());
    rep.add("truncated", ball.truncated_count());
    std::string text = bassserre::serialize_tree(ball);
    if (!outpath.empty()) {
        formats::save_file(outpath, text);
        rep.add("out", outpath);
        ctx.emit(rep);
    } else {
        ctx.emit(rep);
        ctx.line("tree:");
        ctx.out += text;
    }
}

void cmd_homogeneous(Ctx& ctx, const std::string& path) {
    auto g = load_gog(path);
    Report rep;
    rep.add("geometrically_homogeneous", gog::is_geometrically_homogeneous(g));
    ctx.emit(rep);
}

void cmd_rafts(Ctx& ctx, const std::string& path) {
    auto g = load_gog(path);
    ctx.emit(rafts::find_rafts(g).report());
}

void cmd_check_star(Ctx& ctx, const std::string& path, bool integral) {
    auto g = load_gog(path);
    rafts::CheckResult r = rafts::check_star_condition(g, integral);
    ctx.emit(r.details);
    if (!r.pass) ctx.exit_code = 1;
}

void cmd_check_raft_hypotheses(Ctx& ctx, const std::string& path, const std::string& summaries) {
    auto g = load_gog(path);
    std::map<std::string, crossing::Summary> supplied;
    if (!summaries.empty()) {
        std::string cell;
        for (char c : summaries + ",") {
            if (c != ',') {
                cell += c;
                continue;
            }
            if (cell.empty()) continue;
            auto eq = cell.find('=');
            if (eq == std::string::npos) throw Error("BadFlag", "--summaries needs v=VERDICT entries");
            std::string v = cell.substr(0, eq), s = cell.substr(eq + 1);
            if (s == "EMPTY")
                supplied[v] = crossing::Summary::Empty;
            else if (s == "CONNECTED")
                supplied[v] = crossing::Summary::Connected;
            else if (s == "DISCONNECTED")
                supplied[v] = crossing::Summary::Disconnected;
            else
                throw Error("BadFlag", "unknown summary verdict " + s);
            cell.clear();
        }
    }
    rafts::CheckResult r = rafts::check_raft_hypotheses(g, supplied.empty() ? nullptr : &supplied);
    ctx.emit(r.details);
    if (!r.pass) ctx.exit_code = 1;
}

void cmd_crossing(Ctx& ctx, const std::string& path, const std::string& vertex, bool oracle,
                  long long box, int cosets, long long deep) {
    auto g = load_gog(path);
    ctx.emit(crossing::crossing_graph_summary(g, vertex).report());
    if (oracle) {
        crossing::OracleOptions opts;
        opts.box_radius = box;
        opts.cosets_per_end = cosets;
        opts.deep_threshold = deep;
        ctx.line("oracle:");
        ctx.emit(crossing::lattice_oracle_crossing_graph(g, vertex, opts).report());
    }
}

void cmd_patterns_equiv(Ctx& ctx, const std::string& p_path, const std::string& q_path,
                        unsigned long long seed, long long trials, long long grid_limit) {
    auto p = patterns::parse_pat(formats::load_file(p_path));
    auto q = patterns::parse_pat(formats::load_file(q_path));
    patterns::EquivOptions opts;
    opts.seed = seed;
    opts.random_trials = trials;
    opts.grid_limit = grid_limit;
    patterns::EquivResult r = patterns::decide_projective_equivalence(p, q, opts);
    Report rep;
    rep.add("equivalent", patterns::to_string(r.verdict));
    rep.add("mode", r.mode);
    rep.add("trials", r.trials);
    rep.add("seed", std::to_string(seed));
    if (r.verdict == patterns::EquivVerdict::Yes) {
        rep.add("F", r.witness.to_string());
        patterns::SubspacePattern image = patterns::apply_linear(r.witness, p);
        auto want = patterns::canonical_projective_pattern(q);
        auto got = patterns::canonical_projective_pattern(image);
        for (size_t k = 0; k < q.size(); ++k)
            rep.add("verify." + std::to_string(k),
                    got.canonical[k] == want.canonical[k] ? "exact" : "MISMATCH");
    }
    ctx.emit(rep);
}

void cmd_patterns_cross_ratio(Ctx& ctx, const std::string& p_path) {
    auto p = patterns::parse_pat(formats::load_file(p_path));
    Report rep;
    rep.add("cross_ratio", rat_str(patterns::cross_ratio(p)));
    ctx.emit(rep);
}

void cmd_patterns_apply(Ctx& ctx, const std::string& p_path, const std::string& rows,
                        const std::string& outpath) {
    auto p = patterns::parse_pat(formats::load_file(p_path));
    std::vector<std::vector<long long>> mat;
    std::string cell, rowbuf;
    for (char c : rows + ";") {
        if (c == ';') {
            std::vector<long long> r;
            for (char d : rowbuf + ",") {
                if (d == ',') {
                    if (!cell.empty()) r.push_back(std::stoll(cell));
                    cell.clear();
                } else
                    cell += d;
            }
            if (!r.empty()) mat.push_back(r);
            rowbuf.clear();
        } else
            rowbuf += c;
    }
    patterns::SubspacePattern img = patterns::apply_linear(QMatrix::from_rows(mat), p);
    std::string text = patterns::serialize_pat(img);
    Report rep;
    if (!outpath.empty()) {
        formats::save_file(outpath, text);
        rep.add("out", outpath);
        ctx.emit(rep);
    } else {
        ctx.emit(rep);
        ctx.out += text;
    }
}

void cmd_tracks_find(Ctx& ctx, const std::string& path, long long m, long long cap) {
    auto c = tracks::parse_cx2(formats::load_file(path));
    tracks::FamilyOptions opts;
    opts.essential_min = m;
    opts.weight_cap = cap;
    tracks::FamilyResult r = tracks::maximal_essential_family(c, opts);
    Report rep;
    rep.add("h1", tracks::h1_rank(c));
    ctx.emit(rep);
    ctx.emit(r.report(c));
}

void cmd_tracks_dual(Ctx& ctx, const std::string& cpath, const std::string& ppath) {
    auto c = tracks::parse_cx2(formats::load_file(cpath));
    auto p = tracks::parse_npat(formats::load_file(ppath), c);
    int h1 = tracks::h1_rank(c);
    tracks::DualGraph d = tracks::dual_graph(c, p);
    Report rep;
    rep.add("h1", h1);
    rep.add("nodes", d.nodes);
    rep.add("edges", d.edges.size());
    for (size_t i = 0; i < d.edges.size(); ++i)
        rep.add("edge." + std::to_string(i),
                std::to_string(d.edges[i].a) + "--" + std::to_string(d.edges[i].b) + " track=" +
                    std::to_string(d.edges[i].track));
    rep.add("flagged_tracks", d.flagged_tracks.size());
    rep.add("is_tree", d.is_tree());
    ctx.emit(rep);
    if (h1 == 0 && !d.is_tree()) ctx.exit_code = 1;
}

void cmd_tracks_h1(Ctx& ctx, const std::string& path) {
    auto c = tracks::parse_cx2(formats::load_file(path));
    Report rep;
    rep.add("h1", tracks::h1_rank(c));
    ctx.emit(rep);
}

void cmd_qe(Ctx& ctx, const std::string& sub, const std::string& tree_path,
            const std::string& clopen, const std::string& gens_path, const std::string& use_gen,
            int word_len, long long threshold, int fill) {
    quasiedges::BoundedTree t = load_bounded_tree(tree_path);
    std::vector<Rat> k_grid{Rat(1), Rat(3, 2), Rat(2), Rat(5, 2), Rat(3)};

    auto need_clopen = [&]() {
        if (clopen.empty()) throw Error("BadFlag", "--clopen is required");
        return quasiedges::QuasiEdge::of(t, parse_clopen(clopen));
    };
    auto load_gens = [&]() {
        if (gens_path.empty()) throw Error("BadFlag", "--gens is required");
        return parse_gens(formats::load_file(gens_path), t.tree.n);
    };

    if (sub == "constant") {
        quasiedges::QuasiEdge qe = need_clopen();
        quasiedges::CoreInfo info = quasiedges::qe_core(t, qe);
        Report rep;
        rep.add("constant", info.constant);
        rep.add("core_size", info.core.size());
        rep.add("core_point", info.canonical_point);
        ctx.emit(rep);
    } else if (sub == "true-edge") {
        quasiedges::QuasiEdge qe = need_clopen();
        auto e = quasiedges::true_edge_partition(t, qe);
        Report rep;
        if (e)
            rep.add("edge", std::to_string(t.tree.edges[*e].first) + "-" +
                                std::to_string(t.tree.edges[*e].second));
        else
            rep.add("edge", "none");
        ctx.emit(rep);
    } else if (sub == "push") {
        quasiedges::QuasiEdge qe = need_clopen();
        auto gens = load_gens();
        const VertexMap* g = &gens.front();
        if (!use_gen.empty()) {
            g = nullptr;
            for (const auto& cand : gens)
                if (cand.name == use_gen) g = &cand;
            if (!g) throw Error("BadFlag", "no generator named " + use_gen);
        }
        quasiedges::QuasiEdge img = quasiedges::pushforward(t, *g, qe);
        Report rep;
        std::string side;
        for (int b : img.o) side += (side.empty() ? "" : ",") + std::to_string(b);
        rep.add("side", side);
        rep.add("constant", quasiedges::qe_constant(t, img));
        ctx.emit(rep);
    } else if (sub == "orbit") {
        quasiedges::QuasiEdge qe = need_clopen();
        auto gens = load_gens();
        ctx.emit(quasiedges::orbit_nerve_graph(t, qe, gens, word_len, threshold, k_grid).report());
    } else if (sub == "retree") {
        quasiedges::QuasiEdge qe = need_clopen();
        auto gens = load_gens();
        quasiedges::NerveResult y1 =
            quasiedges::orbit_nerve_graph(t, qe, gens, word_len, threshold, k_grid);
        quasiedges::RetreeOptions opts;
        opts.cycle_fill_bound = fill;
        quasiedges::RetreeResult r = quasiedges::retree(t, y1, opts);
        ctx.emit(y1.report());
        ctx.line("retree:");
        ctx.emit(r.report());
    } else {
        throw Error("BadFlag", "unknown qe subcommand " + sub);
    }
}

void cmd_fixtures(Ctx& ctx, const std::string& write_dir) {
    for (const auto& f : fixtures::all()) ctx.line(f.name + "  " + f.provenance);
    if (!write_dir.empty()) {
        std::filesystem::create_directories(write_dir);
        for (const auto& f : fixtures::all())
            formats::save_file(write_dir + "/" + f.name, f.content);
        ctx.line("written=" + write_dir);
    }
}

} // namespace

RunResult run(const std::vector<std::string>& args) {
    CLI::App app{"desk-scale toolkit for graphs of groups, trees and patterns"};
    app.require_subcommand(1);

    std::string in_path, out_path, base, vertex, clopen, gens_path, use_gen, summaries, write_dir;
    std::string q_path, matrix_rows;
    int radius = 2, word_len = 3, fill = 12, cosets = 3;
    long long budget = 0, box = 30, deep = 5, threshold = 1;
    long long essential_min = 1, weight_cap = 8, trials = 200, grid_limit = 1000000;
    unsigned long long seed = 1;
    bool integral = false, oracle = false;
    std::string format = "text";

    app.add_option("--format", format)->check(CLI::IsMember({"text"}));

    auto* classify = app.add_subcommand("classify", "trichotomy of a graph of groups");
    classify->add_option("input", in_path)->required();

    auto* reduce = app.add_subcommand("reduce", "collapse surjective ends");
    reduce->add_option("input", in_path)->required();
    reduce->add_option("-o,--out", out_path);

    auto* expand = app.add_subcommand("expand", "expand a tree ball");
    expand->add_option("input", in_path)->required();
    expand->add_option("--base", base);
    expand->add_option("--radius", radius)->required();
    expand->add_option("--budget", budget);
    expand->add_option("-o,--out", out_path);

    auto* homogeneous = app.add_subcommand("homogeneous", "finite-index test for all ends");
    homogeneous->add_option("input", in_path)->required();

    auto* rafts_cmd = app.add_subcommand("rafts", "dimension rafts of a graph of groups");
    rafts_cmd->add_option("input", in_path)->required();

    auto* star = app.add_subcommand("check-star", "abelian span condition");
    star->add_option("input", in_path)->required();
    star->add_flag("--integral", integral);

    auto* hyp = app.add_subcommand("check-raft-hypotheses", "reducedness, line rafts, crossing graphs");
    hyp->add_option("input", in_path)->required();
    hyp->add_option("--summaries", summaries);

    auto* cross = app.add_subcommand("crossing", "crossing graph summary at a vertex");
    cross->add_option("input", in_path)->required();
    cross->add_option("--vertex", vertex)->required();
    cross->add_flag("--oracle", oracle);
    cross->add_option("--box", box);
    cross->add_option("--cosets", cosets);
    cross->add_option("--deep-threshold", deep);

    auto* pats = app.add_subcommand("patterns", "projective pattern operations");
    pats->require_subcommand(1);
    auto* equiv = pats->add_subcommand("equiv", "decide projective equivalence");
    equiv->add_option("P", in_path)->required();
    equiv->add_option("Q", q_path)->required();
    equiv->add_option("--seed", seed);
    equiv->add_option("--trials", trials);
    equiv->add_option("--grid-limit", grid_limit);
    auto* cr = pats->add_subcommand("cross-ratio", "determinant-formula cross-ratio");
    cr->add_option("P", in_path)->required();
    auto* apply = pats->add_subcommand("apply", "image pattern under a linear map");
    apply->add_option("P", in_path)->required();
    apply->add_option("--matrix", matrix_rows)->required();
    apply->add_option("-o,--out", out_path);

    auto* trk = app.add_subcommand("tracks", "normal tracks in a 2-complex");
    trk->require_subcommand(1);
    auto* tfind = trk->add_subcommand("find", "maximal essential family");
    tfind->add_option("complex", in_path)->required();
    tfind->add_option("--essential-min", essential_min);
    tfind->add_option("--weight-cap", weight_cap);
    auto* tdual = trk->add_subcommand("dual", "dual graph of a pattern");
    tdual->add_option("complex", in_path)->required();
    tdual->add_option("pattern", q_path)->required();
    auto* th1 = trk->add_subcommand("h1", "first homology rank");
    th1->add_option("complex", in_path)->required();

    auto* qe = app.add_subcommand("qe", "quasi-edge machinery on a bounded tree");
    qe->require_subcommand(1);
    std::string qe_sub;
    for (const char* name : {"constant", "true-edge", "push", "orbit", "retree"}) {
        auto* s = qe->add_subcommand(name);
        s->add_option("tree", in_path)->required();
        s->add_option("--clopen", clopen);
        s->add_option("--gens", gens_path);
        s->add_option("--use", use_gen);
        s->add_option("--wordlen", word_len);
        s->add_option("--threshold", threshold);
        s->add_option("--fill", fill);
        s->callback([&qe_sub, name] { qe_sub = name; });
    }

    auto* fx = app.add_subcommand("fixtures", "list the shipped corpus");
    fx->add_option("--write", write_dir);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    RunResult rr;
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        rr.out = app.help();
        rr.exit_code = 0;
        return rr;
    } catch (const CLI::ParseError& e) {
        rr.out = std::string("error: ") + e.what() + "\n";
        rr.exit_code = 2;
        return rr;
    }

    Ctx ctx;
    try {
        if (classify->parsed()) cmd_classify(ctx, in_path);
        else if (reduce->parsed()) cmd_reduce(ctx, in_path, out_path);
        else if (expand->parsed()) cmd_expand(ctx, in_path, base, radius, budget, out_path);
        else if (homogeneous->parsed()) cmd_homogeneous(ctx, in_path);
        else if (rafts_cmd->parsed()) cmd_rafts(ctx, in_path);
        else if (star->parsed()) cmd_check_star(ctx, in_path, integral);
        else if (hyp->parsed()) cmd_check_raft_hypotheses(ctx, in_path, summaries);
        else if (cross->parsed()) cmd_crossing(ctx, in_path, vertex, oracle, box, cosets, deep);
        else if (pats->parsed()) {
            if (equiv->parsed()) cmd_patterns_equiv(ctx, in_path, q_path, seed, trials, grid_limit);
            else if (cr->parsed()) cmd_patterns_cross_ratio(ctx, in_path);
            else if (apply->parsed()) cmd_patterns_apply(ctx, in_path, matrix_rows, out_path);
        } else if (trk->parsed()) {
            if (tfind->parsed()) cmd_tracks_find(ctx, in_path, essential_min, weight_cap);
            else if (tdual->parsed()) cmd_tracks_dual(ctx, in_path, q_path);
            else if (th1->parsed()) cmd_tracks_h1(ctx, in_path);
        } else if (qe->parsed()) {
            cmd_qe(ctx, qe_sub, in_path, clopen, gens_path, use_gen, word_len, threshold, fill);
        } else if (fx->parsed()) {
            cmd_fixtures(ctx, write_dir);
        }
    } catch (const ParseError& e) {
        rr.out = std::string("error: ") + e.what() + "\n";
        rr.exit_code = 2;
        return rr;
    } catch (const Error& e) {
        rr.out = std::string("error: ") + e.what() + "\n";
        rr.exit_code = 2;
        return rr;
    } catch (const std::exception& e) {
        rr.out = std::string("error: ") + e.what() + "\n";
        rr.exit_code = 2;
        return rr;
    }
    rr.out = ctx.out;
    rr.exit_code = ctx.exit_code;
    return rr;
}

} // namespace qtrees::cli
