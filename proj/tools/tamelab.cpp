// Command-line surface: binds sources, analyses, and reports into
// reproducible experiment runs. Every artifact embeds a deterministic run
// manifest; wall time goes to stderr so identical runs produce identical
// bytes. Budgets are mandatory: every verdict here is budget-relative.
//
// Exit codes: 0 success / CERTIFIED / PASS
//             1 NOT-FOUND-WITHIN-BUDGET / FAIL_EVIDENCE / missing patterns
//             2 usage or spec error
//             3 tainted output (ambiguous evaluations were skipped)

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tamelab/classify.hpp"
#include "tamelab/entropy.hpp"
#include "tamelab/indep.hpp"
#include "tamelab/json_io.hpp"
#include "tamelab/lang.hpp"
#include "tamelab/sources.hpp"
#include "tamelab/torus.hpp"
#include "tamelab/wapset.hpp"

using namespace tamelab;
using json_io::json;

namespace {

struct Out {
    std::string path;   // empty -> stdout

    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f) throw UsageError("cannot open output file " + path);
        f << text;
    }
};

std::vector<std::int64_t> parse_int_list(const std::string& s, const char* what) {
    std::vector<std::int64_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stoll(tok));
        } catch (...) {
            throw UsageError(std::string(what) + ": bad integer '" + tok + "'");
        }
    }
    if (out.empty()) throw UsageError(std::string(what) + ": empty list");
    return out;
}

ShiftRange parse_range_expr(const std::string& s) {
    auto pos = s.find("..", 1);   // skip a leading minus sign
    if (pos == std::string::npos)
        throw UsageError("range must look like A..B, got '" + s + "'");
    try {
        std::int64_t lo = std::stoll(s.substr(0, pos));
        std::int64_t hi = std::stoll(s.substr(pos + 2));
        if (lo > hi) throw UsageError("range is empty: " + s);
        return ShiftRange{lo, hi};
    } catch (const Error&) {
        throw;
    } catch (...) {
        throw UsageError("range must look like A..B, got '" + s + "'");
    }
}

// exact squared value from "p/q" (the value p/q, squared here) or "2^-k"
torus::SqValue parse_radius_sq(const std::string& s, unsigned bits2) {
    if (s.rfind("2^-", 0) == 0) {
        unsigned k = static_cast<unsigned>(std::stoul(s.substr(3)));
        if (2 * k > bits2) throw UsageError("radius 2^-" + std::to_string(k) +
                                            " underflows the 2B-bit scale");
        return torus::SqValue(torus::Wide(1) << (bits2 - 2 * k), bits2);
    }
    auto pos = s.find('/');
    if (pos == std::string::npos)
        throw UsageError("radius must be p/q or 2^-k, got '" + s + "'");
    torus::Wide p(s.substr(0, pos)), q(s.substr(pos + 1));
    if (q <= 0 || p <= 0) throw UsageError("radius must be positive");
    return torus::SqValue((p * p << bits2) / (q * q), bits2);
}

torus::SqValue parse_delta(const std::string& s, unsigned bits2) {
    if (s.rfind("2^-", 0) == 0) {
        unsigned k = static_cast<unsigned>(std::stoul(s.substr(3)));
        if (k > bits2) throw UsageError("delta underflows the 2B-bit scale");
        return torus::SqValue(torus::Wide(1) << (bits2 - k), bits2);
    }
    auto pos = s.find('/');
    if (pos == std::string::npos)
        throw UsageError("delta must be p/q or 2^-k, got '" + s + "'");
    torus::Wide p(s.substr(0, pos)), q(s.substr(pos + 1));
    if (q <= 0 || p <= 0) throw UsageError("delta must be positive");
    return torus::SqValue((p << bits2) / q, bits2);
}

sources::IntegerSetSpec load_set_arg(const std::string& arg) {
    if (arg == "natural") {
        sources::IntegerSetSpec s;
        s.kind = sources::IntegerSetSpec::Natural{};
        return s;
    }
    if (arg == "evens") {
        sources::IntegerSetSpec s;
        s.kind = sources::IntegerSetSpec::Periodic{2, {0}};
        return s;
    }
    std::ifstream in(arg, std::ios::binary);
    if (!in) throw UsageError("cannot open set file " + arg);
    std::ostringstream buf;
    buf << in.rdbuf();
    json j;
    try {
        j = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw MalformedSpec(arg + ": " + e.what());
    }
    if (j.contains("kind") && j["kind"] == "indicator")
        return json_io::parse_integer_set(j["set"], arg);
    return json_io::parse_integer_set(j, arg);
}

int finish(const Out& out, const std::string& command,
           const std::string& source_digest, const json& budgets,
           const json& result, bool tainted, int base_exit) {
    json manifest = json_io::make_manifest(command, source_digest, budgets, tainted);
    out.write(json_io::render_artifact(manifest, result));
    if (tainted) return 3;
    return base_exit;
}

// ---------------------------------------------------------------------------

int cmd_generate(const json_io::LoadedSource& loaded, const std::string& range_expr,
                 const std::string& box_expr, int words, const Out& out) {
    const auto& src = loaded.source;
    std::ostringstream command;
    command << "generate";
    json budgets;
    bool tainted = false;
    std::string body;

    if (!range_expr.empty()) {
        if (src.domain() != sources::Domain::integer_line)
            throw UsageError("--range applies to Z-indexed sources only");
        ShiftRange r = parse_range_expr(range_expr);
        command << " --range " << r.lo << ".." << r.hi;
        budgets["range"] = {{"lo", r.lo}, {"hi", r.hi}};
        std::vector<std::uint8_t> line;
        src.line(r.lo, r.hi, line);
        std::ostringstream text;
        bool wide = src.alphabet() > 10;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (wide && i) text << ' ';
            if (line[i] == sources::kAmbiguousCell) {
                tainted = true;
                text << '?';
            } else {
                text << static_cast<int>(line[i]);
            }
        }
        body = text.str();
    } else if (!box_expr.empty()) {
        if (src.domain() != sources::Domain::lattice)
            throw UsageError("--box applies to lattice-indexed sources only");
        std::vector<ShiftRange> axes;
        std::stringstream ss(box_expr);
        std::string tok;
        while (std::getline(ss, tok, ','))
            axes.push_back(parse_range_expr(tok));
        if (static_cast<int>(axes.size()) != src.generators())
            throw UsageError("--box arity must match the source's generator count");
        command << " --box " << box_expr;
        json jaxes = json::array();
        for (auto& a : axes) jaxes.push_back({{"lo", a.lo}, {"hi", a.hi}});
        budgets["box"] = jaxes;
        std::ostringstream text;
        std::vector<std::int64_t> idx(axes.size());
        for (std::size_t i = 0; i < axes.size(); ++i) idx[i] = axes[i].lo;
        bool done = false;
        while (!done) {
            for (std::size_t i = 0; i < idx.size(); ++i)
                text << idx[i] << ' ';
            try {
                text << src.eval_lattice(idx);
            } catch (const AmbiguousBoundary&) {
                tainted = true;
                text << '?';
            }
            text << '\n';
            std::size_t axis = 0;
            for (; axis < idx.size(); ++axis) {
                if (idx[axis] < axes[axis].hi) { ++idx[axis]; break; }
                idx[axis] = axes[axis].lo;
            }
            if (axis == idx.size()) done = true;
        }
        body = text.str();
        if (!body.empty() && body.back() == '\n') body.pop_back();
    } else if (words > 0) {
        if (src.domain() != sources::Domain::free_group)
            throw UsageError("--words applies to free-group sources only");
        if (words > 8) throw UsageError("--words is capped at length 8");
        command << " --words " << words;
        budgets["words"] = words;
        std::ostringstream text;
        // words by length, letters ordered a < A < b < B; identity prints as e
        const char letters[] = {'a', 'A', 'b', 'B'};
        std::vector<std::string> frontier{""};
        auto emit = [&](const std::string& w) {
            text << (w.empty() ? "e" : w) << ' ';
            try {
                text << src.eval_word(w);
            } catch (const AmbiguousBoundary&) {
                tainted = true;
                text << '?';
            }
            text << '\n';
        };
        emit("");
        for (int len = 1; len <= words; ++len) {
            std::vector<std::string> next;
            for (const auto& w : frontier)
                for (char c : letters) {
                    if (!w.empty()) {
                        char last = w.back();
                        bool cancels = (last == 'a' && c == 'A') ||
                                       (last == 'A' && c == 'a') ||
                                       (last == 'b' && c == 'B') ||
                                       (last == 'B' && c == 'b');
                        if (cancels) continue;
                    }
                    next.push_back(w + c);
                }
            for (const auto& w : next) emit(w);
            frontier = std::move(next);
        }
        body = text.str();
        if (!body.empty() && body.back() == '\n') body.pop_back();
    } else {
        throw UsageError("generate needs one of --range, --box, --words");
    }

    json manifest = json_io::make_manifest(command.str(), loaded.digest, budgets,
                                           tainted);
    out.write(body + "\n" + manifest.dump() + "\n");
    return tainted ? 3 : 0;
}

int cmd_complexity(const json_io::LoadedSource& loaded, int nmax,
                   std::int64_t shifts, const Out& out,
                   const std::string& json_path, int threads) {
    auto table = lang::complexity_table(loaded.source, nmax, shifts, threads);
    std::ostringstream command;
    command << "complexity --nmax " << nmax << " --shifts " << shifts;
    json budgets;
    budgets["nmax"] = nmax;
    budgets["shifts"] = shifts;
    json manifest = json_io::make_manifest(command.str(), loaded.digest, budgets,
                                           table.tainted());
    out.write(table.to_csv() + "# manifest " + manifest.dump() + "\n");
    if (!json_path.empty()) {
        Out jout{json_path};
        jout.write(json_io::render_artifact(manifest, json_io::to_json(table)));
    }
    return table.tainted() ? 3 : 0;
}

int cmd_free(const json_io::LoadedSource& loaded, const std::string& coords_arg,
             const std::string& window_arg, int kmax,
             const std::string& lengths_arg, std::int64_t shifts,
             const std::string& pair_arg, std::uint64_t node_budget,
             const Out& out, int threads) {
    const auto& src = loaded.source;
    auto pair_vals = parse_int_list(pair_arg, "--pair");
    if (pair_vals.size() != 2) throw UsageError("--pair needs two symbols");
    indep::SymbolPair pair{static_cast<int>(pair_vals[0]),
                           static_cast<int>(pair_vals[1])};
    ShiftRange range = src.natural_range(shifts);
    json budgets;
    budgets["shifts"] = shifts;
    budgets["range"] = {{"lo", range.lo}, {"hi", range.hi}};

    if (!coords_arg.empty()) {
        auto coords = parse_int_list(coords_arg, "--coords");
        std::ostringstream command;
        command << "free --coords " << coords_arg << " --pair " << pair_arg
                << " --shifts " << shifts;
        auto result = indep::is_free(src, coords, pair, range, threads);
        if (const auto* cert = std::get_if<indep::FreeSetCertificate>(&result)) {
            json r;
            r["status"] = "CERTIFIED";
            r["certificate"] = json_io::to_json(*cert);
            return finish(out, command.str(), loaded.digest, budgets, r,
                          cert->tainted, 0);
        }
        const auto& missing = std::get<indep::MissingPatterns>(result);
        json r;
        r["status"] = "NOT-FOUND-WITHIN-BUDGET";
        r["missing"] = json_io::to_json(missing);
        return finish(out, command.str(), loaded.digest, budgets, r,
                      missing.tainted, 1);
    }
    if (!window_arg.empty()) {
        if (kmax < 1) throw UsageError("--window mode needs --kmax >= 1");
        ShiftRange w = parse_range_expr(window_arg);
        std::vector<std::int64_t> window;
        for (std::int64_t i = w.lo; i <= w.hi; ++i) window.push_back(i);
        std::ostringstream command;
        command << "free --window " << window_arg << " --kmax " << kmax
                << " --pair " << pair_arg << " --shifts " << shifts
                << " --node-budget " << node_budget;
        budgets["kmax"] = kmax;
        budgets["node_budget"] = node_budget;
        auto report = indep::max_free_size(src, window, pair, range, kmax,
                                           node_budget, threads);
        json r;
        r["status"] = report.budget_hit ? "NOT-FOUND-WITHIN-BUDGET" : "CERTIFIED";
        r["search"] = json_io::to_json(report);
        return finish(out, command.str(), loaded.digest, budgets, r,
                      report.tainted, report.budget_hit ? 1 : 0);
    }
    if (!lengths_arg.empty()) {
        auto lengths = parse_int_list(lengths_arg, "--lengths");
        std::ostringstream command;
        command << "free --lengths " << lengths_arg << " --pair " << pair_arg
                << " --shifts " << shifts << " --node-budget " << node_budget;
        budgets["node_budget"] = node_budget;
        auto profile = indep::free_density_profile(src, lengths, pair, shifts,
                                                   node_budget, threads);
        json r;
        r["status"] = "PROFILE";
        r["density"] = json_io::to_json(profile);
        return finish(out, command.str(), loaded.digest, budgets, r, false, 0);
    }
    throw UsageError("free needs one of --coords, --window, --lengths");
}

int cmd_entropy(const json_io::LoadedSource& loaded, int nmax,
                std::int64_t shifts, const std::string& sequence,
                const std::string& terms_arg, const Out& out,
                const std::string& json_path, int threads) {
    entropy::EntropySequence seq = entropy::EntropySequence::identity();
    std::string seq_desc = "identity";
    if (!terms_arg.empty()) {
        seq = entropy::EntropySequence::explicit_list(
            parse_int_list(terms_arg, "--terms"));
        seq_desc = "explicit:" + terms_arg;
    } else if (!sequence.empty()) {
        seq = entropy::EntropySequence::by_name(sequence);
        seq_desc = sequence;
    }
    auto est = entropy::sequence_entropy(loaded.source, seq, nmax, shifts, threads);
    std::ostringstream command;
    command << "entropy --nmax " << nmax << " --shifts " << shifts
            << " --sequence " << seq_desc;
    json budgets;
    budgets["nmax"] = nmax;
    budgets["shifts"] = shifts;
    json manifest = json_io::make_manifest(command.str(), loaded.digest, budgets,
                                           est.tainted);
    out.write(est.to_csv() + "# manifest " + manifest.dump() + "\n");
    if (!json_path.empty()) {
        Out jout{json_path};
        jout.write(json_io::render_artifact(manifest, json_io::to_json(est)));
    }
    return est.tainted ? 3 : 0;
}

int cmd_wap(const std::string& d_arg, const std::string& b_arg, int fmax,
            const std::string& horizons_arg, const Out& out, int threads) {
    wapset::RuppertProbe probe;
    probe.d_set = load_set_arg(d_arg);
    probe.b_set = load_set_arg(b_arg);
    probe.f_max = fmax;
    probe.horizons = parse_int_list(horizons_arg, "--horizons");
    auto verdict = wapset::ruppert_test(probe, threads);
    std::ostringstream command;
    command << "wap --d " << d_arg << " --b " << b_arg << " --fmax " << fmax
            << " --horizons " << horizons_arg;
    json budgets;
    budgets["fmax"] = fmax;
    budgets["horizons"] = probe.horizons;
    std::string digest =
        json_io::fnv1a64_hex(json_io::serialize_integer_set(probe.d_set).dump() +
                             json_io::serialize_integer_set(probe.b_set).dump());
    json r = json_io::to_json(verdict);
    int exit_code = verdict.outcome == wapset::RuppertOutcome::pass ? 0 : 1;
    return finish(out, command.str(), digest, budgets, r, false, exit_code);
}

int cmd_classify(const json_io::LoadedSource& loaded,
                 classify::BudgetProfile profile, const Out& out) {
    auto report = classify::classify(loaded.source, profile);
    std::ostringstream command;
    command << "classify --shifts " << profile.shifts << " --k-target "
            << profile.k_target;
    json budgets;
    budgets["shifts"] = profile.shifts;
    budgets["projection_shifts"] = profile.effective_projection_shifts();
    budgets["entropy_shifts"] = profile.effective_entropy_shifts();
    budgets["k_target"] = profile.k_target;
    budgets["node_budget"] = profile.node_budget;
    return finish(out, command.str(), loaded.digest, budgets,
                  json_io::to_json(report), report.tainted, 0);
}

int cmd_safe_radius(const std::string& source_path, std::int64_t n,
                    const std::string& r_min_arg, const std::string& r_max_arg,
                    const std::string& delta_arg, const Out& out,
                    const std::string& emit_spec) {
    std::ifstream in(source_path, std::ios::binary);
    if (!in) throw UsageError("cannot open source file " + source_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    json spec;
    try {
        spec = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw MalformedSpec(source_path + ": " + e.what());
    }
    if (!spec.contains("kind") || spec["kind"] != "sphere")
        throw MalformedSpec("safe-radius needs a sphere source spec");
    auto bits = static_cast<unsigned>(spec.at("bits").get<std::int64_t>());
    auto d = static_cast<int>(spec.at("dimension").get<std::int64_t>());
    auto parse_point = [&](const char* key) {
        std::vector<torus::FixedPointFrac> cs;
        const json& arr = spec.at(key);
        if (!arr.is_array() || static_cast<int>(arr.size()) != d)
            throw MalformedSpec(std::string("sphere.") + key +
                                ": expected d entries");
        for (const auto& c : arr)
            cs.push_back(json_io::parse_constant(c, bits, key));
        return torus::TorusPoint(std::move(cs));
    };
    auto alpha = parse_point("alpha");
    auto base = parse_point("base");
    auto center = parse_point("center");

    unsigned bits2 = 2 * bits;
    auto r_min_sq = parse_radius_sq(r_min_arg, bits2);
    auto r_max_sq = parse_radius_sq(r_max_arg, bits2);
    auto delta = parse_delta(delta_arg, bits2);

    auto res = sources::choose_safe_radius(alpha, base, center, n, r_min_sq,
                                           r_max_sq, delta);
    std::ostringstream command;
    command << "safe-radius --n " << n << " --r-min " << r_min_arg << " --r-max "
            << r_max_arg << " --delta " << delta_arg;
    json budgets;
    budgets["n"] = n;
    json r;
    r["sq_radius"] = res.sq_radius.to_hex();
    r["margin"] = res.margin.to_hex();
    r["obstructions"] = res.obstructions;
    r["bits"] = bits;

    if (!emit_spec.empty()) {
        json completed = spec;
        completed["sq_radius"] = res.sq_radius.to_hex();
        completed["guard"] = delta.to_hex();
        Out eout{emit_spec};
        eout.write(completed.dump(2) + "\n");
    }
    return finish(out, command.str(), json_io::fnv1a64_hex(buf.str()), budgets, r,
                  false, 0);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbolic-dynamics desk lab: coding sequences and their "
                 "combinatorial signatures"};
    app.require_subcommand(1);

    std::string source_path, out_path, json_path;
    int threads = 1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--source", source_path, "source spec JSON file")
            ->required();
        cmd->add_option("--out", out_path, "output file (default: stdout)");
        cmd->add_option("--threads", threads,
                        "worker threads (never changes output bytes)");
    };

    auto* gen = app.add_subcommand("generate", "materialize symbols");
    std::string range_expr, box_expr;
    int words = 0;
    add_common(gen);
    gen->add_option("--range", range_expr, "index range A..B (Z sources)");
    gen->add_option("--box", box_expr, "lattice box A..B,C..D (Z^k sources)");
    gen->add_option("--words", words, "enumerate reduced words up to length L");

    auto* cx = app.add_subcommand("complexity", "word-complexity table");
    int nmax = 0;
    std::int64_t shifts = -1;
    add_common(cx);
    cx->add_option("--nmax", nmax, "max window length")->required();
    cx->add_option("--shifts", shifts, "shift budget M")->required();
    cx->add_option("--json", json_path, "also write a JSON summary here");

    auto* fr = app.add_subcommand("free", "freeness certificates and search");
    std::string coords_arg, window_arg, lengths_arg, pair_arg = "0,1";
    int kmax = 0;
    std::uint64_t node_budget = 10'000'000;
    add_common(fr);
    fr->add_option("--coords", coords_arg, "coordinate set, e.g. 0,2");
    fr->add_option("--window", window_arg, "search window A..B");
    fr->add_option("--kmax", kmax, "max free-set size to search");
    fr->add_option("--lengths", lengths_arg, "density profile lengths");
    fr->add_option("--pair", pair_arg, "symbol pair s0,s1");
    fr->add_option("--node-budget", node_budget, "search node budget");
    fr->add_option("--shifts", shifts, "shift budget M")->required();

    auto* en = app.add_subcommand("entropy", "sequence entropy estimate");
    std::string sequence, terms_arg;
    add_common(en);
    en->add_option("--nmax", nmax, "max n")->required();
    en->add_option("--shifts", shifts, "shift budget M")->required();
    en->add_option("--sequence", sequence,
                   "identity | geometric | kerr_li_blocks");
    en->add_option("--terms", terms_arg, "explicit sequence terms");
    en->add_option("--json", json_path, "also write a JSON summary here");

    auto* wp = app.add_subcommand("wap", "Ruppert WAP-set probe");
    std::string d_arg, b_arg, horizons_arg;
    int fmax = 0;
    wp->add_option("--d", d_arg, "set D: file or builtin (natural, evens)")
        ->required();
    wp->add_option("--b", b_arg, "candidate set B: file or builtin")->required();
    wp->add_option("--fmax", fmax, "cap on |F|")->required();
    wp->add_option("--horizons", horizons_arg,
                   "window radii, e.g. 1000,10000,100000")
        ->required();
    wp->add_option("--out", out_path, "output file (default: stdout)");
    wp->add_option("--threads", threads,
                   "worker threads (never changes output bytes)");

    auto* cl = app.add_subcommand("classify", "aggregate classification report");
    classify::BudgetProfile profile;
    std::string windows_arg, dlengths_arg;
    add_common(cl);
    cl->add_option("--shifts", profile.shifts, "master shift budget M")->required();
    cl->add_option("--k-target", profile.k_target, "nonnull certificate target");
    cl->add_option("--projection-shifts", profile.projection_shifts,
                   "projection-growth budget");
    cl->add_option("--entropy-shifts", profile.entropy_shifts, "entropy budget");
    cl->add_option("--entropy-nmax", profile.entropy_n_max, "entropy n_max");
    cl->add_option("--windows", windows_arg, "plateau windows, e.g. 10,11,12");
    cl->add_option("--lengths", dlengths_arg, "density lengths, e.g. 4,8,12");
    cl->add_option("--node-budget", profile.node_budget, "search node budget");

    auto* sr = app.add_subcommand("safe-radius", "pick an orbit-avoiding radius");
    std::string r_min_arg, r_max_arg, delta_arg, emit_spec;
    std::int64_t sr_n = -1;
    sr->add_option("--source", source_path, "sphere spec JSON (radius ignored)")
        ->required();
    sr->add_option("--n", sr_n, "orbit bound N")->required();
    sr->add_option("--r-min", r_min_arg, "p/q or 2^-k")->required();
    sr->add_option("--r-max", r_max_arg, "p/q or 2^-k")->required();
    sr->add_option("--delta", delta_arg, "margin p/q or 2^-k")->required();
    sr->add_option("--out", out_path, "output file (default: stdout)");
    sr->add_option("--emit-spec", emit_spec, "write the completed sphere spec");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    auto started = std::chrono::steady_clock::now();
    int code = 2;
    std::string cmd_name = app.get_subcommands().front()->get_name();
    try {
        Out out{out_path};
        if (gen->parsed()) {
            code = cmd_generate(json_io::load_source_file(source_path), range_expr,
                                box_expr, words, out);
        } else if (cx->parsed()) {
            code = cmd_complexity(json_io::load_source_file(source_path), nmax,
                                  shifts, out, json_path, threads);
        } else if (fr->parsed()) {
            code = cmd_free(json_io::load_source_file(source_path), coords_arg,
                            window_arg, kmax, lengths_arg, shifts, pair_arg,
                            node_budget, out, threads);
        } else if (en->parsed()) {
            code = cmd_entropy(json_io::load_source_file(source_path), nmax, shifts,
                               sequence, terms_arg, out, json_path, threads);
        } else if (wp->parsed()) {
            code = cmd_wap(d_arg, b_arg, fmax, horizons_arg, out, threads);
        } else if (cl->parsed()) {
            profile.workers = threads;
            if (!windows_arg.empty())
                profile.plateau_windows = parse_int_list(windows_arg, "--windows");
            if (!dlengths_arg.empty())
                profile.density_lengths = parse_int_list(dlengths_arg, "--lengths");
            code = cmd_classify(json_io::load_source_file(source_path), profile,
                                Out{out_path});
        } else if (sr->parsed()) {
            code = cmd_safe_radius(source_path, sr_n, r_min_arg, r_max_arg,
                                   delta_arg, out, emit_spec);
        }
    } catch (const Error& e) {
        std::cerr << "tamelab " << cmd_name << ": " << e.what() << "\n";
        return e.kind() == ErrorKind::ambiguous_boundary ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "tamelab " << cmd_name << ": " << e.what() << "\n";
        return 2;
    }
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
    std::cerr << "tamelab " << cmd_name << ": done in " << elapsed << " ms\n";
    return code;
}
