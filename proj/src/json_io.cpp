#include "tamelab/json_io.hpp"

#include <fstream>
#include <sstream>

namespace tamelab::json_io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw MalformedSpec(path + ": " + why);
}

const json& need(const json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) fail(path, std::string("missing key \"") + key + "\"");
    return *it;
}

std::int64_t need_int(const json& j, const char* key, const std::string& path) {
    const json& v = need(j, key, path);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<std::int64_t>();
}

double need_number(const json& j, const char* key, const std::string& path) {
    const json& v = need(j, key, path);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

std::string need_string(const json& j, const char* key, const std::string& path) {
    const json& v = need(j, key, path);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

std::string hex_of(std::uint64_t v) {
    std::ostringstream out;
    out << std::hex << v;
    return out.str();
}

std::uint64_t hex_to_u64(const std::string& s, const std::string& path) {
    if (s.empty() || s.size() > 16) fail(path, "bad pattern hex");
    std::uint64_t v = 0;
    for (char c : s) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else { fail(path, "bad pattern hex digit"); }
        v = (v << 4) | static_cast<std::uint64_t>(d);
    }
    return v;
}

} // namespace

torus::FixedPointFrac parse_constant(const json& value, unsigned bits,
                                     const std::string& path) {
    if (value.is_string())
        return torus::FixedPointFrac::from_hex(value.get<std::string>(), bits);
    if (!value.is_object()) fail(path, "constant must be a hex string or an object");
    std::string kind = need_string(value, "kind", path);
    if (kind == "golden") return torus::make_golden(bits);
    if (kind == "rational")
        return torus::make_rational(torus::Wide(need_int(value, "p", path)),
                                    torus::Wide(need_int(value, "q", path)), bits);
    if (kind == "sqrt_rational")
        return torus::make_sqrt_rational(torus::Wide(need_int(value, "p", path)),
                                         torus::Wide(need_int(value, "q", path)),
                                         bits);
    fail(path, "unknown constant kind \"" + kind + "\"");
}

sources::IntegerSetSpec parse_integer_set(const json& value, const std::string& path) {
    if (!value.is_object()) fail(path, "integer set must be an object");
    std::string kind = need_string(value, "kind", path);
    sources::IntegerSetSpec spec;
    if (kind == "natural") {
        spec.kind = sources::IntegerSetSpec::Natural{};
    } else if (kind == "ip_base") {
        sources::IntegerSetSpec::IpBase ip;
        ip.base = static_cast<int>(need_int(value, "base", path));
        ip.t_min = static_cast<int>(need_int(value, "t_min", path));
        spec.kind = ip;
    } else if (kind == "periodic") {
        sources::IntegerSetSpec::Periodic p;
        p.modulus = need_int(value, "modulus", path);
        const json& rs = need(value, "residues", path);
        if (!rs.is_array()) fail(path + ".residues", "expected an array");
        for (const auto& r : rs) p.residues.push_back(r.get<std::int64_t>());
        spec.kind = p;
    } else if (kind == "explicit") {
        sources::IntegerSetSpec::Explicit e;
        const json& es = need(value, "elements", path);
        if (!es.is_array()) fail(path + ".elements", "expected an array");
        for (const auto& el : es) e.elements.push_back(el.get<std::int64_t>());
        const json& w = need(value, "window", path);
        if (!w.is_array() || w.size() != 2) fail(path + ".window", "expected [lo, hi]");
        e.window_lo = w[0].get<std::int64_t>();
        e.window_hi = w[1].get<std::int64_t>();
        spec.kind = e;
    } else {
        fail(path, "unknown integer-set kind \"" + kind + "\"");
    }
    spec.validate();
    return spec;
}

json serialize_integer_set(const sources::IntegerSetSpec& spec) {
    json j;
    if (std::holds_alternative<sources::IntegerSetSpec::Natural>(spec.kind)) {
        j["kind"] = "natural";
    } else if (const auto* ip =
                   std::get_if<sources::IntegerSetSpec::IpBase>(&spec.kind)) {
        j["kind"] = "ip_base";
        j["base"] = ip->base;
        j["t_min"] = ip->t_min;
    } else if (const auto* p =
                   std::get_if<sources::IntegerSetSpec::Periodic>(&spec.kind)) {
        j["kind"] = "periodic";
        j["modulus"] = p->modulus;
        j["residues"] = p->residues;
    } else {
        const auto& e = std::get<sources::IntegerSetSpec::Explicit>(spec.kind);
        j["kind"] = "explicit";
        j["elements"] = e.elements;
        j["window"] = {e.window_lo, e.window_hi};
    }
    return j;
}

namespace {

std::vector<sources::Symbol> parse_word(const json& v, const std::string& path) {
    std::vector<sources::Symbol> out;
    if (v.is_string()) {
        for (char c : v.get<std::string>()) {
            if (c < '0' || c > '9') fail(path, "word strings use digits 0-9");
            out.push_back(c - '0');
        }
    } else if (v.is_array()) {
        for (const auto& s : v) out.push_back(s.get<int>());
    } else {
        fail(path, "expected a digit string or an array of symbols");
    }
    return out;
}

sources::SymbolicSource parse_rotation(const json& spec) {
    unsigned bits = static_cast<unsigned>(need_int(spec, "bits", "rotation"));
    sources::RotationCodingSpec rc;
    const json& alphas = need(spec, "alphas", "rotation");
    if (!alphas.is_array() || alphas.empty())
        fail("rotation.alphas", "expected a nonempty array");
    for (const auto& a : alphas) {
        std::vector<torus::FixedPointFrac> c{parse_constant(a, bits, "rotation.alphas")};
        rc.rotation.alphas.emplace_back(std::move(c));
    }
    rc.base = parse_constant(need(spec, "base", "rotation"), bits, "rotation.base");
    const json& cuts = need(spec, "cuts", "rotation");
    if (!cuts.is_array() || cuts.empty())
        fail("rotation.cuts", "expected a nonempty array");
    for (const auto& c : cuts)
        rc.partition.cuts.push_back(parse_constant(c, bits, "rotation.cuts"));
    if (spec.contains("guard_bits"))
        rc.guard_bits = static_cast<unsigned>(need_int(spec, "guard_bits", "rotation"));
    return sources::SymbolicSource::rotation(std::move(rc));
}

sources::SymbolicSource parse_sphere(const json& spec) {
    unsigned bits = static_cast<unsigned>(need_int(spec, "bits", "sphere"));
    auto d = static_cast<int>(need_int(spec, "dimension", "sphere"));
    auto parse_point = [&](const char* key) {
        const json& arr = need(spec, key, "sphere");
        if (!arr.is_array() || static_cast<int>(arr.size()) != d)
            fail(std::string("sphere.") + key, "expected an array of length d");
        std::vector<torus::FixedPointFrac> cs;
        for (const auto& c : arr)
            cs.push_back(parse_constant(c, bits, std::string("sphere.") + key));
        return torus::TorusPoint(std::move(cs));
    };
    sources::SphereCodingSpec sc;
    sc.alpha = parse_point("alpha");
    sc.base = parse_point("base");
    sc.center = parse_point("center");
    sc.sq_radius = torus::SqValue::from_hex(
        need_string(spec, "sq_radius", "sphere"), 2 * bits);
    sc.guard = torus::SqValue::from_hex(need_string(spec, "guard", "sphere"),
                                        2 * bits);
    return sources::SymbolicSource::sphere(std::move(sc));
}

sources::SymbolicSource parse_substitution(const json& spec) {
    sources::SubstitutionSpec ss;
    const json& rules = need(spec, "rules", "substitution");
    if (!rules.is_object()) fail("substitution.rules", "expected an object");
    for (auto it = rules.begin(); it != rules.end(); ++it) {
        int sym;
        try {
            sym = std::stoi(it.key());
        } catch (...) {
            fail("substitution.rules", "keys must be integer symbols");
        }
        ss.rules[sym] = parse_word(it.value(), "substitution.rules");
    }
    ss.seed = static_cast<int>(need_int(spec, "seed", "substitution"));
    if (spec.contains("max_length"))
        ss.max_length =
            static_cast<std::size_t>(need_int(spec, "max_length", "substitution"));
    return sources::SymbolicSource::substitution(std::move(ss));
}

} // namespace

sources::SymbolicSource parse_source(const json& spec) {
    if (!spec.is_object()) fail("source", "spec must be a JSON object");
    std::string kind = need_string(spec, "kind", "source");
    if (kind == "rotation") return parse_rotation(spec);
    if (kind == "sphere") return parse_sphere(spec);
    if (kind == "substitution") return parse_substitution(spec);
    if (kind == "indicator")
        return sources::SymbolicSource::indicator(
            parse_integer_set(need(spec, "set", "indicator"), "indicator.set"));
    if (kind == "kerr_li") {
        sources::KerrLiSpec ks;
        if (spec.contains("max_length"))
            ks.max_length =
                static_cast<std::size_t>(need_int(spec, "max_length", "kerr_li"));
        return sources::SymbolicSource::kerr_li(ks);
    }
    if (kind == "champernowne") {
        sources::ChampernowneSpec cs;
        if (spec.contains("max_length"))
            cs.max_length = static_cast<std::size_t>(
                need_int(spec, "max_length", "champernowne"));
        return sources::SymbolicSource::champernowne(cs);
    }
    if (kind == "constant") {
        sources::ConstantSpec cs;
        cs.symbol = static_cast<int>(need_int(spec, "symbol", "constant"));
        if (spec.contains("alphabet"))
            cs.alphabet = static_cast<int>(need_int(spec, "alphabet", "constant"));
        return sources::SymbolicSource::constant(cs);
    }
    if (kind == "free_group") {
        sources::FreeGroupCodingSpec fs;
        fs.rho = need_number(spec, "rho", "free_group");
        const json& m = need(spec, "mobius", "free_group");
        if (!m.is_array() || m.size() != 4)
            fail("free_group.mobius", "expected [a, b, c, d]");
        for (std::size_t i = 0; i < 4; ++i) fs.mobius[i] = m[i].get<double>();
        fs.base = need_number(spec, "base", "free_group");
        const json& cuts = need(spec, "cuts", "free_group");
        if (!cuts.is_array() || cuts.empty())
            fail("free_group.cuts", "expected a nonempty array");
        fs.cuts.clear();
        for (const auto& c : cuts) fs.cuts.push_back(c.get<double>());
        if (spec.contains("float_guard"))
            fs.float_guard = need_number(spec, "float_guard", "free_group");
        if (spec.contains("max_word_length"))
            fs.max_word_length =
                static_cast<int>(need_int(spec, "max_word_length", "free_group"));
        return sources::SymbolicSource::free_group(std::move(fs));
    }
    fail("source", "unknown kind \"" + kind + "\"");
}

json serialize_source(const sources::SymbolicSource& source) {
    json j;
    std::string kind = source.kind_name();
    j["kind"] = kind;
    if (kind == "rotation") {
        const auto& rc = source.as_rotation();
        j["bits"] = rc.rotation.bits();
        json alphas = json::array();
        for (const auto& a : rc.rotation.alphas) alphas.push_back(a.coord(0).to_hex());
        j["alphas"] = alphas;
        j["base"] = rc.base.to_hex();
        json cuts = json::array();
        for (const auto& c : rc.partition.cuts) cuts.push_back(c.to_hex());
        j["cuts"] = cuts;
        j["guard_bits"] = rc.effective_guard_bits();
    } else if (kind == "sphere") {
        const auto& sc = source.as_sphere();
        j["bits"] = sc.alpha.bits();
        j["dimension"] = sc.alpha.dimension();
        auto point = [](const torus::TorusPoint& p) {
            json arr = json::array();
            for (const auto& c : p.coords()) arr.push_back(c.to_hex());
            return arr;
        };
        j["alpha"] = point(sc.alpha);
        j["base"] = point(sc.base);
        j["center"] = point(sc.center);
        j["sq_radius"] = sc.sq_radius.to_hex();
        j["guard"] = sc.guard.to_hex();
    } else if (kind == "substitution") {
        const auto& ss = source.as_substitution();
        json rules;
        for (const auto& [sym, image] : ss.rules)
            rules[std::to_string(sym)] = image;
        j["rules"] = rules;
        j["seed"] = ss.seed;
        j["max_length"] = ss.max_length;
    } else if (kind == "indicator") {
        j["set"] = serialize_integer_set(source.as_indicator());
    } else if (kind == "kerr_li") {
        j["max_length"] = source.as_kerr_li().max_length;
    } else if (kind == "champernowne") {
        j["max_length"] = source.as_champernowne().max_length;
    } else if (kind == "constant") {
        j["symbol"] = source.as_constant().symbol;
        j["alphabet"] = source.as_constant().alphabet;
    } else {
        const auto& fs = source.as_free_group();
        j["rho"] = fs.rho;
        j["mobius"] = fs.mobius;
        j["base"] = fs.base;
        j["cuts"] = fs.cuts;
        j["float_guard"] = fs.float_guard;
        j["max_word_length"] = fs.max_word_length;
    }
    return j;
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

LoadedSource load_source_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedSpec(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string bytes = buf.str();
    json raw;
    try {
        raw = json::parse(bytes);
    } catch (const json::parse_error& e) {
        // report line/column computed from the byte offset
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < bytes.size(); ++i) {
            if (bytes[i] == '\n') { ++line; col = 1; }
            else ++col;
        }
        throw MalformedSpec(path + ":" + std::to_string(line) + ":" +
                            std::to_string(col) + ": " + e.what());
    }
    LoadedSource out{parse_source(raw), fnv1a64_hex(bytes), raw};
    return out;
}

json make_manifest(const std::string& command, const std::string& source_digest,
                   const json& budgets, bool tainted) {
    json m;
    m["tool"] = kToolName;
    m["version"] = kToolVersion;
    m["command"] = command;
    m["source_digest"] = source_digest;
    m["budgets"] = budgets;
    m["tainted"] = tainted;
    return m;
}

std::string render_artifact(const json& manifest, const json& result) {
    json j;
    j["manifest"] = manifest;
    j["result"] = result;
    return j.dump(2) + "\n";
}

json to_json(const lang::PatternStore& store) {
    json j;
    json window;
    window["arity"] = store.window.arity;
    window["coords"] = store.window.flat;
    j["window"] = window;
    j["alphabet"] = store.alphabet;
    if (store.alphabet == 2) {
        json pats = json::array();
        for (auto p : store.binary) pats.push_back(hex_of(p));
        j["patterns_hex"] = pats;
    } else {
        json pats = json::array();
        for (const auto& p : store.general) pats.push_back(p);
        j["patterns"] = pats;
    }
    j["count"] = store.size();
    j["skipped"] = store.skipped;
    j["shifts_scanned"] = store.shifts_scanned;
    if (store.box) {
        j["box_radii"] = store.box->radii;
    } else {
        j["range"] = {{"lo", store.range.lo}, {"hi", store.range.hi}};
    }
    j["tainted"] = store.tainted();
    return j;
}

json to_json(const lang::ComplexityTable& table) {
    json j;
    json rows = json::array();
    for (std::size_t i = 0; i < table.p.size(); ++i) {
        json r;
        r["n"] = i + 1;
        r["p_n"] = table.p[i];
        r["skipped"] = table.skipped[i];
        rows.push_back(r);
    }
    j["rows"] = rows;
    j["budget"] = table.budget;
    j["range"] = {{"lo", table.range.lo}, {"hi", table.range.hi}};
    j["tainted"] = table.tainted();
    return j;
}

json to_json(const indep::FreeSetCertificate& cert) {
    json j;
    j["coords"] = cert.coords;
    j["pair"] = {{"s0", cert.pair.s0}, {"s1", cert.pair.s1}};
    json ws = json::array();
    for (std::size_t p = 0; p < cert.witnesses.size(); ++p) {
        json w;
        w["pattern_hex"] = hex_of(p);
        w["shift"] = cert.witnesses[p];
        ws.push_back(w);
    }
    j["witnesses"] = ws;
    j["budget"] = {{"lo", cert.budget.lo}, {"hi", cert.budget.hi}};
    j["verified"] = cert.verified;
    j["tainted"] = cert.tainted;
    return j;
}

indep::FreeSetCertificate certificate_from_json(const json& j) {
    indep::FreeSetCertificate cert;
    const json& coords = need(j, "coords", "certificate");
    for (const auto& c : coords) cert.coords.push_back(c.get<std::int64_t>());
    const json& pair = need(j, "pair", "certificate");
    cert.pair.s0 = need_int(pair, "s0", "certificate.pair");
    cert.pair.s1 = need_int(pair, "s1", "certificate.pair");
    const json& ws = need(j, "witnesses", "certificate");
    cert.witnesses.assign(std::size_t(1) << cert.coords.size(), 0);
    if (ws.size() != cert.witnesses.size())
        fail("certificate.witnesses", "expected exactly 2^|coords| entries");
    for (const auto& w : ws) {
        std::uint64_t p = hex_to_u64(need_string(w, "pattern_hex", "certificate"),
                                     "certificate.pattern_hex");
        if (p >= cert.witnesses.size()) fail("certificate", "pattern out of range");
        cert.witnesses[p] = need_int(w, "shift", "certificate");
    }
    const json& budget = need(j, "budget", "certificate");
    cert.budget.lo = need_int(budget, "lo", "certificate.budget");
    cert.budget.hi = need_int(budget, "hi", "certificate.budget");
    cert.verified = j.value("verified", false);
    cert.tainted = j.value("tainted", false);
    return cert;
}

json to_json(const indep::MissingPatterns& missing) {
    json j;
    json pats = json::array();
    for (auto p : missing.missing) pats.push_back(hex_of(p));
    j["missing_hex"] = pats;
    j["present"] = missing.present;
    j["tainted"] = missing.tainted;
    return j;
}

json to_json(const indep::SearchReport& report) {
    json j;
    j["k_star"] = report.k_star;
    j["exhaustive"] = report.exhaustive;
    j["nodes"] = report.nodes;
    j["budget_hit"] = report.budget_hit;
    j["tainted"] = report.tainted;
    j["budget"] = {{"lo", report.budget.lo}, {"hi", report.budget.hi}};
    if (report.best)
        j["best"] = to_json(*report.best);
    else
        j["best"] = nullptr;
    return j;
}

json to_json(const std::vector<indep::DensityPoint>& profile) {
    json rows = json::array();
    for (const auto& pt : profile) {
        json r;
        r["length"] = pt.length;
        r["k_star"] = pt.k_star;
        r["ratio"] = pt.ratio;
        r["exhaustive"] = pt.exhaustive;
        rows.push_back(r);
    }
    return rows;
}

json to_json(const entropy::EntropyEstimate& est) {
    json j;
    json rows = json::array();
    for (std::size_t i = 0; i < est.counts.size(); ++i) {
        json r;
        r["n"] = i + 1;
        r["count"] = est.counts[i];
        r["slope"] = est.slopes[i];
        rows.push_back(r);
    }
    j["rows"] = rows;
    j["tail_max"] = est.tail_max;
    j["sequence"] = est.sequence;
    j["budget"] = est.budget;
    j["range"] = {{"lo", est.range.lo}, {"hi", est.range.hi}};
    j["tainted"] = est.tainted;
    return j;
}

json to_json(const wapset::RuppertVerdict& verdict) {
    json j;
    j["outcome"] =
        verdict.outcome == wapset::RuppertOutcome::pass ? "PASS" : "FAIL_EVIDENCE";
    j["f"] = verdict.f;
    j["sizes"] = verdict.sizes;
    j["horizons"] = verdict.horizons;
    j["growth"] = verdict.growth;
    json table = json::array();
    for (const auto& cell : verdict.table) {
        json c;
        c["f"] = cell.f;
        c["sizes"] = cell.sizes;
        table.push_back(c);
    }
    j["table"] = table;
    return j;
}

json to_json(const classify::Report& report) {
    json j;
    j["schema_version"] = 1;
    json verdicts;
    verdicts["positive_entropy"] = classify::verdict_name(report.positive_entropy);
    verdicts["nonnull"] = classify::verdict_name(report.nonnull);
    verdicts["tame_consistent"] = classify::verdict_name(report.tame_consistent);
    j["verdicts"] = verdicts;
    j["density"] = to_json(report.density);
    json certs = json::array();
    for (const auto& c : report.size_certificates) certs.push_back(to_json(c));
    j["size_certificates"] = certs;
    json plateau = json::array();
    for (const auto& rep : report.plateau) plateau.push_back(to_json(rep));
    j["plateau"] = plateau;
    json projections = json::array();
    for (const auto& fam : report.projections) {
        json f;
        f["name"] = fam.name;
        json counts = json::array();
        for (const auto& [k, c] : fam.growth.counts)
            counts.push_back({k, c});
        f["counts"] = counts;
        f["label"] = fam.growth.fit.describe();
        f["exponent"] = fam.growth.fit.exponent;
        f["rate"] = fam.growth.fit.rate;
        f["tainted"] = fam.growth.tainted;
        projections.push_back(f);
    }
    j["projections"] = projections;
    if (report.entropy_estimate)
        j["entropy"] = to_json(*report.entropy_estimate);
    j["tainted"] = report.tainted;
    j["limitation"] = report.limitation;
    json thresholds;
    thresholds["density_threshold"] = report.profile.density_threshold;
    thresholds["density_lengths"] = report.profile.density_lengths;
    thresholds["plateau_windows"] = report.profile.plateau_windows;
    thresholds["k_target"] = report.profile.k_target;
    thresholds["shifts"] = report.profile.shifts;
    thresholds["projection_shifts"] = report.profile.effective_projection_shifts();
    thresholds["entropy_shifts"] = report.profile.effective_entropy_shifts();
    thresholds["entropy_n_max"] = report.profile.entropy_n_max;
    thresholds["node_budget"] = report.profile.node_budget;
    j["thresholds"] = thresholds;
    return j;
}

} // namespace tamelab::json_io
