#include "seuvote/axioms.hpp"
#include "seuvote/fixtures.hpp"
#include "seuvote/json_io.hpp"
#include "seuvote/specfmt.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

using namespace seuvote;
using nlohmann::json;

namespace {

enum Exit { kPass = 0, kError = 1, kFail = 2, kExhausted = 3 };

int exit_for(Verdict v) {
    switch (v) {
        case Verdict::Pass: return kPass;
        case Verdict::Fail: return kFail;
        case Verdict::ExhaustedBudget: return kExhausted;
    }
    return kError;
}

struct Options {
    bool as_json = false;
    std::optional<std::uint64_t> budget;
    std::optional<std::uint64_t> seed;
    int jobs = 1;
    bool exhaustive = false;
    int profiles = 500;
    int anonymity_profiles = 200;
    int range_trials = 200;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_parse_errors(const std::string& source, const std::vector<ParseError>& errors, const Options& o) {
    if (o.as_json) {
        json out = json::array();
        for (const auto& e : errors)
            out.push_back({{"line", e.where.line}, {"column", e.where.column}, {"expected", e.expected}, {"found", e.found}});
        std::cout << json{{"parse_errors", out}}.dump(2) << "\n";
    } else {
        for (const auto& e : errors) std::cerr << source << ":" << e.message() << "\n";
    }
}

// A mechanism from a .scf file, or a built-in one named `fixture:NAME`.
struct Target {
    std::optional<Mechanism> mech;
    std::optional<RawMechanism> raw;

    [[nodiscard]] ScfHandle handle() const { return mech ? handle_of(*mech) : handle_of(*raw); }
    [[nodiscard]] const StateSpace& states() const { return mech ? mech->states : raw->states; }
    [[nodiscard]] const OutcomeSpace& outcomes() const { return mech ? mech->outcomes : raw->outcomes; }
};

std::unique_ptr<Target> load_target(const std::string& arg, const Options& o) {
    auto t = std::make_unique<Target>();
    constexpr std::string_view prefix = "fixture:";
    if (arg.starts_with(prefix)) {
        const std::string name = arg.substr(prefix.size());
        if (name == "majority-fixture") t->raw = fixtures::majority_fixture();
        else t->mech = fixtures::mechanism(name);
        return t;
    }
    auto r = parse_spec(read_file(arg));
    if (!r.ok()) {
        print_parse_errors(arg, r.errors, o);
        return nullptr;
    }
    t->mech = std::move(r.document->mechanism);
    return t;
}

// Refuses mechanisms that fail structural validation.
bool require_valid(const Target& t, const Options& o) {
    if (!t.mech) return true;
    const auto diags = validate_mechanism(*t.mech);
    if (diags.empty()) return true;
    if (o.as_json) {
        std::cout << json{{"valid", false}, {"diagnostics", io::to_json(diags, &t.mech->states)}}.dump(2) << "\n";
        return false;
    }
    for (const auto& d : diags) std::cerr << "invalid: " << d.kind << ": " << d.message << "\n";
    return false;
}

std::string act_text(const Act& a, const StateSpace& s, const OutcomeSpace& x) { return io::to_json(a, s, x).dump(); }

int cmd_validate(const std::string& path, const Options& o) {
    auto t = load_target(path, o);
    if (!t) return kError;
    if (!t->mech) {
        std::cout << (o.as_json ? json{{"valid", true}, {"diagnostics", json::array()}}.dump(2) : std::string("valid (raw rule)")) << "\n";
        return kPass;
    }
    const auto diags = validate_mechanism(*t->mech);
    if (o.as_json) {
        std::cout << json{{"valid", diags.empty()}, {"diagnostics", io::to_json(diags, &t->mech->states)}}.dump(2) << "\n";
    } else if (diags.empty()) {
        std::cout << "valid: " << t->mech->cells.size() << " cell(s), " << t->mech->n << " voters\n";
    } else {
        for (const auto& d : diags) std::cout << d.kind << ": " << d.message << "\n";
    }
    return diags.empty() ? kPass : kFail;
}

int cmd_evaluate(const std::string& path, const std::string& profile_path, const Options& o) {
    auto t = load_target(path, o);
    if (!t || !require_valid(*t, o)) return kError;
    const Profile p = io::profile_from(json::parse(read_file(profile_path)), t->states(), t->outcomes());
    if (t->mech) {
        const Evaluation e = evaluate_detailed(*t->mech, p);
        std::cout << io::to_json(e, *t->mech).dump(o.as_json ? 2 : -1) << "\n";
    } else {
        std::cout << json{{"act", io::to_json(evaluate_raw(*t->raw, p), t->states(), t->outcomes())}}.dump(o.as_json ? 2 : -1) << "\n";
    }
    return kPass;
}

bool require_budget_and_seed(const Options& o) {
    if (o.budget && o.seed) return true;
    std::cerr << "error: --budget and --seed are required\n";
    return false;
}

int cmd_verify(const std::string& path, const Options& o) {
    if (!require_budget_and_seed(o)) return kError;
    auto t = load_target(path, o);
    if (!t || !require_valid(*t, o)) return kError;
    VerifyConfig cfg;
    cfg.budget = o.budget;
    cfg.seed = o.seed;
    cfg.jobs = o.jobs;
    cfg.sp_profiles = o.profiles;
    cfg.anonymity_profiles = o.anonymity_profiles;
    cfg.range_trials = o.range_trials;
    cfg.mode = o.exhaustive ? SearchMode::Exhaustive : SearchMode::Sampled;
    const ScfHandle scf = t->handle();
    const VerificationReport r = verify(scf, cfg);
    if (o.as_json) {
        std::cout << io::to_json(r, t->states(), t->outcomes()).dump(2) << "\n";
    } else {
        std::cout << "anonymity:          " << to_string(r.anonymity.verdict) << " (" << r.anonymity.checks << " swaps)\n"
                  << "range-unanimity:    " << to_string(r.range_unanimity.verdict) << " (" << r.range_unanimity.constructed
                  << " constructed, " << r.range_unanimity.sampled_with_top << " sampled with a shared top)\n"
                  << "strategy-proofness: " << to_string(r.strategy_proofness.verdict) << " (" << r.strategy_proofness.mode << ", "
                  << r.strategy_proofness.stats.work << " work units)\n"
                  << "overall:            " << to_string(r.overall()) << "\n";
        if (r.range_unanimity.witness)
            std::cout << "  target " << act_text(r.range_unanimity.witness->target, t->states(), t->outcomes()) << " but selected "
                      << act_text(r.range_unanimity.witness->selected, t->states(), t->outcomes()) << "\n";
    }
    return exit_for(r.overall());
}

void print_search(const SearchResult& r, const Target& t, const Options& o) {
    if (o.as_json) {
        std::cout << io::to_json(r, t.states(), t.outcomes()).dump(2) << "\n";
        return;
    }
    if (!r.witness) {
        std::cout << (r.verdict == Verdict::ExhaustedBudget ? "budget exhausted" : "none") << " (" << r.mode << ", "
                  << r.stats.work << " work units)\n";
        return;
    }
    const auto& w = *r.witness;
    std::cout << "manipulation by voter " << w.deviator << ": " << w.truthful_eu.str() << " -> " << w.deviated_eu.str() << "\n"
              << "  truthful " << act_text(w.truthful_act, t.states(), t.outcomes()) << "\n"
              << "  deviated " << act_text(w.deviated_act, t.states(), t.outcomes()) << "\n";
}

int cmd_search(const std::string& path, const Options& o, const std::optional<DeviationQuery>& query = std::nullopt) {
    if (!require_budget_and_seed(o)) return kError;
    auto t = load_target(path, o);
    if (!t || !require_valid(*t, o)) return kError;
    SearchResult r;
    if (o.exhaustive) {
        if (!t->mech) {
            std::cerr << "error: exhaustive search needs a declared factorization\n";
            return kError;
        }
        r = search_manipulation_exhaustive(*t->mech, {*o.budget, o.jobs, query});
    } else {
        SampledSearchConfig cfg;
        cfg.profiles = o.profiles;
        cfg.seed = *o.seed;
        cfg.budget = *o.budget;
        r = search_manipulation_sampled(t->handle(), cfg);
    }
    print_search(r, *t, o);
    return exit_for(r.verdict);
}

int cmd_decompose(const std::string& path, const Options& o) {
    const auto f = io::events_from(json::parse(read_file(path)));
    if (auto nested = check_non_nested(f.events); nested && !o.as_json)
        std::cerr << "note: event " << nested->first << " lies inside event " << nested->second << "\n";
    const Decomposition d = maximal_decomposition(f.events);
    std::cout << io::to_json(d, f.states).dump(o.as_json ? 2 : -1) << "\n";
    return kPass;
}

json filter_report(const std::string& name, const FilterSeq& seq, const StateSpace& states, const FilteringFactor* factor) {
    const Event cell = seq.levels.empty() ? Event{} : seq.levels.front().cell();
    const Diagnostics diags = validate_filter(seq, cell, &states);
    json out = {{"name", name}, {"filter", diags.empty() ? "ok" : "fail(" + diags.front().kind + ")"},
                {"diagnostics", io::to_json(diags, &states)}};
    if (factor) {
        const auto iso = is_iso_filtering(*factor, &states);
        out["iso_filtering"] = iso.empty();
        out["iso_violations"] = io::to_json(iso);
    }
    return out;
}

int cmd_filter_check(const std::string& path, const Options& o) {
    std::string text;
    std::string label = path;
    if (path == "fixture:example1-filters") text = std::string(fixtures::example1_filter_text());
    else if (path.starts_with("fixture:")) text = std::string(fixtures::spec_text(path.substr(8)));
    else text = read_file(path);
    json results = json::array();
    bool filter_doc = text.starts_with("filter ") || text.find("\nfilter ") != std::string::npos;
    if (filter_doc) {
        auto r = parse_filters(text);
        if (!r.ok()) {
            print_parse_errors(label, r.errors, o);
            return kError;
        }
        for (const auto& f : r.document->filters) results.push_back(filter_report(f.name, f.filter, r.document->states, nullptr));
    } else {
        auto r = parse_spec(text);
        if (!r.ok()) {
            print_parse_errors(label, r.errors, o);
            return kError;
        }
        const Mechanism& m = r.document->mechanism;
        for (const auto& c : m.cells)
            if (const auto* f = std::get_if<FilteringFactor>(&c.factor)) results.push_back(filter_report(c.name, f->filter, m.states, f));
    }
    bool all_ok = true;
    for (const auto& r : results) all_ok = all_ok && r["filter"] == "ok" && r.value("iso_filtering", true);
    if (o.as_json) {
        std::cout << results.dump(2) << "\n";
    } else {
        for (const auto& r : results) {
            std::cout << r["name"].get<std::string>() << ": " << r["filter"].get<std::string>();
            if (r.contains("iso_filtering")) std::cout << ", " << (r["iso_filtering"].get<bool>() ? "iso-filtering" : "not iso-filtering");
            std::cout << "\n";
            for (const auto& d : r["diagnostics"]) std::cout << "  " << d["message"].get<std::string>() << "\n";
            if (r.contains("iso_violations"))
                for (const auto& v : r["iso_violations"]) std::cout << "  " << v["message"].get<std::string>() << "\n";
        }
    }
    return all_ok ? kPass : kFail;
}

int cmd_replay(const std::string& path, const std::string& witness_path, const Options& o) {
    auto t = load_target(path, o);
    if (!t || !require_valid(*t, o)) return kError;
    const json j = json::parse(read_file(witness_path));
    const json& w = j.contains("witness") ? j.at("witness") : j;
    if (w.is_null()) {
        std::cerr << "error: file holds no witness\n";
        return kError;
    }
    const ScfHandle scf = t->handle();
    const std::string kind = w.at("kind").get<std::string>();
    ReplayResult r;
    if (kind == "manipulation") r = replay(scf, io::manipulation_witness_from(w, t->states(), t->outcomes()));
    else if (kind == "range-unanimity") r = replay(scf, io::range_witness_from(w, t->states(), t->outcomes()));
    else if (kind == "anonymity") r = replay(scf, io::anonymity_witness_from(w, t->states(), t->outcomes()));
    else throw std::runtime_error("unknown witness kind '" + kind + "'");
    if (o.as_json) std::cout << json{{"reproduces", r.ok}, {"message", r.message}}.dump(2) << "\n";
    else std::cout << (r.ok ? "reproduces: " : "does not reproduce: ") << r.message << "\n";
    return r.ok ? kPass : kFail;
}

int cmd_demo(const std::string& name, Options o, bool print_spec) {
    if (print_spec) {
        if (name == "majority-fixture") {
            std::cerr << "majority-fixture is a raw rule with no spec text\n";
            return kError;
        }
        std::cout << fixtures::spec_text(name);
        return kPass;
    }
    if (!o.seed) o.seed = 1;
    if (!o.budget) o.budget = 50'000'000;
    const std::string target = "fixture:" + name;
    if (name == "reunion-phi" || name == "reunion-phi-prime" || name == "majority-fixture") return cmd_verify(target, o);
    if (name == "example4ii") {
        const int f = cmd_filter_check(target, o);
        return f != kPass ? f : cmd_verify(target, o);
    }
    if (name == "example2") {
        (void)cmd_filter_check(target, o);
        o.exhaustive = true;
        return cmd_search(target, o);
    }
    if (name == "example3") {
        (void)cmd_filter_check(target, o);
        o.exhaustive = true;
        // a b-supporter who thinks w6 more likely than everything else, reporting a over b
        const Event w6 = Event::singleton(5);
        DeviationQuery q{{{1, 0}}, {{0, 1}}, {{w6, Event::full(7) - w6}}};
        return cmd_search(target, o, q);
    }
    std::cerr << "unknown demo '" << name << "'\n";
    return kError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verify and search voting mechanisms over uncertain states"};
    app.require_subcommand(1);
    Options o;
    std::uint64_t budget = 0, seed = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_flag("--json", o.as_json, "Print JSON on stdout");
    };
    auto add_search = [&](CLI::App* sub) {
        sub->add_option("--budget", budget, "Work budget (evaluations plus LP solves)");
        sub->add_option("--seed", seed, "Random seed");
        sub->add_option("--jobs", o.jobs, "Worker threads for exhaustive search")->check(CLI::Range(1, 256));
        sub->add_flag("--exhaustive", o.exhaustive, "Enumerate every signature profile");
        sub->add_option("--profiles", o.profiles, "Sampled profiles for the manipulation search");
    };

    std::string spec, second;
    auto* validate = app.add_subcommand("validate", "Parse and validate a mechanism spec");
    validate->add_option("spec", spec, "Spec file or fixture:NAME")->required();
    add_common(validate);

    auto* evaluate = app.add_subcommand("evaluate", "Evaluate a mechanism at a profile");
    evaluate->add_option("spec", spec)->required();
    evaluate->add_option("profile", second, "Profile JSON")->required();
    add_common(evaluate);

    auto* verify_cmd = app.add_subcommand("verify", "Check anonymity, range-unanimity and strategy-proofness");
    verify_cmd->add_option("spec", spec)->required();
    verify_cmd->add_option("--anonymity-profiles", o.anonymity_profiles, "Profiles for the anonymity check (default 200)");
    verify_cmd->add_option("--range-trials", o.range_trials, "Constructed unanimous profiles (default 200)");
    add_common(verify_cmd);
    add_search(verify_cmd);

    auto* search = app.add_subcommand("search", "Search for a profitable misreport");
    search->add_option("spec", spec)->required();
    add_common(search);
    add_search(search);

    auto* decompose = app.add_subcommand("decompose", "Maximal decomposition of an event collection");
    decompose->add_option("events", spec, "Events JSON")->required();
    add_common(decompose);

    auto* filter_check = app.add_subcommand("filter-check", "Check filters and iso-filtering quotas");
    filter_check->add_option("file", spec, "Spec or filter file, or fixture:NAME")->required();
    add_common(filter_check);

    std::string demo_name;
    bool print_spec = false;
    auto* demo = app.add_subcommand("demo", "Run a built-in fixture end to end");
    demo->add_option("name", demo_name)
        ->required()
        ->check(CLI::IsMember({"reunion-phi", "reunion-phi-prime", "example2", "example3", "example4ii", "majority-fixture"}));
    demo->add_flag("--print-spec", print_spec, "Print the fixture's spec text instead");
    add_common(demo);
    add_search(demo);

    auto* replay_cmd = app.add_subcommand("replay", "Re-check a witness");
    replay_cmd->add_option("spec", spec)->required();
    replay_cmd->add_option("witness", second, "Witness or search-result JSON")->required();
    add_common(replay_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kError;
    }
    for (auto* sub : {verify_cmd, search, demo}) {
        if (sub->parsed() && sub->count("--budget")) o.budget = budget;
        if (sub->parsed() && sub->count("--seed")) o.seed = seed;
    }

    try {
        if (validate->parsed()) return cmd_validate(spec, o);
        if (evaluate->parsed()) return cmd_evaluate(spec, second, o);
        if (verify_cmd->parsed()) return cmd_verify(spec, o);
        if (search->parsed()) return cmd_search(spec, o);
        if (decompose->parsed()) return cmd_decompose(spec, o);
        if (filter_check->parsed()) return cmd_filter_check(spec, o);
        if (demo->parsed()) return cmd_demo(demo_name, o, print_spec);
        if (replay_cmd->parsed()) return cmd_replay(spec, second, o);
    } catch (const std::exception& e) {
        if (o.as_json) std::cout << json{{"error", e.what()}}.dump(2) << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}
