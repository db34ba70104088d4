#include "obring/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "obring/analysis.hpp"
#include "obring/error.hpp"
#include "obring/explore.hpp"
#include "obring/id_codec.hpp"
#include "obring/montecarlo.hpp"
#include "obring/rng.hpp"

namespace obring::cli {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string_view to_string(Algorithm a) noexcept {
    switch (a) {
        case Algorithm::LogElection: return "log-election";
        case Algorithm::ConstDirection: return "const-direction";
        case Algorithm::Randomized: return "randomized";
    }
    return "?";
}

std::uint64_t Scenario::master_seed() const { return seed_of(scheduler).value_or(0); }

std::string Scenario::hash_hex() const {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << hash;
    return os.str();
}

// --- parsing ----------------------------------------------------------------

namespace {

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

[[noreturn]] void bad(const std::string& field, const std::string& what) {
    throw ScenarioError("field '" + field + "'", what);
}

std::uint64_t as_uint(const json& j, const std::string& field) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0)
        bad(field, "expected a non-negative integer, got " + j.dump());
    return j.get<std::uint64_t>();
}

std::uint64_t as_positive(const json& j, const std::string& field) {
    const auto v = as_uint(j, field);
    if (v == 0) bad(field, "must be positive");
    return v;
}

std::optional<std::uint64_t> opt_positive(const json& root, const std::string& field) {
    if (!root.contains(field)) return std::nullopt;
    return as_positive(root.at(field), field);
}

// "random-distinct(seed, max)": n distinct values from 1..max.
std::vector<std::uint64_t> random_distinct(const std::string& spec, std::size_t n) {
    static const std::regex re(R"(\s*random-distinct\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*)");
    std::smatch m;
    if (!std::regex_match(spec, m, re))
        bad("ids", "expected a list or \"random-distinct(seed, max)\", got \"" + spec + "\"");
    const auto seed = std::stoull(m[1].str());
    const auto max = std::stoull(m[2].str());
    if (max < n) bad("ids", "cannot draw " + std::to_string(n) + " distinct ids from 1.." + m[2].str());
    if (max > 10'000'000) bad("ids", "max too large");
    std::vector<std::uint64_t> pool(max);
    for (std::uint64_t i = 0; i < max; ++i) pool[i] = i + 1;
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) std::swap(pool[i], pool[i + uniform_below(rng, max - i)]);
    pool.resize(n);
    return pool;
}

SchedulerStrategy parse_scheduler(const json& j, std::size_t n) {
    if (!j.is_object()) bad("scheduler", "expected an object");
    for (const auto& [k, v] : j.items())
        if (k != "strategy" && k != "seed" && k != "script") bad("scheduler." + k, "unknown field");
    const std::string name = j.value("strategy", std::string("random"));
    const std::uint64_t seed = j.contains("seed") ? as_uint(j.at("seed"), "scheduler.seed") : 0;
    if (name == "random") return SeededRandom{seed};
    if (name == "round-robin") return RoundRobin{};
    if (name == "cw-priority") return CwPriority{};
    if (name == "script") {
        if (!j.contains("script") || !j.at("script").is_array())
            bad("scheduler.script", "expected a list of [target, port] pairs");
        AdversarialScript s;
        for (const auto& e : j.at("script")) {
            if (!e.is_array() || e.size() != 2) bad("scheduler.script", "bad entry " + e.dump());
            const auto target = as_uint(e[0], "scheduler.script");
            const auto port = as_uint(e[1], "scheduler.script");
            if (target >= n || port > 1) bad("scheduler.script", "entry out of range " + e.dump());
            s.script.push_back({static_cast<std::size_t>(target), port == 0 ? Port::Zero : Port::One});
        }
        return s;
    }
    bad("scheduler.strategy", "unknown strategy \"" + name + "\"");
}

const std::vector<std::string> known_fields{
    "algorithm", "n", "U", "ids", "d", "c", "c1", "c2", "scheduler", "step_cap", "state_cap",
    "repeat", "trials", "n_choices", "experiment", "output"};

}  // namespace

Scenario parse_scenario(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw ScenarioError("line " + std::to_string(line), "malformed JSON");
    }
    if (!root.is_object()) throw ScenarioError("line 1", "scenario must be a JSON object");
    for (const auto& [k, v] : root.items())
        if (std::find(known_fields.begin(), known_fields.end(), k) == known_fields.end())
            bad(k, "unknown field");

    Scenario s;
    s.canonical = root.dump();
    s.hash = fnv1a(s.canonical);

    if (!root.contains("algorithm")) bad("algorithm", "required");
    const auto& alg = root.at("algorithm");
    if (alg == "log-election") s.algorithm = Algorithm::LogElection;
    else if (alg == "const-direction") s.algorithm = Algorithm::ConstDirection;
    else if (alg == "randomized") s.algorithm = Algorithm::Randomized;
    else bad("algorithm", "expected log-election, const-direction or randomized, got " + alg.dump());
    const bool randomized = s.algorithm == Algorithm::Randomized;

    const auto bound = opt_positive(root, "U");
    if (randomized && !bound) bad("U", "required for the randomized algorithm");
    auto n = opt_positive(root, "n");

    if (root.contains("ids")) {
        const auto& ids = root.at("ids");
        if (ids.is_string()) {
            if (!n) bad("n", "required with random-distinct ids");
            s.ids = random_distinct(ids.get<std::string>(), *n);
        } else if (ids.is_array()) {
            std::vector<std::uint64_t> v;
            for (const auto& e : ids) v.push_back(as_positive(e, "ids"));
            if (v.empty()) bad("ids", "must not be empty");
            if (n && *n != v.size())
                bad("n", "is " + std::to_string(*n) + " but " + std::to_string(v.size()) + " ids are listed");
            n = v.size();
            s.ids = std::move(v);
        } else {
            bad("ids", "expected a list or a string");
        }
    } else if (!randomized) {
        bad("ids", "required for " + std::string(to_string(s.algorithm)));
    }
    if (!n) n = bound;  // randomized without n: the largest admissible ring
    s.n = static_cast<std::size_t>(*n);
    s.bound = bound.value_or(s.n);
    if (s.n > s.bound)
        bad("n", "n = " + std::to_string(s.n) + " exceeds U = " + std::to_string(s.bound));

    if (root.contains("d")) {
        const auto& d = root.at("d");
        if (d == "auto") s.d = s.bound;
        else s.d = as_positive(d, "d");
        s.d_given = true;
    } else if (s.algorithm == Algorithm::LogElection) {
        bad("d", "required for log-election (integer or \"auto\")");
    }

    if (s.ids) {
        try {
            if (s.algorithm == Algorithm::LogElection) {
                (void)encode_all(*s.ids);
            } else if (randomized) {
                for (auto id : *s.ids)
                    if (!is_0_ended(Arrangement{EncodedId::from_raw(id)}))
                        bad("ids", "randomized identifiers are raw bit strings and must be even");
            }
        } catch (const Error& e) {
            bad("ids", e.what());
        }
    }

    if (randomized) {
        const auto c = opt_positive(root, "c");
        const auto c1 = opt_positive(root, "c1");
        const auto c2 = opt_positive(root, "c2");
        if (!c && !(c1 && c2)) bad("c", "required unless both c1 and c2 are given");
        const auto base = c.value_or(std::min(*c1, *c2) >= 2 ? std::min(*c1, *c2) - 2 : 1);
        s.randomized = RandomizedParams::with_c(s.bound, base);
        if (c1) s.randomized.c1 = *c1;
        if (c2) s.randomized.c2 = *c2;
        try {
            s.randomized.validate();
        } catch (const Error& e) {
            bad("c1", e.what());
        }
    } else {
        for (const char* f : {"c", "c1", "c2"})
            if (root.contains(f)) bad(f, "only meaningful for the randomized algorithm");
    }

    if (root.contains("scheduler")) s.scheduler = parse_scheduler(root.at("scheduler"), s.n);
    if (auto v = opt_positive(root, "step_cap")) s.step_cap = *v;
    if (auto v = opt_positive(root, "state_cap")) s.state_cap = *v;
    if (root.contains("repeat") && root.contains("trials")) bad("trials", "give repeat or trials, not both");
    if (auto v = opt_positive(root, "repeat")) s.repeat = *v;
    if (auto v = opt_positive(root, "trials")) s.repeat = *v;

    if (root.contains("n_choices")) {
        if (!root.at("n_choices").is_array()) bad("n_choices", "expected a list");
        for (const auto& e : root.at("n_choices")) {
            const auto v = as_positive(e, "n_choices");
            if (v > s.bound) bad("n_choices", std::to_string(v) + " exceeds U");
            s.n_choices.push_back(static_cast<std::size_t>(v));
        }
        if (s.n_choices.empty()) bad("n_choices", "must not be empty");
    } else {
        if (s.bound / 2 > 0) s.n_choices.push_back(static_cast<std::size_t>(s.bound / 2));
        if (s.bound / 2 != s.bound) s.n_choices.push_back(static_cast<std::size_t>(s.bound));
    }

    if (root.contains("experiment")) {
        const auto& e = root.at("experiment");
        if (e != "success" && e != "scatteredness")
            bad("experiment", "expected success or scatteredness, got " + e.dump());
        s.experiment = e.get<std::string>();
    }

    if (root.contains("output")) {
        const auto& o = root.at("output");
        if (!o.is_object()) bad("output", "expected an object");
        if (o.contains("format") && o.at("format") != "jsonl")
            bad("output.format", "only \"jsonl\" is supported");
        if (o.contains("path")) {
            if (!o.at("path").is_string()) bad("output.path", "expected a string");
            s.output_path = o.at("path").get<std::string>();
        }
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("file", "cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

// --- shared helpers -----------------------------------------------------------

namespace {

struct Instance {
    RingConfig config;
    Arrangement arrangement;  // log-election and randomized
    std::uint64_t d = 0;
};

std::uint64_t effective_d(const Scenario& s) {
    if (s.algorithm == Algorithm::Randomized) return s.d_given ? s.d : s.randomized.d();
    return s.d;
}

/// Identifiers for one run; randomized draws consume `rng`.
Instance make_instance(const Scenario& s, Rng& rng) {
    Instance inst;
    inst.d = effective_d(s);
    std::vector<std::uint64_t> ids;
    if (s.ids) {
        ids = *s.ids;
    } else {
        ids.resize(s.n);
        for (auto& id : ids) id = randomized_make_id(s.randomized, rng);
    }
    inst.config = RingConfig{s.n, s.bound, ids};
    if (s.algorithm == Algorithm::LogElection) inst.arrangement = encode_all(ids);
    if (s.algorithm == Algorithm::Randomized)
        for (auto id : ids) inst.arrangement.push_back(EncodedId::from_raw(id));
    return inst;
}

std::vector<ProtocolMachine> make_machines(const Scenario& s, const Instance& inst) {
    std::vector<ProtocolMachine> out;
    if (s.algorithm == Algorithm::ConstDirection) {
        for (auto id : inst.config.ids) out.push_back(const_direction_new(id, s.bound));
    } else {
        for (const auto& e : inst.arrangement) out.push_back(log_election_new(e, inst.d));
    }
    return out;
}

Judgement judge(const Scenario& s, const Instance& inst, const RunResult& r) {
    if (s.algorithm == Algorithm::ConstDirection) return judge_const_direction(r, inst.config.ids, s.bound);
    return judge_log_election(r, inst.arrangement, inst.d);
}

ojson verdicts_json(const std::vector<std::optional<Verdict>>& verdicts) {
    ojson v = ojson::array();
    for (const auto& x : verdicts) {
        if (x) v.push_back(std::string(to_string(*x)));
        else v.push_back(nullptr);
    }
    return v;
}

template <class F>
ojson per_process(const std::vector<ProcessCounters>& c, F field) {
    ojson v = ojson::array();
    for (const auto& x : c) v.push_back(field(x));
    return v;
}

template <class F>
ojson common_value(const std::vector<ProcessCounters>& c, F field) {
    if (c.empty()) return nullptr;
    const auto first = field(c.front());
    for (const auto& x : c)
        if (field(x) != first) return nullptr;
    return first;
}

ojson violations_json(const Judgement& j) {
    ojson v = ojson::array();
    for (const auto& x : j.violated) v.push_back(x.name);
    return v;
}

struct Sink {
    std::ostream* stream;
    std::ofstream file;
};

Sink open_sink(const Scenario& s, std::ostream& out) {
    Sink sink{&out, {}};
    if (s.output_path) {
        sink.file.open(*s.output_path, std::ios::binary);
        if (!sink.file) throw ScenarioError("field 'output.path'", "cannot write " + s.output_path->string());
        sink.stream = &sink.file;
    }
    return sink;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ScenarioError("--trace", "cannot write " + path.string());
    f << text;
}

Scenario with_seed(Scenario s, const Options& opt) {
    if (!opt.seed) return s;
    // Deterministic strategies keep their order; the seed still drives id draws.
    if (auto* r = std::get_if<SeededRandom>(&s.scheduler)) r->seed = *opt.seed;
    return s;
}

std::uint64_t seed_for(const Scenario& s, const Options& opt) {
    return opt.seed.value_or(s.master_seed());
}

void apply_jobs(const Options& opt) {
#ifdef _OPENMP
    if (opt.jobs) omp_set_num_threads(*opt.jobs);
#else
    (void)opt;
#endif
}

}  // namespace

// --- run --------------------------------------------------------------------

int cmd_run(const Scenario& scenario, const Options& opt, std::ostream& out, std::ostream& err) {
    const auto master = seed_for(scenario, opt);
    const Scenario s = with_seed(scenario, opt);
    auto sink = open_sink(s, out);

    std::uint64_t passed = 0, capped = 0;
    for (std::uint64_t i = 0; i < s.repeat; ++i) {
        const std::uint64_t seed = master + i;
        SchedulerStrategy strategy = s.scheduler;
        if (auto* r = std::get_if<SeededRandom>(&strategy)) r->seed = seed;

        Rng rng(seed);
        const auto inst = make_instance(s, rng);
        if (s.algorithm == Algorithm::Randomized)
            if (auto* r = std::get_if<SeededRandom>(&strategy)) r->seed = rng();

        RunOptions ro;
        ro.step_cap = s.step_cap;
        ro.record_trace = opt.trace_dir.has_value();
        RunResult r;
        try {
            r = run(inst.config, make_machines(s, inst), strategy, ro);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ScriptNotEnabled) throw;
            throw ScenarioError("field 'scheduler.script'", e.what());
        }
        const auto j = judge(s, inst, r);
        if (r.terminal == TerminalClass::StepCapExceeded) ++capped;
        if (j.passed()) ++passed;

        ojson rec;
        rec["kind"] = "run";
        rec["scenario"] = s.hash_hex();
        rec["seed"] = seed;
        rec["algorithm"] = std::string(to_string(s.algorithm));
        rec["n"] = s.n;
        rec["U"] = s.bound;
        if (s.algorithm != Algorithm::ConstDirection) rec["d"] = inst.d;
        rec["ids"] = inst.config.ids;
        rec["strategy"] = strategy_name(strategy);
        if (auto sched = seed_of(strategy)) rec["scheduler_seed"] = *sched;
        rec["terminal"] = std::string(to_string(r.terminal));
        rec["steps"] = r.steps;
        rec["verdicts"] = verdicts_json(r.verdicts);
        const auto leaders = r.leaders();
        rec["leader"] = leaders.size() == 1 ? ojson(leaders.front()) : ojson(nullptr);
        rec["cw_per_proc"] = common_value(r.counters, [](const auto& c) { return c.sent_cw; });
        rec["ccw_per_proc"] = common_value(r.counters, [](const auto& c) { return c.sent_ccw; });
        rec["cw_sent"] = per_process(r.counters, [](const auto& c) { return c.sent_cw; });
        rec["ccw_sent"] = per_process(r.counters, [](const auto& c) { return c.sent_ccw; });
        rec["passed"] = j.passed();
        rec["violated"] = violations_json(j);
        if (opt.trace_dir) {
            const auto name = s.hash_hex() + "-" + std::to_string(seed) + ".trace";
            write_text(*opt.trace_dir / name, format_trace(r.trace));
            rec["trace"] = name;
        }
        *sink.stream << rec.dump() << '\n';

        err << "run seed=" << seed << " " << to_string(r.terminal) << " steps=" << r.steps
            << " leader=" << (leaders.size() == 1 ? std::to_string(leaders.front()) : "-")
            << (j.passed() ? " PASS" : " FAIL");
        for (const auto& v : j.violated) err << " " << v.name;
        err << '\n';
    }
    err << passed << "/" << s.repeat << " runs passed\n";
    if (capped > 0) return CapsExceeded;
    return passed == s.repeat ? Pass : JudgementFailure;
}

// --- explore ----------------------------------------------------------------

int cmd_explore(const Scenario& scenario, const Options& opt, std::ostream& out, std::ostream& err) {
    if (scenario.n > 3)
        throw ScenarioError("field 'n'", "explore is limited to n <= 3, got " + std::to_string(scenario.n));
    const auto seed = seed_for(scenario, opt);
    const Scenario s = with_seed(scenario, opt);
    auto sink = open_sink(s, out);

    Rng rng(seed);
    const auto inst = make_instance(s, rng);
    ExploreOptions eo;
    eo.step_cap = std::min<std::uint64_t>(s.step_cap, 1'000'000);
    eo.state_cap = s.state_cap;

    ExploreResult res;
    try {
        res = explore_all(inst.config, [&](const RingConfig&) { return make_machines(s, inst); }, eo);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::StateCapExceeded && e.code() != ErrorCode::StepCapExceeded) throw;
        ojson rec;
        rec["kind"] = "explore";
        rec["scenario"] = s.hash_hex();
        rec["seed"] = seed;
        rec["error"] = std::string(obring::to_string(e.code()));
        *sink.stream << rec.dump() << '\n';
        err << "explore: " << e.what() << '\n';
        return CapsExceeded;
    }

    ojson sigs = ojson::array();
    bool all_pass = true;
    std::size_t k = 0;
    std::vector<std::string> witnesses;
    for (const auto& [sig, path] : res.signatures) {
        const auto j = judge(s, inst, sig.as_result());
        all_pass = all_pass && j.passed();
        ojson e;
        e["verdicts"] = verdicts_json(sig.verdicts);
        e["terminal"] = std::string(to_string(sig.terminal));
        e["cw_sent"] = per_process(sig.counters, [](const auto& c) { return c.sent_cw; });
        e["ccw_sent"] = per_process(sig.counters, [](const auto& c) { return c.sent_ccw; });
        e["passed"] = j.passed();
        e["violated"] = violations_json(j);
        e["witness_steps"] = path.size();
        // A witness for every signature once the outcome is not a single pass.
        if (res.signatures.size() > 1 || !j.passed()) {
            RunOptions ro;
            ro.record_trace = true;
            ro.step_cap = path.size() + 1;
            const auto replay = run(inst.config, make_machines(s, inst), AdversarialScript{path}, ro);
            const auto name = "witness-" + s.hash_hex() + "-" + std::to_string(k) + ".trace";
            const auto dir = opt.trace_dir.value_or(".");
            write_text(dir / name, format_trace(replay.trace));
            e["witness"] = name;
            witnesses.push_back((dir / name).string());
        }
        sigs.push_back(e);
        ++k;
    }
    const bool ok = res.signatures.size() == 1 && all_pass;

    ojson rec;
    rec["kind"] = "explore";
    rec["scenario"] = s.hash_hex();
    rec["seed"] = seed;
    rec["algorithm"] = std::string(to_string(s.algorithm));
    rec["n"] = s.n;
    rec["U"] = s.bound;
    if (s.algorithm != Algorithm::ConstDirection) rec["d"] = inst.d;
    rec["ids"] = inst.config.ids;
    rec["states"] = res.states_visited;
    rec["max_depth"] = res.max_depth;
    rec["signatures"] = sigs;
    rec["passed"] = ok;
    *sink.stream << rec.dump() << '\n';

    err << "explore: " << res.states_visited << " states, " << res.signatures.size()
        << " terminal signature(s), " << (all_pass ? "all pass" : "some fail") << '\n';
    for (const auto& w : witnesses) err << "  witness trace: " << w << '\n';
    return ok ? Pass : JudgementFailure;
}

// --- mc ---------------------------------------------------------------------

int cmd_mc(const Scenario& scenario, const Options& opt, std::ostream& out, std::ostream& err) {
    if (scenario.algorithm != Algorithm::Randomized)
        throw ScenarioError("field 'algorithm'", "mc needs the randomized algorithm");
    const auto seed = seed_for(scenario, opt);
    const Scenario& s = scenario;
    auto sink = open_sink(s, out);
    apply_jobs(opt);

    RandomizedTrialSpec spec;
    spec.params = s.randomized;
    spec.params.rng_seed = seed;
    spec.n_choices = s.n_choices;
    spec.master_seed = seed;
    spec.step_cap = s.step_cap;
    if (s.d_given) spec.d_override = s.d;

    MonteCarloReport rep;
    try {
        rep = s.experiment == "scatteredness" ? mc_scatteredness(spec, s.repeat)
                                              : mc_randomized_success(spec, s.repeat);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::BadParam) throw;
        throw ScenarioError("scenario", e.what());
    }

    const double sigma = rep.sigma_at(std::clamp(rep.bound, 0.0, 1.0));
    const double floor = rep.bound - 3.0 * sigma;
    const bool within = rep.estimate() >= floor;
    const bool ok = within && rep.formula_mismatches == 0;
    const auto len = s.randomized.id_length();
    const auto d = spec.d();

    ojson rec;
    rec["kind"] = "mc";
    rec["scenario"] = s.hash_hex();
    rec["seed"] = seed;
    rec["experiment"] = s.experiment;
    rec["U"] = s.bound;
    rec["c"] = s.randomized.c;
    rec["c1"] = s.randomized.c1;
    rec["c2"] = s.randomized.c2;
    rec["d"] = d;
    rec["id_length"] = len;
    rec["n_choices"] = s.n_choices;
    rec["trials"] = rep.trials;
    rec["successes"] = rep.successes;
    rec["estimate"] = rep.estimate();
    rec["bound"] = rep.bound;
    rec["sigma"] = sigma;
    rec["acceptance_floor"] = floor;
    ojson f;
    f["collision"] = rep.failures.collisions;
    f["scatter_violation"] = rep.failures.scatter_violations;
    f["wrong_leader"] = rep.failures.wrong_leader;
    f["non_quiescent"] = rep.failures.non_quiescent;
    rec["failures"] = f;
    if (s.experiment == "success") {
        rec["expected_cw_per_proc"] = (2 * len - 1) * d;
        rec["formula_mismatches"] = rep.formula_mismatches;
        ojson hist = ojson::object();
        for (const auto& [cw, count] : rep.cw_per_process) hist[std::to_string(cw)] = count;
        rec["cw_per_proc"] = hist;
    }
    ojson by_n = ojson::object();
    for (const auto& [n, count] : rep.trials_by_n) by_n[std::to_string(n)] = count;
    rec["trials_by_n"] = by_n;
    rec["passed"] = ok;
    *sink.stream << rec.dump() << '\n';

    err << std::fixed << std::setprecision(6);
    err << "mc " << s.experiment << ": " << rep.successes << "/" << rep.trials << " = " << rep.estimate()
        << "  bound " << rep.bound << "  floor (bound - 3 sigma) " << floor << '\n';
    err << "  failures: collision " << rep.failures.collisions << ", scatter "
        << rep.failures.scatter_violations << ", wrong leader " << rep.failures.wrong_leader
        << ", non-quiescent " << rep.failures.non_quiescent << '\n';
    if (s.experiment == "success")
        err << "  per-process cw expected " << (2 * len - 1) * d << ", mismatches "
            << rep.formula_mismatches << '\n';
    err << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? Pass : JudgementFailure;
}

// --- entry point --------------------------------------------------------------

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Content-oblivious ring leader election simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    std::uint64_t seed = 0;
    std::string trace_dir;
    int jobs = 0;
    auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides scheduler.seed)");
    auto* trace_opt = app.add_option("--trace", trace_dir, "Directory for trace files");
    auto* jobs_opt = app.add_option("--jobs", jobs, "Worker threads for mc")->check(CLI::PositiveNumber);

    std::string file;
    auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and judge every run");
    auto* explore_cmd = app.add_subcommand("explore", "Enumerate every interleaving (n <= 3)");
    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo experiment for the randomized election");
    for (auto* sub : {run_cmd, explore_cmd, mc_cmd})
        sub->add_option("file", file, "Scenario file (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Pass : ConfigError;
    }
    if (*seed_opt) opt.seed = seed;
    if (*trace_opt) opt.trace_dir = trace_dir;
    if (*jobs_opt) opt.jobs = jobs;

    try {
        const auto scenario = load_scenario(file);
        if (run_cmd->parsed()) return cmd_run(scenario, opt, out, err);
        if (explore_cmd->parsed()) return cmd_explore(scenario, opt, out, err);
        return cmd_mc(scenario, opt, out, err);
    } catch (const ScenarioError& e) {
        err << "error: " << file << ": " << e.what() << '\n';
        return ConfigError;
    } catch (const Error& e) {
        err << "error: " << file << ": " << e.what() << '\n';
        return ConfigError;
    }
}

}  // namespace obring::cli
