#include "doctest.h"

#include <algorithm>
#include <set>
#include <string>

#include "obring/analysis.hpp"
#include "obring/error.hpp"
#include "test_support.hpp"

using namespace obring;
using namespace obring::testing;

namespace {

bool has_violation(const Judgement& j, const std::string& name) {
    return std::any_of(j.violated.begin(), j.violated.end(),
                       [&](const Violation& v) { return v.name == name; });
}

}  // namespace

TEST_CASE("count formulas") {
    const auto one = encode(1);  // 1010
    CHECK(log_election_cw_per_process(one, 1) == 7);
    CHECK(log_election_cw_per_process(one, 3) == 21);
    CHECK(log_election_ccw_per_process(one) == 3);
    const auto five = encode(5);  // 1110 101 0
    CHECK(log_election_cw_per_process(five, 2) == (2 * 8 - 1) * 2);
    CHECK(log_election_ccw_per_process(five) == 1 + 3);
}

TEST_CASE("judge_log_election accepts a valid run") {
    const std::vector<std::uint64_t> ids{1, 2, 3};
    const auto a = encode_all(ids);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto r = run({3, 3, ids}, log_machines(a, 3), SeededRandom{seed});
        const auto j = judge_log_election(r, a, 3);
        CHECK(j.leader_ok);
        CHECK(j.quiescent_ok);
        CHECK(j.cw_count_ok);
        CHECK(j.ccw_count_ok);
        CHECK(j.passed());
    }
}

TEST_CASE("judge_log_election flags a duplicated minimum") {
    const std::vector<std::uint64_t> ids{1, 1, 2};
    const auto a = encode_all(ids);
    const auto r = run({3, 3, ids}, log_machines(a, 3), RoundRobin{});
    const auto j = judge_log_election(r, a, 3);
    CHECK_FALSE(j.leader_ok);
    CHECK(has_violation(j, "leader_ok"));
    CHECK_FALSE(j.passed());
}

TEST_CASE("judge_log_election flags a run cut by the step cap") {
    const std::vector<std::uint64_t> ids{1, 2};
    const auto a = encode_all(ids);
    RunOptions options;
    options.step_cap = 5;
    const auto r = run({2, 2, ids}, log_machines(a, 2), RoundRobin{}, options);
    REQUIRE(r.terminal == TerminalClass::StepCapExceeded);
    const auto j = judge_log_election(r, a, 2);
    CHECK_FALSE(j.quiescent_ok);
    CHECK(has_violation(j, "quiescent_ok"));
}

TEST_CASE("judge_log_election flags wrong counts") {
    const std::vector<std::uint64_t> ids{1, 2};
    const auto a = encode_all(ids);
    auto r = run({2, 2, ids}, log_machines(a, 2), RoundRobin{});
    REQUIRE(judge_log_election(r, a, 2).passed());
    r.counters[1].sent_cw += 1;
    r.counters[0].sent_ccw -= 1;
    const auto j = judge_log_election(r, a, 2);
    CHECK_FALSE(j.cw_count_ok);
    CHECK_FALSE(j.ccw_count_ok);
    CHECK(j.leader_ok);
    CHECK(j.violated.size() == 2);
}

TEST_CASE("judges are pure functions of the result") {
    const std::vector<std::uint64_t> ids{3, 1, 2};
    const auto r = run({3, 3, ids}, const_machines(ids, 3), SeededRandom{9});
    const auto a = judge_const_direction(r, ids, 3);
    const auto b = judge_const_direction(r, ids, 3);
    CHECK(a.violated == b.violated);
    CHECK(a.passed());
}

TEST_CASE("judge_const_direction examples") {
    const std::vector<std::uint64_t> ids{2, 3, 4};
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto r = run({3, 3, ids}, const_machines(ids, 3), SeededRandom{seed});
        CHECK(judge_const_direction(r, ids, 3).passed());
    }
    const std::vector<std::uint64_t> solo{1};
    const auto r = run({1, 2, solo}, const_machines(solo, 2), RoundRobin{});
    CHECK(r.counters[0].sent_cw == 2);
    CHECK(r.counters[0].sent_ccw == 3);
    CHECK(judge_const_direction(r, solo, 2).passed());
}

TEST_CASE("judge_const_direction catches the U < n misconfiguration") {
    // With U = 1 the id-2 process can finish competing before id 1.
    const std::vector<std::uint64_t> ids{1, 3, 2};
    bool found = false;
    for (std::uint64_t seed = 0; seed < 500 && !found; ++seed) {
        const auto r = run({3, 1, ids}, const_machines(ids, 1), SeededRandom{seed});
        found = !judge_const_direction(r, ids, 1).leader_ok;
    }
    CHECK(found);
}

TEST_CASE("solitude pattern examples") {
    const auto p = solitude_pattern([] { return const_direction_new(1, 2); });
    CHECK(p.t == 3);
    CHECK(p.cw == std::vector<std::uint64_t>{2, 2, 2, 2});

    const auto q = solitude_pattern([] { return const_direction_new(1, 3); });
    REQUIRE(!q.cw.empty());
    CHECK(q.cw[0] == 3);
    CHECK(q.cw.size() == q.t + 1);
}

TEST_CASE("solitude pattern of a machine that never sends counter-clockwise") {
    // Sends 4 pulses on port 0 and returns after receiving them.
    class CwOnly final : public Process {
    public:
        Actions start() override { return Actions(4, SendPulse{Port::Zero}); }
        Actions deliver(Port) override {
            if (++got_ == 4) return {Return{Verdict::Leader}};
            return {};
        }
        BlockedOn blocked_on() const override {
            if (got_ == 4) return Terminated{Verdict::Leader};
            return SpecificPort{Port::One};
        }
        std::string_view phase_name() const override { return "cw-only"; }
        void encode_state(std::vector<std::int64_t>& out) const override { out.push_back(got_); }
        std::unique_ptr<Process> clone() const override { return std::make_unique<CwOnly>(*this); }

    private:
        std::int64_t got_ = 0;
    };
    const auto p = solitude_pattern([] { return ProtocolMachine(CwOnly{}); });
    CHECK(p.t == 0);
    CHECK(p.cw == std::vector<std::uint64_t>{4});
}

TEST_CASE("solitude pattern errors") {
    // Blocks on port 1 with nothing in flight.
    auto stuck = [] { return ProtocolMachine(FixedProcess({}, SpecificPort{Port::One})); };
    CHECK_THROWS_AS(solitude_pattern(stuck), Error);
    try {
        solitude_pattern(stuck);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BadParam);
    }
    // Echoes forever: every delivery is swallowed but one send keeps it busy.
    class Echo final : public Process {
    public:
        Actions start() override { return {SendPulse{Port::Zero}}; }
        Actions deliver(Port) override { return {SendPulse{Port::Zero}}; }
        BlockedOn blocked_on() const override { return SpecificPort{Port::One}; }
        std::string_view phase_name() const override { return "echo"; }
        void encode_state(std::vector<std::int64_t>&) const override {}
        std::unique_ptr<Process> clone() const override { return std::make_unique<Echo>(*this); }
    };
    try {
        solitude_pattern([] { return ProtocolMachine(Echo{}); }, 1000);
        FAIL("expected StepCapExceeded");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::StepCapExceeded);
    }
}

TEST_CASE("solitude patterns are non-decreasing and separate ids 1..16 at U = 4") {
    std::set<std::vector<std::uint64_t>> seen;
    for (std::uint64_t id = 1; id <= 16; ++id) {
        const auto p = solitude_pattern([id] { return const_direction_new(id, 4); });
        CHECK(p.cw.size() == p.t + 1);
        CHECK(std::is_sorted(p.cw.begin(), p.cw.end()));
        CHECK(p.cw.front() == 4 * id);
        seen.insert(p.cw);
    }
    CHECK(seen.size() == 16);
}

TEST_CASE("nobody returns before the leader reaches its final phase") {
    SUBCASE("logarithmic election") {
        const std::vector<std::uint64_t> ids{4, 2, 5, 3};
        const auto a = encode_all(ids);
        const auto leader = min_id_index(a);
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            bool ok = true;
            RunOptions options;
            options.observer = [&](const SimState& s) {
                bool someone_done = false;
                for (const auto& m : s.machines()) someone_done = someone_done || is_terminated(m.blocked_on());
                if (!someone_done) return;
                const auto phase = s.machines()[leader].phase_name();
                ok = ok && (phase == "termination" || phase == "done");
            };
            const auto r = run({4, 4, ids}, log_machines(a, 4), SeededRandom{seed}, options);
            CHECK(judge_log_election(r, a, 4).passed());
            CHECK(ok);
        }
    }
    SUBCASE("constant-direction election") {
        const std::vector<std::uint64_t> ids{4, 2, 5, 3};
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            bool ok = true;
            RunOptions options;
            options.observer = [&](const SimState& s) {
                for (std::size_t j = 0; j < s.size(); ++j) {
                    if (j == 1 || !is_terminated(s.machines()[j].blocked_on())) continue;
                    const auto phase = s.machines()[1].phase_name();
                    ok = ok && (phase == "leader-final" || phase == "done");
                }
            };
            const auto r = run({4, 4, ids}, const_machines(ids, 4), SeededRandom{seed}, options);
            CHECK(judge_const_direction(r, ids, 4).passed());
            CHECK(ok);
        }
    }
}
