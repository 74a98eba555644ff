#include <doctest.h>

#include <algorithm>
#include <map>

#include "mixedshop/model.hpp"
#include "test_support.hpp"

using namespace mixedshop;
using testsupport::desk_instance;

TEST_CASE("validate_instance accepts the desk instance") {
    CHECK(validate_instance(desk_instance()).empty());
}

TEST_CASE("validate_instance reports a negative duration") {
    Instance inst = desk_instance();
    inst.jobs[1].durations[2] = -1;
    const auto violations = validate_instance(inst);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("job 1") != std::string::npos);
    CHECK(violations[0].find("negative duration") != std::string::npos);
    CHECK(violations[0].find("machine 2") != std::string::npos);
}

TEST_CASE("validate_instance rejects a non-identity flow route") {
    Instance inst = desk_instance();
    inst.jobs[1].route = {2, 0, 1};
    const auto violations = validate_instance(inst);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("flow route") != std::string::npos);
}

TEST_CASE("validate_instance rejects a route that is not a permutation") {
    Instance inst = desk_instance();
    inst.jobs[0].route = {1, 1, 0};
    CHECK(validate_instance(inst).size() == 1);
}

TEST_CASE("lower_bound") {
    CHECK(lower_bound(desk_instance()) == 7);  // job sums 7,6,6; loads 6,6,7

    Instance tiny{1, 1, {JobSpec{ShopClass::Job, {0}, {5}}}, "tiny"};
    CHECK(lower_bound(tiny) == 5);

    Instance zeros = desk_instance();
    for (auto& job : zeros.jobs) job.durations = {0, 0, 0};
    CHECK(lower_bound(zeros) == 0);
}

TEST_CASE("parse mixed format reconstructs the desk instance") {
    const Instance inst = desk_instance();
    REQUIRE(inst.n == 3);
    REQUIRE(inst.m == 3);
    CHECK(inst.jobs[0].shop == ShopClass::Job);
    CHECK(inst.jobs[0].route == std::vector<int>{1, 2, 0});
    CHECK(inst.jobs[0].durations == std::vector<int>{2, 2, 3});
    CHECK(inst.jobs[1].shop == ShopClass::Flow);
    CHECK(inst.jobs[1].route == std::vector<int>{0, 1, 2});
    CHECK(inst.jobs[1].durations == std::vector<int>{1, 3, 2});
    CHECK(inst.jobs[2].shop == ShopClass::Open);
    CHECK(inst.jobs[2].durations == std::vector<int>{3, 1, 2});
}

TEST_CASE("parse mixed format skips comments and blank lines") {
    const Instance inst = parse_instance(
        InstanceFormat::Mixed, std::string("# header comment\n\n3 3\nJ 1 2 0 : 2 2 3  # job\n"
                                           "F : 1 3 2\n\nO : 3 1 2\n"));
    CHECK(inst == desk_instance());
}

TEST_CASE("parse orlib-jss minimal file") {
    const Instance inst = parse_instance(InstanceFormat::OrlibJss, std::string("1 1\n0 5\n"));
    CHECK(inst.n == 1);
    CHECK(inst.m == 1);
    CHECK(inst.jobs[0].shop == ShopClass::Job);
    CHECK(inst.jobs[0].durations == std::vector<int>{5});
}

TEST_CASE("parse orlib-jss routes follow listed order") {
    const Instance inst =
        parse_instance(InstanceFormat::OrlibJss, std::string("2 3\n1 4 0 2 2 6\n2 3 1 5 0 7\n"));
    CHECK(inst.jobs[0].route == std::vector<int>{1, 0, 2});
    CHECK(inst.jobs[0].durations == std::vector<int>{2, 4, 6});  // per machine
    CHECK(inst.jobs[1].route == std::vector<int>{2, 1, 0});
    CHECK(inst.jobs[1].durations == std::vector<int>{7, 5, 3});
}

TEST_CASE("parse taillard-fs yields flow jobs with identity routes") {
    const Instance inst =
        parse_instance(InstanceFormat::TaillardFs, std::string("2 3\n4 5 6\n1 2 3\n"));
    for (const JobSpec& job : inst.jobs) {
        CHECK(job.shop == ShopClass::Flow);
        CHECK(job.route == std::vector<int>{0, 1, 2});
    }
    CHECK(inst.jobs[1].durations == std::vector<int>{1, 2, 3});
}

TEST_CASE("parse errors carry line numbers") {
    SUBCASE("unknown class tag on line 2") {
        try {
            parse_instance(InstanceFormat::Mixed, std::string("3 3\nQ : 1 2 3\nF : 1 3 2\n"));
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 2);
            CHECK(std::string(e.what()).find("Q") != std::string::npos);
        }
    }
    SUBCASE("bad header") {
        CHECK_THROWS_AS(parse_instance(InstanceFormat::Mixed, std::string("3\n")), ParseError);
        CHECK_THROWS_AS(parse_instance(InstanceFormat::Mixed, std::string("x 3\nJ 0 : 1\n")),
                        ParseError);
        CHECK_THROWS_AS(parse_instance(InstanceFormat::Mixed, std::string("")), ParseError);
    }
    SUBCASE("wrong token count") {
        CHECK_THROWS_AS(parse_instance(InstanceFormat::Mixed, std::string("1 2\nF : 1\n")),
                        ParseError);
        CHECK_THROWS_AS(parse_instance(InstanceFormat::OrlibJss, std::string("1 2\n0 5 1\n")),
                        ParseError);
        CHECK_THROWS_AS(parse_instance(InstanceFormat::TaillardFs, std::string("1 2\n5\n")),
                        ParseError);
    }
    SUBCASE("non-integer token") {
        CHECK_THROWS_AS(parse_instance(InstanceFormat::TaillardFs, std::string("1 1\nfive\n")),
                        ParseError);
    }
    SUBCASE("machine index out of range") {
        CHECK_THROWS_AS(parse_instance(InstanceFormat::Mixed, std::string("1 2\nJ 0 2 : 1 1\n")),
                        ParseError);
        CHECK_THROWS_AS(parse_instance(InstanceFormat::OrlibJss, std::string("1 2\n0 5 7 1\n")),
                        ParseError);
    }
    SUBCASE("duplicate machine in a route") {
        try {
            parse_instance(InstanceFormat::Mixed, std::string("1 2\nJ 1 1 : 1 1\n"));
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 2);
            CHECK(std::string(e.what()).find("repeated") != std::string::npos);
        }
    }
    SUBCASE("missing job lines") {
        CHECK_THROWS_AS(parse_instance(InstanceFormat::Mixed, std::string("2 1\nF : 3\n")),
                        ParseError);
    }
}

TEST_CASE("write_instance emits canonical text for the desk instance") {
    CHECK(write_instance(desk_instance()) == testsupport::kDeskText);
}

TEST_CASE("parse-write round trips") {
    SUBCASE("write(parse(text)) == text on canonical text") {
        CHECK(write_instance(parse_instance(InstanceFormat::Mixed, testsupport::kDeskText)) ==
              testsupport::kDeskText);
    }
    SUBCASE("parse(write(i)) == i on parsed and generated instances") {
        CHECK(parse_instance(InstanceFormat::Mixed, write_instance(desk_instance())) ==
              desk_instance());
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            const Instance inst = generate_rnd(4, 3, seed);
            CHECK(parse_instance(InstanceFormat::Mixed, write_instance(inst)) == inst);
        }
    }
    SUBCASE("1x1 instance writes a two-line document") {
        const Instance inst = parse_instance(InstanceFormat::Mixed, std::string("1 1\nO : 4\n"));
        CHECK(write_instance(inst) == "1 1\nO : 4\n");
    }
}

TEST_CASE("generate_rnd is deterministic and respects its contract") {
    CHECK(generate_rnd(3, 3, 1) == generate_rnd(3, 3, 1));
    CHECK_FALSE(generate_rnd(3, 3, 1) == generate_rnd(3, 3, 2));

    const Instance big = generate_rnd(20, 20, 7);
    CHECK(big.num_ops() == 400);
    CHECK(validate_instance(big).empty());
    for (const JobSpec& job : big.jobs)
        for (int d : job.durations) {
            CHECK(d >= 1);
            CHECK(d <= 99);
        }

    const Instance open = generate_rnd(3, 3, 5, ClassPolicy::AllOpen);
    for (const JobSpec& job : open.jobs) CHECK(job.shop == ShopClass::Open);

    const Instance cyc = generate_rnd(5, 2, 5, ClassPolicy::MixedCycle);
    CHECK(cyc.jobs[0].shop == ShopClass::Job);
    CHECK(cyc.jobs[1].shop == ShopClass::Flow);
    CHECK(cyc.jobs[2].shop == ShopClass::Open);
    CHECK(cyc.jobs[3].shop == ShopClass::Job);
    CHECK(cyc.jobs[4].shop == ShopClass::Flow);
}

TEST_CASE("restrict_to_shop") {
    const Instance desk = desk_instance();

    SUBCASE("open overwrites classes, keeps durations") {
        const Instance open = restrict_to_shop(desk, ShopClass::Open);
        for (int j = 0; j < open.n; ++j) {
            CHECK(open.jobs[j].shop == ShopClass::Open);
            CHECK(open.jobs[j].durations == desk.jobs[j].durations);
        }
    }
    SUBCASE("flow forces identity routes") {
        const Instance flow = restrict_to_shop(desk, ShopClass::Flow);
        for (const JobSpec& job : flow.jobs) {
            CHECK(job.shop == ShopClass::Flow);
            CHECK(job.route == std::vector<int>{0, 1, 2});
        }
    }
    SUBCASE("job binds stored routes") {
        const Instance job = restrict_to_shop(desk, ShopClass::Job);
        CHECK(job.jobs[0].route == std::vector<int>{1, 2, 0});  // kept
        CHECK(job.jobs[1].route == std::vector<int>{0, 1, 2});  // flow identity
        CHECK(job.jobs[2].route == std::vector<int>{0, 1, 2});  // open default
        for (const JobSpec& j : job.jobs) CHECK(j.shop == ShopClass::Job);
    }
    SUBCASE("idempotence") {
        const Instance once = restrict_to_shop(desk, ShopClass::Open);
        CHECK(restrict_to_shop(once, ShopClass::Open) == once);
    }
    SUBCASE("restrict(open) then restrict(job) re-binds the original routes") {
        const Instance back =
            restrict_to_shop(restrict_to_shop(desk, ShopClass::Open), ShopClass::Job);
        CHECK(back.jobs[0].route == desk.jobs[0].route);
    }
}

TEST_CASE("restrict_to_shop preserves duration multisets and the lower bound") {
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = rng.uniform_int(1, 5);
        const int m = rng.uniform_int(1, 5);
        const Instance inst = generate_rnd(n, m, rng.next_u64());
        for (ShopClass target : {ShopClass::Job, ShopClass::Flow, ShopClass::Open}) {
            const Instance restricted = restrict_to_shop(inst, target);
            CHECK(validate_instance(restricted).empty());
            CHECK(lower_bound(restricted) == lower_bound(inst));
            for (int j = 0; j < n; ++j) {
                // durations are machine-indexed, so per-job and per-machine
                // multisets are both preserved exactly
                CHECK(restricted.jobs[j].durations == inst.jobs[j].durations);
            }
        }
    }
}
