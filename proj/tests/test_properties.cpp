#include <gtest/gtest.h>

#include "property_suite.hpp"

using namespace lapc;

TEST(Properties, MetatheorySuite) {
    for (const auto& o : props::runSuite()) {
        EXPECT_EQ(o.checked, 1000u) << o.name;
        EXPECT_EQ(o.failed, 0u) << o.name << ": " << o.firstFailure;
    }
}

TEST(Properties, GeneratorIsDeterministic) {
    props::Generator a(7, HMode::HOLStar), b(7, HMode::HOLStar);
    for (int i = 0; i < 50; ++i) EXPECT_EQ(a.sample().term, b.sample().term);
}

TEST(Properties, SamplesVary) {
    props::Generator g(11, HMode::HOL);
    std::set<std::uint64_t> hashes;
    std::size_t big = 0;
    for (int i = 0; i < 200; ++i) {
        HTerm t = g.sample().term;
        hashes.insert(t.hash());
        if (t.size() > 10) ++big;
    }
    EXPECT_GT(hashes.size(), 100u);
    EXPECT_GT(big, 50u);
}
